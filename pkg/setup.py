from setuptools import setup, find_packages

setup(
    name="microtrap-gates",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"microtrap_gates": ["fixtures/*.json"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "PyYAML>=6.0",
        "networkx>=2.8",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "microtrap-gates=microtrap_gates.scripts.microtrap_cli:main",
        ],
    },
    description="Fast pulsed entangling gates in 2D ion microtrap arrays and Fermi-Hubbard gate budgets",
)
