"""
Ion Species Registry

Centralizes the ion species a TrapArray can be built from. Each entry
carries the mass, charge state and the optical transition used for the
state-dependent kicks.
"""

from dataclasses import dataclass
from typing import Dict, List

from ..errors import ConfigError


# ============================================================================
# SPECIES CONFIGURATION
# ============================================================================

@dataclass(frozen=True)
class IonSpecies:
    """Configuration for an ion species."""
    name: str                          # Registry key, e.g. "40Ca+"
    mass_amu: float                    # Mass in unified atomic mass units
    charge_e: int = 1                  # Charge state in elementary charges
    transition: str = ""               # Kick transition label
    transition_wavelength_nm: float = 0.0
    description: str = ""


# ============================================================================
# COMPLETE SPECIES REGISTRY
# ============================================================================

ION_SPECIES: Dict[str, IonSpecies] = {
    "40Ca+": IonSpecies(
        name="40Ca+",
        mass_amu=39.962591,
        transition="S1/2 -> P3/2",
        transition_wavelength_nm=393.366,
        description="Calcium-40; D5/2 used as the qubit |1> state",
    ),

    "9Be+": IonSpecies(
        name="9Be+",
        mass_amu=9.0121831,
        transition="S1/2 -> P3/2",
        transition_wavelength_nm=313.13,
        description="Beryllium-9",
    ),

    "171Yb+": IonSpecies(
        name="171Yb+",
        mass_amu=170.9363258,
        transition="S1/2 -> P1/2",
        transition_wavelength_nm=369.53,
        description="Ytterbium-171 hyperfine qubit",
    ),
}


def get_species(name: str) -> IonSpecies:
    """
    Look up an ion species by registry key.

    Args:
        name: Registry key such as "40Ca+"

    Returns:
        IonSpecies entry

    Raises:
        ConfigError: if the species is not registered
    """
    try:
        return ION_SPECIES[name]
    except KeyError:
        known = ", ".join(sorted(get_all_species()))
        raise ConfigError(f"unknown ion species '{name}' (known: {known})", key="ion_species")


def get_all_species() -> List[str]:
    """Get list of all registered species names."""
    return list(ION_SPECIES.keys())

