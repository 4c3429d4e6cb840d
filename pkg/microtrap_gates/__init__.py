"""
Microtrap Gates

Fast pulsed entangling gates between trapped ions in 2D microtrap arrays:
normal modes, gate evaluation and pulse-sequence search, scaling to large
arrays, and the gate budget of a Trotterized Fermi-Hubbard simulation.
"""

__version__ = "0.1.0"
