"""
Microtrap array physics.

Equilibrium crystals, planar normal modes and the closed-form cross-checks
for the 2x2 cell:

- trap_array: TrapArray, EquilibriumConfig, find_equilibrium
- modes: ModeSet, solve_modes, xi_closed_form, analytic_modes_2x2
- eigen: cyclic Jacobi solver with deterministic degenerate bases
- species: ion species registry
"""

from .constants import DEFAULT_LASER_WAVELENGTH_NM
from .eigen import canonicalize, jacobi_eigh, lapack_eigh, symmetric_eigensystem
from .modes import (
    ModeSet,
    analytic_modes_2x2,
    lamb_dicke_parameters,
    mode_labels_2x2,
    print_mode_summary,
    solve_modes,
    xi_closed_form,
    xi_from_cubic,
)
from .species import ION_SPECIES, IonSpecies, get_species
from .trap_array import (
    EquilibriumConfig,
    TrapArray,
    find_equilibrium,
    lamb_dicke_com,
    potential_gradient,
    potential_hessian,
    wavevector_for_lamb_dicke,
)

__all__ = [
    "DEFAULT_LASER_WAVELENGTH_NM",
    "EquilibriumConfig",
    "ION_SPECIES",
    "IonSpecies",
    "ModeSet",
    "TrapArray",
    "analytic_modes_2x2",
    "canonicalize",
    "find_equilibrium",
    "get_species",
    "jacobi_eigh",
    "lamb_dicke_com",
    "lamb_dicke_parameters",
    "lapack_eigh",
    "mode_labels_2x2",
    "potential_gradient",
    "potential_hessian",
    "print_mode_summary",
    "solve_modes",
    "symmetric_eigensystem",
    "wavevector_for_lamb_dicke",
    "xi_closed_form",
    "xi_from_cubic",
]
