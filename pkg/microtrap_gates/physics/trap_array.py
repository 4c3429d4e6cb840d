"""
Microtrap Array Geometry and Equilibrium

A TrapArray is a rows x cols grid of isotropic single-ion traps with
spacing d. Ions sit at the minimum of the harmonic trap potentials plus
their mutual Coulomb repulsion; find_equilibrium locates that minimum with
a damped Newton iteration started at the trap centers.

Coordinates: ion index i = row * cols + col (row-major). The x axis runs
along a row (increasing col), the y axis along a column (increasing row),
and the origin is the array center. Internally all lengths are measured in
units of d and forces in units of M * omega_t^2 * d.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..errors import ConvergenceError, DomainError, InstabilityError
from .constants import (
    ATOMIC_MASS_UNIT,
    COULOMB_CONSTANT,
    DEFAULT_LASER_WAVELENGTH_NM,
    ELEMENTARY_CHARGE,
    HBAR,
    MICRON,
    angular_frequency,
    wavevector,
)
from .species import get_species

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 50
MAX_STEP_HALVINGS = 30


# ============================================================================
# TRAP ARRAY
# ============================================================================

@dataclass(frozen=True)
class TrapArray:
    """
    Geometry and physical parameters of an N x M microtrap grid.

    All fields are SI. Instances are immutable and hashable so derived
    mode sets can be cached per array.
    """
    rows: int
    cols: int
    trap_spacing_d: float            # m
    trap_freq_omega_t: float         # rad/s, equal along x and y
    ion_mass: float                  # kg
    ion_charge: float = ELEMENTARY_CHARGE
    laser_wavevector_k: float = wavevector(DEFAULT_LASER_WAVELENGTH_NM)

    def __post_init__(self):
        if int(self.rows) != self.rows or self.rows < 1:
            raise DomainError(f"rows must be a positive integer, got {self.rows}")
        if int(self.cols) != self.cols or self.cols < 1:
            raise DomainError(f"cols must be a positive integer, got {self.cols}")
        for name in ("trap_spacing_d", "trap_freq_omega_t", "ion_mass", "laser_wavevector_k"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if not math.isfinite(self.ion_charge) or self.ion_charge == 0:
            raise DomainError(f"ion_charge must be non-zero, got {self.ion_charge}")

    @classmethod
    def from_lab_units(
        cls,
        rows: int = 2,
        cols: int = 2,
        spacing_um: float = 100.0,
        trap_freq_mhz: float = 1.2,
        ion_species: str = "40Ca+",
        mass_amu: Optional[float] = None,
        charge_e: Optional[int] = None,
        laser_wavelength_nm: Optional[float] = None,
        lamb_dicke_com: Optional[float] = None,
    ) -> "TrapArray":
        """
        Build an array from laboratory units.

        Args:
            rows, cols: Grid dimensions
            spacing_um: Trap spacing d in microns
            trap_freq_mhz: Trap frequency omega_t / 2pi in MHz
            ion_species: Registry key used when mass/charge are not explicit
            mass_amu: Explicit ion mass (overrides the species)
            charge_e: Explicit charge state (overrides the species)
            laser_wavelength_nm: Kick laser wavelength (default 393 nm)
            lamb_dicke_com: Force eta at omega_t instead of using a wavelength

        Returns:
            TrapArray in SI units
        """
        species = get_species(ion_species) if (mass_amu is None or charge_e is None) else None
        mass = (mass_amu if mass_amu is not None else species.mass_amu) * ATOMIC_MASS_UNIT
        charge = (charge_e if charge_e is not None else species.charge_e) * ELEMENTARY_CHARGE
        omega_t = angular_frequency(trap_freq_mhz)

        if lamb_dicke_com is not None:
            k = lamb_dicke_com / math.sqrt(HBAR / (2.0 * mass * omega_t))
        else:
            k = wavevector(laser_wavelength_nm or DEFAULT_LASER_WAVELENGTH_NM)

        return cls(
            rows=rows,
            cols=cols,
            trap_spacing_d=spacing_um * MICRON,
            trap_freq_omega_t=omega_t,
            ion_mass=mass,
            ion_charge=charge,
            laser_wavevector_k=k,
        )

    @property
    def n_ions(self) -> int:
        return self.rows * self.cols

    @property
    def tau0(self) -> float:
        """Trap period 2pi/omega_t in seconds."""
        return 2.0 * math.pi / self.trap_freq_omega_t

    @property
    def coupling_strength(self) -> float:
        """Non-dimensional Coulomb strength k_e q^2 / (M omega_t^2 d^3)."""
        return (COULOMB_CONSTANT * self.ion_charge ** 2
                / (self.ion_mass * self.trap_freq_omega_t ** 2 * self.trap_spacing_d ** 3))

    def ion_index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise DomainError(f"site ({row}, {col}) outside {self.rows}x{self.cols} array")
        return row * self.cols + col

    def site(self, index: int) -> Tuple[int, int]:
        if not 0 <= index < self.n_ions:
            raise DomainError(f"ion index {index} outside array of {self.n_ions} ions")
        return divmod(index, self.cols)

    def trap_centers(self) -> np.ndarray:
        """Trap centers in units of d, shape (n_ions, 2)."""
        rows, cols = np.divmod(np.arange(self.n_ions), self.cols)
        x = cols - (self.cols - 1) / 2.0
        y = rows - (self.rows - 1) / 2.0
        return np.column_stack([x, y]).astype(float)

    def with_wavevector(self, k: float) -> "TrapArray":
        return replace(self, laser_wavevector_k=k)


def lamb_dicke_com(array: TrapArray) -> float:
    """Lamb-Dicke parameter k*sqrt(hbar/(2 M omega_t)) of an uncoupled trap."""
    return array.laser_wavevector_k * math.sqrt(HBAR / (2.0 * array.ion_mass * array.trap_freq_omega_t))


def wavevector_for_lamb_dicke(array: TrapArray, eta: float) -> float:
    """Wave vector that gives the requested Lamb-Dicke parameter at omega_t."""
    if eta <= 0:
        raise DomainError(f"Lamb-Dicke parameter must be positive, got {eta}")
    return eta / math.sqrt(HBAR / (2.0 * array.ion_mass * array.trap_freq_omega_t))


# ============================================================================
# POTENTIAL DERIVATIVES (units of d and M omega_t^2 d)
# ============================================================================

def _pair_geometry(positions: np.ndarray):
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    np.fill_diagonal(dist, np.inf)
    return diff, dist


def potential_gradient(positions: np.ndarray, centers: np.ndarray, coupling: float) -> np.ndarray:
    """Gradient of harmonic + Coulomb potential, shape (n, 2)."""
    diff, dist = _pair_geometry(positions)
    coulomb = (diff / dist[..., None] ** 3).sum(axis=1)
    return (positions - centers) - coupling * coulomb


def potential_hessian(positions: np.ndarray, coupling: float) -> np.ndarray:
    """
    Mass-normalized Hessian in units of omega_t^2, shape (2n, 2n).

    Ordering follows the row-major ion index with x/y interleaved:
    (x_0, y_0, x_1, y_1, ...).
    """
    n = positions.shape[0]
    diff, dist = _pair_geometry(positions)
    unit = diff / dist[..., None]
    unit[np.arange(n), np.arange(n)] = 0.0
    outer = np.einsum("ija,ijb->ijab", unit, unit)
    blocks = (3.0 * outer - np.eye(2)[None, None]) / dist[..., None, None] ** 3
    blocks[np.arange(n), np.arange(n)] = 0.0

    hess = -coupling * blocks
    hess[np.arange(n), np.arange(n)] = np.eye(2) + coupling * blocks.sum(axis=1)
    return hess.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)


# ============================================================================
# EQUILIBRIUM
# ============================================================================

@dataclass(frozen=True, eq=False)
class EquilibriumConfig:
    """Equilibrium ion positions (meters, row-major) and solver residual."""
    positions: np.ndarray
    residual_gradient_norm: float          # N
    trap_centers: np.ndarray
    iterations: int = 0

    def displacements(self) -> np.ndarray:
        """Ion displacement from its own trap center, meters."""
        return self.positions - self.trap_centers

    def __len__(self) -> int:
        return self.positions.shape[0]


def find_equilibrium(
    array: TrapArray,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> EquilibriumConfig:
    """
    Locate the equilibrium crystal by damped Newton iteration.

    Args:
        array: Trap array
        tolerance: Gradient-norm tolerance in units of M omega_t^2 d
        max_iterations: Newton iteration cap

    Returns:
        EquilibriumConfig with positions in meters

    Raises:
        ConvergenceError: if the tolerance is not reached
        InstabilityError: if an ion leaves its own trap cell
    """
    d = array.trap_spacing_d
    force_scale = array.ion_mass * array.trap_freq_omega_t ** 2 * d
    coupling = array.coupling_strength
    centers = array.trap_centers()
    u = centers.copy()

    grad = potential_gradient(u, centers, coupling) if array.n_ions > 1 else np.zeros_like(u)
    norm = float(np.linalg.norm(grad))
    iteration = 0

    while norm > tolerance:
        if iteration >= max_iterations:
            raise ConvergenceError("equilibrium search did not converge", norm * force_scale, iteration)
        iteration += 1

        hess = potential_hessian(u, coupling)
        try:
            step = np.linalg.solve(hess, -grad.ravel()).reshape(u.shape)
        except np.linalg.LinAlgError as e:
            raise InstabilityError(f"singular Hessian during equilibrium search: {e}")

        damping = 1.0
        for _ in range(MAX_STEP_HALVINGS):
            trial = u + damping * step
            trial_grad = potential_gradient(trial, centers, coupling)
            trial_norm = float(np.linalg.norm(trial_grad))
            if np.isfinite(trial_norm) and trial_norm < norm:
                break
            damping *= 0.5
        else:
            if norm <= 1e3 * tolerance:
                # Rounding floor reached just above the tolerance
                logger.debug("Newton stalled at residual %.3e", norm)
                break
            raise ConvergenceError("damped Newton step failed to reduce the gradient", norm * force_scale, iteration)

        u, grad, norm = trial, trial_grad, trial_norm
        logger.debug("Newton iteration %d: |grad| = %.3e (damping %.3g)", iteration, norm, damping)

    excursion = np.abs(u - centers).max() if array.n_ions > 0 else 0.0
    if not np.isfinite(excursion) or excursion >= 0.5:
        raise InstabilityError(
            f"ion left its trap cell (max excursion {excursion:.3f} d); "
            f"Coulomb coupling {coupling:.3e} too strong for this geometry"
        )

    logger.info("Equilibrium for %dx%d array after %d iterations (residual %.2e)",
                array.rows, array.cols, iteration, norm)

    return EquilibriumConfig(
        positions=u * d,
        residual_gradient_norm=norm * force_scale,
        trap_centers=centers * d,
        iterations=iteration,
    )
