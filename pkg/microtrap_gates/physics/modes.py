"""
Planar Motional Modes of a Microtrap Array

Diagonalizes the mass-normalized Hessian of the trap + Coulomb potential
(truncated at second order about the equilibrium) and packages the result
as a ModeSet. Closed forms for the symmetric 2x2 cell provide the
cross-checks:

- xi_closed_form: coupling parameter from the trap parameters
- analytic_modes_2x2: the eight squared frequency ratios in terms of xi

The splitting parameter is xi = 2 k_e q^2 / (M omega_t^2 s^3) with s the
smallest equilibrium ion separation; in the 2x2 cell it is exactly the
relative squared-frequency shift of the degenerate stretch pair.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import DomainError, InstabilityError, UnsupportedGeometryError
from .constants import HBAR, MICRON
from .eigen import symmetric_eigensystem
from .trap_array import EquilibriumConfig, TrapArray, find_equilibrium, potential_hessian

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


# ============================================================================
# MODE SET
# ============================================================================

@dataclass(frozen=True, eq=False)
class ModeSet:
    """
    Motional modes of an array, ascending in frequency.

    eigenvectors[m] is the unit 2N-vector b_m in the (x_0, y_0, x_1, ...)
    basis. Arrays are read-only so a ModeSet can be shared between threads.
    """
    frequencies: np.ndarray            # rad/s
    eigenvectors: np.ndarray           # (n_modes, 2N)
    lamb_dicke: np.ndarray
    xi: float
    omega_t: float
    positions: np.ndarray              # equilibrium, meters
    laser_wavevector_k: float
    ion_mass: float
    shape: Tuple[int, int] = (1, 1)
    solver: str = "jacobi"

    def __post_init__(self):
        for name in ("frequencies", "eigenvectors", "lamb_dicke", "positions"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_modes(self) -> int:
        return len(self.frequencies)

    @property
    def n_ions(self) -> int:
        return self.positions.shape[0]

    @property
    def tau0(self) -> float:
        return 2.0 * math.pi / self.omega_t

    def squared_ratios(self) -> np.ndarray:
        """omega_m^2 / omega_t^2 for every mode."""
        return (self.frequencies / self.omega_t) ** 2

    def ion_components(self, ion: int) -> np.ndarray:
        """(n_modes, 2) block of every b_m at one ion's coordinates."""
        return self.eigenvectors[:, 2 * ion:2 * ion + 2]

    def with_wavevector(self, k: float) -> "ModeSet":
        """Same modes with Lamb-Dicke parameters recomputed for wave vector k."""
        if not (k > 0 and math.isfinite(k)):
            raise DomainError(f"wave vector must be positive, got {k}")
        return ModeSet(
            frequencies=self.frequencies,
            eigenvectors=self.eigenvectors,
            lamb_dicke=lamb_dicke_parameters(k, self.ion_mass, self.frequencies),
            xi=self.xi,
            omega_t=self.omega_t,
            positions=self.positions,
            laser_wavevector_k=k,
            ion_mass=self.ion_mass,
            shape=self.shape,
            solver=self.solver,
        )

    def to_json(self) -> Dict:
        """JSON-ready export: frequencies in units of omega_t, eigenvectors row-major."""
        return {
            "shape": list(self.shape),
            "omega_t_rad_s": self.omega_t,
            "xi": self.xi,
            "laser_wavevector_per_m": self.laser_wavevector_k,
            "solver": self.solver,
            "frequency_ratios": (self.frequencies / self.omega_t).tolist(),
            "squared_ratios": self.squared_ratios().tolist(),
            "lamb_dicke": self.lamb_dicke.tolist(),
            "eigenvectors": self.eigenvectors.tolist(),
            "positions_um": (self.positions / MICRON).tolist(),
        }

    def csv_header(self) -> List[str]:
        header = ["mode", "omega_sq_ratio", "omega_ratio", "lamb_dicke"]
        for ion in range(self.n_ions):
            header += [f"b{ion}_x", f"b{ion}_y"]
        return header

    def to_csv_rows(self) -> List[List[float]]:
        """One row per mode: index, ratios, eta, then the eigenvector components."""
        rows = []
        ratios = self.squared_ratios()
        for m in range(self.n_modes):
            rows.append([m, ratios[m], math.sqrt(ratios[m]), self.lamb_dicke[m]]
                        + self.eigenvectors[m].tolist())
        return rows


def lamb_dicke_parameters(k: float, mass: float, frequencies: np.ndarray) -> np.ndarray:
    """eta_m = k sqrt(hbar / (2 M omega_m))."""
    return k * np.sqrt(HBAR / (2.0 * mass * np.asarray(frequencies, dtype=float)))


def splitting_parameter(array: TrapArray, positions: np.ndarray) -> float:
    """xi = 2 k_e q^2 / (M omega_t^2 s^3) from the closest equilibrium pair."""
    if positions.shape[0] < 2:
        return 0.0
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    np.fill_diagonal(dist, np.inf)
    s = dist.min() / array.trap_spacing_d
    return 2.0 * array.coupling_strength / s ** 3


# ============================================================================
# MODE SOLVER
# ============================================================================

def solve_modes(
    array: TrapArray,
    eq: Optional[EquilibriumConfig] = None,
    solver: str = "jacobi",
) -> ModeSet:
    """
    Normal modes of the array about its equilibrium.

    Args:
        array: Trap array
        eq: Equilibrium configuration (computed when omitted)
        solver: "jacobi" (default) or "lapack"

    Returns:
        ModeSet with ascending frequencies

    Raises:
        InstabilityError: if the Hessian has a non-positive eigenvalue
    """
    if eq is None:
        eq = find_equilibrium(array)
    if len(eq) != array.n_ions:
        raise DomainError(f"equilibrium has {len(eq)} ions, array has {array.n_ions}")

    units = eq.positions / array.trap_spacing_d
    hessian = potential_hessian(units, array.coupling_strength)
    values, vectors = symmetric_eigensystem(hessian, solver=solver)

    if values[0] <= 0.0:
        raise InstabilityError(
            f"Hessian eigenvalue {values[0]:.3e} is not positive; the crystal is unstable"
        )

    frequencies = array.trap_freq_omega_t * np.sqrt(values)
    xi = splitting_parameter(array, eq.positions)
    logger.info("Solved %d modes for %dx%d array (xi=%.4e, solver=%s)",
                len(values), array.rows, array.cols, xi, solver)

    return ModeSet(
        frequencies=frequencies,
        eigenvectors=vectors.T,
        lamb_dicke=lamb_dicke_parameters(array.laser_wavevector_k, array.ion_mass, frequencies),
        xi=xi,
        omega_t=array.trap_freq_omega_t,
        positions=eq.positions,
        laser_wavevector_k=array.laser_wavevector_k,
        ion_mass=array.ion_mass,
        shape=(array.rows, array.cols),
        solver=solver,
    )


# ============================================================================
# CLOSED FORMS FOR THE 2x2 CELL
# ============================================================================

def _require_2x2(array: TrapArray) -> None:
    if (array.rows, array.cols) != (2, 2):
        raise UnsupportedGeometryError(
            f"closed form only valid for the 2x2 cell, got {array.rows}x{array.cols}"
        )


def xi_closed_form(array: TrapArray) -> float:
    """
    Splitting parameter of the 2x2 cell via the Lambda -> delta -> xi chain.

    Lambda = 27 k_e q^2 / (M d^3 omega_t^2); delta and the cube-root
    expression solve the symmetric-cell force balance exactly.
    """
    _require_2x2(array)
    lam = 27.0 * array.coupling_strength
    delta = (
        math.sqrt(-3528.0 * SQRT2 * lam ** 2 + 5537.0 * lam ** 2 - 11228.0 * SQRT2 * lam + 16688.0 * lam)
        - 28.0 * SQRT2 * lam + 63.0 * lam - 50.0 * SQRT2 + 88.0
    )
    root = np.cbrt(delta)
    q = root + (18.0 - 8.0 * SQRT2) / root + 2.0 * (SQRT2 - 4.0)
    x = q / (3.0 * SQRT2 * (2.0 * SQRT2 - 1.0)) + 1.0
    return float((2.0 * lam / 27.0) * x ** -3)


def xi_from_cubic(array: TrapArray) -> float:
    """
    Splitting parameter of the 2x2 cell from the side-length cubic.

    With x = s/d the force balance reads x^3 - x^2 - eps (2 + sqrt2/2) = 0
    and xi = 2 eps / x^3.
    """
    _require_2x2(array)
    eps = array.coupling_strength
    roots = np.roots([1.0, -1.0, 0.0, -eps * (2.0 + SQRT2 / 2.0)])
    x = max(r.real for r in roots if abs(r.imag) < 1e-12)
    return 2.0 * eps / x ** 3


def analytic_modes_2x2(xi: float) -> List[float]:
    """
    The eight squared frequency ratios omega_m^2 / omega_t^2 of the 2x2 cell.

    Order: common pair, stretch pair, rotation, B1 stretch, B2 stretch, breathing.
    """
    if xi < 0:
        raise DomainError(f"xi must be non-negative, got {xi}")
    return [
        1.0,
        1.0,
        xi + 1.0,
        xi + 1.0,
        1.0 - xi - xi / (2.0 * SQRT2),
        1.0 + 2.0 * xi - xi / (2.0 * SQRT2),
        1.0 - xi + xi / SQRT2,
        1.0 + 2.0 * xi + xi / SQRT2,
    ]


def mode_labels_2x2(modes: ModeSet) -> List[str]:
    """
    Name the eight cell modes from their eigenvector geometry.

    Returns one of "common", "stretch", "rotation", "breathing",
    "quadrupole" per mode, in ModeSet order.
    """
    if modes.shape != (2, 2):
        raise UnsupportedGeometryError(f"mode labels only defined for 2x2, got {modes.shape}")

    center = modes.positions.mean(axis=0)
    radial = modes.positions - center
    radial /= np.linalg.norm(radial, axis=1, keepdims=True)
    tangential = np.column_stack([-radial[:, 1], radial[:, 0]])

    templates = {
        "breathing": radial.ravel() / 2.0,
        "rotation": tangential.ravel() / 2.0,
    }
    common = np.zeros((2, 8))
    common[0, 0::2] = 0.5
    common[1, 1::2] = 0.5

    ratios = modes.squared_ratios()
    labels = []
    for m, vec in enumerate(modes.eigenvectors):
        if np.linalg.norm(common @ vec) > 0.99:
            labels.append("common")
            continue
        match = [name for name, tpl in templates.items() if abs(tpl @ vec) > 0.99]
        if match:
            labels.append(match[0])
            continue
        neighbours = np.abs(ratios - ratios[m]) < 1e-6 * max(modes.xi, 1e-30)
        labels.append("stretch" if neighbours.sum() > 1 else "quadrupole")
    return labels


def print_mode_summary(modes: ModeSet) -> None:
    """Print a table of the mode set."""
    print(f"\n📊 Modes of {modes.shape[0]}x{modes.shape[1]} array "
          f"(xi = {modes.xi:.4e}, solver = {modes.solver})\n")
    print(f"  {'m':>3}  {'w^2/wt^2':>14}  {'eta':>9}")
    for m, (ratio, eta) in enumerate(zip(modes.squared_ratios(), modes.lamb_dicke)):
        print(f"  {m:>3}  {ratio:>14.10f}  {eta:>9.6f}")
