"""
Pulse Sequences

A PulseSequence is a list of pulse groups: z_k counter-propagating
pi-pulse pairs (sign = kick direction) arriving at time t_k. Times are
tagged with their unit, trap periods tau0 = 2pi/omega_t by default.

JSON form: {"z": [...], "t_over_tau0": [...], "T_G_over_tau0": ...}
"""

import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Optional

import numpy as np

from ..errors import DomainError, SchemaError

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

FIXTURE_SEQUENCES = {
    "example1": "apg16_example1.json",
    "example2": "apg16_example2.json",
}

_SEQUENCE_KEYS = {"z", "t_over_tau0", "T_G_over_tau0", "antisymmetric", "name", "description"}


class TimeUnit(Enum):
    """Unit of PulseSequence times."""
    TRAP_PERIODS = "tau0"
    SECONDS = "s"


# ============================================================================
# PULSE SEQUENCE
# ============================================================================

@dataclass(frozen=True, eq=False)
class PulseSequence:
    """
    Pulse-group kick counts and arrival times defining a gate.

    Invariants (checked on construction): equal lengths, strictly
    increasing times inside [-T_G/2, T_G/2], and exact mirror symmetry
    z_{N+1-k} = -z_k, t_{N+1-k} = -t_k when flagged anti-symmetric.
    """
    kick_counts_z: np.ndarray
    times_t: np.ndarray
    gate_time_T_G: float
    unit: TimeUnit = TimeUnit.TRAP_PERIODS
    antisymmetric: bool = False
    name: str = ""

    def __post_init__(self):
        z = np.asarray(self.kick_counts_z)
        if z.size and not np.all(np.equal(np.mod(z, 1), 0)):
            raise DomainError("kick counts must be integers")
        z = z.astype(np.int64).reshape(-1)
        t = np.asarray(self.times_t, dtype=float).reshape(-1)
        z.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "kick_counts_z", z)
        object.__setattr__(self, "times_t", t)
        object.__setattr__(self, "gate_time_T_G", float(self.gate_time_T_G))

        if z.shape != t.shape:
            raise DomainError(f"{z.size} kick counts but {t.size} arrival times")
        if not (math.isfinite(self.gate_time_T_G) and self.gate_time_T_G >= 0):
            raise DomainError(f"gate time must be non-negative, got {self.gate_time_T_G}")
        if not np.all(np.isfinite(t)):
            raise DomainError("arrival times must be finite")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise DomainError("arrival times must be strictly increasing")
        half = 0.5 * self.gate_time_T_G * (1.0 + 1e-12)
        if t.size and (t[0] < -half or t[-1] > half):
            raise DomainError(f"arrival times must lie within [-T_G/2, T_G/2] for T_G={self.gate_time_T_G}")
        if self.antisymmetric and not self.is_antisymmetric():
            raise DomainError("sequence flagged anti-symmetric but z/t are not mirrored exactly")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def apg(
        cls,
        half_counts: Iterable[int],
        gate_time: float,
        unit: TimeUnit = TimeUnit.TRAP_PERIODS,
        name: str = "",
    ) -> "PulseSequence":
        """
        Anti-symmetric sequence on the uniform grid.

        half_counts = (z_1, ..., z_{G/2}) for the positive-time groups;
        z = (-z_{G/2}, ..., -z_1, z_1, ..., z_{G/2}) at
        t_k = (T_G/G) * (-G/2, ..., -1, 1, ..., G/2).
        """
        half = np.asarray(list(half_counts), dtype=np.int64)
        groups = 2 * half.size
        if groups == 0:
            return cls.empty(gate_time, unit)
        step = gate_time / groups
        positive = step * np.arange(1, half.size + 1, dtype=float)
        times = np.concatenate([-positive[::-1], positive])
        counts = np.concatenate([-half[::-1], half])
        return cls(counts, times, gate_time, unit=unit, antisymmetric=True, name=name)

    @classmethod
    def empty(cls, gate_time: float = 0.0, unit: TimeUnit = TimeUnit.TRAP_PERIODS) -> "PulseSequence":
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0), gate_time, unit=unit)

    # ------------------------------------------------------------------
    # Properties
    # ------------------------------------------------------------------

    @property
    def group_count(self) -> int:
        return int(self.kick_counts_z.size)

    @property
    def n_max(self) -> int:
        return int(np.abs(self.kick_counts_z).max()) if self.group_count else 0

    @property
    def total_pulse_pairs(self) -> int:
        return int(np.abs(self.kick_counts_z).sum())

    def half_counts(self) -> np.ndarray:
        """Free kick counts (z_1, ..., z_{G/2}) of an anti-symmetric sequence."""
        if not self.is_antisymmetric():
            raise DomainError("half counts only defined for anti-symmetric sequences")
        return self.kick_counts_z[self.group_count // 2:].copy()

    def is_antisymmetric(self) -> bool:
        z, t = self.kick_counts_z, self.times_t
        if z.size % 2:
            return False
        return bool(np.array_equal(z[::-1], -z) and np.array_equal(t[::-1], -t))

    def time_scale(self, omega_t: float) -> float:
        """Seconds per unit of this sequence's times."""
        return 2.0 * math.pi / omega_t if self.unit is TimeUnit.TRAP_PERIODS else 1.0

    def times_in_seconds(self, omega_t: float) -> np.ndarray:
        return self.times_t * self.time_scale(omega_t)

    def reversed(self) -> "PulseSequence":
        """Time-reversed sequence: z reversed, t -> -reversed(t)."""
        return PulseSequence(
            self.kick_counts_z[::-1].copy(),
            -self.times_t[::-1],
            self.gate_time_T_G,
            unit=self.unit,
            antisymmetric=self.antisymmetric,
            name=f"{self.name}-reversed" if self.name else "",
        )

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self, omega_t: Optional[float] = None) -> Dict[str, Any]:
        """JSON-ready dictionary with times in trap periods."""
        if self.unit is TimeUnit.SECONDS:
            if omega_t is None:
                raise DomainError("omega_t required to express a sequence in seconds as trap periods")
            scale = omega_t / (2.0 * math.pi)
        else:
            scale = 1.0
        data = {
            "z": [int(v) for v in self.kick_counts_z],
            "t_over_tau0": [float(v) * scale for v in self.times_t],
            "T_G_over_tau0": self.gate_time_T_G * scale,
            "antisymmetric": self.is_antisymmetric(),
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: Any) -> "PulseSequence":
        """Parse the JSON form, raising SchemaError naming the bad field."""
        if not isinstance(data, dict):
            raise SchemaError("sequence", "expected a JSON object")
        unknown = sorted(set(data) - _SEQUENCE_KEYS)
        if unknown:
            raise SchemaError(unknown[0], "unknown field")
        for key in ("z", "t_over_tau0", "T_G_over_tau0"):
            if key not in data:
                raise SchemaError(key, "missing required field")

        z = data["z"]
        if not isinstance(z, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in z):
            raise SchemaError("z", "must be a list of integers")
        t = data["t_over_tau0"]
        if not isinstance(t, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in t):
            raise SchemaError("t_over_tau0", "must be a list of numbers")
        if len(t) != len(z):
            raise SchemaError("t_over_tau0", f"has {len(t)} entries but z has {len(z)}")
        gate_time = data["T_G_over_tau0"]
        if not isinstance(gate_time, (int, float)) or isinstance(gate_time, bool):
            raise SchemaError("T_G_over_tau0", "must be a number")
        flag = data.get("antisymmetric", False)
        if not isinstance(flag, bool):
            raise SchemaError("antisymmetric", "must be true or false")

        try:
            return cls(
                np.asarray(z, dtype=np.int64),
                np.asarray(t, dtype=float),
                float(gate_time),
                antisymmetric=flag,
                name=str(data.get("name", "")),
            )
        except DomainError as e:
            raise SchemaError("t_over_tau0", str(e))


def load_sequence(path: str) -> PulseSequence:
    """Load a sequence JSON file."""
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except OSError as e:
        raise SchemaError("sequence", f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise SchemaError("sequence", f"invalid JSON in {path}: {e}")
    return PulseSequence.from_dict(data)


def load_fixture_sequence(name: str) -> PulseSequence:
    """Load one of the shipped published sequences ("example1" or "example2")."""
    if name not in FIXTURE_SEQUENCES:
        raise DomainError(f"unknown fixture '{name}' (known: {sorted(FIXTURE_SEQUENCES)})")
    return load_sequence(os.path.join(FIXTURE_DIR, FIXTURE_SEQUENCES[name]))


def resolve_sequence(source: str) -> PulseSequence:
    """A fixture name or a path to a sequence file."""
    if source in FIXTURE_SEQUENCES:
        return load_fixture_sequence(source)
    return load_sequence(source)
