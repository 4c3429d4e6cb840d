"""
Microtrap Gates Run Configuration

YAML configuration for CLI runs: array parameters plus one block per
command. Every physical quantity carries its unit in the key name.

A missing or malformed file, an unknown key, or a bad value is a
ConfigError naming the dotted key path.
"""

import logging
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

import yaml

from .errors import ConfigError
from .fermi_hubbard import FHLattice, Geometry, HubPolicy, Normalization
from .gates.engine import PhaseConvention, RateConvention
from .optimization.config import OptimizerConfig
from .physics.eigen import SOLVERS
from .physics.species import ION_SPECIES
from .physics.trap_array import TrapArray

logger = logging.getLogger(__name__)


# ============================================================================
# CONFIGURATION DATA STRUCTURES
# ============================================================================

@dataclass
class ArrayConfig:
    """Microtrap array in laboratory units."""
    rows: int = 2
    cols: int = 2
    spacing_um: float = 100.0
    trap_freq_mhz: float = 1.2
    ion_species: str = "40Ca+"
    mass_amu: Optional[float] = None
    charge_e: Optional[int] = None
    laser_wavelength_nm: Optional[float] = 393.0
    lamb_dicke_com: Optional[float] = None
    solver: str = "jacobi"

    def to_trap_array(self, rows: Optional[int] = None, cols: Optional[int] = None) -> TrapArray:
        return TrapArray.from_lab_units(
            rows=rows or self.rows,
            cols=cols or self.cols,
            spacing_um=self.spacing_um,
            trap_freq_mhz=self.trap_freq_mhz,
            ion_species=self.ion_species,
            mass_amu=self.mass_amu,
            charge_e=self.charge_e,
            laser_wavelength_nm=self.laser_wavelength_nm,
            lamb_dicke_com=self.lamb_dicke_com,
        )


@dataclass
class GateConfig:
    """Gate evaluation settings."""
    target_ions: List[int] = field(default_factory=lambda: [0, 1])
    sequence: str = "example1"
    nbar: float = 0.0
    calibrate: bool = False
    phase_convention: str = PhaseConvention.UNORDERED_PAIRS.value
    rate_convention: str = RateConvention.HALF_GROUP.value
    trajectory_samples: int = 201


@dataclass
class OptimizeConfig:
    """Pulse-sequence search settings."""
    gate_time_tau0: float = 2.0
    z_bound: int = 100
    group_count: int = 16
    restarts: int = 64
    target_infidelity: float = 1e-9
    batch_size: int = 8
    max_workers: int = 4
    exhaustive_limit: int = 200_000

    def to_optimizer_config(self, seed: int, rate_convention: RateConvention) -> OptimizerConfig:
        return OptimizerConfig(
            gate_time_T_G=self.gate_time_tau0,
            z_bound=self.z_bound,
            group_count=self.group_count,
            restarts=self.restarts,
            rng_seed=seed,
            target_infidelity=self.target_infidelity,
            batch_size=self.batch_size,
            max_workers=self.max_workers,
            exhaustive_limit=self.exhaustive_limit,
            rate_convention=rate_convention,
        )


@dataclass
class SweepConfig:
    """Repetition-rate sweep, rate-law fit and diagonal comparison."""
    enabled: bool = False
    gate_times_tau0: List[float] = field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0])
    z_bounds: Optional[List[int]] = None
    threshold: float = 1e-2              # 1-F cut; minimum rates demand F >= 1 - threshold
    compare_diagonal: bool = True
    diagonal_ions: List[int] = field(default_factory=lambda: [0, 3])
    operation_times_tau0: List[float] = field(default_factory=lambda: [2.0, 3.0, 4.0])

    @property
    def fidelity_threshold(self) -> float:
        return 1.0 - self.threshold


@dataclass
class ScaleConfig:
    """Donor-gate scaling study."""
    array_sizes: List[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    diagonal: bool = False
    nbar: float = 0.0
    max_size: int = 12
    calibrate: bool = True


@dataclass
class FermiHubbardConfig:
    """Lattice, embedding and feasibility inputs."""
    rows: int = 4
    cols: int = 5
    hopping_w: float = 1.0
    onsite_U: float = 1.0
    normalization: str = Normalization.PHYSICAL.value
    geometry: str = Geometry.GRID_2D.value
    embedding: str = "default"
    diagonal_gates: bool = True
    hub_policy: str = HubPolicy.FIXED.value
    gate_time_us: float = 1.7
    trotter_steps: int = 10
    epsilon: float = 0.0
    base_fidelity: float = 0.99999
    pulse_pairs: int = 0
    verify_rows: int = 2
    verify_cols: int = 2
    verify_time: float = 0.5
    verify_steps: List[int] = field(default_factory=lambda: [8, 16, 32, 64])

    def lattice(self) -> FHLattice:
        return FHLattice(rows=self.rows, cols=self.cols, hopping_w=self.hopping_w, onsite_U=self.onsite_U)

    def verify_lattice(self) -> FHLattice:
        return FHLattice(rows=self.verify_rows, cols=self.verify_cols,
                         hopping_w=self.hopping_w, onsite_U=self.onsite_U)


@dataclass
class OutputConfig:
    out_dir: str = "results"
    formats: List[str] = field(default_factory=lambda: ["json", "csv"])


@dataclass
class RunConfig:
    """Complete run configuration."""
    version: str = "1.0"
    seed: int = 0
    array: ArrayConfig = field(default_factory=ArrayConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    optimize: OptimizeConfig = field(default_factory=OptimizeConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    scale: ScaleConfig = field(default_factory=ScaleConfig)
    fh: FermiHubbardConfig = field(default_factory=FermiHubbardConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


BLOCKS = {
    "array": ArrayConfig,
    "gate": GateConfig,
    "optimize": OptimizeConfig,
    "sweep": SweepConfig,
    "scale": ScaleConfig,
    "fh": FermiHubbardConfig,
    "output": OutputConfig,
}

CHOICES = {
    "array.ion_species": set(ION_SPECIES),
    "array.solver": set(SOLVERS),
    "gate.phase_convention": {c.value for c in PhaseConvention},
    "gate.rate_convention": {c.value for c in RateConvention},
    "fh.normalization": {n.value for n in Normalization},
    "fh.geometry": {g.value for g in Geometry},
    "fh.hub_policy": {h.value for h in HubPolicy},
}

OUTPUT_FORMATS = {"json", "csv"}


# ============================================================================
# CONFIGURATION FILE MANAGER
# ============================================================================

class RunConfigManager:
    """
    Loads and validates a run configuration.

    Without a path the built-in defaults (the published 2x2 Ca+ system)
    are used; a path that cannot be read is an error.
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Optional path to a YAML config file
        """
        self.config_path = config_path
        self.config: Optional[RunConfig] = None
        self._load_config()

    def _load_config(self):
        """Load configuration from YAML file."""
        if self.config_path is None:
            self.config = self._create_default_config()
            return

        if not os.path.exists(self.config_path):
            raise ConfigError(f"config file not found: {self.config_path}")
        try:
            with open(self.config_path, "r") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse {self.config_path}: {e}")
        except OSError as e:
            raise ConfigError(f"cannot read {self.config_path}: {e}")

        self.config = self._dict_to_config(data or {})
        logger.debug("Loaded run config from %s", self.config_path)

    def _dict_to_config(self, data: Any) -> RunConfig:
        """Convert dictionary to RunConfig, rejecting unknown keys."""
        if not isinstance(data, dict):
            raise ConfigError("top level of the config must be a mapping")
        top_level = {"version", "seed"} | set(BLOCKS)
        for key in data:
            if key not in top_level:
                raise ConfigError(f"unknown config key '{key}'", key=str(key))

        blocks = {name: _build_block(name, cls, data.get(name)) for name, cls in BLOCKS.items()}
        seed = data.get("seed", 0)
        _check_seed(seed)

        config = RunConfig(version=str(data.get("version", "1.0")), seed=seed, **blocks)
        self._validate(config)
        return config

    def _create_default_config(self) -> RunConfig:
        """Create default configuration."""
        return RunConfig()

    @staticmethod
    def _validate(config: RunConfig) -> None:
        as_dict = config.to_dict()
        for dotted, allowed in CHOICES.items():
            block, key = dotted.split(".")
            value = as_dict[block][key]
            if value not in allowed:
                raise ConfigError(f"{dotted}={value!r}; expected one of {sorted(allowed)}", key=dotted)
        bad = [f for f in config.output.formats if f not in OUTPUT_FORMATS]
        if bad or not config.output.formats:
            raise ConfigError(f"output.formats must be a non-empty subset of {sorted(OUTPUT_FORMATS)}",
                              key="output.formats")
        if len(config.gate.target_ions) != 2:
            raise ConfigError("gate.target_ions must list two ions", key="gate.target_ions")
        if len(config.sweep.diagonal_ions) != 2:
            raise ConfigError("sweep.diagonal_ions must list two ions", key="sweep.diagonal_ions")
        if not 0.0 < config.sweep.threshold <= 1.0:
            raise ConfigError(f"sweep.threshold must lie in (0, 1], got {config.sweep.threshold}",
                              key="sweep.threshold")
        try:
            config.array.to_trap_array()
        except (ValueError, TypeError) as e:
            raise ConfigError(f"array: {e}", key="array")

    def apply_overrides(self, seed: Optional[int] = None, out_dir: Optional[str] = None,
                        fmt: Optional[str] = None) -> RunConfig:
        """Command-line flags take precedence over the file."""
        if seed is not None:
            _check_seed(seed)
            self.config.seed = seed
        if out_dir is not None:
            self.config.output.out_dir = out_dir
        if fmt is not None:
            if fmt not in OUTPUT_FORMATS:
                raise ConfigError(f"unknown output format '{fmt}'", key="output.formats")
            self.config.output.formats = [fmt]
        return self.config

    def print_config(self) -> None:
        """Print current configuration."""
        print("\n=== Microtrap Run Configuration ===\n")
        print(f"Config file: {self.config_path or '(defaults)'}")
        print(f"Seed: {self.config.seed}")
        for name, values in self.config.to_dict().items():
            if isinstance(values, dict):
                print(f"\n{name}:")
                for key, value in values.items():
                    print(f"  {key}: {value}")


def _check_seed(seed: Any) -> None:
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}", key="seed")


def _build_block(name: str, cls, data: Any):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"'{name}' must be a mapping", key=name)
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown config key '{name}.{key}'", key=f"{name}.{key}")
    defaults = cls()
    values = dict(data)
    for key, value in data.items():
        default = getattr(defaults, key)
        # YAML 1.1 reads 1e-9 as a string
        if isinstance(default, float) and isinstance(value, (str, int)) and not isinstance(value, bool):
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"{name}.{key} must be a number, got {value!r}", key=f"{name}.{key}")
        elif isinstance(default, int) and not isinstance(default, bool) and (
                not isinstance(value, int) or isinstance(value, bool)):
            raise ConfigError(f"{name}.{key} must be an integer, got {value!r}", key=f"{name}.{key}")
    try:
        return cls(**values)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid '{name}' block: {e}", key=name)


# ============================================================================
# CONFIGURATION FILE TEMPLATE
# ============================================================================

DEFAULT_CONFIG_TEMPLATE = """# Microtrap Gates Run Configuration

version: 1.0

# Seed for every random stream of the run
seed: 0

# ==============================================================================
# ARRAY
# ==============================================================================

array:
  rows: 2
  cols: 2
  spacing_um: 100.0          # trap spacing d
  trap_freq_mhz: 1.2         # omega_t / 2pi
  ion_species: "40Ca+"       # 40Ca+, 9Be+, 171Yb+
  # mass_amu: 39.962591      # explicit mass and charge override the species
  # charge_e: 1
  laser_wavelength_nm: 393.0
  # lamb_dicke_com: 0.16     # force eta at omega_t instead of a wavelength
  solver: jacobi             # jacobi or lapack

# ==============================================================================
# GATE
# ==============================================================================

gate:
  target_ions: [0, 1]
  sequence: example1         # example1, example2 or a JSON path
  nbar: 0.0
  calibrate: false           # phase-match the wave vector to the sequence
  phase_convention: unordered_pairs
  rate_convention: half_group
  trajectory_samples: 201

optimize:
  gate_time_tau0: 2.0
  z_bound: 100
  group_count: 16
  restarts: 64
  target_infidelity: 1.0e-9
  batch_size: 8
  max_workers: 4
  exhaustive_limit: 200000

sweep:
  enabled: false             # also sweep after `gate optimize`
  gate_times_tau0: [0.5, 1.0, 1.5, 2.0]
  # z_bounds: [5, 10, 20, 40, 80]
  threshold: 1.0e-2          # 1-F cut; minimum rates demand F >= 1 - threshold
  compare_diagonal: true     # `gate sweep` also compares diagonal and NN gates
  diagonal_ions: [0, 3]
  operation_times_tau0: [2.0, 3.0, 4.0]

# ==============================================================================
# ARRAY SCALING
# ==============================================================================

scale:
  array_sizes: [2, 3, 4, 5, 6]
  diagonal: false
  nbar: 0.0
  max_size: 12
  calibrate: true

# ==============================================================================
# FERMI-HUBBARD
# ==============================================================================

fh:
  rows: 4
  cols: 5
  hopping_w: 1.0
  onsite_U: 1.0
  normalization: physical    # physical or rescaled
  geometry: grid             # grid or chain
  embedding: default         # default, search or a JSON path
  diagonal_gates: true
  hub_policy: fixed          # fixed or optimized
  gate_time_us: 1.7
  trotter_steps: 10
  epsilon: 0.0
  base_fidelity: 0.99999
  pulse_pairs: 0
  verify_rows: 2
  verify_cols: 2
  verify_time: 0.5
  verify_steps: [8, 16, 32, 64]

output:
  out_dir: results
  formats: [json, csv]
"""


# ============================================================================
# FACTORY FUNCTIONS
# ============================================================================

def create_run_config(config_path: Optional[str] = None) -> RunConfigManager:
    """
    Factory function to create configuration manager.

    Args:
        config_path: Optional path to config file

    Returns:
        Configured configuration manager
    """
    return RunConfigManager(config_path=config_path)


def init_config_file(config_path: str) -> bool:
    """
    Write the default template unless the file already exists.

    Returns:
        True if a file was written
    """
    if os.path.exists(config_path):
        return False
    os.makedirs(os.path.dirname(os.path.abspath(config_path)), exist_ok=True)
    with open(config_path, "w") as f:
        f.write(DEFAULT_CONFIG_TEMPLATE)
    return True
