#!/usr/bin/env python3
"""
Microtrap Gates command line.

    microtrap-gates modes [--xi-only]
    microtrap-gates gate eval|optimize|sweep|trajectory [--sequence S] [--calibrate]
    microtrap-gates scale
    microtrap-gates fh terms|count|verify|feasibility [--geometry G] [--embedding E]
    microtrap-gates init-config PATH

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import List, Optional

from microtrap_gates.artifacts import RunManifest, write_csv, write_json
from microtrap_gates.config import RunConfig, create_run_config, init_config_file
from microtrap_gates.errors import EXIT_OK, DomainError, MicrotrapError, exit_code_for
from microtrap_gates.fermi_hubbard import (
    TROTTER_CSV_HEADER,
    FHLattice,
    Geometry,
    HubPolicy,
    Normalization,
    QubitEmbedding,
    count_trotter_step,
    feasibility_report,
    jw_transform,
    load_embedding,
    mapping_deviation,
    print_census_summary,
    print_feasibility_summary,
    print_trotter_summary,
    search_embedding,
    trotter_verify_small,
)
from microtrap_gates.gates import (
    FIXTURE_SEQUENCES,
    TRAJECTORY_CSV_HEADER,
    GateContext,
    PhaseConvention,
    RateConvention,
    calibrate_context,
    infidelity,
    print_metrics_summary,
    rate_convention_gap,
    resolve_sequence,
    trajectory_table,
)
from microtrap_gates.optimization import (
    DIAGONAL_CSV_HEADER,
    SWEEP_CSV_HEADER,
    characteristic_curve,
    compare_diagonal_to_nn,
    create_executor,
    optimize_apg,
    print_opt_summary,
    print_sweep_summary,
    rate_law_from_sweep,
    sweep_rep_rate,
)
from microtrap_gates.optimization.sweeps import DEFAULT_Z_BOUNDS
from microtrap_gates.physics import print_mode_summary, solve_modes
from microtrap_gates.scaling import SCALING_CSV_HEADER, calibrated_base_array, position_sweep, print_scaling_summary

logger = logging.getLogger("microtrap_gates.cli")

# Repetition rates quoted with the shipped sequences, in units of omega_t / 2pi
PUBLISHED_F_MIN = {"example1": 450.0, "example2": 950.0}
REFERENCE_TOTALS = {Geometry.GRID_2D: 2628, Geometry.CHAIN_1D: 4716}


class Run:
    """Resolved config plus the manifest of files written so far."""

    def __init__(self, config: RunConfig, command: str):
        self.config = config
        self.out_dir = config.output.out_dir
        self.formats = set(config.output.formats)
        self.manifest = RunManifest(
            command=command,
            seed=config.seed,
            config=config.to_dict(),
            phase_convention=config.gate.phase_convention,
            rate_convention=config.gate.rate_convention,
        )

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def json(self, name: str, data) -> None:
        if "json" in self.formats:
            self.manifest.record(write_json(self.path(name), data))

    def csv(self, name: str, header, rows) -> None:
        if "csv" in self.formats:
            self.manifest.record(write_csv(self.path(name), header, rows))

    def finish(self, quiet: bool = False) -> None:
        path = self.manifest.save(self.out_dir)
        if quiet:
            return
        for name in self.manifest.outputs:
            print(f"💾 {os.path.join(self.out_dir, name)}")
        print(f"💾 {path}")


# ============================================================================
# SHARED BUILDERS
# ============================================================================

def _modes(config: RunConfig):
    return solve_modes(config.array.to_trap_array(), solver=config.array.solver)


def _context(config: RunConfig, modes, ions: Optional[List[int]] = None) -> GateContext:
    mu, nu = ions or config.gate.target_ions
    return GateContext.for_pair(modes, mu, nu, nbar=config.gate.nbar,
                                phase_convention=PhaseConvention(config.gate.phase_convention))


def _embedding(config: RunConfig, lat: FHLattice, geometry: Geometry, source: str,
               policy: HubPolicy) -> QubitEmbedding:
    if geometry is Geometry.CHAIN_1D:
        return QubitEmbedding.chain(lat.n_qubits)
    if source == "default":
        emb = QubitEmbedding.default_grid(lat)
        return emb if config.fh.diagonal_gates else replace(emb, diagonal=False)
    if source == "search":
        emb, _ = search_embedding(lat, policy)
        return emb
    return load_embedding(source, diagonal=config.fh.diagonal_gates)


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_modes(run: Run, args) -> None:
    modes = _modes(run.config)
    if args.xi_only:
        print(f"📊 xi = {modes.xi:.6e}")
        run.json("xi.json", {"xi": modes.xi, "shape": list(modes.shape)})
        return
    print_mode_summary(modes)
    run.json("modes.json", modes.to_json())
    run.csv("modes.csv", modes.csv_header(), modes.to_csv_rows())


def cmd_gate(run: Run, args) -> None:
    config = run.config
    rate = RateConvention(config.gate.rate_convention)
    modes = _modes(config)
    ctx = _context(config, modes)

    if args.action == "optimize":
        cfg = config.optimize.to_optimizer_config(config.seed, rate)
        executor = create_executor(cfg.max_workers)
        result = optimize_apg(ctx, cfg, executor)
        print_opt_summary(result, modes.omega_t)
        run.json("optimized_sequence.json", result.to_dict())
        if config.sweep.enabled:
            _write_sweep(run, sweep_rep_rate(ctx, config.sweep.gate_times_tau0, cfg, config.sweep.z_bounds, executor))
        if args.verbose:
            executor.print_stats()
        return

    if args.action == "sweep":
        cfg = config.optimize.to_optimizer_config(config.seed, rate)
        executor = create_executor(cfg.max_workers)
        _rate_study(run, modes, ctx, cfg, executor)
        if args.verbose:
            executor.print_stats()
        return

    source = args.sequence or config.gate.sequence
    seq = resolve_sequence(source)
    if args.calibrate or config.gate.calibrate:
        ctx = calibrate_context(seq, ctx)

    if args.action == "trajectory":
        table = trajectory_table(seq, ctx, config.gate.trajectory_samples)
        rows = [row for result in table.values() for row in result.to_csv_rows()]
        run.csv("trajectory.csv", TRAJECTORY_CSV_HEADER, rows)
        run.json("trajectory.json", {
            branch.value: {"geometric_phase": result.geometric_phase,
                           "endpoint_re": result.endpoint.real.tolist(),
                           "endpoint_im": result.endpoint.imag.tolist()}
            for branch, result in table.items()
        })
        print(f"📊 Trajectories for {seq.name or source}: {len(rows)} samples")
        return

    metrics = infidelity(seq, ctx, rate)
    print_metrics_summary(metrics, seq.name or source, modes.omega_t)
    if source in PUBLISHED_F_MIN:
        rate_convention_gap(metrics, PUBLISHED_F_MIN[source])
    run.json("gate_eval.json", {
        "sequence": seq.to_dict(),
        "metrics": metrics.to_dict(),
        "laser_wavevector_per_m": ctx.modes.laser_wavevector_k,
        "target_ions": list(ctx.target_ions),
    })
    run.csv("gate_eval.csv", ["mode", "re_delta_alpha", "im_delta_alpha", "weight"],
            [[m, a.real, a.imag, w] for m, (a, w) in enumerate(zip(metrics.delta_alpha, metrics.mode_weights))])


def _write_sweep(run: Run, points) -> None:
    run.json("sweep.json", [p.__dict__ for p in points])
    run.csv("sweep.csv", SWEEP_CSV_HEADER, [p.to_row() for p in points])


def _rate_study(run: Run, modes, ctx: GateContext, cfg, executor) -> None:
    """Sweep table, characteristic scatter, rate-law fit and diagonal comparison."""
    sweep = run.config.sweep
    points = sweep_rep_rate(ctx, sweep.gate_times_tau0, cfg, sweep.z_bounds, executor)
    _write_sweep(run, points)
    run.json("characteristic.json", characteristic_curve(points, sweep.threshold).to_dict())

    fit = comparison = None
    try:
        fit = rate_law_from_sweep(points, sweep.threshold)
        run.json("rate_law.json", fit.to_dict())
    except DomainError as e:
        print(f"⚠️  Rate law not fitted: {e}")

    if sweep.compare_diagonal:
        diag_ctx = _context(run.config, modes, sweep.diagonal_ions)
        try:
            comparison = compare_diagonal_to_nn(ctx, diag_ctx, sweep.operation_times_tau0, cfg,
                                                sweep.fidelity_threshold, sweep.z_bounds or DEFAULT_Z_BOUNDS,
                                                executor)
        except DomainError as e:
            print(f"⚠️  Diagonal comparison skipped: {e}")
        else:
            run.json("diagonal_comparison.json",
                     {"fidelity_threshold": sweep.fidelity_threshold,
                      "diagonal_ions": list(diag_ctx.target_ions), **comparison.to_dict()})
            run.csv("diagonal_comparison.csv", DIAGONAL_CSV_HEADER, comparison.to_csv_rows())

    print_sweep_summary(points, fit, comparison)


def cmd_scale(run: Run, args) -> None:
    config = run.config
    scale = config.scale
    donor = resolve_sequence(args.sequence or config.gate.sequence)
    base = config.array.to_trap_array()
    if scale.calibrate:
        base = calibrated_base_array(donor, base, diagonal=scale.diagonal)
    rows = position_sweep(scale.array_sizes, donor, base, diagonal=scale.diagonal, nbar=scale.nbar,
                          max_size=scale.max_size, executor=create_executor(config.optimize.max_workers))
    print_scaling_summary(rows)
    run.json("scaling.json", [row.__dict__ for row in rows])
    run.csv("scaling.csv", SCALING_CSV_HEADER,
            [[r.n, r.label, r.kind, r.orbit_size, r.infidelity, r.delta_phi, r.motional_term, r.n_modes]
             for r in rows])


def cmd_fh(run: Run, args) -> None:
    fh = run.config.fh
    lat = fh.lattice()
    normalization = Normalization(fh.normalization)
    geometry = Geometry(args.geometry or fh.geometry)
    policy = HubPolicy(args.hub_policy or fh.hub_policy)

    if args.action == "terms":
        mapped = jw_transform(lat, normalization)
        print(f"📊 {len(mapped)} Pauli terms: {mapped.census()}")
        run.json("fh_terms.json", mapped.to_dict())
        run.csv("fh_terms.csv", ["index", "kind", "arity", "coefficient", "pauli"],
                [[i, t.kind.value, t.arity, t.coefficient, t.label()] for i, t in enumerate(mapped)])
        return

    if args.action == "verify":
        small = fh.verify_lattice()
        result = trotter_verify_small(small, fh.verify_time, fh.verify_steps, normalization)
        print_trotter_summary(result)
        deviation = mapping_deviation(small)
        print(f"   mapping deviation vs fermion operators: {deviation:.3e}")
        run.csv("trotter.csv", TROTTER_CSV_HEADER, result.to_csv_rows())
        run.json("trotter.json", {"time": result.time, "rows": [r.__dict__ for r in result.rows],
                                  "ratios": result.ratios, "mapping_deviation": deviation})
        return

    emb = _embedding(run.config, lat, geometry, args.embedding or fh.embedding, policy)
    census = count_trotter_step(lat, emb, policy)
    print_census_summary(census, REFERENCE_TOTALS.get(geometry) if (lat.rows, lat.cols) == (4, 5) else None)
    run.json("fh_census.json", census.to_dict())
    run.json("fh_embedding.json", emb.to_json())

    if args.action == "feasibility":
        report = feasibility_report(census, fh.gate_time_us * 1e-6, fh.trotter_steps,
                                    fh.epsilon, fh.base_fidelity, fh.pulse_pairs)
        print_feasibility_summary(report)
        run.json("fh_feasibility.json", report.to_dict())


COMMANDS = {
    "modes": cmd_modes,
    "gate": cmd_gate,
    "scale": cmd_scale,
    "fh": cmd_fh,
}


# ============================================================================
# ENTRY POINT
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--seed", type=int, help="Override the configured seed")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--format", choices=["json", "csv"], help="Write only this format")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="microtrap-gates", description="Fast gates in ion microtrap arrays")
    sub = parser.add_subparsers(dest="command", required=True)

    modes = sub.add_parser("modes", parents=[common], help="Normal modes of the array")
    modes.add_argument("--xi-only", action="store_true", help="Print only xi; xi.json is still written")

    gate = sub.add_parser("gate", parents=[common], help="Evaluate, optimize, sweep or trace a gate")
    gate.add_argument("action", choices=["eval", "optimize", "sweep", "trajectory"])
    gate.add_argument("--sequence", help=f"Sequence JSON or one of {sorted(FIXTURE_SEQUENCES)}")
    gate.add_argument("--calibrate", action="store_true", help="Phase-match the wave vector first")

    scale = sub.add_parser("scale", parents=[common], help="Donor gate across array sizes")
    scale.add_argument("--sequence", help="Donor sequence")

    fh = sub.add_parser("fh", parents=[common], help="Fermi-Hubbard gate budget")
    fh.add_argument("action", choices=["terms", "count", "verify", "feasibility"])
    fh.add_argument("--geometry", choices=[g.value for g in Geometry])
    fh.add_argument("--embedding", help="default, search or an embedding JSON path")
    fh.add_argument("--hub-policy", choices=[h.value for h in HubPolicy])

    init = sub.add_parser("init-config", help="Write the default configuration file")
    init.add_argument("path")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.command == "init-config":
        if init_config_file(args.path):
            print(f"✅ Created default config file: {args.path}")
        else:
            print(f"⚠️  {args.path} already exists, left unchanged")
        return EXIT_OK

    try:
        manager = create_run_config(args.config)
        config = manager.apply_overrides(seed=args.seed, out_dir=args.out, fmt=args.format)
        label = args.command + (f" {args.action}" if hasattr(args, "action") else "")
        quiet = getattr(args, "xi_only", False)
        if not quiet:
            print(f"🚀 microtrap-gates {label} | seed {config.seed} | out {config.output.out_dir}")
        if args.verbose:
            manager.print_config()
        run = Run(config, label)
        COMMANDS[args.command](run, args)
        run.finish(quiet)
    except MicrotrapError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)

    if not quiet:
        print("✅ Done")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
