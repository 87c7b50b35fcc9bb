"""Command-line entry point: ``localphonon <subcommand>``.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .chain import ChainGeometry
from .detection import RabiTrace, pnr_map_sequence, rabi_fit
from .errors import NumericalError, ValidationError
from .hilbert import HilbertSpec
from .pulses import composite_cp, prep_sequence
from .scenarios import (
    DEFAULT_G,
    SCENARIOS,
    ScenarioConfig,
    load_config,
    run_scenario,
    sidecar_json,
    sweep_blockade,
)

SEQUENCES = ("composite_cp", "pnr_map", "fig2_prep", "fig3_prep")


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _base_config(args) -> ScenarioConfig:
    return load_config(args.config) if args.config else ScenarioConfig()


def cmd_geometry(args):
    trap = _base_config(args).trap
    if args.ions is not None:
        trap = replace(trap, ion_count=args.ions)
    geo = ChainGeometry.from_trap(trap)
    _write(json.dumps(geo.to_dict(), indent=2) + "\n", args.out)


def _scenario_name(name: str, blockade: bool) -> str:
    if name in SCENARIOS:
        if blockade and name.endswith("_free"):
            return name.replace("_free", "_blockade")
        return name
    full = f"{name}_{'blockade' if blockade else 'free'}"
    if full not in SCENARIOS:
        raise ValidationError(f"unknown scenario {name!r}")
    return full


def cmd_scenario(args):
    cfg = _base_config(args)
    cfg = replace(cfg, scenario=_scenario_name(args.name, args.blockade))
    if args.ideal:
        cfg = replace(cfg, ideal_mode=True)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    series = run_scenario(cfg)
    _write(series.to_csv(), args.out)
    if args.out:
        Path(args.out).with_suffix(".json").write_text(sidecar_json(series) + "\n")


def cmd_sweep(args):
    cfg = _base_config(args)
    name = args.scenario if args.scenario else cfg.scenario
    cfg = replace(cfg, scenario=_scenario_name(name.split("_")[0], True))
    if args.ideal:
        cfg = replace(cfg, ideal_mode=True)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    g_values = [float(x) for x in args.g_list.split(",")]
    if args.in_kappa:
        kappa = ChainGeometry.from_trap(cfg.trap).kappa[0, 1]
        g_values = [g * kappa for g in g_values]
    table = sweep_blockade(cfg, g_values, workers=args.workers)
    _write(table.to_csv(), args.out)


def cmd_fit_rabi(args):
    trace = RabiTrace.from_csv(Path(args.input).read_text())
    fit = rabi_fit(trace, args.levels, g_guess=args.g_guess, g=args.g)
    out = {
        "populations": fit.probs.tolist(),
        "sigma": fit.sigma.tolist(),
        "g_rad_s": fit.g,
        "gamma_per_s": fit.gamma,
        "residual_rms": fit.residual_rms,
        "condition": fit.condition,
        "identifiable": fit.identifiable,
        "low_confidence": fit.low_confidence,
        "notes": fit.notes,
    }
    _write(json.dumps(out, indent=2) + "\n", args.out)


def cmd_sequence(args):
    g = args.g
    spec = HilbertSpec(2, 4, 3)
    if args.name == "composite_cp":
        seq = composite_cp(args.ion, g)
    elif args.name == "pnr_map":
        seq = pnr_map_sequence(args.ion, g)
    elif args.name == "fig2_prep":
        seq = prep_sequence("fig2", spec, None, g)
    else:
        seq = prep_sequence("fig3", spec, None, g)
    text = seq.to_json(indent=2) if args.dump else json.dumps(
        {"name": seq.name, "items": len(seq), "duration_s": seq.duration}
    )
    _write(text + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localphonon", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML scenario config")
        sp.add_argument("--out", help="output file (default stdout)")

    sp = sub.add_parser("geometry", help="chain equilibrium and hopping rates as JSON")
    common(sp)
    sp.add_argument("--ions", type=int)
    sp.set_defaults(func=cmd_geometry)

    sp = sub.add_parser("scenario", help="run fig2/fig3/fig4/custom and write CSV")
    sp.add_argument("name", help="fig2, fig3, fig4, custom or a full name like fig2_blockade")
    common(sp)
    sp.add_argument("--blockade", action="store_true")
    sp.add_argument("--ideal", action="store_true", help="no noise, no shot sampling")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_scenario)

    sp = sub.add_parser("sweep", help="leakage versus blockade strength")
    common(sp)
    sp.add_argument("--g-list", required=True, help="comma-separated g values (rad/s)")
    sp.add_argument("--in-kappa", action="store_true", help="g values are multiples of kappa")
    sp.add_argument("--scenario", help="fig2 (default) or fig3")
    sp.add_argument("--ideal", action="store_true")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("fit-rabi", help="Fock populations from a BSB Rabi trace CSV")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--levels", type=int, default=3)
    sp.add_argument("--g-guess", type=float)
    sp.add_argument("--g", type=float, help="fix the Rabi parameter g (rad/s)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fit_rabi)

    sp = sub.add_parser("sequence", help="inspect a pulse sequence")
    sp.add_argument("name", choices=SEQUENCES)
    sp.add_argument("--dump", action="store_true", help="print the full JSON")
    sp.add_argument("--g", type=float, default=DEFAULT_G)
    sp.add_argument("--ion", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sequence)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
