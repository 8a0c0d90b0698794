#!/usr/bin/env python3
"""
Command line front end for the shifted difference set simulator

Every subcommand prints a single JSON document on standard output; logs go
to standard error. Exit codes: 0 success, 1 verification failure, 2 usage
or input error.
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from data_exporter import ResultExporter, dumps
from diffset import (DifferenceSet, construct_hadamard, construct_paley, construct_singer,
                     maiorana_mcfarland, normalization_identity, paley_field,
                     verify_difference_set)
from dihedral import (DihedralHSPInstance, expected_instance_count, make_hsp_instance,
                      make_whitebox_hsp_instance, make_whitebox_instance, solve_dihedral_hsp,
                      verify_hsp_instance)
from errors import DiffsetError, InternalConsistencyError, StructuralError
from finite_field import FiniteField, find_primitive
from group_core import AbelianGroup, GroupElement, parse_elements
from hidden_shift import (HiddenShiftInstance, approx_success_probability,
                          collision_bound, indicator_function, injectivity_monte_carlo,
                          injectivize, is_injective, peak_probability, recover_shift,
                          required_copies, run_shift_algorithm)
from resource_monitor import monitored
from spectrum import (gauss_magnitude_deviation, parseval_deviation, singer_gauss_relation,
                      turyn_check, turyn_check_subset)
from statevector import sample

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

logger = logging.getLogger("diffset_sim")


# -------------------- Logging --------------------


def setup_logging(level: Optional[str] = None, to_file: Optional[bool] = None):
    """Console handler on stderr, plus a timestamped file under logs/ when enabled"""
    log_formatter = logging.Formatter(fmt=config.LOG_FORMAT, datefmt=config.LOG_DATE_FORMAT)
    root = logging.getLogger()
    root.setLevel(level or config.LOG_LEVEL)
    for handler in list(root.handlers):
        if getattr(handler, "_diffset_sim", False):
            root.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(log_formatter)
    console_handler._diffset_sim = True
    root.addHandler(console_handler)

    if config.LOG_TO_FILE if to_file is None else to_file:
        timestamp = datetime.now().strftime(config.EXPORT_TIMESTAMP_FORMAT)
        config.LOGS_DIR.mkdir(exist_ok=True)
        file_handler = logging.FileHandler(
            config.LOGS_DIR / f"diffset_sim_{timestamp}.log", encoding="utf-8"
        )
        file_handler.setFormatter(log_formatter)
        file_handler._diffset_sim = True
        root.addHandler(file_handler)


# -------------------- Input helpers --------------------


def load_json(path: str) -> Dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_diffset(data: Dict) -> DifferenceSet:
    """Accepts a difference set document or an instance document wrapping one"""
    if "diffset" in data:
        data = data["diffset"]
    return DifferenceSet.from_dict(data)


def parse_secret(group: AbelianGroup, raw: Optional[str], rng_seed: int) -> GroupElement:
    """'5' or '1,0,1,0'; seeded-random when absent"""
    if raw is None:
        rng = np.random.default_rng(rng_seed)
        return group.element_at(int(rng.integers(0, group.order)))
    try:
        parts = [int(p) for p in raw.split(",")]
    except ValueError as e:
        raise StructuralError(f"malformed secret {raw!r}") from e
    return group.element(parts if len(parts) > 1 else parts[0])


def parse_modulus(raw: Optional[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    return tuple(raw) if raw else None


# -------------------- Subcommands --------------------


def cmd_construct(args) -> Tuple[Dict, int]:
    modulus = parse_modulus(args.modulus)
    if args.family == "paley":
        ds = construct_paley(paley_field(args.q, modulus, args.seed))
    elif args.family == "hadamard":
        ds = construct_hadamard(maiorana_mcfarland(args.n))
    else:
        ds = construct_singer(args.q, args.d, modulus, rng_seed=args.seed)
    return ds.to_dict(), EXIT_OK


def cmd_verify(args) -> Tuple[Dict, int]:
    data = load_json(args.input)
    if "diffset" in data:
        data = data["diffset"]
    group = AbelianGroup.from_dict(data["group"])
    verdict = verify_difference_set(group, parse_elements(group, data["elements"]))
    return verdict.to_dict(), EXIT_OK if verdict.accepted else EXIT_FAILED


def cmd_spectrum(args) -> Tuple[Dict, int]:
    data = load_json(args.input)
    if "diffset" in data:
        data = data["diffset"]
    group = AbelianGroup.from_dict(data["group"])
    elements = parse_elements(group, data["elements"])
    verdict = verify_difference_set(group, elements)
    if not verdict.accepted:
        report = turyn_check_subset(group, elements, args.tolerance)
        return report.to_dict(), EXIT_FAILED
    ds = DifferenceSet.certify(group, elements, data.get("family", "custom"))
    report = turyn_check(ds, args.tolerance)
    document = report.to_dict()
    document["parseval_deviation"] = parseval_deviation(ds)
    document["normalization"] = str(normalization_identity(ds.params))
    return document, EXIT_OK if report.passed else EXIT_FAILED


def cmd_simulate_shift(args) -> Tuple[Dict, int]:
    data = load_json(args.input)
    if "oracle" in data and "diffset" in data:
        instance = HiddenShiftInstance.from_dict(data)
    else:
        ds = load_diffset(data)
        instance = HiddenShiftInstance.blackbox(ds, parse_secret(ds.group, args.secret, args.seed))
    ds = instance.diffset
    run = run_shift_algorithm(instance)
    counts = sample(run.final_state, args.seed, args.trials)
    result = recover_shift(instance, rng_seed=args.seed)
    document = {
        "instance": instance.to_dict(),
        "params": {"v": ds.v, "k": ds.k, "lambda": ds.lam},
        "run": run.to_dict(),
        "exact_peak_probability": run.peak_probability,
        "audit_peak_probability": peak_probability(ds.params),
        "approx_probability": str(approx_success_probability(ds.params)),
        "empirical_peak_rate": int(counts[run.peak.index]) / args.trials,
        "trials": args.trials,
        "recovery": result.to_dict(),
    }
    return document, EXIT_OK if result.success else EXIT_FAILED


def cmd_injectivize(args) -> Tuple[Dict, int]:
    ds = load_diffset(load_json(args.input))
    m = args.m or required_copies(ds.v)
    f = indicator_function(ds)
    fv = injectivize(f, ds.group, m, args.seed)
    gamma = approx_success_probability(ds.params) / 2
    document = {
        "params": {"v": ds.v, "k": ds.k, "lambda": ds.lam},
        "m": m,
        "required_copies": required_copies(ds.v),
        "offsets": fv.to_dict()["offsets"],
        "injective": is_injective(fv),
        "draws": args.draws,
        "non_injective_fraction": str(injectivity_monte_carlo(f, ds.group, m, args.draws, args.seed)),
        "union_bound": collision_bound(ds.v, gamma, m),
    }
    return document, EXIT_OK


def _hsp_from_args(args) -> DihedralHSPInstance:
    if args.input:
        data = load_json(args.input)
        if data.get("semidirect"):
            return DihedralHSPInstance.from_dict(data)
        ds = load_diffset(data)
        instance = HiddenShiftInstance.blackbox(ds, parse_secret(ds.group, args.secret, args.seed))
        return make_hsp_instance(instance, args.m, args.seed)
    secret = None
    if args.secret is not None:
        try:
            secret = int(args.secret)
        except ValueError as e:
            raise StructuralError(f"malformed secret {args.secret!r}") from e
    wb = make_whitebox_instance(args.d, args.seed, parse_modulus(args.modulus), secret)
    return make_whitebox_hsp_instance(wb, args.m, args.seed)


def cmd_dihedral_make(args) -> Tuple[Dict, int]:
    instance = _hsp_from_args(args)
    verdict = verify_hsp_instance(instance)
    document = instance.to_dict()
    document["verdict"] = verdict.to_dict()
    document["instance_count"] = expected_instance_count(args.count_n).to_dict() if args.count_n else None
    return document, EXIT_OK if verdict.ok else EXIT_FAILED


def cmd_dihedral_solve(args) -> Tuple[Dict, int]:
    instance = _hsp_from_args(args)
    result = solve_dihedral_hsp(instance, rng_seed=args.seed)
    document = result.to_dict()
    planted = instance.hidden_generator
    document["planted_generator"] = [planted.a.to_list(), 1] if planted else None
    return document, EXIT_OK if result.success else EXIT_FAILED


def cmd_gauss_check(args) -> Tuple[Dict, int]:
    gf = FiniteField.build(args.p, args.n, parse_modulus(args.modulus), args.seed)
    alpha = find_primitive(gf)
    deviation = gauss_magnitude_deviation(gf, alpha)
    document = {
        "field": gf.to_dict(),
        "alpha": alpha.to_dict(),
        "max_magnitude_deviation": deviation,
        "pass": deviation < args.tolerance,
    }
    if args.singer_d:
        document["singer_relation"] = singer_gauss_relation(args.singer_d, args.tolerance).to_dict()
    return document, EXIT_OK if document["pass"] else EXIT_FAILED


# -------------------- Sweeps --------------------


def _family_instance(family: str, value: int, d: int, seed: int) -> Tuple[str, DifferenceSet, Optional[float]]:
    if family == "singer":
        approx = 2 / value if d == 2 else None
        return f"q={value},d={d}", construct_singer(value, d, rng_seed=seed), approx
    if family == "hadamard":
        return f"n={value}", construct_hadamard(maiorana_mcfarland(value)), 1.0
    return f"q={value}", construct_paley(paley_field(value, rng_seed=seed)), None


def sweep_row(family: str, value: int, d: int, trials: int, seed: int, row_index: int) -> Dict:
    row: Dict = {"family": family, "label": "", "error": ""}
    try:
        label, ds, family_approx = _family_instance(family, value, d, seed)
        row_rng = np.random.default_rng([seed, row_index])
        secret = ds.group.element_at(int(row_rng.integers(0, ds.v)))
        run = run_shift_algorithm(HiddenShiftInstance.blackbox(ds, secret))
        counts = sample(run.final_state, [seed, row_index], trials)
        row.update(
            label=label,
            v=ds.v,
            k=ds.k,
            **{"lambda": ds.lam},
            secret=str(secret),
            exact_peak_probability=run.peak_probability,
            audit_peak_probability=peak_probability(ds.params),
            formula_probability=float(approx_success_probability(ds.params)),
            family_approximation=family_approx,
            empirical_rate=int(counts[run.peak.index]) / trials,
            trials=trials,
        )
    except DiffsetError as e:
        logger.warning("⚠️ Sweep row %s=%s failed: %s", family, value, e)
        row.update(label=str(value), error=str(e))
    return row


def experiment_sweep(family: str, grid: List[int], d: int = 2, trials: int = 200, seed: int = 0) -> Dict:
    """One row per grid value, in grid order; failures are recorded in-row"""
    rows = [sweep_row(family, value, d, trials, seed, i) for i, value in enumerate(grid)]
    return {"family": family, "d": d if family == "singer" else None, "seed": seed, "rows": rows}


def cmd_sweep(args) -> Tuple[Dict, int]:
    with monitored(args.monitor_interval):
        document = experiment_sweep(args.family, args.grid or [], args.d, args.trials, args.seed)
    if args.export:
        ResultExporter().export_sweep(document)
    return document, EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "simulate-shift": cmd_simulate_shift,
    "injectivize": cmd_injectivize,
    "dihedral-make": cmd_dihedral_make,
    "dihedral-solve": cmd_dihedral_solve,
    "gauss-check": cmd_gauss_check,
    "sweep": cmd_sweep,
}


# -------------------- CLI --------------------


def get_argument_parser() -> argparse.ArgumentParser:
    """Creates the argument parser with one subparser per command"""
    examples = """
Examples:
  %(prog)s construct singer --q 3 --d 2 --out singer13.json
  %(prog)s verify --in singer13.json
  %(prog)s spectrum --in singer13.json
  %(prog)s simulate-shift --in singer13.json --secret 5 --trials 100 --seed 7
  %(prog)s injectivize --in singer13.json --draws 200
  %(prog)s dihedral-make --d 6 --seed 3 --out hsp127.json
  %(prog)s dihedral-solve --in hsp127.json
  %(prog)s gauss-check --p 2 --n 6 --singer-d 2
  %(prog)s sweep --family singer --grid 2 3 5 7 11 13 --d 2 --export
"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Master seed (default 0)")
    common.add_argument("--trials", type=int, default=200, help="Sampled measurements (default 200)")
    common.add_argument("--tolerance", type=float, default=config.TURYN_TOL, help="Spectral tolerance")
    common.add_argument("--in", dest="input", help="Input JSON document")
    common.add_argument("--out", help="Also write the JSON result to this path")
    common.add_argument("--cap", type=int, help="Group order cap for enumeration")
    common.add_argument("--log-level", help="Logging level (default from DIFFSET_LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="diffset-sim",
        description="Shifted difference set simulator - exact statevector experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=examples,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", parents=[common], help="Build a difference set")
    construct.add_argument("family", choices=["paley", "hadamard", "singer"])
    construct.add_argument("--q", type=int, help="Field size (paley) or prime q (singer)")
    construct.add_argument("--d", type=int, help="Singer dimension d")
    construct.add_argument("--n", type=int, help="Hadamard: group Z_2^(2n)")
    construct.add_argument("--modulus", type=int, nargs="+", help="Irreducible modulus, constant term first")

    for name, text in (("verify", "Verify a candidate set"), ("spectrum", "Turyn flatness report")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.set_defaults(input_required=True)

    shift = sub.add_parser("simulate-shift", parents=[common], help="Simulate the shift algorithm and recover s")
    shift.add_argument("--secret", help="Shift as '5' or '1,0,1,0' (seeded-random if absent)")
    shift.set_defaults(input_required=True)

    inj = sub.add_parser("injectivize", parents=[common], help="Injectivize the indicator of D")
    inj.add_argument("--m", type=int, help="Number of offsets (default ceil(2 log2 v) + 6)")
    inj.add_argument("--draws", type=int, default=config.MONTE_CARLO_DRAWS, help="Monte-Carlo draws")
    inj.set_defaults(input_required=True)

    for name, text in (("dihedral-make", "Build a dihedral HSP instance"),
                       ("dihedral-solve", "Build or load an HSP instance and solve it")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--d", type=int, default=2, help="White-box Singer over GF(2^(d+1))")
        p.add_argument("--secret", help="Planted shift (exponent s for white-box instances)")
        p.add_argument("--m", type=int, help="Number of offsets")
        p.add_argument("--modulus", type=int, nargs="+", help="Irreducible modulus, constant term first")
        if name == "dihedral-make":
            p.add_argument("--count-n", type=int, help="Also report the instance count for N = 2^n - 1")

    gauss = sub.add_parser("gauss-check", parents=[common], help="Gauss sum magnitudes over GF(p^n)")
    gauss.add_argument("--p", type=int, default=2)
    gauss.add_argument("--n", type=int, required=True)
    gauss.add_argument("--modulus", type=int, nargs="+")
    gauss.add_argument("--singer-d", type=int, help="Also measure G/chi(D) for the binary Singer set")

    sweep = sub.add_parser("sweep", parents=[common], help="Success probability over a family grid")
    sweep.add_argument("--family", choices=["singer", "hadamard", "paley"], required=True)
    sweep.add_argument("--grid", type=int, nargs="*", help="q values (singer, paley) or n values (hadamard)")
    sweep.add_argument("--d", type=int, default=2)
    sweep.add_argument("--export", action="store_true", help="Write CSV/JSON under data/")
    sweep.add_argument(
        "--monitor-interval",
        type=int,
        default=config.MONITOR_INTERVAL,
        help="Resource monitoring interval in seconds (0 disables)",
    )
    return parser


def _check_required(parser: argparse.ArgumentParser, args):
    if getattr(args, "input_required", False) and not args.input:
        parser.error(f"{args.command} needs --in")
    if args.command == "construct":
        needed = {"paley": ["q"], "hadamard": ["n"], "singer": ["q", "d"]}[args.family]
        missing = [f"--{name}" for name in needed if getattr(args, name) is None]
        if missing:
            parser.error(f"construct {args.family} needs {' '.join(missing)}")


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Parses argv, runs one command, prints its JSON document; returns the exit code"""
    parser = get_argument_parser()
    try:
        args = parser.parse_args(argv)
        _check_required(parser, args)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logging(args.log_level)
    saved_cap = config.GROUP_ORDER_CAP
    if args.cap:
        config.GROUP_ORDER_CAP = args.cap

    try:
        document, code = COMMANDS[args.command](args)
    except (json.JSONDecodeError, OSError) as e:
        logger.error("❌ Cannot read input: %s", e)
        return EXIT_USAGE
    except InternalConsistencyError as e:
        logger.error("❌ Consistency check failed: %s", e)
        return EXIT_FAILED
    except (DiffsetError, KeyError, TypeError, ValueError) as e:
        logger.error("❌ %s", e)
        return EXIT_USAGE
    finally:
        config.GROUP_ORDER_CAP = saved_cap

    sys.stdout.write(dumps(document))
    if args.out:
        ResultExporter().export_json(document, Path(args.out))
    return code


def main():
    """Console entry point"""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
