"""Command-line front end.

Exit codes: 0 success, 1 a containment or membership check failed, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import nullcontext

import numpy as np

from . import experiments
from .horn import generate_T, table_to_json, verify_domino_theorem
from .polytope import (
    PartitionPair,
    build_P,
    build_P1,
    compare_partitions,
    default_tolerances,
    is_hermitian_spectrum,
    membership_slack,
    project_to_delta,
)
from .sampling import SAMPLERS

logger = logging.getLogger("hornpoly")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

SAMPLE_COMMANDS = {
    "sample-imf": "imf",
    "sample-proj": "projection",
    "sample-adapted": "adapted",
}


def parse_spectrum(text):
    """Parse ``"13,8,5"`` into a descending float array.

    Unsorted input is sorted with a warning; empty or non-numeric input
    raises ``ValueError``.
    """
    tokens = [t.strip() for t in str(text).split(",")]
    if not text or not any(tokens):
        raise ValueError("empty spectrum")
    try:
        values = np.array([float(t) for t in tokens])
    except ValueError:
        bad = next(t for t in tokens if not _is_float(t))
        raise ValueError(f"non-numeric entry {bad!r} in spectrum") from None
    if not np.all(np.isfinite(values)):
        raise ValueError("spectrum entries must be finite")
    if np.any(np.diff(values) > 0):
        logger.warning("spectrum %s was not descending; sorting it", text)
        values = np.sort(values)[::-1]
    return values


def _is_float(t):
    try:
        float(t)
    except ValueError:
        return False
    return True


def _spectrum_arg(text):
    try:
        return parse_spectrum(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _index_list(text):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from None


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def load_config(path):
    """Read ``key = value`` lines; ``#`` starts a comment."""
    conf = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            conf[key.lstrip("-").replace("-", "_")] = value
    return conf


def _add_spectrum_opts(sp):
    sp.add_argument("--spectrum", type=_spectrum_arg,
                    help="comma-separated spectrum of S0 (diagonal S0)")
    sp.add_argument("--scale", type=float, default=1.0,
                    help="multiply the spectrum by this factor")
    sp.add_argument("--p", type=_positive_int, help="expected half-length of the spectrum")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hornpoly",
        description="Horn inequalities, frequency-map polytopes and Monte Carlo checks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines; flags override it")

    sp = sub.add_parser("gen-triples", parents=[common], help="write the table T^p as JSON")
    sp.add_argument("--p", type=_positive_int)
    sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("check", parents=[common],
                        help="test a point against P1 (length p) or P and P2 (length 2p)")
    _add_spectrum_opts(sp)
    sp.add_argument("--point", type=_spectrum_arg, help="comma-separated point")
    sp.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")
    sp.add_argument("--epsilon", type=float, help="hermitian closeness threshold")

    for name, kind in SAMPLE_COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=f"Monte Carlo run '{kind}'")
        _add_spectrum_opts(sp)
        sp.add_argument("--matrix", help="file holding S0 as whitespace-separated rows")
        sp.add_argument("--n", type=_positive_int, default=25000, help="number of samples")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--epsilon", type=float, help="hermitian closeness threshold")
        sp.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")
        sp.add_argument("--sampler", choices=SAMPLERS, default="paper")
        sp.add_argument("--threads", type=_positive_int, default=1)
        sp.add_argument("--out", help="CSV of sample records")
        sp.add_argument("--report", help="JSON run report")

    sp = sub.add_parser("verify-domino", parents=[common],
                        help="check that doubling maps T^p_r into T^2p_2r")
    sp.add_argument("--p", type=_positive_int)
    sp.add_argument("--report", help="JSON report")

    sp = sub.add_parser("compare-partitions", parents=[common],
                        help="sample a custom split of the spectrum against interlaced P1")
    _add_spectrum_opts(sp)
    sp.add_argument("--split", type=_index_list,
                    help="1-based positions of the spectrum forming the first summand")
    sp.add_argument("--n", type=_positive_int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--sampler", choices=SAMPLERS, default="paper")
    sp.add_argument("--report", help="JSON report")
    return parser, sub.choices


def _parse(argv):
    parser, subparsers = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sp = subparsers[args.command]
        try:
            conf = load_config(args.config)
        except (OSError, ValueError) as exc:
            sp.error(str(exc))
        known = {a.dest for a in sp._actions} - {"help", "config"}
        unknown = sorted(set(conf) - known)
        if unknown:
            sp.error(f"unknown config keys: {', '.join(unknown)}")
        sp.set_defaults(**conf)
        args = parser.parse_args(argv)
    return parser, subparsers[args.command], args


def _sigma(sp, args, required=True):
    if getattr(args, "spectrum", None) is None:
        if required:
            sp.error("--spectrum is required")
        return None
    sigma = args.spectrum * args.scale
    if args.scale < 0:
        sigma = sigma[::-1]
    if args.p is not None and len(sigma) != 2 * args.p:
        sp.error(f"--spectrum has {len(sigma)} entries but --p {args.p} needs {2 * args.p}")
    if len(sigma) % 2:
        sp.error("--spectrum must have an even number of entries")
    return sigma


def _open_out(path):
    return open(path, "w", newline="") if path else nullcontext(None)


def _write_json(path, data):
    if path:
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")


def cmd_gen_triples(sp, args):
    if args.p is None:
        sp.error("--p is required")
    data = table_to_json(generate_T(args.p))
    text = json.dumps(data, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    counts = ", ".join(f"r={b['r']}: {len(b['triples'])}" for b in data["ranks"])
    print(f"T^{args.p}: {counts}", file=sys.stderr)
    return EXIT_OK


def cmd_check(sp, args):
    sigma = _sigma(sp, args)
    if args.point is None:
        sp.error("--point is required")
    point, p = args.point, len(sigma) // 2
    if len(point) == p:
        spec = build_P1(sigma)
        res, slack = membership_slack(spec, point)
        tol_t, tol_i = default_tolerances(spec, args.tol)
        inside = abs(res) <= tol_t and slack >= -tol_i
        print(f"P1: trace_residual={res:.6g} min_slack={slack:.6g} inside={inside}")
        return EXIT_OK if inside else EXIT_VIOLATION
    if len(point) == 2 * p:
        spec = build_P(sigma)
        res, slack = membership_slack(spec, point)
        tol_t, tol_i = default_tolerances(spec, args.tol)
        in_P = abs(res) <= tol_t and slack >= -tol_i
        eps = args.epsilon if args.epsilon is not None else 1e-3 * np.abs(sigma).sum()
        herm = bool(is_hermitian_spectrum(point, eps))
        spec1 = build_P1(sigma)
        res1, slack1 = membership_slack(spec1, project_to_delta(point))
        t1, i1 = default_tolerances(spec1, args.tol)
        proj_in = abs(res1) <= t1 and slack1 >= -i1
        print(f"P: trace_residual={res:.6g} min_slack={slack:.6g} inside={in_P}")
        print(f"hermitian={herm} P2={in_P and herm}")
        print(f"projection in P1: trace_residual={res1:.6g} min_slack={slack1:.6g} "
              f"inside={proj_in}")
        return EXIT_OK if (in_P and proj_in) else EXIT_VIOLATION
    sp.error(f"--point must have {p} or {2 * p} entries, got {len(point)}")


def cmd_sample(sp, args):
    kind = SAMPLE_COMMANDS[args.command]
    S0 = None
    if args.matrix:
        try:
            S0 = np.loadtxt(args.matrix, ndmin=2)
        except (OSError, ValueError) as exc:
            sp.error(f"cannot read --matrix: {exc}")
        sigma = None
    else:
        sigma = _sigma(sp, args)
    try:
        cfg = experiments.ExperimentConfig(
            sigma=sigma if sigma is not None else np.zeros(0), S0=S0, samples=args.n,
            seed=args.seed, epsilon=args.epsilon, sampler=args.sampler, rel_tol=args.tol)
    except ValueError as exc:
        sp.error(str(exc))
    with _open_out(args.out) as fh:
        report = experiments.run_experiment(kind, cfg, fh, threads=args.threads)
    _write_json(args.report, report.to_json())
    print(f"{kind}: {report.count_inside}/{report.samples} inside P1, "
          f"worst trace residual {report.worst_trace_residual:.3e}, "
          f"worst min slack {report.worst_min_slack:.3e}")
    return EXIT_OK if report.all_inside else EXIT_VIOLATION


def cmd_verify_domino(sp, args):
    if args.p is None:
        sp.error("--p is required")
    rep = verify_domino_theorem(args.p)
    print(rep.summary())
    for t, d in rep.failures:
        print(f"  counterexample: {t.as_lists()} -> {d.as_lists()}")
    _write_json(args.report, {"p": rep.p, "checked": rep.checked,
                              "failures": [[t.as_lists(), d.as_lists()]
                                           for t, d in rep.failures]})
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_compare_partitions(sp, args):
    sigma = _sigma(sp, args)
    if args.split is None:
        sp.error("--split is required")
    try:
        custom = PartitionPair.from_indices(sigma, args.split)
    except ValueError as exc:
        sp.error(str(exc))
    rep = compare_partitions(sigma, custom, args.n, rng=args.seed,
                             sampler=args.sampler, rel_tol=args.tol)
    print(f"fraction inside interlaced P1: {rep.fraction:.6f} "
          f"({rep.inside}/{rep.samples}), max violation {rep.max_violation:.3e}")
    _write_json(args.report, {"samples": rep.samples, "inside": rep.inside,
                              "fraction": rep.fraction, "max_violation": rep.max_violation})
    return EXIT_OK if rep.inside == rep.samples else EXIT_VIOLATION


COMMANDS = {
    "gen-triples": cmd_gen_triples,
    "check": cmd_check,
    "sample-imf": cmd_sample,
    "sample-proj": cmd_sample,
    "sample-adapted": cmd_sample,
    "verify-domino": cmd_verify_domino,
    "compare-partitions": cmd_compare_partitions,
}


def main(argv=None):
    try:
        parser, sp, args = _parse(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s", stream=sys.stderr)
        return COMMANDS[args.command](sp, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
