"""Command-line front end: polar systems, moving parts, homaloidality
verdicts, descent certificates, and the small-arrangement census.

Exit codes: 0 success, 2 bad input (syntax or validation), 3 oracle
inconsistency or unusable prime, 4 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from itertools import combinations, product

from .arrangement import LinearFormProduct, canonical_row
from .errors import (InconsistencyError, ParseError, ReductionError,
                     ResourceBoundError)
from .parsing import parse_arrangement, parse_polynomial
from .polar import moving_part, polar_system
from .report import ReportDocument
from .verdict import full_verdict, structural_verdict
from .oracle import scan_exhaustive, scan_sampled

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3
EXIT_RESOURCE = 4


@dataclass
class RunConfig:
    subcommand: str
    text: str | None = None
    file: str | None = None
    primes: tuple = (101,)
    mode: str = "exhaustive"
    targets: int = 64
    seed: int = 0
    workers: int | None = None
    json_path: str | None = None
    ambient: int | None = None
    census_n: int | None = None
    census_r: int | None = None
    coefficients: tuple = (-1, 0, 1)

    @property
    def nvars(self):
        return None if self.ambient is None else self.ambient + 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="polarmap",
        description="polar maps of homogeneous polynomials: moving parts, "
                    "homaloidality verdicts, descent certificates")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_input(p):
        p.add_argument("expr", nargs="?", help="polynomial expression")
        p.add_argument("--file", help="read the expression from a file")
        p.add_argument("--ambient", type=int, metavar="N",
                       help="ambient projective dimension (default: inferred "
                            "from the highest variable index)")

    def add_scan(p):
        p.add_argument("-p", "--prime", type=int, action="append",
                       metavar="P", help="oracle prime, repeatable; two "
                       "primes add a stability check (default 101)")
        p.add_argument("--mode", choices=("exhaustive", "sample"),
                       default="exhaustive")
        p.add_argument("--targets", type=int, default=64,
                       help="sample size in sampled mode")
        p.add_argument("--seed", type=int, default=0,
                       help="RNG seed in sampled mode")
        p.add_argument("--workers", type=int, default=None,
                       help="scan worker processes (default 1 or "
                            "POLARMAP_WORKERS)")
        p.add_argument("--json", dest="json_path", metavar="PATH",
                       help="write the JSON report here; stdout then keeps "
                            "a one-line summary")

    p = sub.add_parser("polar", help="print the partial derivatives")
    add_input(p)
    p = sub.add_parser("moving", help="print base divisor and moving part")
    add_input(p)
    p = sub.add_parser("homaloidal",
                       help="decide homaloidality (any homogeneous input)")
    add_input(p)
    add_scan(p)
    p = sub.add_parser("certify",
                       help="full verdict with descent certificate "
                            "(product-of-linear-forms input)")
    add_input(p)
    add_scan(p)
    p = sub.add_parser("classify",
                       help="census of square-free arrangements over a "
                            "small coefficient set")
    p.add_argument("--n", type=int, required=True, dest="census_n",
                   help="ambient projective dimension")
    p.add_argument("--r", type=int, required=True, dest="census_r",
                   help="number of forms minus one")
    p.add_argument("--coefficients", default="-1,0,1",
                   help="comma-separated coefficient set")
    add_scan(p)
    return parser


def _config_from(args):
    cfg = RunConfig(subcommand=args.subcommand)
    if hasattr(args, "expr"):
        cfg.text = args.expr
        cfg.file = args.file
        cfg.ambient = args.ambient
    if hasattr(args, "prime"):
        cfg.primes = tuple(args.prime) if args.prime else (101,)
        cfg.mode = args.mode
        cfg.targets = args.targets
        cfg.seed = args.seed
        cfg.workers = args.workers
        cfg.json_path = args.json_path
    if hasattr(args, "census_n"):
        cfg.census_n = args.census_n
        cfg.census_r = args.census_r
        try:
            cfg.coefficients = tuple(sorted(
                int(c) for c in args.coefficients.split(",")))
        except ValueError:
            raise ValueError(f"bad coefficient set {args.coefficients!r}")
    return cfg


def _input_text(cfg):
    if cfg.text is not None and cfg.file is not None:
        raise ValueError("give an expression or --file, not both")
    if cfg.file is not None:
        with open(cfg.file, encoding="utf-8") as handle:
            return handle.read().strip()
    if cfg.text is not None:
        return cfg.text
    raise ValueError("no input: pass an expression or --file")


def _emit_report(report, cfg):
    text = report.to_json()
    if cfg.json_path:
        with open(cfg.json_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        print(f"homaloidal: {report.homaloidal} (degree {report.degree}, "
              f"p={report.p}); report written to {cfg.json_path}")
    else:
        print(text)


def cmd_polar(cfg):
    f = parse_polynomial(_input_text(cfg), nvars=cfg.nvars)
    system = polar_system(f)
    for i, comp in enumerate(system.components):
        print(f"component {i}: {comp}")
    return EXIT_OK


def cmd_moving(cfg):
    f = parse_polynomial(_input_text(cfg), nvars=cfg.nvars)
    if f.is_zero or not f.is_homogeneous() or f.homogeneous_degree() < 2:
        raise ValueError("moving part needs a homogeneous input of degree "
                         "at least 2 (the polar map of a linear form is "
                         "constant)")
    dec = moving_part(f)
    print(f"base divisor: {dec.base_divisor}")
    for i, comp in enumerate(dec.moving.components):
        print(f"component {i}: {comp}")
    return EXIT_OK


def _scan_stability(rational_map, cfg):
    """Scan at every configured prime; verdicts must not depend on the prime."""
    scans = []
    for p in cfg.primes:
        if cfg.mode == "exhaustive":
            scans.append(scan_exhaustive(rational_map, p,
                                         workers=cfg.workers))
        else:
            scans.append(scan_sampled(rational_map, p, targets=cfg.targets,
                                      seed=cfg.seed, workers=cfg.workers))
    first = scans[0]
    for p, scan in zip(cfg.primes[1:], scans[1:]):
        if (scan.degree, scan.dominant, scan.homaloidal) != \
                (first.degree, first.dominant, first.homaloidal):
            raise InconsistencyError(
                f"verdicts disagree between p={cfg.primes[0]} and p={p}")
    return first


def cmd_homaloidal(cfg):
    text = _input_text(cfg)
    try:
        arrangement = parse_arrangement(text, nvars=cfg.nvars)
    except (ParseError, ValueError):
        arrangement = None
    started = time.monotonic()
    if arrangement is not None:
        report = full_verdict(arrangement, primes=cfg.primes, mode=cfg.mode,
                              targets=cfg.targets, seed=cfg.seed,
                              workers=cfg.workers, input_text=text)
        _emit_report(report, cfg)
        return EXIT_OK
    f = parse_polynomial(text, nvars=cfg.nvars, require_homogeneous=True)
    if f.is_zero or f.homogeneous_degree() < 1:
        raise ValueError("input must be homogeneous of degree at least 1")
    dec = moving_part(f)
    scan = _scan_stability(dec.moving, cfg)
    report = ReportDocument(
        input=text, n=f.nvars - 1, field="Fp", p=cfg.primes[0],
        seed=cfg.seed if cfg.mode == "sample" else None, mode=cfg.mode,
        fiber_histogram=dict(scan.fiber_histogram),
        image_size=scan.image_size, dominant=scan.dominant,
        degree=scan.degree, homaloidal=scan.homaloidal, certificate=[],
        millis=int((time.monotonic() - started) * 1000))
    _emit_report(report, cfg)
    return EXIT_OK


def cmd_certify(cfg):
    text = _input_text(cfg)
    arrangement = parse_arrangement(text, nvars=cfg.nvars)
    report = full_verdict(arrangement, primes=cfg.primes, mode=cfg.mode,
                          targets=cfg.targets, seed=cfg.seed,
                          workers=cfg.workers, input_text=text)
    _emit_report(report, cfg)
    return EXIT_OK


def _census_rows(nvars, coefficients):
    """Distinct projective classes of nonzero vectors over the set."""
    rows = set()
    for vec in product(coefficients, repeat=nvars):
        if any(vec):
            rows.add(canonical_row(vec))
    return sorted(rows)


def cmd_classify(cfg):
    if cfg.census_n < 1 or cfg.census_n > 3:
        raise ValueError("census supports 1 <= n <= 3")
    if cfg.census_r < 0 or cfg.census_r > 5:
        raise ValueError("census supports 0 <= r <= 5")
    nvars = cfg.census_n + 1
    rows = _census_rows(nvars, cfg.coefficients)
    count = homaloidal_count = full_rank_count = 0
    for chosen in combinations(rows, cfg.census_r + 1):
        F = LinearFormProduct(chosen, nvars=nvars)
        structural = structural_verdict(F)
        dec = moving_part(F)
        for p in cfg.primes:
            if cfg.mode == "exhaustive":
                scan = scan_exhaustive(dec.moving, p, workers=cfg.workers)
            else:
                scan = scan_sampled(dec.moving, p, targets=cfg.targets,
                                    seed=cfg.seed, workers=cfg.workers)
            if scan.homaloidal != structural:
                raise InconsistencyError(
                    f"census disagreement at p={p} on {F}: structural "
                    f"{structural}, oracle {scan.homaloidal}")
        count += 1
        homaloidal_count += structural
        full_rank_count += F.rank() == nvars and F.r == F.n
    coeffs = ",".join(str(c) for c in cfg.coefficients)
    primes = ",".join(str(p) for p in cfg.primes)
    print(f"census n={cfg.census_n} r={cfg.census_r} "
          f"coefficients {{{coeffs}}} primes {{{primes}}}")
    print(f"arrangements: {count}")
    print(f"homaloidal: {homaloidal_count}")
    print(f"full-rank n+1-form sets (independent count): {full_rank_count}")
    print("disagreements: 0")
    if cfg.json_path:
        import json
        summary = {"n": cfg.census_n, "r": cfg.census_r,
                   "coefficients": list(cfg.coefficients),
                   "primes": list(cfg.primes), "arrangements": count,
                   "homaloidal": homaloidal_count,
                   "full_rank": full_rank_count, "disagreements": 0}
        with open(cfg.json_path, "w", encoding="utf-8") as handle:
            json.dump(summary, handle, indent=2, sort_keys=True)
            handle.write("\n")
    return EXIT_OK


_DISPATCH = {
    "polar": cmd_polar,
    "moving": cmd_moving,
    "homaloidal": cmd_homaloidal,
    "certify": cmd_certify,
    "classify": cmd_classify,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        return _DISPATCH[cfg.subcommand](cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InconsistencyError, ReductionError) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ResourceBoundError as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
