"""Command-line front end.

Exit codes: 0 success, 1 a checked statistic or identity failed, 2 usage
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import shlex
import sys
from pathlib import Path

import numpy as np

from . import ague, experiments, fredholm, kernels
from .errors import DomainError, NumericError, ResourceError
from .networks import SortingNetwork, is_sorting_network, sample_network, wiring_svg
from .tableaux import Shape, make_staircase, make_staircase_minus, sample_syt

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "count": 1,
    "seed": 0,
    "samples": 20000,
    "jobs": 1,
    "k": 1,
    "tmax": 3.0,
    "step": 0.05,
    "grid": 10,
    "umax": 3.0,
    "which": "g",
    "family": "limiting",
    "L": 6,
    "xmax": 3.0,
    "i_max": 200,
    "trunc": 50,
}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="JSON file with default flag values (flags win)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsnlab", description="Random sorting network edge-limit laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="draw networks, tableaux or aGUE spectra")
    sp.add_argument("what", choices=["network", "syt", "ague"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--shape", help="staircase:N, staircase-minus:N,K or rows:a,b,c")
    sp.add_argument("--dim", type=int)
    sp.add_argument("--count", type=int)
    sp.add_argument("--seed", type=int)
    _common(sp)

    an = sub.add_parser("analyze", help="kernel grids, survival tables and densities")
    an.add_argument("what", choices=["fredholm", "kernel", "density"])
    an.add_argument("--k", type=int)
    an.add_argument("--tmax", type=float)
    an.add_argument("--xmax", type=float)
    an.add_argument("--step", type=float)
    an.add_argument("--family", choices=["K_k", "limiting", "conditioned", "finite_n", "corners"])
    an.add_argument("--grid", type=int)
    an.add_argument("--umax", type=float)
    an.add_argument("--which", choices=["g", "ghat"])
    an.add_argument("--n", type=int)
    an.add_argument("--x1", type=int)
    an.add_argument("--x2", type=int)
    an.add_argument("--i-max", dest="i_max", type=int)
    an.add_argument("--trunc", type=int)
    _common(an)

    ex = sub.add_parser("experiment", help="Monte-Carlo campaigns and exact suites")
    ex.add_argument("what", choices=["exact", "first-swap", "first-swap-trend", "spacing", "conditional-spacing", "corners"])
    ex.add_argument("--n", type=int)
    ex.add_argument("--k", type=int)
    ex.add_argument("--samples", type=int)
    ex.add_argument("--seed", type=int)
    ex.add_argument("--jobs", type=int)
    ex.add_argument("--tolerance", type=float)
    ex.add_argument("--L", type=int)
    ex.add_argument("--write-samples", action="store_true")
    _common(ex)

    wi = sub.add_parser("wiring", help="draw a wiring diagram as SVG")
    wi.add_argument("--network", required=True, help="comma-separated swaps")
    wi.add_argument("--n", type=int, required=True)
    _common(wi)
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
    for key, val in cfg.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, val)
    for key, val in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)
    return args


def _outdir(args, name: str) -> Path:
    out = Path(args.out) if args.out else Path("rsnlab-out") / name
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, argv, payload: dict):
    man = {"argv": list(argv), **payload}
    (out / "manifest.json").write_text(json.dumps(man, indent=2, sort_keys=True) + "\n")
    (out / "repro.sh").write_text("#!/bin/sh\nexec rsnlab " + shlex.join(argv) + "\n")


def _parse_shape(text: str) -> Shape:
    try:
        kind, _, rest = text.partition(":")
        nums = [int(v) for v in rest.split(",") if v]
        if kind == "staircase" and len(nums) == 1:
            return make_staircase(nums[0])
        if kind == "staircase-minus" and len(nums) == 2:
            return make_staircase_minus(*nums)
        if kind == "rows":
            return Shape(tuple(nums))
    except ValueError as exc:
        raise UsageError(f"bad shape {text!r}: {exc}") from exc
    raise UsageError(f"bad shape {text!r}")


def cmd_sample(args, argv) -> int:
    out = _outdir(args, f"sample-{args.what}")
    _write_manifest(out, argv, {"command": "sample", "what": args.what, "seed": args.seed, "count": args.count})
    rng = np.random.default_rng(args.seed)
    if args.what == "network":
        if args.n is None:
            raise UsageError("--n is required")
        nets = [sample_network(args.n, rng) for _ in range(args.count)]
        (out / "networks.json").write_text(json.dumps([json.loads(x.to_json()) for x in nets]) + "\n")
        for x in nets:
            print(",".join(map(str, x.swaps)))
    elif args.what == "syt":
        if args.shape is None:
            raise UsageError("--shape is required")
        shape = _parse_shape(args.shape)
        tabs = [sample_syt(shape, rng) for _ in range(args.count)]
        (out / "tableaux.json").write_text(json.dumps([json.loads(t.to_json()) for t in tabs]) + "\n")
        for t in tabs:
            print(json.dumps([list(r) for r in t.rows]))
    else:
        if args.dim is None:
            raise UsageError("--dim is required")
        spectra = ague.positive_spectrum(ague.sample_antisym_batch(args.dim, args.count, rng))
        with open(out / "spectra.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sample_id", "level", "rank", "value"])
            for s, row in enumerate(spectra):
                for r, v in enumerate(row, start=1):
                    w.writerow([s, args.dim, r, repr(float(v))])
        for row in spectra:
            print(" ".join(f"{v:.12g}" for v in row))
    return EXIT_OK


def _frange(lo, hi, step):
    count = int(round((hi - lo) / step)) + 1
    return [lo + i * step for i in range(count)]


def cmd_analyze(args, argv) -> int:
    out = _outdir(args, f"analyze-{args.what}")
    _write_manifest(out, argv, {"command": "analyze", "what": args.what, "k": args.k})
    if args.what == "fredholm":
        text = fredholm.table_csv(args.k, _frange(0.0, args.tmax, args.step))
        (out / "fredholm.csv").write_text(text)
        sys.stdout.write(text)
    elif args.what == "density":
        dens = fredholm.density_g if args.which == "g" else fredholm.density_ghat
        xs = _frange(args.step, args.xmax, args.step)
        lines = ["x," + args.which] + [f"{x!r},{dens(args.k, x)!r}" for x in xs]
        text = "\n".join(lines) + "\n"
        (out / f"density_{args.which}.csv").write_text(text)
        sys.stdout.write(text)
    else:
        us = np.linspace(0.0, args.umax, args.grid)
        k = args.k
        rows = []
        if args.family == "limiting":
            for a in us:
                for b in us:
                    s = kernels.limiting_kernel_series(k, float(a), float(b), args.i_max)
                    h = kernels.limiting_kernel_hermite(k, float(a), float(b))
                    rows.append((a, b, s, h))
            header = ["u1", "u2", "series", "hermite"]
        else:
            x1 = args.x1 if args.x1 is not None else 2 * k
            x2 = args.x2 if args.x2 is not None else x1
            shape = make_staircase(args.n) if args.family == "finite_n" and args.n else None
            if args.family == "finite_n" and shape is None:
                raise UsageError("--n is required for the finite_n family")
            fam = kernels.KernelFamily(args.family, k=k, shape=shape, i_max=args.i_max, trunc=args.trunc)
            (out / "kernel.json").write_text(fam.metadata() + "\n")
            for a in us:
                for b in us:
                    rows.append((a, b, fam(x1, float(a), x2, float(b))))
            header = ["u1", "u2", "value"]
        with open(out / "kernel.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow([repr(float(v)) for v in r])
        print(",".join(header))
        for r in rows:
            print(",".join(f"{float(v):.15g}" for v in r))
    return EXIT_OK


def cmd_experiment(args, argv) -> int:
    what = args.what
    out = _outdir(args, f"experiment-{what}")
    _write_manifest(out, argv, {"command": "experiment", "what": what, "status": "running"})
    if what == "exact":
        if args.n is None:
            raise UsageError("--n is required")
        res = experiments.exact_suite(args.n)
    elif what == "first-swap":
        res = experiments.mc_first_swap(args.n or 200, args.k, args.samples, args.seed, args.tolerance, args.jobs)
    elif what == "first-swap-trend":
        res = experiments.mc_first_swap_trend(k=args.k, samples=args.samples, jobs=args.jobs)
    elif what == "spacing":
        tol = experiments.TOL_SPACING_TV if args.tolerance is None else args.tolerance
        res = experiments.mc_spacing(args.n or 200, args.k, args.samples, args.seed, tol, args.jobs)
    elif what == "conditional-spacing":
        tol = experiments.TOL_SPACING_TV if args.tolerance is None else args.tolerance
        res = experiments.mc_conditional_spacing(args.n or 200, args.k, args.samples, args.seed, tol, jobs=args.jobs)
    else:
        tol = experiments.TOL_CORNERS_KS if args.tolerance is None else args.tolerance
        res = experiments.mc_corners_vs_tableaux(args.n or 300, args.L, args.samples, args.seed, tol, args.jobs)
    res.write(out, with_samples=args.write_samples)
    _write_manifest(out, argv, {"command": "experiment", "what": what, "status": "done", **res.manifest.as_dict()})
    print(json.dumps({"passed": res.passed, **res.summary}, indent=2, sort_keys=True, default=float))
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_wiring(args, argv) -> int:
    try:
        swaps = tuple(int(v) for v in args.network.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --network: {exc}") from exc
    if not is_sorting_network(args.n, swaps):
        raise UsageError(f"not a sorting network of {args.n} wires: {args.network}")
    net = SortingNetwork(args.n, swaps)
    svg = wiring_svg(net)
    if args.out and args.out.endswith(".svg"):
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.with_suffix(".manifest.json").write_text(json.dumps({"argv": list(argv), "n": args.n, "swaps": list(swaps)}) + "\n")
    else:
        out = _outdir(args, "wiring")
        _write_manifest(out, argv, {"command": "wiring", "n": args.n, "swaps": list(swaps)})
        path = out / "wiring.svg"
    path.write_text(svg)
    print(path)
    return EXIT_OK


COMMANDS = {"sample": cmd_sample, "analyze": cmd_analyze, "experiment": cmd_experiment, "wiring": cmd_wiring}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args, argv)
    except (UsageError, DomainError, ResourceError) as exc:
        print(f"rsnlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"rsnlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception as exc:  # invariant violations surface as assertion failures
        if isinstance(exc, AssertionError):
            print(f"rsnlab: check failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
        raise


if __name__ == "__main__":
    sys.exit(main())
