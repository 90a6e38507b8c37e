"""Command-line interface: ``hornlab <subcommand> [options]``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors
(including invalid instances).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .densities import marginal_support, pdf_on_grid
from .exceptions import HornError
from .harness import run_verify
from .instance import HornCase, HornInstance
from .rng import RngStream
from .sampling import sample_instance

SEED_ENV = "HORNLAB_SEED"


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers: {text!r}")


def _complexes(text):
    try:
        return [complex(v.strip().replace(" ", "")) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers: {text!r}")


def _fmt(x):
    return repr(float(x))


def _instance_args(p, needs_b=True):
    p.add_argument("--case", required=True, choices=[c.value for c in HornCase])
    p.add_argument("--a", required=True, type=_floats, help="comma-separated spectrum, decreasing")
    p.add_argument("--b", required=needs_b, type=float, help="rank-1 strength")
    p.add_argument("--n", type=int, help="dimension (inferred from --a)")


def _seed_args(p):
    p.add_argument("--seed", type=int, help=f"64-bit seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--stream", type=int, default=0, help="stream id")


def _output_args(p, default_format="csv"):
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=default_format)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hornlab",
        description="Sample, evaluate and verify rank-1 randomised Horn problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw spectra from a rank-1 model")
    _instance_args(p)
    p.add_argument("--n-samples", type=int, default=1000)
    _seed_args(p)
    _output_args(p)

    p = sub.add_parser("pdf", help="evaluate the closed-form density on a grid")
    _instance_args(p)
    p.add_argument("--grid", type=int, default=64, help="grid points per free coordinate")
    _output_args(p)

    p = sub.add_parser("spherical", help="evaluate a spherical function")
    p.add_argument("--case", required=True, choices=[c.value for c in HornCase])
    p.add_argument("--x", type=_complexes, help="argument eigenvalues (log or phases)")
    p.add_argument("--b", type=float, help="rank-1 argument instead of --x")
    p.add_argument("--s", required=True, type=_complexes, help="index vector")
    _output_args(p, "json")

    p = sub.add_parser("verify", help="Monte Carlo verification (JSON report)")
    _instance_args(p)
    p.add_argument("--n-samples", type=int, default=200_000)
    p.add_argument("--bins", type=int, default=50)
    _seed_args(p)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("invert", help="regularised inversion of the spherical transform")
    _instance_args(p)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--smax", type=int, help="lattice cutoff S for the unitary series")
    p.add_argument("--grid", type=int, default=20)
    _output_args(p)

    p = sub.add_parser("selftest", help="quick invariant suite")
    _seed_args(p)
    return parser


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        seed = args.seed
    else:
        env = os.environ.get(SEED_ENV)
        if env is None or env.strip() == "":
            seed = 0
        else:
            try:
                seed = int(env.strip(), 0)
            except ValueError:
                raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}")
    try:
        return RngStream(seed, getattr(args, "stream", 0) or 0)
    except ValueError as exc:
        raise UsageError(str(exc))


def _instance(args):
    if args.n is not None and args.n != len(args.a):
        raise UsageError(f"--n {args.n} does not match the length of --a ({len(args.a)})")
    return HornInstance(args.case, args.a, args.b)


def _write(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _table(args, header, rows):
    if args.format == "json":
        records = [dict(zip(header, (float(v) for v in r))) for r in rows]
        return json.dumps(records, indent=2) + "\n"
    return _csv(header, rows)


def cmd_sample(args):
    inst = _instance(args)
    if args.n_samples < 1:
        raise UsageError("--n-samples must be positive")
    C = sample_instance(inst, _resolve_seed(args), size=args.n_samples)
    header = [f"c{j + 1}" for j in range(inst.n)]
    _write(args, _table(args, header, C))
    return 0


def _midpoints(lo, hi, g):
    return lo + (np.arange(g) + 0.5) * (hi - lo) / g


def cmd_pdf(args):
    inst = _instance(args)
    g = args.grid
    if g < 1:
        raise UsageError("--grid must be positive")
    if inst.n == 2:
        t = _midpoints(*marginal_support(1, inst), g)
        rows = np.column_stack([t, pdf_on_grid(t[:, None], inst)])
        header = ["c1", "density"]
    elif inst.n == 3:
        t1 = _midpoints(*marginal_support(1, inst), g)
        t2 = _midpoints(*marginal_support(2, inst), g)
        T1, T2 = np.meshgrid(t1, t2, indexing="ij")
        F = np.column_stack([T1.ravel(), T2.ravel()])
        rows = np.column_stack([F, pdf_on_grid(F, inst)])
        header = ["c1", "c2", "density"]
    else:
        raise UsageError("pdf grids are available for n = 2 and 3")
    _write(args, _table(args, header, rows))
    return 0


def cmd_spherical(args):
    from . import spherical as sph

    case = HornCase.parse(args.case)
    s = np.array(args.s)
    if (args.x is None) == (args.b is None):
        raise UsageError("give exactly one of --x and --b")
    if args.b is not None:
        fn = {HornCase.ADDITIVE: sph.hciz_rank1, HornCase.POSITIVE: sph.gn_rank1,
              HornCase.UNITARY: sph.char_rank1}[case]
        val = fn(args.b, s if case is not HornCase.UNITARY else s.real)
    else:
        x = np.array(args.x)
        if case is HornCase.ADDITIVE:
            val = sph.hciz(x, s)
        elif case is HornCase.POSITIVE:
            val = sph.gn_spherical(x.real, s)
        else:
            val = sph.char_spherical(x.real, s.real)
    if args.format == "json":
        text = json.dumps({"real": float(val.real), "imag": float(val.imag)}) + "\n"
    else:
        text = _csv(["real", "imag"], [[val.real, val.imag]])
    _write(args, text)
    return 0


def cmd_verify(args):
    inst = _instance(args)
    report = run_verify(inst, args.n_samples, _resolve_seed(args), bins=args.bins)
    _write(args, report.to_json() + "\n")
    return 0 if report.passed else 1


def cmd_invert(args):
    from . import transforms as tr

    inst = _instance(args)
    if inst.n != 2:
        raise UsageError("invert supports n = 2")
    if args.grid < 1:
        raise UsageError("--grid must be positive")
    if args.eps <= 0:
        raise UsageError("--eps must be positive")
    t = _midpoints(*marginal_support(1, inst), args.grid)
    if inst.case is HornCase.UNITARY:
        trunc = tr.TruncationSpec(S=args.smax)
        rec = tr.inverse_unitary_series(inst, t[:, None], args.eps, trunc)
    else:
        rec = np.array([tr.quadrature_marginal(inst, ti, args.eps) for ti in t])
    exact = pdf_on_grid(t[:, None], inst)
    _write(args, _table(args, ["c1", "reconstruction", "density"], np.column_stack([t, rec, exact])))
    return 0


def cmd_selftest(args):
    from .selftest import run_selftest

    ok = run_selftest(_resolve_seed(args), out=sys.stdout)
    return 0 if ok else 1


COMMANDS = {
    "sample": cmd_sample,
    "pdf": cmd_pdf,
    "spherical": cmd_spherical,
    "verify": cmd_verify,
    "invert": cmd_invert,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return COMMANDS[args.command](args)
    except (UsageError, HornError, ValueError) as exc:
        print(f"hornlab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
