"""Command-line front end.

Subcommands::

    ppdcone eval           --func DESC --points START:STOP:COUNT
    ppdcone transform      --func DESC --xi START:STOP:COUNT [--dim D]
    ppdcone zeros          --func DESC [--region RE0,RE1,IM0,IM1]
    ppdcone check          --criterion NAME --func DESC [--tol T] [--seed S]
    ppdcone certify        --func DESC | hermite4 A B
    ppdcone counterexample [--theta THETA]

``DESC`` is an inline JSON descriptor; ``--file PATH`` reads it from disk.
Exit status is 0 on success, 1 when a check fails and 2 on usage errors;
errors are reported as a JSON object on standard error.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import criteria, extremal
from . import funcs as F
from .descriptors import DescriptorError, build
from .errors import PPDError
from .transform import fourier_radial

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x):
    return format(float(x), ".17g")


def _range(spec, name):
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"{name} must be START:STOP:COUNT, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"cannot parse {name} {spec!r}") from None
    if count < 1:
        raise UsageError(f"{name} count must be at least 1")
    return np.linspace(start, stop, count)


def _region(spec):
    try:
        vals = tuple(float(v) for v in spec.split(","))
    except ValueError:
        raise UsageError(f"cannot parse region {spec!r}") from None
    if len(vals) != 4:
        raise UsageError("region must be RE0,RE1,IM0,IM1")
    return vals


def _descriptor(args):
    if args.func is not None and args.file is not None:
        raise UsageError("give either --func or --file, not both")
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.func is not None:
        text = args.func
    else:
        raise UsageError("a function descriptor is required (--func or --file)")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor is not valid JSON: {exc}") from None


def _function(args):
    desc = _descriptor(args)
    dim = getattr(args, "dim", None)
    if dim is not None and isinstance(desc, dict) and "dim" not in desc:
        f = build(desc)
        if f.dim != dim:
            desc = dict(desc, dim=dim)
            return build(desc)
        return f
    f = build(desc)
    if dim is not None and f.dim != dim:
        raise UsageError(f"descriptor has dim={f.dim} but --dim {dim} was given")
    return f


def _write_table(out, header, xs, ys, as_json):
    if as_json:
        rows = [{header[0]: float(x), header[1]: float(y)} for x, y in zip(xs, ys)]
        out.write(json.dumps(rows) + "\n")
        return
    out.write(",".join(header) + "\n")
    for x, y in zip(xs, ys):
        out.write(f"{_fmt(x)},{_fmt(y)}\n")


def _dump(out, obj):
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_eval(args, out):
    f = _function(args)
    xs = _range(args.points, "--points")
    _write_table(out, ("x", "f"), xs, f.profile(np.abs(xs)), args.json)
    return EXIT_OK


def cmd_transform(args, out):
    f = _function(args)
    xi = _range(args.xi, "--xi")
    vals = np.atleast_1d(fourier_radial(f, xi))
    _write_table(out, ("xi", "fhat"), xi, vals, args.json)
    return EXIT_OK


def cmd_zeros(args, out):
    f = _function(args)
    report = extremal.find_zeros(f, _region(args.region), tol=args.tol)
    _dump(out, report.to_json())
    return EXIT_OK


_CHECKS = {
    "nonneg": lambda f, a: criteria.check_nonneg(f, tol=a.tol or 1e-12),
    "posdef": lambda f, a: criteria.check_posdef_fourier(f, tol=a.tol or 1e-10),
    "gram": lambda f, a: criteria.check_posdef_gram(f, tol=a.tol or 1e-10, seed=a.seed),
    "polya": lambda f, a: criteria.check_polya(f, tol=a.tol or 1e-9),
    "gneiting": lambda f, a: criteria.check_gneiting(f, tol=a.tol or 1e-9),
    "cm": lambda f, a: criteria.check_completely_monotone(f, tol=a.tol or 1e-6),
}


def cmd_check(args, out):
    f = _function(args)
    verdict = _CHECKS[args.criterion](f, args)
    _dump(out, verdict.to_json())
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_certify(args, out):
    if args.target:
        if args.target[0] != "hermite4" or len(args.target) != 3:
            raise UsageError("positional form is: certify hermite4 A B")
        try:
            a, b = float(args.target[1]), float(args.target[2])
        except ValueError:
            raise UsageError("hermite4 parameters must be numbers") from None
        if args.func is not None or args.file is not None:
            raise UsageError("give either a descriptor or the hermite4 form, not both")
        f = F.make_hermite_quartic(a, b)
    else:
        f = _function(args)
    if isinstance(f, F.Mixture) or getattr(f, "source", None) is not None:
        omega, nu = f.source if isinstance(f, F.PiecewisePoly) else (f.base, f.measure)
        cert = extremal.not_extremal_mixture(omega, nu)
    elif isinstance(f, F.GaussianTimesPoly):
        cert = extremal.certify_hermite(f, tol=args.tol or 1e-4)
    else:
        region = _region(args.region) if args.region else extremal.DEFAULT_REGION
        cert = extremal.certify_compact(f, region)
    _dump(out, cert.to_json())
    return EXIT_OK


def cmd_counterexample(args, out):
    r, x = extremal.solve_double_zero(args.theta)
    report = extremal.find_zeros(F.make_f_zeta(r, args.theta))
    _dump(out, {"r": r, "x_zeta": x, "theta": args.theta, "zero_report": report.to_json()})
    return EXIT_OK


def _add_func(p, dim=False):
    p.add_argument("--func", help="inline JSON function descriptor")
    p.add_argument("--file", help="path to a JSON descriptor file")
    if dim:
        p.add_argument("--dim", type=int, default=None,
                       help="dimension (injected when the descriptor has no 'dim')")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="ppdcone",
        description="Positive positive-definite radial functions: evaluation, "
                    "transforms, checks and extremality certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a profile on a grid (CSV x,f)")
    _add_func(p)
    p.add_argument("--points", required=True, help="START:STOP:COUNT")
    p.add_argument("--json", action="store_true", help="JSON rows instead of CSV")
    p.add_argument("--csv", dest="json", action="store_false", help="CSV output (default)")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("transform", help="radial Fourier transform on a grid (CSV xi,fhat)")
    _add_func(p, dim=True)
    p.add_argument("--xi", required=True, help="START:STOP:COUNT")
    p.add_argument("--json", action="store_true", help="JSON rows instead of CSV")
    p.add_argument("--csv", dest="json", action="store_false", help="CSV output (default)")
    p.set_defaults(handler=cmd_transform)

    p = sub.add_parser("zeros", help="zeros of the transform extension in a rectangle")
    _add_func(p)
    p.add_argument("--region", default="-10,10,-5,5", help="RE0,RE1,IM0,IM1 (default -10,10,-5,5)")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="Newton residual relative to |F(0)| (default 1e-10)")
    p.set_defaults(handler=cmd_zeros)

    p = sub.add_parser("check", help="run a numerical criterion; exit 1 on failure")
    _add_func(p)
    p.add_argument("--criterion", required=True, choices=sorted(_CHECKS))
    p.add_argument("--tol", type=float, default=None,
                   help="tolerance (defaults: nonneg 1e-12, posdef/gram 1e-10, "
                        "polya/gneiting 1e-9, cm 1e-6)")
    p.add_argument("--seed", type=int, default=0, help="seed for the gram sampler (default 0)")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("certify", help="extremality certificate")
    _add_func(p)
    p.add_argument("target", nargs="*", help="alternative form: hermite4 A B")
    p.add_argument("--region", default=None, help="search rectangle for compact functions")
    p.add_argument("--tol", type=float, default=None,
                   help="root imaginary-part tolerance for Hermite functions (default 1e-4)")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("counterexample", help="double-zero construction with planted complex zeros")
    p.add_argument("--theta", type=float, default=math.pi / 4, help="angle in (0, pi/2)")
    p.set_defaults(handler=cmd_counterexample)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, out)
    except (UsageError, DescriptorError, OSError) as exc:
        err.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except PPDError as exc:
        err.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
