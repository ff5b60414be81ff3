"""Command line: region, extremal, bound, check, verify.

Exit codes: 0 success, 1 negative query result (point outside, trial
failures), 2 usage or domain error, 3 numerical failure.
"""
import argparse
import io
import json
import sys

import numpy as np

from . import __version__
from .errors import CapabilityError, ConsistencyError, DomainError, SolverError
from .extremal import GUARD, build_extremal
from .oracle import claim_checks, run_trials
from .poisson import classical_schwarz_bound, functional_L
from .region import build_region, rotated_contains
from .zonal import PANEL_ORDER, cap_measure

EXIT_OK, EXIT_OUTSIDE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _require(cond, msg):
    if not cond:
        raise UsageError(msg)


def _common(args):
    _require(args.n >= 2, "--n must be >= 2")
    _require(0.0 < args.r < 1.0, "--r must lie in (0, 1)")


def region_document(region, quad_order):
    c = region.curve
    verts = region.polygon.vertices
    return {
        "metadata": {"n": c.n, "r": c.r, "rho": c.rho, "alpha": c.alpha,
                     "m_beta": int(c.betas.size - 1), "quad_order": int(quad_order),
                     "version": __version__},
        "beta": c.betas.tolist(),
        "h": c.h.tolist(),
        "curve_re": c.f.real.tolist(),
        "curve_im": c.f.imag.tolist(),
        "polygon": [[float(z.real), float(z.imag)] for z in verts],
    }


def dump_json(doc):
    # Python's float repr is the shortest string that round-trips exactly
    return json.dumps(doc, indent=1) + "\n"


def region_csv(region):
    c = region.curve
    buf = io.StringIO()
    buf.write("beta,h,re,im\n")
    for b, h, z in zip(c.betas, c.h, c.f):
        buf.write(f"{float(b)!r},{float(h)!r},{float(z.real)!r},{float(z.imag)!r}\n")
    return buf.getvalue()


def region_svg(region):
    """1000 x 1000 drawing of the closed unit disk with the boundary curve."""
    def xy(z):
        return f"{500.0 + 500.0 * z.real:.3f},{500.0 - 500.0 * z.imag:.3f}"

    f = region.curve.f[:-1]
    path = "M " + " L ".join(xy(z) for z in f) + " Z"
    rho = region.curve.rho * np.exp(1j * region.curve.alpha)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" '
        'viewBox="0 0 1000 1000">\n'
        '<circle cx="500" cy="500" r="500" fill="none" stroke="#999" stroke-width="1"/>\n'
        '<line x1="0" y1="500" x2="1000" y2="500" stroke="#ddd" stroke-width="1"/>\n'
        '<line x1="500" y1="0" x2="500" y2="1000" stroke="#ddd" stroke-width="1"/>\n'
        f'<path d="{path}" fill="#4a7ab533" stroke="#1f4e8c" stroke-width="2"/>\n'
        f'<circle cx="{500.0 + 500.0 * rho.real:.3f}" cy="{500.0 - 500.0 * rho.imag:.3f}" '
        'r="4" fill="#c33"/>\n'
        "</svg>\n"
    )


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def cmd_region(args):
    _common(args)
    _require(0.0 <= args.rho < 1.0, "--rho must lie in [0, 1)")
    _require(args.beta_samples >= 16 and args.beta_samples % 2 == 0,
             "--beta-samples must be even and >= 16")
    _require(args.quad_order >= 2, "--quad-order must be >= 2")
    region = build_region(args.n, args.r, args.rho, args.beta_samples, args.quad_order)
    if args.alpha:
        region = region.rotated(args.alpha)
    if args.format == "json":
        text = dump_json(region_document(region, args.quad_order))
    elif args.format == "csv":
        text = region_csv(region)
    else:
        text = region_svg(region)
    _write(text, args.out)
    return EXIT_OK


def cmd_extremal(args):
    _common(args)
    _require(args.a * args.a + args.b * args.b <= GUARD,
             f"need a^2 + b^2 <= {GUARD}")
    _require(args.samples >= 2, "--samples must be >= 2")
    p = build_extremal(args.n, args.r, args.a, args.b)
    ma, mb = p.moments()
    lines = [f"# n={p.n} r={p.r!r} a={p.a!r} b={p.b!r} kind={p.kind}"]
    if p.kind == "cap":
        res = cap_measure(p.n, p.cap.t_a) - 0.5 * (1.0 + p.a)
        lines.append(f"# t_a={p.cap.t_a!r} cap_residual={res!r}")
    else:
        lines.append(f"# lambda={p.params.lam!r} mu={p.params.mu!r}")
        lines.append(f"# residual_R={p.params.residual[0]!r} residual_I={p.params.residual[1]!r}")
    lines.append(f"# L={functional_L(p, p.n, p.r)!r} moment_a={ma!r} moment_b={mb!r}")
    lines.append("t,u,v")
    t = np.linspace(-1.0, 1.0, args.samples)
    u = p.u(t)
    v = p.sign_b * p.v(t) if p.kind == "smooth" else np.zeros_like(t)
    for ti, ui, vi in zip(t, u, v):
        lines.append(f"{float(ti)!r},{float(ui)!r},{float(vi)!r}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_bound(args):
    _common(args)
    print(f"{classical_schwarz_bound(args.n, args.r):.6f}")
    return EXIT_OK


def cmd_check(args):
    _common(args)
    f0 = complex(args.f0_re, args.f0_im)
    _require(abs(f0) < 1.0, "need |F(0)| < 1")
    _require(args.tol >= 0, "--tol must be >= 0")
    res = rotated_contains(args.n, args.r, f0, complex(args.w_re, args.w_im), args.tol,
                           args.beta_samples)
    print(f"{res.status} {res.margin:.6e}")
    return EXIT_OUTSIDE if res.status == "outside" else EXIT_OK


def cmd_verify(args):
    _common(args)
    _require(args.n in (2, 3), "verification trials need n in {2, 3}")
    _require(args.trials >= 1, "--trials must be >= 1")
    _require(args.points >= 1, "--points must be >= 1")
    rep = run_trials(args.n, args.r, args.trials, args.seed, args.points, args.tol,
                     args.beta_samples)
    doc = json.loads(rep.to_json())
    checks = claim_checks(args.n, args.r) if args.claims else []
    doc["claims"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
    ok = rep.passed and all(c.passed for c in checks)
    doc["passed"] = ok
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.report:
        _write(text, args.report)
    print(f"trials={rep.trials} failures={len(rep.failures)} worst_margin={rep.worst_margin:.6e}"
          f" claims={sum(c.passed for c in checks)}/{len(checks)}")
    return EXIT_OK if ok else EXIT_OUTSIDE


def build_parser():
    p = argparse.ArgumentParser(prog="schwarzpick",
                                description="Sharp value regions of bounded harmonic functions on B^n.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def base(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--n", type=int, required=True, help="dimension of the ball")
        sp.add_argument("--r", type=float, required=True, help="radius of the evaluation point")
        return sp

    sp = base("region", "support curve and polygon of the value region")
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=0.0, help="rotation angle arg F(0)")
    sp.add_argument("--beta-samples", type=int, default=256)
    sp.add_argument("--quad-order", type=int, default=PANEL_ORDER, help="Gauss points per panel")
    sp.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_region)

    sp = base("extremal", "tabulate the extremal boundary function")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--samples", type=int, default=201)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_extremal)

    sp = base("bound", "the classical bound U(rN)")
    sp.set_defaults(func=cmd_bound)

    sp = base("check", "is w a possible value F(x), |x| <= r, given F(0)?")
    sp.add_argument("--f0-re", type=float, required=True)
    sp.add_argument("--f0-im", type=float, default=0.0)
    sp.add_argument("--w-re", type=float, required=True)
    sp.add_argument("--w-im", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--beta-samples", type=int, default=256)
    sp.set_defaults(func=cmd_check)

    sp = base("verify", "randomized containment trials and structural checks")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", type=int, default=64)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--beta-samples", type=int, default=64)
    sp.add_argument("--no-claims", dest="claims", action="store_false")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, ConsistencyError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
