"""Command-line front end.

Subcommands: validate, integrate, check, go, exist. Machine-readable
output (JSON or CSV) goes to --out or standard output; human summaries go
to standard error. Identical configuration and seed produce byte-identical
output files.
"""

import argparse
import json
import os
import sys

import numpy as np

from .existence import construct_homogeneous_geodesic, verify_eigenconstruction
from .go import go_verdict
from .hamiltonian import Momentum, vertical_field_coords
from .homogeneity import (
    HOMOGENEOUS,
    INCONCLUSIVE,
    NOT_HOMOGENEOUS,
    check_homogeneous,
)
from .integrate import integrate_horizontal, integrate_vertical, sample_momenta
from .models import list_models, load_model, load_model_file

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_BLOWUP = 3
EXIT_INCONCLUSIVE = 4


def _load(name):
    if name in list_models():
        return load_model(name)
    if os.path.exists(name):
        return load_model_file(name)
    raise KeyError(f"unknown model {name!r} and no such file")


def _parse_p0(text, structure):
    vals = [float(x) for x in text.split(",")]
    n, dm = structure.dim, structure.m.dim
    if len(vals) == n:
        return np.array(vals)
    if len(vals) == dm:
        # m*-coordinates: lift into the annihilator of k.
        adapted = (
            np.concatenate(
                [structure.m_basis_float, structure.k_basis_float], axis=1
            )
            if structure.k.dim
            else structure.m_basis_float
        )
        m_dual = np.linalg.inv(adapted).T[:, :dm]
        return m_dual @ np.array(vals)
    raise ValueError(
        f"p0 needs {n} components (or {dm} in m*-coordinates), got {len(vals)}"
    )


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_validate(args):
    try:
        spec = _load(args.model)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    algebra_report = spec.structure.algebra.validate()
    structure_report = spec.structure.validate()
    merged = algebra_report.merged(structure_report)
    _emit(
        _json(
            {
                "model": spec.name,
                "dim": spec.structure.dim,
                "valid": merged.ok,
                "violations": merged.violations,
            }
        ),
        args.out,
    )
    print(
        f"{spec.name}: {'valid' if merged.ok else 'INVALID'}"
        + (f" ({len(merged.violations)} violations)" if not merged.ok else ""),
        file=sys.stderr,
    )
    return EXIT_OK if merged.ok else EXIT_FAIL


def _phase_portrait_csv(spec, args):
    s = spec.structure
    n = s.dim
    rng = np.random.default_rng(args.seed)
    points = sample_momenta(s, args.samples, rng)
    lines = [
        "kind,id,t,"
        + ",".join(f"p_{i + 1}" for i in range(n))
        + ","
        + ",".join(f"v_{i + 1}" for i in range(n))
    ]
    for i, p in enumerate(points):
        v = vertical_field_coords(s, p)
        lines.append(
            "arrow,%d,0," % i
            + ",".join("%.17g" % x for x in p)
            + ","
            + ",".join("%.17g" % x for x in v)
        )
    zero = ",".join("0" for _ in range(n))
    for i, p in enumerate(points[: min(8, len(points))]):
        traj = integrate_vertical(Momentum(p, s), args.T, args.step)
        stride = max(1, traj.n_samples // 200)
        for t, row in zip(traj.times[::stride], traj.momenta[::stride]):
            lines.append(
                "trajectory,%d,%.17g," % (i, t)
                + ",".join("%.17g" % x for x in row)
                + ","
                + zero
            )
    return "\n".join(lines) + "\n"


def cmd_integrate(args):
    try:
        spec = _load(args.model)
        s = spec.structure
        if args.phase_portrait:
            if not (args.T > 0 and 0 < args.step <= args.T):
                raise ValueError("need T > 0 and 0 < step <= T")
            _emit(_phase_portrait_csv(spec, args), args.out)
            print(
                f"{spec.name}: phase portrait with {args.samples} arrows",
                file=sys.stderr,
            )
            return EXIT_OK
        p0 = Momentum(_parse_p0(args.p0, s), s)
        traj = integrate_vertical(p0, args.T, args.step, casimirs=spec.casimirs)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.horizontal and s.representation is not None:
        traj = integrate_horizontal(traj)
    _emit(traj.to_csv_text(), args.out)
    drifts = ", ".join(
        f"{k}={v:.3e}" for k, v in sorted(traj.casimir_drifts().items())
    )
    print(
        f"{spec.name}: t reached {traj.times[-1]:.6g}, "
        f"H drift {traj.h_drift():.3e}"
        + (f", {drifts}" if drifts else "")
        + (", ABORTED (blow-up)" if traj.aborted else ""),
        file=sys.stderr,
    )
    return EXIT_BLOWUP if traj.aborted else EXIT_OK


def cmd_check(args):
    try:
        spec = _load(args.model)
        p0 = Momentum(_parse_p0(args.p0, spec.structure), spec.structure)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    cert = check_homogeneous(p0, threshold=args.tol)
    payload = cert.to_dict()
    payload["model"] = spec.name
    payload["p0"] = [float(x) for x in p0.coords]
    _emit(_json(payload), args.out)
    print(f"{spec.name}: {cert.verdict} (residual {cert.residual:.3e})",
          file=sys.stderr)
    if cert.verdict == HOMOGENEOUS:
        return EXIT_OK
    if cert.verdict == NOT_HOMOGENEOUS:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


def cmd_go(args):
    try:
        spec = _load(args.model)
        verdict = go_verdict(
            spec.structure,
            degree_cap=args.degree_cap,
            samples=args.samples,
            seed=args.seed,
        )
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    payload = verdict.to_dict()
    payload["model"] = spec.name
    _emit(_json(payload), args.out)
    print(f"{spec.name}: {verdict.verdict}", file=sys.stderr)
    return EXIT_OK


def cmd_exist(args):
    try:
        spec = _load(args.model)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    result = construct_homogeneous_geodesic(spec.structure)
    payload = result.to_dict()
    payload["model"] = spec.name
    if result.success:
        payload["audit"] = verify_eigenconstruction(spec.structure, result)
    _emit(_json(payload), args.out)
    print(
        f"{spec.name}: {'constructed (' + result.route + ' route)' if result.success else 'FAILED'}",
        file=sys.stderr,
    )
    return EXIT_OK if result.success else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="srgo",
        description="Sub-Riemannian homogeneous-geodesic toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, p0=False):
        p.add_argument("--model", required=True,
                       help="registry name or JSON model file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--jobs", type=int, default=1,
                       help="accepted for compatibility; execution is "
                       "sequential for determinism")
        if p0:
            p.add_argument("--p0", help="comma-separated momentum "
                           "(full or m*-coordinates)")

    p = sub.add_parser("validate", help="exact structural checks")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("integrate", help="vertical flow to CSV")
    common(p, p0=True)
    p.add_argument("--T", type=float, default=10.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--phase-portrait", action="store_true",
                   help="emit field arrows and trajectories on H = 1/2")
    p.add_argument("--horizontal", action="store_true",
                   help="include group points when a representation exists")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("check", help="homogeneity of one momentum")
    common(p, p0=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("go", help="geodesic-orbit analysis")
    common(p)
    p.add_argument("--degree-cap", type=int, default=4)
    p.set_defaults(func=cmd_go)

    p = sub.add_parser("exist", help="construct a homogeneous geodesic")
    common(p)
    p.set_defaults(func=cmd_exist)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "p0", None) is None and args.command in ("integrate", "check") \
            and not getattr(args, "phase_portrait", False):
        parser.error(f"{args.command} requires --p0")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
