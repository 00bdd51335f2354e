"""Command-line front end.

Every subcommand reads matrix files (see :mod:`accretive_geo.io`) and writes
one JSON document to standard output.  Matrix-valued results are emitted as
matrix files, so they can be fed back into other subcommands.  Errors are
reported as ``{"error": {"kind": ..., "detail": ...}}`` with exit code 1
(domain), 2 (usage or malformed input) or 3 (numerical failure).
"""

import argparse
import contextlib
import io as _stdio
import json
import sys
from typing import NamedTuple

import numpy as np

from . import approx, geometry, manifold, mean
from .config import parse_overrides, tolerances
from .errors import AccretiveGeoError, InvalidInput
from .finsler import MetricConfig
from .io import matrix_to_dict, read_matrix_file
from .sampling import SamplerSpec, sample

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class CliResult(NamedTuple):
    code: int
    stdout: str
    stderr: str


class UsageError(Exception):
    kind = "UsageError"
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# helpers

def _load(path):
    return read_matrix_file(path)[0]


def _metric(text):
    if text is None or text == "default":
        return MetricConfig()
    if text.lstrip().startswith("{"):
        return MetricConfig.from_json(text)
    with open(text, encoding="utf-8") as fh:
        return MetricConfig.from_json(fh.read())


def _tol_overrides(items):
    out = {}
    for item in items:
        out.update(parse_overrides(item))
    return out


def _floats(x):
    return [float(v) for v in np.asarray(x, dtype=float).ravel()]


# --------------------------------------------------------------------------
# subcommands

def cmd_check(args, cfg):
    A = _load(args.A)
    manifold.check_accretive(A)
    rep = manifold.is_sectorial(A)
    return {"accretive": True,
            "accretivity_margin": manifold.accretivity_margin(A),
            "sectorial": bool(rep.is_sectorial),
            "sectorial_margin": float(rep.margin),
            "theta_star": float(rep.theta_star)}


def cmd_phases(args, cfg):
    return {"phases": _floats(manifold.phases(_load(args.A)))}


def cmd_sympolar(args, cfg):
    A = _load(args.A)
    sp = manifold.sym_polar(A)
    resid = np.linalg.norm(sp.compose() - A) / np.linalg.norm(A)
    return {"P": matrix_to_dict(sp.P, label="P"),
            "U": matrix_to_dict(sp.U, label="U"),
            "residual": float(resid)}


def cmd_sectorial(args, cfg):
    A = _load(args.A)
    rep = manifold.is_sectorial(A)
    out = {"sectorial": bool(rep.is_sectorial),
           "margin": float(rep.margin),
           "theta_star": float(rep.theta_star)}
    if rep.is_sectorial:
        dec = manifold.sectorial_decomposition(A)
        out["T"] = matrix_to_dict(dec.T, label="T")
        out["phases"] = _floats(dec.phases)
    return out


def cmd_geodesic(args, cfg):
    G = geometry.geodesic_A(_load(args.A), _load(args.B), args.t)
    return matrix_to_dict(G, label="geodesic", t=args.t)


def cmd_distance(args, cfg):
    A, B = _load(args.A), _load(args.B)
    if args.sweep:
        curve = geometry.GeodesicA.between(A, B)
        ts = np.linspace(0.0, 1.0, args.samples or 21)
        pa = manifold.sym_polar(A)
        rows = ["t,value"]
        for t in ts:
            d = geometry.distance_A(pa, curve(t), cfg)
            rows.append(f"{float(t)!r},{d!r}")
        return "\n".join(rows)
    d_p, d_u = geometry.distance_components(A, B, cfg)
    return {"distance": cfg.combine(d_p, d_u), "d_P": float(d_p), "d_U": float(d_u),
            "metric": cfg.to_dict()}


def cmd_arclength(args, cfg):
    A, B = _load(args.A), _load(args.B)
    res = geometry.arc_length(geometry.geodesic(A, B), cfg, samples=args.samples or 2000)
    return {"arc_length": res.value, "error": res.error,
            "distance": geometry.distance_A(A, B, cfg)}


def cmd_logrank(args, cfg):
    return approx.log_rank(_load(args.A))._asdict()


def cmd_approx_logrank(args, cfg):
    if args.r is None:
        raise UsageError("approx-logrank requires --r")
    res = approx.closest_logrank(_load(args.A), args.r, cfg, full_output=True)
    return matrix_to_dict(res.A_r, label="closest_logrank", r=args.r,
                          objective_P=res.objective_P, objective_U=res.objective_U,
                          distance=res.distance)


def cmd_project(args, cfg):
    A = _load(args.A)
    if args.target == "pd":
        return matrix_to_dict(approx.closest_pd(A, cfg), label="closest_pd")
    return matrix_to_dict(approx.closest_au(A, cfg), label="closest_au")


def cmd_geomean(args, cfg):
    A, B = _load(args.A), _load(args.B)
    G = mean.geometric_mean(A, B)
    return matrix_to_dict(G, label="geometric_mean",
                          riccati_residual=mean.riccati_residual(G, A, B))


def cmd_midpoint(args, cfg):
    rep = mean.midpoint_mean_report(_load(args.A), _load(args.B), cfg)
    rep["mean"] = matrix_to_dict(rep["mean"], label="geometric_mean")
    rep["midpoint"] = matrix_to_dict(rep["midpoint"], label="midpoint")
    return rep


def cmd_properties(args, cfg):
    res = geometry.check_distance_properties(_load(args.A), _load(args.B), cfg, seed=args.seed)
    return {k: float(v) for k, v in res.items()}


def _one_sample(spec):
    s = sample(spec)
    prov = {"P": matrix_to_dict(s.P), "U": matrix_to_dict(s.U),
            "log_spread": spec.log_spread, "phase_spread": spec.phase_spread}
    return matrix_to_dict(s.A, label="sample", seed=spec.seed, provenance=prov)


def cmd_sample(args, cfg):
    count = args.samples or 1
    # per-item seeds are seed, seed + 1, ...
    items = [_one_sample(SamplerSpec(args.n, (args.seed + k) % 2**64,
                                     args.log_spread, args.phase_spread))
             for k in range(count)]
    return items[0] if args.samples is None else {"samples": items}


def cmd_validate_metric(args, cfg):
    reports = cfg.validate(trials=args.samples or 1000, seed=args.seed)
    out = {"metric": cfg.to_dict(), "smooth": cfg.smooth}
    for key, rep in reports.items():
        d = dict(vars(rep))
        d["passed"] = rep.passed
        out[key] = d
    out["passed"] = all(rep.passed for rep in reports.values())
    return out


# --------------------------------------------------------------------------
# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--metric", default="default",
                        help="metric config: 'default', inline JSON, or a path")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="tolerance override, e.g. tol_pd=1e-10 (repeatable)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--verbose", action="store_true",
                        help="print a summary on standard error")

    parser = _Parser(prog="accretive-geo",
                     description="Geometry of strictly accretive matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, nmat, help):
        p = sub.add_parser(name, parents=[common], help=help)
        for label in ("A", "B")[:nmat]:
            p.add_argument(label, help=f"matrix file for {label}")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, 1, "membership test (exit 1 if not strictly accretive)")
    add("phases", cmd_phases, 1, "phases of a sectorial matrix")
    add("sympolar", cmd_sympolar, 1, "symmetric polar decomposition A = P U P")
    add("sectorial", cmd_sectorial, 1, "sectoriality test and decomposition")
    add("geodesic", cmd_geodesic, 2, "geodesic point gamma(t)").add_argument(
        "--t", type=float, required=True)
    add("distance", cmd_distance, 2, "distance, or a CSV sweep along the geodesic").add_argument(
        "--sweep", action="store_true", help="emit CSV rows t,d(A, gamma(t))")
    add("arclength", cmd_arclength, 2, "quadrature length of the geodesic")
    add("logrank", cmd_logrank, 1, "log-rank")
    add("approx-logrank", cmd_approx_logrank, 1,
        "closest matrix of bounded log-rank").add_argument("--r", type=int)
    p = sub.add_parser("project", parents=[common], help="closest pd or accretive unitary matrix")
    p.add_argument("target", choices=("pd", "au"))
    p.add_argument("A")
    p.set_defaults(func=cmd_project)
    add("geomean", cmd_geomean, 2, "geometric mean A # B")
    add("midpoint", cmd_midpoint, 2, "compare A # B with the geodesic midpoint")
    add("properties", cmd_properties, 2, "distance invariance residuals")
    p = add("sample", cmd_sample, 0, "seeded random strictly accretive matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--log-spread", type=float, default=1.0)
    p.add_argument("--phase-spread", type=float, default=1.2)
    add("validate-metric", cmd_validate_metric, 0, "check gauge and product axioms")
    return parser


# --------------------------------------------------------------------------
# entry points

def _error(kind, detail):
    return json.dumps({"error": {"kind": kind, "detail": detail}})


def _summary(command, result):
    if isinstance(result, str):
        return f"{command}: {result.count(chr(10))} rows"
    parts = [f"{k}={v}" for k, v in result.items() if isinstance(v, (bool, int, float, str))]
    return f"{command}: " + ", ".join(parts)


def run(argv=None):
    """Execute one command; return a :class:`CliResult`, never raise."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out, err = _stdio.StringIO(), _stdio.StringIO()
    code = EXIT_OK
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = build_parser().parse_args(argv)
        cfg = _metric(args.metric)
        with tolerances(**_tol_overrides(args.tol)):
            result = args.func(args, cfg)
        out.write(result if isinstance(result, str) else json.dumps(result, allow_nan=False))
        out.write("\n")
        if args.verbose:
            err.write(_summary(args.command, result) + "\n")
    except SystemExit as exc:
        # --help
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (AccretiveGeoError, UsageError) as exc:
        code = exc.exit_code
        out.write(_error(exc.kind, str(exc)) + "\n")
    except OSError as exc:
        code = EXIT_USAGE
        out.write(_error("IOError", str(exc)) + "\n")
    except (ValueError, TypeError, OverflowError) as exc:
        code = EXIT_USAGE
        out.write(_error(InvalidInput.__name__, str(exc)) + "\n")
    except np.linalg.LinAlgError as exc:
        code = EXIT_NUMERICAL
        out.write(_error("LinAlgError", str(exc)) + "\n")
    except Exception as exc:  # noqa: BLE001 -- the CLI must not crash
        code = EXIT_NUMERICAL
        out.write(_error("InternalError", f"{type(exc).__name__}: {exc}") + "\n")
    return CliResult(code, out.getvalue(), err.getvalue())


def main(argv=None):
    res = run(argv)
    sys.stdout.write(res.stdout)
    sys.stderr.write(res.stderr)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
