"""Command-line front end.  Reports are single YAML documents on stdout (or --out)."""

from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime, timezone

import numpy as np
import yaml

from . import __version__
from .calculus import METHODS, apply, apply_all
from .errors import InputError, SliceCalcError
from .io import algebra_for, as_algebra_matrix, load_operator, parse_function
from .qmatrix import op_norm
from .quadratic import closed_form, estimate_beta, hinf_bound_check
from .slicefn import psi
from .spectrum import classify_sector, s_spectrum
from .verify import SUITES, run_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4, 5


# -- formatting ------------------------------------------------------------------------------


class Full(float):
    """Float rendered with 17 significant digits."""


class Short(float):
    """Float rendered with 6 significant digits."""


def _float_text(x: float, digits: int) -> str:
    if math.isnan(x):
        return ".nan"
    if math.isinf(x):
        return ".inf" if x > 0 else "-.inf"
    t = f"{x + 0.0:.{digits}g}"
    mant, _, exp = t.partition("e")
    if "." not in mant:
        mant += ".0"
    # YAML 1.1 floats need a dot in the mantissa and a signed exponent
    return f"{mant}e{exp}" if exp else mant


class _Dumper(yaml.SafeDumper):
    pass


_Dumper.add_representer(Full, lambda d, x: d.represent_scalar("tag:yaml.org,2002:float", _float_text(x, 17)))
_Dumper.add_representer(Short, lambda d, x: d.represent_scalar("tag:yaml.org,2002:float", _float_text(x, 6)))


def plain(obj, kind=Short):
    """Convert numpy values and tuples into YAML-safe structures."""
    if isinstance(obj, dict):
        return {str(k): plain(v, kind) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v, kind) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist(), kind)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return kind(float(obj))
    if isinstance(obj, complex):
        return [kind(obj.real), kind(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def matrix_block(A) -> dict:
    return {"algebra": A.algebra.name, "m": A.m, "entries": plain(A.entries, Full)}


def emit(doc: dict, out=None) -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    body = yaml.dump({"schema_version": SCHEMA_VERSION, **doc}, Dumper=_Dumper, sort_keys=False,
                     default_flow_style=None, allow_unicode=True, width=120)
    text = f"# generated {stamp}\n{body}"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


# -- commands --------------------------------------------------------------------------------------


def _mult(m):
    return int(round(m)) if abs(m - round(m)) < 1e-9 else Short(m)


def _thetas(text: str | None):
    if not text:
        return None
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"--sector expects comma-separated angles, got {text!r}") from None


def cmd_spectrum(args) -> int:
    op = load_operator(args.file)
    T = as_algebra_matrix(op)
    spec = s_spectrum(T)
    doc = {
        "command": "spectrum",
        "file": str(args.file),
        "summary": spec.summary(),
        "spheres": [{"u": Short(s.u + 0.0), "v": Short(s.v + 0.0), "multiplicity": _mult(s.multiplicity)} for s in spec],
        "omega": Short(spec.omega),
    }
    thetas = _thetas(args.sector)
    if thetas is not None:
        prof = classify_sector(T, thetas, spectrum=spec)
        doc["sector_constants"] = [{"theta": Short(x.theta), "C": Short(x.C)} for x in prof.samples]
    emit(doc, args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    op = load_operator(args.file)
    T = as_algebra_matrix(op)
    f = parse_function(args.func, algebra_for(op))
    doc = {"command": "apply", "file": str(args.file), "function": f.name, "method": args.method}
    if args.method == "all":
        reports, skipped, dev = apply_all(f, T)
        if not reports:
            raise InputError(f"no calculus applies to {f.name}: {skipped}")
        doc["results"] = {m: {"result": matrix_block(r.result), "diagnostics": plain(r.diagnostics)}
                          for m, r in reports.items()}
        doc["skipped"] = skipped
        doc["max_deviation"] = Short(dev)
    else:
        opts = {}
        if args.tol is not None and args.method in ("contour", "sector", "hinf"):
            opts["tol"] = args.tol
        rep = apply(f, T, args.method, **opts)
        doc["method"] = rep.method
        doc["result"] = matrix_block(rep.result)
        doc["norm"] = Short(op_norm(rep.result))
        doc["diagnostics"] = plain(rep.diagnostics)
    emit(doc, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials is not None and args.trials < 1:
        raise InputError("--trials must be at least 1")
    results = run_suite(args.suite, seed=args.seed, trials=args.trials)
    ok = all(r.passed for r in results)
    doc = {
        "command": "verify",
        "suite": args.suite,
        "seed": args.seed,
        "passed": ok,
        "suites": [
            {
                "suite": r.name,
                "status": "pass" if r.passed else "fail",
                "metric": r.metric,
                "value": Short(r.value),
                "threshold": Short(r.threshold),
                "trials": len(r.trials),
                **({"witness": plain(r.witness)} if not r.passed else {}),
            }
            for r in results
        ],
    }
    if args.detail:
        doc["detail"] = {r.name: plain(r.trials) for r in results}
    emit(doc, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_quadratic(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    if args.psi < 1:
        raise InputError("--psi must be a positive integer")
    op = load_operator(args.file)
    T = as_algebra_matrix(op)
    q = psi(args.psi, T.algebra)
    est = estimate_beta(T, q, trials=args.trials, seed=args.seed, adjoint=args.adjoint)
    doc = {
        "command": "quadratic",
        "file": str(args.file),
        "psi": q.name,
        "integrals": plain(est["values"]),
        "beta": Short(est["beta"]),
    }
    if args.adjoint:
        doc["integrals_adjoint"] = plain(est["values_adjoint"])
        doc["beta_adjoint"] = Short(est["beta_adjoint"])
    E = T.entries
    if T.m == 1 and E[0, 0, 0] > 0 and np.allclose(E[0, 0, 1:], 0) and E[0, 0, 0] > 0:
        cf = closed_form(args.psi)
        doc["closed_form"] = Short(cf)
        doc["closed_form_deviation"] = Short(max(abs(v - cf) for v in est["values"]))
    if args.func:
        f = parse_function(args.func, T.algebra)
        chk = hinf_bound_check(T, f, C=1.0, psi_fn=q, trials=args.trials, seed=args.seed)
        doc["bound"] = {"function": f.name, "norm_fT": Short(chk["norm_fT"]), "sup_f": Short(chk["sup_f"]),
                        "ratio": Short(chk["ratio"])}
    emit(doc, args.out)
    return EXIT_OK


# -- entry point --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slicecalc", description="S-spectrum functional calculi for quaternionic "
                                "matrices and Clifford paravector operators.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", help="S-spectrum spheres and sector angle")
    s.add_argument("file")
    s.add_argument("--sector", help="comma-separated angles for the resolvent-constant table")
    s.add_argument("--out")
    s.set_defaults(run=cmd_spectrum)

    a = sub.add_parser("apply", help="evaluate f(T)")
    a.add_argument("file")
    a.add_argument("--func", required=True, help='function spec, e.g. "psi(2)" or "frac_pow(0.5)"')
    a.add_argument("--method", default="auto", choices=("auto",) + METHODS + ("all",))
    a.add_argument("--tol", type=float)
    a.add_argument("--out")
    a.set_defaults(run=cmd_apply)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int)
    v.add_argument("--detail", action="store_true", help="include per-trial records")
    v.add_argument("--out")
    v.set_defaults(run=cmd_verify)

    q = sub.add_parser("quadratic", help="quadratic estimate for psi(tT)")
    q.add_argument("file")
    q.add_argument("--psi", type=int, default=1, help="exponent k of (s/(1+s^2))^k")
    q.add_argument("--trials", type=int, default=8)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--adjoint", action="store_true")
    q.add_argument("--func", help="also compare ||f(T)|| with sup |f|")
    q.add_argument("--out")
    q.set_defaults(run=cmd_quadratic)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except SliceCalcError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return exc.exit_code
    except np.linalg.LinAlgError as exc:
        print(f"error: EigenFailure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
