"""Operator files and the function-spec mini-language."""

from __future__ import annotations

import ast
import json
import re
from pathlib import Path

import numpy as np
import yaml

from .algebra import H, Algebra, clifford
from .cliffordop import ParavectorOperator
from .errors import DimensionMismatch, InputError, SliceCalcError, UnknownFunction
from .qmatrix import AlgebraMatrix, QMatrix
from .slicefn import CATALOG, LEFT, RIGHT, SliceFunction, catalog, from_poly, star_inv, star_mul

KINDS = ("quaternion-matrix", "paravector")


def _mark(exc) -> str:
    m = getattr(exc, "problem_mark", None)
    if m is None:
        return ""
    return f" at line {m.line + 1}, column {m.column + 1}"


def parse_operator_text(text: str):
    """Parse YAML (JSON is a subset) into a QMatrix or ParavectorOperator."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        problem = getattr(exc, "problem", None) or str(exc)
        raise InputError(f"malformed operator file{_mark(exc)}: {problem}") from None
    return operator_from_dict(doc)


def operator_from_dict(doc):
    if not isinstance(doc, dict):
        raise InputError("operator file must be a mapping")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"kind must be one of {KINDS}, got {kind!r}")
    if "entries" not in doc:
        raise InputError("missing 'entries'")
    try:
        E = np.array(doc["entries"], dtype=float)
    except (TypeError, ValueError):
        raise InputError("entries must be a rectangular numeric array") from None
    m = doc.get("m")
    if kind == "quaternion-matrix":
        if E.ndim != 3 or E.shape[2] != 4 or E.shape[0] != E.shape[1]:
            raise DimensionMismatch(f"quaternion entries need shape (m, m, 4), got {E.shape}")
        if m is not None and int(m) != E.shape[0]:
            raise DimensionMismatch(f"m = {m} but entries are {E.shape[0]}x{E.shape[1]}")
        return QMatrix(E)
    n = doc.get("n")
    if n is None:
        raise InputError("paravector files need 'n'")
    n = int(n)
    if E.ndim != 3 or E.shape[0] != n + 1 or E.shape[1] != E.shape[2]:
        raise DimensionMismatch(f"paravector entries need shape (n+1, m, m) = ({n + 1}, m, m), got {E.shape}")
    if m is not None and int(m) != E.shape[1]:
        raise DimensionMismatch(f"m = {m} but components are {E.shape[1]}x{E.shape[2]}")
    return ParavectorOperator(n, tuple(E))


def operator_to_dict(op) -> dict:
    if isinstance(op, ParavectorOperator):
        return {"kind": "paravector", "m": op.m, "n": op.n, "entries": [c.tolist() for c in op.components]}
    if isinstance(op, AlgebraMatrix) and op.algebra.is_quaternion:
        return {"kind": "quaternion-matrix", "m": op.m, "entries": op.entries.tolist()}
    if isinstance(op, AlgebraMatrix):
        return operator_to_dict(ParavectorOperator.from_matrix(op))
    raise InputError(f"cannot serialise {type(op).__name__}")


def load_operator(path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_operator_text(text)


def save_operator(op, path, fmt: str | None = None):
    # repr-exact floats: json and yaml both round-trip binary64 via repr
    doc = operator_to_dict(op)
    p = Path(path)
    fmt = fmt or ("json" if p.suffix == ".json" else "yaml")
    if fmt == "json":
        text = json.dumps(doc, indent=1)
    else:
        text = yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
    p.write_text(text, encoding="utf-8")
    return p


def as_algebra_matrix(op) -> AlgebraMatrix:
    return op.matrix if isinstance(op, ParavectorOperator) else op


# -- function specs -----------------------------------------------------------------------

_SPEC = re.compile(r"^(?:(left|right):)?([a-z_]+)(?:\((.*)\))?$")


def _params(text: str | None):
    if text is None or not text.strip():
        return ()
    try:
        val = ast.literal_eval(f"({text},)")
    except (ValueError, SyntaxError):
        raise InputError(f"cannot parse parameters {text!r}") from None
    return tuple(val)


def parse_function(spec: str, algebra: Algebra = H) -> SliceFunction:
    try:
        return _parse_function(spec, algebra)
    except SliceCalcError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad parameters in {spec!r}: {exc}") from None


def _parse_function(spec: str, algebra: Algebra) -> SliceFunction:
    m = _SPEC.match(spec.strip().replace(" ", ""))
    if not m:
        raise InputError(f"bad function spec {spec!r}")
    prefix, name, args = m.groups()
    if name not in CATALOG:
        raise UnknownFunction(f"unknown function {name!r}; known: {', '.join(CATALOG)}")
    params = _params(args)
    side = {"left": LEFT, "right": RIGHT}.get(prefix)
    if name == "rational":
        if len(params) != 2:
            raise InputError("rational needs numerator and denominator coefficient lists")
        P, Q = (np.asarray(p, dtype=float) for p in params)
        if P.ndim == 1 and Q.ndim == 1:
            return catalog("rational", P, Q, algebra=algebra)
        if side is None:
            raise InputError("rationals with algebra-valued coefficients need a left: or right: prefix")
        num = from_poly(np.atleast_2d(P) if P.ndim == 2 else P, side, algebra)
        den = from_poly(np.atleast_2d(Q) if Q.ndim == 2 else Q, side, algebra)
        return star_mul(num, star_inv(den)) if side == LEFT else star_mul(star_inv(den), num)
    if side is not None and name not in ("poly", "poly_left", "poly_right", "const"):
        f = catalog(name, *params, algebra=algebra)
        return f  # intrinsic functions are both left and right
    return catalog(name, *params, algebra=algebra, side=side)


def algebra_for(op) -> Algebra:
    if isinstance(op, ParavectorOperator):
        return clifford(op.n)
    return op.algebra


def is_finite_operator(op) -> bool:
    E = as_algebra_matrix(op).entries
    return bool(np.all(np.isfinite(E)))


__all__ = [
    "parse_operator_text", "operator_from_dict", "operator_to_dict", "load_operator", "save_operator",
    "parse_function", "as_algebra_matrix", "algebra_for",
]
