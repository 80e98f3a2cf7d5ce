"""Independent verification of every certificate the solvers produce.

Only exact arithmetic and membership tests are used here; nothing in this
module calls a solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import AdicClass, as_fraction, format_rational, is_member, parse_rational
from .problems import LlpInstance, LlpOutcome

SPECIES = {
    "real-infeasibility": ("y",),
    "adic-infeasibility": ("y", "u"),
    "unboundedness": ("x", "r"),
    "optimality": ("x", "y"),
    "unattainability": ("x", "y", "u"),
    "eps-approximation": ("x", "eps", "v"),
}

# which fields are vectors over rows (m) or columns (n); the rest are scalars
_ROW_FIELDS = {"y", "u"}
_COL_FIELDS = {"x", "r"}


class SchemaError(ValueError):
    """Certificate does not fit its species or the instance's shape."""


@dataclass(frozen=True)
class Certificate:
    species: str
    fields: dict

    def __post_init__(self):
        if self.species not in SPECIES:
            raise SchemaError(f"unknown species {self.species!r}")
        if set(self.fields) != set(SPECIES[self.species]):
            raise SchemaError(f"{self.species} needs fields {SPECIES[self.species]}, got {sorted(self.fields)}")

    def to_json(self) -> dict:
        out = {}
        for k, v in self.fields.items():
            out[k] = format_rational(v) if isinstance(v, (int, Fraction)) else [format_rational(q) for q in v]
        return {"species": self.species, "fields": out}

    @classmethod
    def from_json(cls, obj) -> "Certificate":
        if not isinstance(obj, dict) or set(obj) != {"species", "fields"}:
            raise SchemaError("certificate must have exactly 'species' and 'fields'")
        fields = {}
        if not isinstance(obj["fields"], dict):
            raise SchemaError("'fields' must be an object")
        try:
            for k, v in obj["fields"].items():
                if isinstance(v, str):
                    fields[k] = parse_rational(v)
                elif isinstance(v, list) and all(isinstance(s, str) for s in v):
                    fields[k] = tuple(parse_rational(s) for s in v)
                else:
                    raise SchemaError(f"field {k!r} must be a rational string or a list of them")
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        return cls(obj["species"], fields)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    label: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid


OK = Verdict(True)


def _fail(label: str) -> Verdict:
    return Verdict(False, label)


def _dot(u, v) -> Fraction:
    return sum((as_fraction(a) * as_fraction(b) for a, b in zip(u, v)), Fraction(0))


def _Ax(A, x):
    return [_dot(row, x) for row in A]


def _ATy(A, y, n):
    out = [Fraction(0)] * n
    for row, yi in zip(A, y):
        if yi:
            for j in range(n):
                out[j] += row[j] * yi
    return out


def _check_shape(inst: LlpInstance, cert: Certificate) -> None:
    for k, v in cert.fields.items():
        if k in _ROW_FIELDS or k in _COL_FIELDS:
            if not isinstance(v, (tuple, list)):
                raise SchemaError(f"field {k!r} must be a vector")
            want = inst.m if k in _ROW_FIELDS else inst.n
            if len(v) != want:
                raise SchemaError(f"field {k!r} has length {len(v)}, expected {want}")
        elif isinstance(v, (tuple, list)):
            raise SchemaError(f"field {k!r} must be a scalar")


def _supp(v) -> set:
    return {i for i, q in enumerate(v) if q != 0}


def _feasible(inst, x) -> bool:
    return all(lhs <= bi for lhs, bi in zip(_Ax(inst.A, x), inst.b))


def _members(x, L) -> bool:
    return all(is_member(q, L) for q in x)


def _integral(v) -> bool:
    return all(as_fraction(q).denominator == 1 for q in v)


def verify(inst: LlpInstance, cert: Certificate) -> Verdict:
    """Check every condition of the certificate's species, in a fixed order."""
    _check_shape(inst, cert)
    f, A, b, c, n, L = cert.fields, inst.A, inst.b, inst.c, inst.n, inst.L
    s = cert.species
    if s == "real-infeasibility":
        y = f["y"]
        if any(q < 0 for q in y):
            return _fail("y>=0")
        if any(_ATy(A, y, n)):
            return _fail("A^T y=0")
        if not _dot(b, y) < 0:
            return _fail("b^T y<0")
        return OK
    if s == "adic-infeasibility":
        y, u = f["y"], f["u"]
        if not _supp(u) <= _supp(y):
            return _fail("supp(u)<=supp(y)")
        if any(q < 0 for q in y):
            return _fail("y>=0")
        if any(_ATy(A, y, n)):
            return _fail("A^T y=0")
        if _dot(b, y) != 0:
            return _fail("b^T y=0")
        if not _integral(_ATy(A, u, n)):
            return _fail("A^T u integral")
        if is_member(_dot(b, u), L):
            return _fail("b^T u not in L")
        return OK
    if s == "unboundedness":
        x, r = f["x"], f["r"]
        if not _members(x, L):
            return _fail("membership")
        if not _feasible(inst, x):
            return _fail("Ax<=b")
        if not _integral(r):
            return _fail("r integral")
        if any(q > 0 for q in _Ax(A, r)):
            return _fail("Ar<=0")
        if not _dot(c, r) > 0:
            return _fail("c^T r>0")
        return OK
    if s == "optimality":
        x, y = f["x"], f["y"]
        if not _members(x, L):
            return _fail("membership")
        return _dual_pair(inst, x, y)
    if s == "unattainability":
        x, y, u = f["x"], f["y"], f["u"]
        if not _supp(u) <= _supp(y):
            return _fail("supp(u)<=supp(y)")
        v = _dual_pair(inst, x, y)
        if not v:
            return v
        if not _integral(_ATy(A, u, n)):
            return _fail("A^T u integral")
        if is_member(_dot(b, u), L):
            return _fail("b^T u not in L")
        return OK
    if s == "eps-approximation":
        x, eps, v = f["x"], f["eps"], f["v"]
        if not _members(x, L):
            return _fail("membership")
        if not _feasible(inst, x):
            return _fail("Ax<=b")
        if not eps > 0:
            return _fail("eps>0")
        if _dot(c, x) < v - eps:
            return _fail("c^T x>=v-eps")
        return OK
    raise SchemaError(f"unknown species {s!r}")


def _dual_pair(inst, x, y) -> Verdict:
    if not _feasible(inst, x):
        return _fail("Ax<=b")
    if list(_ATy(inst.A, y, inst.n)) != [as_fraction(q) for q in inst.c]:
        return _fail("A^T y=c")
    if any(q < 0 for q in y):
        return _fail("y>=0")
    if _dot(inst.c, x) != _dot(inst.b, y):
        return _fail("c^T x=b^T y")
    return OK


def certificates_of(inst: LlpInstance, out: LlpOutcome) -> list[Certificate]:
    """The certificate(s) that together witness an outcome."""
    t = out.tag
    if t == "o1-real":
        return [Certificate("real-infeasibility", {"y": out.u})]
    if t == "o1-adic":
        return [Certificate("adic-infeasibility", {"y": out.y_bar, "u": out.u_bar})]
    if t == "o2":
        return [Certificate("unboundedness", {"x": out.x_f, "r": out.r})]
    if t == "o3":
        return [Certificate("optimality", {"x": out.x_d, "y": out.y_star})]
    if t == "o4":
        v = _dot(inst.b, out.y_star)
        return [
            Certificate("unattainability", {"x": out.x_star, "y": out.y_star, "u": out.u_bar}),
            Certificate("eps-approximation", {"x": out.x_eps, "eps": out.eps, "v": v}),
        ]
    raise SchemaError(f"unknown outcome tag {t!r}")


def verify_all(inst: LlpInstance, certs) -> Verdict:
    for cert in certs:
        v = verify(inst, cert)
        if not v:
            return v
    return OK


def verify_outcome(inst: LlpInstance, out: LlpOutcome) -> Verdict:
    return verify_all(inst, certificates_of(inst, out))
