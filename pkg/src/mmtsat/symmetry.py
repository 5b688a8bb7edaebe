"""Triplet symmetry transformations and per-group orbit schemes.

Supported groups are a closed enumeration: the trivial group, <cyc>,
<cyc, transpose>, and <cyc, sandwich-by-F> with F fixed to the involutive
matrix 110;010;001.  Orbit expansion follows each group's printed triplet
lists exactly, and is written generically over a small matrix algebra so
the CNF encoder can reuse the same formulas on symbolic matrices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .gf2 import Gf2Matrix, conjugate
from .tensor import Decomposition, Triplet


class GroupId(Enum):
    TRIVIAL = "none"
    CYCLIC = "cyc"
    CYCLIC_TRANSPOSE = "cyc-t"
    CYCLIC_SANDWICH = "cyc-sw"

    @classmethod
    def from_name(cls, name: str) -> "GroupId":
        for g in cls:
            if g.value == name:
                return g
        raise ValueError(f"unknown group {name!r}; expected one of "
                         f"{[g.value for g in cls]}")


# The fixed sandwich matrix for CYCLIC_SANDWICH; F * F = I over GF(2).
F_SANDWICH = Gf2Matrix.parse("110;010;001")


class ConstraintError(ValueError):
    """An orbit representative violates its side condition."""


@dataclass(frozen=True)
class OrbitKind:
    """One orbit shape of a group: tag, representative arity, rank weight."""
    tag: str
    arity: int
    weight: int
    roles: tuple[str, ...]


_KINDS: dict[GroupId, tuple[OrbitKind, ...]] = {
    GroupId.TRIVIAL: (
        OrbitKind("id", 3, 1, ("A", "B", "C")),
    ),
    GroupId.CYCLIC: (
        OrbitKind("id", 3, 3, ("A", "B", "C")),
        OrbitKind("delta", 1, 1, ("D",)),
    ),
    GroupId.CYCLIC_TRANSPOSE: (
        OrbitKind("id", 3, 6, ("A", "B", "C")),
        OrbitKind("t", 2, 3, ("S", "H")),
        OrbitKind("delta", 1, 2, ("D",)),
        OrbitKind("full", 1, 1, ("Z",)),
    ),
    GroupId.CYCLIC_SANDWICH: (
        OrbitKind("id", 3, 6, ("A", "B", "C")),
        OrbitKind("sw", 3, 3, ("X", "Y", "Z")),
        OrbitKind("delta", 1, 2, ("D",)),
        OrbitKind("full", 1, 1, ("U",)),
    ),
}


def orbit_kinds(group: GroupId) -> tuple[OrbitKind, ...]:
    return _KINDS[group]


def kind_by_tag(group: GroupId, tag: str) -> OrbitKind:
    for k in _KINDS[group]:
        if k.tag == tag:
            return k
    raise ValueError(f"group {group.value} has no orbit kind {tag!r}")


def total_rank(group: GroupId, combo: dict[str, int]) -> int:
    """Rank of the expanded decomposition as a linear form in orbit counts."""
    kinds = {k.tag: k for k in _KINDS[group]}
    for tag in combo:
        if tag not in kinds:
            raise ValueError(f"group {group.value} has no orbit kind {tag!r}")
    return sum(kinds[tag].weight * c for tag, c in combo.items())


# -- transforms --------------------------------------------------------------


@dataclass(frozen=True)
class Transform:
    """Composite cyc^a o transpose^b o sandwich_{U,V,W} (sandwich first)."""
    cyclic_power: int = 0
    transposed: bool = False
    sandwich: tuple[Gf2Matrix, Gf2Matrix, Gf2Matrix] | None = None

    def __post_init__(self):
        if self.cyclic_power not in (0, 1, 2):
            raise ValueError("cyclic_power must be 0, 1, or 2")
        if self.sandwich is not None:
            for mat in self.sandwich:
                if not mat.is_invertible():
                    raise ConstraintError("sandwich matrix is singular")

    def apply(self, trip: Triplet) -> Triplet:
        a, b, c = trip.a, trip.b, trip.c
        if self.sandwich is not None:
            u, v, w = self.sandwich
            a, b, c = u * a * v.inverse(), v * b * w.inverse(), w * c * u.inverse()
        if self.transposed:
            a, b, c = c.transpose(), b.transpose(), a.transpose()
        for _ in range(self.cyclic_power):
            a, b, c = b, c, a
        return Triplet(a, b, c)

    def compose(self, other: "Transform") -> "Transform":
        """self o other: the transform applying `other` first, then `self`.

        Normal form is maintained via cyc*transpose = transpose*cyc^{-1},
        sandwich*cyc = cyc*rot^{-1}(sandwich), and
        sandwich_{P,Q,R}*transpose = transpose*sandwich_{P^-T,R^-T,Q^-T}.
        """
        phi = self.sandwich
        # Move self's sandwich right past other's cyclic part.
        if phi is not None:
            for _ in range(other.cyclic_power):
                u, v, w = phi
                phi = (w, u, v)
        # ... and past other's transpose.
        if other.transposed and phi is not None:
            p, q, r = phi
            phi = (p.inverse().transpose(), r.inverse().transpose(),
                   q.inverse().transpose())
        # Move self's transpose past other's cyclic part.
        a2 = other.cyclic_power if not self.transposed else (-other.cyclic_power) % 3
        power = (self.cyclic_power + a2) % 3
        transposed = self.transposed != other.transposed
        if phi is None:
            sandwich = other.sandwich
        elif other.sandwich is None:
            sandwich = phi
        else:
            sandwich = tuple(x * y for x, y in zip(phi, other.sandwich))
        if sandwich is not None and all(
                m.bits == Gf2Matrix.identity(m.rows).bits for m in sandwich):
            sandwich = None
        return Transform(power, transposed, sandwich)


def cyclic() -> Transform:
    return Transform(cyclic_power=1)


def transpose_t() -> Transform:
    return Transform(transposed=True)


def sandwich(u: Gf2Matrix, v: Gf2Matrix, w: Gf2Matrix) -> Transform:
    return Transform(sandwich=(u, v, w))


def generators(group: GroupId, n: int) -> list[Transform]:
    if group is GroupId.TRIVIAL:
        return []
    if group is GroupId.CYCLIC:
        return [cyclic()]
    if group is GroupId.CYCLIC_TRANSPOSE:
        return [cyclic(), transpose_t()]
    if n != F_SANDWICH.rows:
        raise ValueError(f"group {group.value} is only defined for n = {F_SANDWICH.rows}")
    return [cyclic(), sandwich(F_SANDWICH, F_SANDWICH, F_SANDWICH)]


# -- orbit expansion ---------------------------------------------------------
#
# Expansion is written against a tiny algebra so both concrete Gf2Matrix
# values and symbolic CNF matrices can flow through the same formulas:
# `tr` is matrix transposition and `fc` is conjugation by F.


def _fconj(m: Gf2Matrix) -> Gf2Matrix:
    return conjugate(m, F_SANDWICH)


def expand_orbit_generic(group: GroupId, tag: str, reps, tr, fc) -> list[tuple]:
    if group is GroupId.TRIVIAL:
        if tag == "id":
            a, b, c = reps
            return [(a, b, c)]
    elif group is GroupId.CYCLIC:
        if tag == "id":
            a, b, c = reps
            return [(a, b, c), (b, c, a), (c, a, b)]
        if tag == "delta":
            (d,) = reps
            return [(d, d, d)]
    elif group is GroupId.CYCLIC_TRANSPOSE:
        if tag == "id":
            a, b, c = reps
            at, bt, ct = tr(a), tr(b), tr(c)
            return [(a, b, c), (b, c, a), (c, a, b),
                    (ct, bt, at), (bt, at, ct), (at, ct, bt)]
        if tag == "t":
            s, h = reps
            ht = tr(h)
            return [(s, h, ht), (h, ht, s), (ht, s, h)]
        if tag == "delta":
            (d,) = reps
            dt = tr(d)
            return [(d, d, d), (dt, dt, dt)]
        if tag == "full":
            (z,) = reps
            return [(z, z, z)]
    elif group is GroupId.CYCLIC_SANDWICH:
        if tag == "id":
            a, b, c = reps
            af, bf, cf = fc(a), fc(b), fc(c)
            return [(a, b, c), (b, c, a), (c, a, b),
                    (af, bf, cf), (bf, cf, af), (cf, af, bf)]
        if tag == "sw":
            x, y, z = reps
            return [(x, y, z), (y, z, x), (z, x, y)]
        if tag == "delta":
            (d,) = reps
            df = fc(d)
            return [(d, d, d), (df, df, df)]
        if tag == "full":
            (u,) = reps
            return [(u, u, u)]
    raise ValueError(f"group {group.value} has no orbit kind {tag!r}")


def validate_reps(group: GroupId, tag: str, reps: tuple[Gf2Matrix, ...]) -> None:
    """Raise ConstraintError when a representative breaks its side condition."""
    kind = kind_by_tag(group, tag)
    if len(reps) != kind.arity:
        raise ConstraintError(f"{group.value}/{tag} expects {kind.arity} matrices, "
                              f"got {len(reps)}")
    if group is GroupId.CYCLIC_TRANSPOSE:
        if tag == "t":
            s, _ = reps
            if s.bits != s.transpose().bits:
                raise ConstraintError("S must be symmetric")
        elif tag == "full":
            (z,) = reps
            if z.bits != z.transpose().bits:
                raise ConstraintError("Z must be symmetric")
    elif group is GroupId.CYCLIC_SANDWICH:
        if tag in ("sw", "full"):
            for role, mat in zip(kind.roles, reps):
                if _fconj(mat).bits != mat.bits:
                    raise ConstraintError(f"{role} must commute with conjugation by F")


def expand_orbit(group: GroupId, tag: str, reps: tuple[Gf2Matrix, ...]) -> list[Triplet]:
    """Expand an orbit representative to its full triplet list."""
    validate_reps(group, tag, reps)
    raw = expand_orbit_generic(group, tag, reps,
                               tr=lambda m: m.transpose(), fc=_fconj)
    return [Triplet(a, b, c) for (a, b, c) in raw]


def delta_degenerate(group: GroupId, d: Gf2Matrix) -> bool:
    """True when the two triplets of a delta orbit coincide (and so cancel)."""
    if group is GroupId.CYCLIC_TRANSPOSE:
        return d.bits == d.transpose().bits
    if group is GroupId.CYCLIC_SANDWICH:
        return _fconj(d).bits == d.bits
    return False


def is_group_symmetric(d: Decomposition, group: GroupId) -> bool:
    """True iff every group generator permutes the triplet multiset."""
    if d.n != d.k or d.k != d.m:
        raise ValueError("symmetry groups apply to square <n,n,n> tensors only")
    base = Counter(t.flat_bits() for t in d.triplets)
    for g in generators(group, d.n):
        mapped = Counter(g.apply(t).flat_bits() for t in d.triplets)
        if mapped != base:
            return False
    return True
