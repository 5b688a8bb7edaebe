"""Canonical forms for symmetric decompositions.

canonicalize() rewrites a symmetric decomposition into the lex-min,
merged, strictly sorted normal form that the SAT encoder also enforces;
check_canonical() reports every violated constraint so the two stay in
lockstep.  The rewrite always preserves the evaluated tensor and never
increases total rank.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .gf2 import Gf2Matrix, conjugate
from .symmetry import (
    ConstraintError,
    F_SANDWICH,
    GroupId,
    delta_degenerate,
    expand_orbit,
    kind_by_tag,
    orbit_kinds,
    total_rank,
    validate_reps,
)
from .tensor import Decomposition, Triplet

Rep = tuple[Gf2Matrix, ...]


@dataclass(frozen=True)
class SymmetricDecomposition:
    group: GroupId
    n: int
    orbits: dict[str, tuple[Rep, ...]]

    def __post_init__(self):
        tags = {k.tag for k in orbit_kinds(self.group)}
        for tag, reps in self.orbits.items():
            if tag not in tags:
                raise ValueError(f"group {self.group.value} has no orbit kind {tag!r}")
            for rep in reps:
                validate_reps(self.group, tag, rep)
                for mat in rep:
                    if (mat.rows, mat.cols) != (self.n, self.n):
                        raise ValueError("representative shape disagrees with n")

    def counts(self) -> dict[str, int]:
        return {k.tag: len(self.orbits.get(k.tag, ())) for k in orbit_kinds(self.group)}

    def total_rank(self) -> int:
        return total_rank(self.group, self.counts())

    def expand(self) -> Decomposition:
        triplets: list[Triplet] = []
        for kind in orbit_kinds(self.group):
            for rep in self.orbits.get(kind.tag, ()):
                triplets.extend(expand_orbit(self.group, kind.tag, rep))
        return Decomposition(self.n, self.n, self.n, tuple(triplets))


def _rep_key(rep: Rep) -> tuple[int, ...]:
    out: tuple[int, ...] = ()
    for m in rep:
        out += m.flat_bits()
    return out


def _lex_min_rotation(rep: Rep) -> Rep:
    rots = [tuple(rep[i:] + rep[:i]) for i in range(len(rep))]
    return min(rots, key=_rep_key)


def _parity_reduce(reps: list[Rep]) -> list[Rep]:
    """Drop pairs of identical representatives (their orbits cancel mod 2)."""
    counts = Counter((_rep_key(r), r) for r in reps)
    out = [r for (_, r), c in counts.items() if c % 2 == 1]
    out.sort(key=_rep_key)
    return out


def _canonical_pass(group: GroupId, n: int,
                    orbits: dict[str, list[Rep]]) -> dict[str, list[Rep]]:
    kinds = [k.tag for k in orbit_kinds(group)]
    new: dict[str, list[Rep]] = {tag: [] for tag in kinds}

    # Normalize id orbits: drop zero contributions, reduce internal
    # duplication mod 2 (a representative fixed by the cyclic generator
    # degenerates into a delta orbit), and replace by the lex-min triplet.
    for rep in orbits.get("id", []):
        if any(m.is_zero() for m in rep):
            continue
        expansion = expand_orbit(group, "id", rep)
        full = len(expansion)
        surviving = [t for t, c in Counter(expansion).items() if c % 2 == 1]
        if not surviving:
            continue
        if len(surviving) < full:
            # Stabilizer contains the cyclic generator, so A = B = C and
            # the orbit collapses to a single delta orbit mod 2.
            if group is GroupId.TRIVIAL:
                raise AssertionError("trivial orbits cannot degenerate")
            new["delta"].append((rep[0],))
            continue
        best = min(expansion, key=lambda t: t.flat_bits())
        new["id"].append((best.a, best.b, best.c))

    if group is GroupId.CYCLIC_TRANSPOSE:
        for (s, h) in orbits.get("t", []):
            if s.is_zero() or h.is_zero():
                continue
            if s.bits == h.bits:
                # All three triplets coincide as (S,S,S); mod 2 that is a
                # single full orbit with Z = S (S is symmetric).
                new["full"].append((s,))
            else:
                new["t"].append((s, h))

    if group is GroupId.CYCLIC_SANDWICH:
        for rep in orbits.get("sw", []):
            if any(m.is_zero() for m in rep):
                continue
            x, y, z = rep
            if x.bits == y.bits == z.bits:
                new["full"].append((x,))
            else:
                new["sw"].append(_lex_min_rotation(rep))

    for (d,) in orbits.get("delta", []):
        if d.is_zero():
            continue
        if delta_degenerate(group, d):
            continue  # the two orbit triplets coincide and cancel mod 2
        if group is GroupId.CYCLIC_TRANSPOSE:
            d = min(d, d.transpose(), key=lambda m: m.flat_bits())
        elif group is GroupId.CYCLIC_SANDWICH:
            d = min(d, conjugate(d, F_SANDWICH), key=lambda m: m.flat_bits())
        new["delta"].append((d,))

    for (z,) in orbits.get("full", []):
        if z.is_zero():
            continue
        new["full"].append((z,))

    # Merge passes: equal keys add their free part; zero sums vanish.
    if group is GroupId.TRIVIAL:
        new["id"] = _parity_reduce(new["id"])
    else:
        merged: dict[tuple, Gf2Matrix] = {}
        order: list[tuple] = []
        for (a, b, c) in new["id"]:
            key = (a, b)
            if key not in merged:
                merged[key] = c
                order.append(key)
            else:
                merged[key] = merged[key] + c
        new["id"] = [(a, b, merged[(a, b)]) for (a, b) in order
                     if not merged[(a, b)].is_zero()]
        new["id"].sort(key=_rep_key)

    if group is GroupId.CYCLIC_TRANSPOSE:
        acc: dict[Gf2Matrix, Gf2Matrix] = {}
        for (s, h) in new["t"]:
            acc[h] = acc[h] + s if h in acc else s
        new["t"] = sorted(((s, h) for h, s in acc.items() if not s.is_zero()),
                          key=lambda rep: _rep_key((rep[1], rep[0])))

    if group is GroupId.CYCLIC_SANDWICH:
        accs: dict[tuple, Gf2Matrix] = {}
        order2: list[tuple] = []
        for (x, y, z) in new["sw"]:
            key = (x, y)
            if key not in accs:
                accs[key] = z
                order2.append(key)
            else:
                accs[key] = accs[key] + z
        new["sw"] = [(x, y, accs[(x, y)]) for (x, y) in order2
                     if not accs[(x, y)].is_zero()]
        new["sw"].sort(key=_rep_key)

    if "delta" in new:
        new["delta"] = _parity_reduce(new["delta"])
    if "full" in new:
        new["full"] = _parity_reduce(new["full"])
    return {tag: new[tag] for tag in kinds}


def canonicalize(sd: SymmetricDecomposition) -> SymmetricDecomposition:
    """Normal form: lex-min representatives, merged, strictly sorted.

    Merging can re-open the lex-min step (and vice versa), so the passes
    run to a fixed point; each structural change strictly reduces rank,
    which bounds the iteration.
    """
    orbits = {k.tag: list(sd.orbits.get(k.tag, ())) for k in orbit_kinds(sd.group)}
    for _ in range(sd.total_rank() + 2):
        new = _canonical_pass(sd.group, sd.n, orbits)
        if new == orbits:
            break
        orbits = new
    else:
        raise AssertionError("canonicalize failed to reach a fixed point")
    return SymmetricDecomposition(sd.group, sd.n,
                                  {tag: tuple(reps) for tag, reps in orbits.items()})


def check_canonical(sd: SymmetricDecomposition) -> list[str]:
    """All violated canonical-form constraints (empty list iff canonical).

    The checks here mirror, constraint for constraint, what the encoder
    emits to the solver.
    """
    v: list[str] = []
    group = sd.group

    def _key_chain(tag: str, reps, key, what: str) -> None:
        for i in range(len(reps) - 1):
            if not key(reps[i]) < key(reps[i + 1]):
                v.append(f"{tag}[{i}]: {what} not strictly lex increasing")

    for tag, reps in sd.orbits.items():
        for i, rep in enumerate(reps):
            try:
                validate_reps(group, tag, rep)
            except ConstraintError as exc:
                v.append(f"{tag}[{i}]: {exc}")

    id_reps = sd.orbits.get("id", ())
    if group is not GroupId.TRIVIAL:
        for i, rep in enumerate(id_reps):
            try:
                expansion = expand_orbit(group, "id", rep)
            except ConstraintError:
                continue
            me = expansion[0].flat_bits()
            if any(me >= t.flat_bits() for t in expansion[1:]):
                v.append(f"id[{i}]: representative not the strict lex minimum "
                         f"of its orbit")
        _key_chain("id", id_reps, lambda r: _rep_key((r[0], r[1])), "(A,B) key")
    else:
        _key_chain("id", id_reps, _rep_key, "triplet")

    if group is GroupId.CYCLIC_TRANSPOSE:
        _key_chain("t", sd.orbits.get("t", ()), lambda r: r[1].flat_bits(), "H key")
        for i, (d,) in enumerate(sd.orbits.get("delta", ())):
            if not d.flat_bits() < d.transpose().flat_bits():
                v.append(f"delta[{i}]: D not strictly lex below its transpose")
        _key_chain("full", sd.orbits.get("full", ()), _rep_key, "Z")
    elif group is GroupId.CYCLIC_SANDWICH:
        sw_reps = sd.orbits.get("sw", ())
        for i, rep in enumerate(sw_reps):
            me = _rep_key(rep)
            rots = [_rep_key(tuple(rep[j:] + rep[:j])) for j in (1, 2)]
            if any(me >= r for r in rots):
                v.append(f"sw[{i}]: representative not the strict lex minimum "
                         f"of its rotations")
        _key_chain("sw", sw_reps, lambda r: _rep_key((r[0], r[1])), "(X,Y) key")
        for i, (d,) in enumerate(sd.orbits.get("delta", ())):
            if not d.flat_bits() < conjugate(d, F_SANDWICH).flat_bits():
                v.append(f"delta[{i}]: D not strictly lex below its F-conjugate")
        _key_chain("full", sd.orbits.get("full", ()), _rep_key, "U")

    if group in (GroupId.CYCLIC, GroupId.CYCLIC_TRANSPOSE, GroupId.CYCLIC_SANDWICH):
        _key_chain("delta", sd.orbits.get("delta", ()), _rep_key, "D")
    return v


# -- JSON interchange --------------------------------------------------------


def symmetric_to_json(sd: SymmetricDecomposition) -> dict:
    return {
        "group": sd.group.value,
        "n": sd.n,
        "orbits": {tag: [[m.format() for m in rep] for rep in reps]
                   for tag, reps in sd.orbits.items()},
    }


def symmetric_from_json(obj: dict) -> SymmetricDecomposition:
    group = GroupId.from_name(obj["group"])
    orbits = {}
    for tag, reps in obj["orbits"].items():
        kind_by_tag(group, tag)
        orbits[tag] = tuple(tuple(Gf2Matrix.parse(s) for s in rep) for rep in reps)
    return SymmetricDecomposition(group, obj["n"], orbits)


def dump_symmetric(sd: SymmetricDecomposition, path) -> None:
    with open(path, "w") as fh:
        json.dump(symmetric_to_json(sd), fh)
        fh.write("\n")


def load_symmetric(path) -> SymmetricDecomposition:
    with open(path) as fh:
        return symmetric_from_json(json.load(fh))
