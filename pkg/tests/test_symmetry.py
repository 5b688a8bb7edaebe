import random

import pytest

from mmtsat.gf2 import Gf2Matrix
from mmtsat.symmetry import (
    ConstraintError,
    F_SANDWICH,
    GroupId,
    Transform,
    cyclic,
    delta_degenerate,
    expand_orbit,
    generators,
    is_group_symmetric,
    kind_by_tag,
    orbit_kinds,
    sandwich,
    total_rank,
    transpose_t,
)
from mmtsat.tensor import Decomposition, Triplet, evaluate, verify

from conftest import (
    STRASSEN_MOD2,
    random_f_commuting,
    random_invertible,
    random_matrix,
    random_symmetric_matrix,
    random_triplet,
)


def test_group_names_round_trip():
    for g in GroupId:
        assert GroupId.from_name(g.value) is g
    with pytest.raises(ValueError):
        GroupId.from_name("dihedral")


def test_orbit_kind_tables():
    def table(group):
        return [(k.tag, k.arity, k.weight) for k in orbit_kinds(group)]
    assert table(GroupId.TRIVIAL) == [("id", 3, 1)]
    assert table(GroupId.CYCLIC) == [("id", 3, 3), ("delta", 1, 1)]
    assert table(GroupId.CYCLIC_TRANSPOSE) == [
        ("id", 3, 6), ("t", 2, 3), ("delta", 1, 2), ("full", 1, 1)]
    assert table(GroupId.CYCLIC_SANDWICH) == [
        ("id", 3, 6), ("sw", 3, 3), ("delta", 1, 2), ("full", 1, 1)]
    assert kind_by_tag(GroupId.CYCLIC, "delta").roles == ("D",)
    with pytest.raises(ValueError):
        kind_by_tag(GroupId.CYCLIC, "t")


def test_total_rank_is_weighted_sum():
    assert total_rank(GroupId.CYCLIC, {"id": 2, "delta": 1}) == 7
    assert total_rank(GroupId.CYCLIC_TRANSPOSE,
                      {"id": 1, "t": 1, "delta": 1, "full": 1}) == 12
    assert total_rank(GroupId.CYCLIC_SANDWICH, {"sw": 4, "delta": 1}) == 14
    with pytest.raises(ValueError):
        total_rank(GroupId.CYCLIC, {"t": 1})


def test_transform_apply_examples():
    rng = random.Random(0)
    t = random_triplet(rng, 3)
    c = cyclic().apply(t)
    assert (c.a, c.b, c.c) == (t.b, t.c, t.a)
    tp = transpose_t().apply(t)
    assert (tp.a.bits, tp.b.bits, tp.c.bits) == \
        (t.c.transpose().bits, t.b.transpose().bits, t.a.transpose().bits)
    f = F_SANDWICH
    sw = sandwich(f, f, f).apply(t)
    finv = f.inverse()
    assert sw.a.bits == (f * t.a * finv).bits


def test_group_laws_on_random_triplets():
    rng = random.Random(42)
    cyc, tt = cyclic(), transpose_t()
    for _ in range(1000):
        t = random_triplet(rng, 3)
        # cyc^3 = id and transpose^2 = id
        assert cyc.apply(cyc.apply(cyc.apply(t))) == t
        assert tt.apply(tt.apply(t)) == t
        # cyc o transpose = transpose o cyc^-1
        lhs = cyc.apply(tt.apply(t))
        rhs = tt.apply(cyc.apply(cyc.apply(t)))
        assert lhs == rhs
        # sandwich by (F,F,F) is an involution since F*F = I
        sw = sandwich(F_SANDWICH, F_SANDWICH, F_SANDWICH)
        assert sw.apply(sw.apply(t)) == t


def test_sandwich_composition_law():
    rng = random.Random(43)
    for _ in range(200):
        u1, v1, w1 = (random_invertible(rng, 3) for _ in range(3))
        u2, v2, w2 = (random_invertible(rng, 3) for _ in range(3))
        t = random_triplet(rng, 3)
        a = sandwich(u1, v1, w1).apply(sandwich(u2, v2, w2).apply(t))
        b = sandwich(u1 * u2, v1 * v2, w1 * w2).apply(t)
        assert a == b


def test_compose_matches_apply():
    rng = random.Random(44)
    pool = []
    for _ in range(30):
        pool.append(Transform(cyclic_power=rng.randint(0, 2),
                              transposed=bool(rng.getrandbits(1)),
                              sandwich=None if rng.getrandbits(1) else
                              tuple(random_invertible(rng, 3) for _ in range(3))))
    for _ in range(300):
        g1, g2 = rng.choice(pool), rng.choice(pool)
        t = random_triplet(rng, 3)
        assert g1.compose(g2).apply(t) == g1.apply(g2.apply(t))


def test_sandwich_rejects_singular():
    with pytest.raises(ConstraintError):
        sandwich(Gf2Matrix.zero(3, 3), F_SANDWICH, F_SANDWICH)


def test_expansion_lengths():
    rng = random.Random(45)
    a, b, c = (random_matrix(rng, 3) for _ in range(3))
    s = random_symmetric_matrix(rng, 3)
    x = random_f_commuting(rng, 3)
    lengths = {
        (GroupId.TRIVIAL, "id", (a, b, c)): 1,
        (GroupId.CYCLIC, "id", (a, b, c)): 3,
        (GroupId.CYCLIC, "delta", (a,)): 1,
        (GroupId.CYCLIC_TRANSPOSE, "id", (a, b, c)): 6,
        (GroupId.CYCLIC_TRANSPOSE, "t", (s, b)): 3,
        (GroupId.CYCLIC_TRANSPOSE, "delta", (a,)): 2,
        (GroupId.CYCLIC_TRANSPOSE, "full", (s,)): 1,
        (GroupId.CYCLIC_SANDWICH, "id", (a, b, c)): 6,
        (GroupId.CYCLIC_SANDWICH, "sw", (x, x, x)): 3,
        (GroupId.CYCLIC_SANDWICH, "delta", (a,)): 2,
        (GroupId.CYCLIC_SANDWICH, "full", (x,)): 1,
    }
    for (group, tag, reps), want in lengths.items():
        assert len(expand_orbit(group, tag, reps)) == want


def test_expansion_side_conditions():
    rng = random.Random(46)
    not_sym = Gf2Matrix.parse("010;000;000")
    with pytest.raises(ConstraintError):
        expand_orbit(GroupId.CYCLIC_TRANSPOSE, "t",
                     (not_sym, random_matrix(rng, 3)))
    with pytest.raises(ConstraintError):
        expand_orbit(GroupId.CYCLIC_TRANSPOSE, "full", (not_sym,))
    not_comm = Gf2Matrix.parse("100;000;000")
    with pytest.raises(ConstraintError):
        expand_orbit(GroupId.CYCLIC_SANDWICH, "full", (not_comm,))
    with pytest.raises(ConstraintError):
        expand_orbit(GroupId.CYCLIC, "id", (not_sym,))  # wrong arity


def test_orbit_tensor_invariance():
    # The XOR of an orbit's outer products is fixed by every generator.
    rng = random.Random(47)
    for group in (GroupId.CYCLIC, GroupId.CYCLIC_TRANSPOSE,
                  GroupId.CYCLIC_SANDWICH):
        for _ in range(100):
            for kind in orbit_kinds(group):
                rep = []
                for role in kind.roles:
                    if (group, kind.tag, role) in {
                            (GroupId.CYCLIC_TRANSPOSE, "t", "S"),
                            (GroupId.CYCLIC_TRANSPOSE, "full", "Z")}:
                        rep.append(random_symmetric_matrix(rng, 3))
                    elif group is GroupId.CYCLIC_SANDWICH and kind.tag in ("sw", "full"):
                        rep.append(random_f_commuting(rng, 3))
                    else:
                        rep.append(random_matrix(rng, 3))
                triplets = expand_orbit(group, kind.tag, tuple(rep))
                base = evaluate(Decomposition(3, 3, 3, tuple(triplets)))
                for g in generators(group, 3):
                    mapped = tuple(g.apply(t) for t in triplets)
                    assert evaluate(Decomposition(3, 3, 3, mapped)).bits == base.bits


def test_generators_preserve_validity(strassen):
    rng = random.Random(48)
    transforms = [cyclic(), transpose_t()]
    for _ in range(5):
        transforms.append(sandwich(*(random_invertible(rng, 2) for _ in range(3))))
    for g in transforms:
        mapped = Decomposition(2, 2, 2,
                               tuple(g.apply(t) for t in strassen.triplets))
        assert verify(mapped)


def test_delta_degenerate():
    sym = Gf2Matrix.parse("010;100;000")
    assert delta_degenerate(GroupId.CYCLIC_TRANSPOSE, sym)
    assert not delta_degenerate(GroupId.CYCLIC_TRANSPOSE,
                                Gf2Matrix.parse("010;000;000"))
    comm = Gf2Matrix.identity(3)
    assert delta_degenerate(GroupId.CYCLIC_SANDWICH, comm)
    assert not delta_degenerate(GroupId.CYCLIC, Gf2Matrix.identity(3))


def test_is_group_symmetric():
    # Strassen's mod-2 decomposition is cyclic symmetric as listed.
    assert is_group_symmetric(STRASSEN_MOD2, GroupId.CYCLIC)
    assert is_group_symmetric(STRASSEN_MOD2, GroupId.TRIVIAL)
    # A single asymmetric triplet is not cyclic symmetric.
    t = Triplet(Gf2Matrix.parse("10;00"), Gf2Matrix.parse("01;00"),
                Gf2Matrix.parse("00;10"))
    d = Decomposition(2, 2, 2, (t,))
    assert not is_group_symmetric(d, GroupId.CYCLIC)
    with pytest.raises(ValueError):
        is_group_symmetric(Decomposition(2, 1, 2, ()), GroupId.CYCLIC)


def test_sandwich_group_needs_n3():
    with pytest.raises(ValueError):
        generators(GroupId.CYCLIC_SANDWICH, 2)
    assert len(generators(GroupId.CYCLIC_SANDWICH, 3)) == 2
    assert generators(GroupId.TRIVIAL, 2) == []
