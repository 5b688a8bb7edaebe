import random
import shutil

import pytest

from mmtsat.canonical import SymmetricDecomposition
from mmtsat.gf2 import Gf2Matrix, conjugate
from mmtsat.symmetry import F_SANDWICH, GroupId, orbit_kinds
from mmtsat.tensor import Decomposition, Triplet

# Default external solver; any DIMACS solver printing s/v lines works.
SOLVER_CMD = "splr -q -C -r - {cnf}"


def solver_available() -> bool:
    return shutil.which(SOLVER_CMD.split()[0]) is not None


requires_solver = pytest.mark.skipif(
    not solver_available(), reason="no DIMACS solver on PATH")


@pytest.fixture
def solver_cmd():
    if not solver_available():
        pytest.skip("no DIMACS solver on PATH")
    return SOLVER_CMD


def _m(text: str) -> Gf2Matrix:
    return Gf2Matrix.parse(text)


# Strassen's rank-7 decomposition of <2,2,2>, coefficients reduced mod 2.
STRASSEN_MOD2 = Decomposition(2, 2, 2, (
    Triplet(_m("10;01"), _m("10;01"), _m("10;01")),
    Triplet(_m("00;11"), _m("10;00"), _m("01;01")),
    Triplet(_m("10;00"), _m("01;01"), _m("00;11")),
    Triplet(_m("00;01"), _m("10;10"), _m("11;00")),
    Triplet(_m("11;00"), _m("00;01"), _m("10;10")),
    Triplet(_m("10;10"), _m("11;00"), _m("00;01")),
    Triplet(_m("01;01"), _m("00;11"), _m("10;00")),
))


@pytest.fixture
def strassen():
    return STRASSEN_MOD2


def random_matrix(rng: random.Random, n: int) -> Gf2Matrix:
    return Gf2Matrix(n, n, rng.getrandbits(n * n))


def random_invertible(rng: random.Random, n: int) -> Gf2Matrix:
    while True:
        m = random_matrix(rng, n)
        if m.is_invertible():
            return m


def random_triplet(rng: random.Random, n: int) -> Triplet:
    return Triplet(random_matrix(rng, n), random_matrix(rng, n),
                   random_matrix(rng, n))


def random_symmetric_matrix(rng: random.Random, n: int) -> Gf2Matrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.getrandbits(1)
    return Gf2Matrix.from_rows(rows)


_F_COMMUTING_3 = [m for b in range(1 << 9)
                  for m in [Gf2Matrix(3, 3, b)]
                  if conjugate(m, F_SANDWICH).bits == m.bits]


def random_f_commuting(rng: random.Random, n: int) -> Gf2Matrix:
    assert n == 3
    return rng.choice(_F_COMMUTING_3)


def random_symmetric_decomposition(rng: random.Random, group: GroupId,
                                   n: int, max_per_kind: int = 2
                                   ) -> SymmetricDecomposition:
    orbits = {}
    for kind in orbit_kinds(group):
        reps = []
        for _ in range(rng.randint(0, max_per_kind)):
            rep = []
            for role in kind.roles:
                if (group, kind.tag, role) in {
                        (GroupId.CYCLIC_TRANSPOSE, "t", "S"),
                        (GroupId.CYCLIC_TRANSPOSE, "full", "Z")}:
                    rep.append(random_symmetric_matrix(rng, n))
                elif group is GroupId.CYCLIC_SANDWICH and kind.tag in ("sw", "full"):
                    rep.append(random_f_commuting(rng, n))
                else:
                    rep.append(random_matrix(rng, n))
            reps.append(tuple(rep))
        orbits[kind.tag] = tuple(reps)
    return SymmetricDecomposition(group, n, orbits)
