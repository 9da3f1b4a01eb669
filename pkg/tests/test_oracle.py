import random

import pytest
from hypothesis import given, settings, strategies as st

from ttmsim.errors import SecretZero
from ttmsim.oracle import (
    Gf2System,
    brute_force_bv,
    brute_force_simon,
    enumerate_separable,
    exhaustive_verify,
    gf2_solve,
    truth_census,
)
from ttmsim.simon import make_instance, worked_instance


def rows_of(*texts):
    return Gf2System(tuple(tuple(int(c) for c in t) for t in texts), (0,) * len(texts))


def test_worked_system():
    sol = gf2_solve(rows_of("0110", "1111", "0010", "1011"))
    assert sol.rank == 3
    assert sol.nullspace == ((1, 0, 0, 1),)
    assert sol.nullspace_ints() == {0, 0b1001}


def test_identity_rows_full_rank():
    sol = gf2_solve(rows_of("100", "010", "001"))
    assert sol.rank == 3 and sol.nullspace == () and sol.particular == (0, 0, 0)


def test_inconsistent_system():
    sol = gf2_solve(Gf2System(((1, 1), (1, 1)), (0, 1)))
    assert not sol.consistent and sol.particular is None


def test_particular_solution_solves_system():
    sys_ = Gf2System(((1, 1, 0), (0, 1, 1)), (1, 0))
    sol = gf2_solve(sys_)
    for row, rhs in zip(sys_.rows, sys_.rhs):
        assert sum(a & x for a, x in zip(row, sol.particular)) % 2 == rhs


def test_mixed_widths_rejected():
    with pytest.raises(ValueError):
        Gf2System(((1, 0), (1,)), (0, 0))


@given(st.integers(1, 9), st.integers(1, 12), st.integers(0, 2**32))
@settings(max_examples=200)
def test_permutation_invariance(n, m, seed):
    rng = random.Random(seed)
    rows = [tuple(rng.getrandbits(1) for _ in range(n)) for _ in range(m)]
    rhs = [rng.getrandbits(1) for _ in range(m)]
    base = gf2_solve(Gf2System(tuple(rows), tuple(rhs)))
    order = list(range(m))
    rng.shuffle(order)
    other = gf2_solve(Gf2System(tuple(rows[i] for i in order), tuple(rhs[i] for i in order)))
    assert base.rank == other.rank
    assert base.consistent == other.consistent
    assert base.nullspace_ints() == other.nullspace_ints()
    assert len(base.nullspace_ints()) == 2 ** (n - base.rank)


def test_brute_force_simon_worked_instance():
    secret, queries = brute_force_simon(worked_instance())
    assert secret == 0b1001 and queries <= 9


def test_brute_force_simon_single_bit():
    assert brute_force_simon(make_instance(1, 1, 0)) == (1, 2)


def test_brute_force_query_bound():
    rng = random.Random(12)
    for n in range(1, 13):
        for _ in range(5):
            inst = make_instance(n, rng.randrange(1, 1 << n), rng.getrandbits(32))
            secret, queries = brute_force_simon(inst)
            assert secret == inst.secret
            assert queries <= 2 ** (n - 1) + 1


def test_enumerate_separable_worked_list():
    got = enumerate_separable(0b1001, 4)
    expected = {0b0100, 0b0010, 0b0110, 0b1001, 0b1101, 0b1011, 0b1111}
    assert set(got) == expected and len(got) == 7


def test_enumerate_separable_small():
    assert enumerate_separable(1, 1) == []
    assert enumerate_separable(0b11, 2) == [0b11]
    with pytest.raises(SecretZero):
        enumerate_separable(0, 3)


@pytest.mark.parametrize("n", range(1, 13))
def test_enumerate_separable_count(n):
    secret = random.Random(n).randrange(1, 1 << n)
    vecs = enumerate_separable(secret, n)
    assert len(vecs) == len(set(vecs)) == 2 ** (n - 1) - 1
    assert all(bin(v & secret).count("1") % 2 == 0 for v in vecs)


def test_exhaustive_verify_worked_rows():
    rows = [0b0110, 0b1111, 0b0010, 0b1011]
    assert exhaustive_verify(rows, 0b1001, worked_instance())
    assert exhaustive_verify(rows, 0b1001, worked_instance(), complements=[1, 1, 0, 1])


def test_exhaustive_verify_rejects_non_orthogonal_row():
    assert not exhaustive_verify([0b1000, 0, 0, 0], 0b1001, worked_instance())


def test_exhaustive_verify_size_cap():
    with pytest.raises(ValueError):
        exhaustive_verify([0] * 13, 1, make_instance(13, 1, 0))


def test_brute_force_bv():
    s, queries = brute_force_bv(lambda x: bin(x & 0b1011).count("1") % 2, 4)
    assert (s, queries) == (0b1011, 5)


def test_truth_census():
    assert truth_census((0, 0)) == "constant"
    assert truth_census((0, 1, 1, 0)) == "balanced"
    assert truth_census((0, 1, 1, 1)) == "neither"
