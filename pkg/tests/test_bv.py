import random

import pytest
from hypothesis import given, settings, strategies as st

from ttmsim.bits import dot, to_tuple
from ttmsim.bv import bv_recover, evaluate_cascade, secret_string, synthesize_cascade
from ttmsim.deutsch import Verdict, deutsch_classify
from ttmsim.oracle import brute_force_bv
from ttmsim.railnet import CellKind, QuadMode, QuadVector, Rail, build_single_cell, classify_quad

P, M = Rail.PLUS, Rail.MINUS


def test_cell_kinds_follow_secret():
    c = synthesize_cascade("110")
    kinds = []
    for i in range(3):
        pols = {sw.branch[0] for sw in c.net.switches if sw.gate.startswith(f"x{i + 1}.")}
        kinds.append("balanced" if pols == {"H", "V"} else "constant")
    assert kinds == ["balanced", "balanced", "constant"]
    assert c.cell_count == 3


def test_interface_hides_secret():
    c = synthesize_cascade("110")
    assert "110" not in repr(c)
    assert secret_string(c) == "110"


@pytest.mark.parametrize(
    "s, x, f",
    [("110", "101", 1), ("110", "000", 0), ("110", "111", 0), ("101", "101", 0)],
)
def test_evaluate_examples(s, x, f):
    assert evaluate_cascade(synthesize_cascade(s), x) == f


def test_zero_secret_is_constant_zero():
    c = synthesize_cascade("0000")
    assert all(evaluate_cascade(c, x) == 0 for x in range(16))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_evaluate_matches_arithmetic_exhaustively(n):
    for s in range(1 << n):
        c = synthesize_cascade(s, n)
        for x in range(1 << n):
            assert evaluate_cascade(c, x) == dot(s, x)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_output_swap_rule(n):
    for s in range(1 << n):
        c = synthesize_cascade(s, n)
        f, f_bar = c.output_nodes()
        z, zb = c.rails[-1]
        # the label chain and the even swap always land f on the last complement rail
        assert (f, f_bar) == (zb, z)


def test_worked_recovery_vectors():
    rec = bv_recover(synthesize_cascade("110"))
    assert rec.quads[0] == QuadVector(M, M, P, M)
    assert rec.quads[1] == QuadVector(M, M, P, M)
    assert rec.quads[2] == QuadVector(P, M, P, M)
    assert classify_quad(rec.quads[0]) is QuadMode.DIFFERENTIAL_PAIRS
    assert classify_quad(rec.quads[2]) is QuadMode.COMMON_PAIRS
    assert rec.secret == (1, 1, 0) and rec.queries == 1


def test_single_cell_reduces_to_deutsch():
    rec = bv_recover(synthesize_cascade("1"))
    assert classify_quad(rec.quads[0]) is QuadMode.DIFFERENTIAL_PAIRS
    assert deutsch_classify(build_single_cell(CellKind.IDENTITY)).verdict is Verdict.BALANCED


def test_all_ones_width_eight_against_classical_oracle():
    c = synthesize_cascade("1" * 8)
    s, queries = brute_force_bv(lambda x: evaluate_cascade(c, x), 8)
    assert queries == 9
    assert bv_recover(c).secret == to_tuple(s, 8) == (1,) * 8


@given(st.integers(1, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
@settings(max_examples=150, deadline=None)
def test_round_trip(ns):
    n, s = ns
    assert bv_recover(synthesize_cascade(s, n)).secret == to_tuple(s, n)


def test_round_trip_seeded_width_64():
    rng = random.Random(64)
    for _ in range(200):
        s = rng.getrandbits(64)
        assert bv_recover(synthesize_cascade(s, 64)).secret == to_tuple(s, 64)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16, 32])
def test_hardware_grows_linearly(n):
    c = synthesize_cascade(0, n)
    assert c.cell_count == n
    assert len(c.net.switches) == 4 * n
    assert len(c.net.nodes) == 2 * n + 2


def test_integer_secret_needs_width():
    with pytest.raises(ValueError):
        synthesize_cascade(5)
    with pytest.raises(ValueError):
        synthesize_cascade("")
