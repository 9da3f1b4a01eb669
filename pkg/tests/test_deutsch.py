import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ttmsim.deutsch import (
    Verdict,
    brute_force_classify,
    build_two_input,
    census,
    deutsch_classify,
    deutsch_jozsa_classify,
    depends_on,
    evaluate_two_input,
    parse_table,
)
from ttmsim.errors import PromiseViolation, RedundantInput
from ttmsim.oracle import truth_census
from ttmsim.railnet import (
    Y,
    Y_BAR,
    Z_BAR,
    CellKind,
    Polarity,
    Rail,
    build_single_cell,
    components,
    is_zero_current,
    source_out_gates,
)


def promise_tables(n):
    for t in itertools.product((0, 1), repeat=1 << n):
        if truth_census(t) != "neither":
            yield t


TWO_INPUT = list(promise_tables(2))


def inputs(n):
    return list(itertools.product((0, 1), repeat=n))


def test_there_are_eight_promise_tables():
    assert len(TWO_INPUT) == 8
    assert sum(truth_census(t) == "balanced" for t in TWO_INPUT) == 6


# --------------------------------------------------------------- single cell


@pytest.mark.parametrize("kind", list(CellKind))
@pytest.mark.parametrize("common_mode", [0, 1])
def test_deutsch_classify_matches_census(kind, common_mode):
    result = deutsch_classify(build_single_cell(kind), common_mode)
    expected = Verdict.BALANCED if kind.balanced else Verdict.CONSTANT
    assert result.verdict is expected
    assert result.queries == 1


def test_deutsch_named_cases():
    assert deutsch_classify(build_single_cell(CellKind.IDENTITY)).verdict is Verdict.BALANCED
    assert deutsch_classify(build_single_cell(CellKind.CONST1)).verdict is Verdict.CONSTANT
    assert deutsch_classify(build_single_cell(CellKind.NEGATION)).verdict is Verdict.BALANCED


# ----------------------------------------------------------- two-input build


@pytest.mark.parametrize("table", TWO_INPUT, ids=lambda t: "".join(map(str, t)))
def test_two_input_evaluation_matches_table(table):
    circuit = build_two_input(table)
    assert tuple(evaluate_two_input(circuit, x) for x in inputs(2)) == table


@pytest.mark.parametrize("table", TWO_INPUT, ids=lambda t: "".join(map(str, t)))
def test_branches_realize_minterms_and_complement(table):
    circuit = build_two_input(table)
    for row, x in zip(table, inputs(2)):
        groups = components(circuit.net, circuit.gates(x)).values()
        joined = lambda a, b: any(a in g and b in g for g in groups)  # noqa: E731
        # the horizontal branch H1 conducts exactly on the 1-rows, V1 on the 0-rows
        assert joined(Y, Z_BAR) == bool(row)
        assert joined(Y, "y_xor_f") == (not row)


@pytest.mark.parametrize("table", TWO_INPUT, ids=lambda t: "".join(map(str, t)))
@pytest.mark.parametrize("common_mode", [0, 1])
def test_deutsch_jozsa_matches_census(table, common_mode):
    circuit = build_two_input(table)
    result = deutsch_jozsa_classify(circuit, common_mode)
    assert result.verdict.value == truth_census(table)
    assert result.queries == 1


def test_named_two_input_functions():
    xnor = parse_table("1001")  # not A and not B, or A and B
    assert deutsch_jozsa_classify(build_two_input(xnor)).verdict is Verdict.BALANCED
    one = build_two_input("1111")
    assert deutsch_jozsa_classify(one).verdict is Verdict.CONSTANT
    xor = build_two_input("0110")
    assert [evaluate_two_input(xor, x) for x in inputs(2)] == [a ^ b for a, b in inputs(2)]
    assert deutsch_jozsa_classify(xor).verdict is Verdict.BALANCED


def test_constant_one_has_only_parallel_horizontal_branches():
    circuit = build_two_input("1111")
    assert {sw.branch[0] for sw in circuit.net.switches} == {"H"}
    assert all({sw.a, sw.b} <= {Y, Z_BAR, "y_xor_f", Y_BAR} for sw in circuit.net.switches)


@pytest.mark.parametrize("table", TWO_INPUT, ids=lambda t: "".join(map(str, t)))
def test_answer_qubit_sits_on_corners_with_one_switch_each(table):
    circuit = build_two_input(table)
    corners = {Y, Y_BAR, Z_BAR, "y_xor_f"}
    pols = []
    for gate in circuit.answer_qubit:
        (sw,) = circuit.net.switches_on(gate)
        assert sw.source in corners
        assert circuit.gate_vars[gate] == circuit.answer
        pols.append(sw.polarity)
    assert pols == [Polarity.N, Polarity.N, Polarity.P, Polarity.P]
    assert census(table) is Verdict.CONSTANT or depends_on(table, circuit.answer, 2)


@pytest.mark.parametrize("table", TWO_INPUT, ids=lambda t: "".join(map(str, t)))
def test_sourcing_out_stays_zero_current(table):
    circuit = build_two_input(table)
    gates, pots = source_out_gates(circuit.net, circuit.gates([1, 1]), circuit.answer_qubit)
    assert is_zero_current(circuit.net, gates, pots)


def test_promise_violation():
    with pytest.raises(PromiseViolation):
        build_two_input("1000")


def test_redundant_answer_variable_rejected():
    # f = A ignores B; asking for B as the answer qubit is refused
    with pytest.raises(RedundantInput):
        build_two_input("0011", answer=1)
    assert build_two_input("0011").answer == 0
    assert build_two_input("0101").answer == 1


def test_wide_tables_need_explicit_flag():
    with pytest.raises(ValueError):
        build_two_input("01101001")
    circuit = build_two_input("01101001", allow_exponential=True)
    assert deutsch_jozsa_classify(circuit).verdict is Verdict.BALANCED
    with pytest.raises(ValueError):
        build_two_input("0" * 32, allow_exponential=True)


def test_bad_tables_rejected():
    for bad in ("", "0", "012", "010"):
        with pytest.raises(ValueError):
            parse_table(bad)


def test_all_three_input_promise_tables():
    for table in promise_tables(3):
        answers = [a for a in range(3) if depends_on(table, a, 3)] or [0]
        for a in answers:
            circuit = build_two_input(table, a, allow_exponential=True)
            assert tuple(evaluate_two_input(circuit, x) for x in inputs(3)) == table
            assert deutsch_jozsa_classify(circuit).verdict.value == truth_census(table)


@given(st.integers(0, 2**32))
@settings(max_examples=25, deadline=None)
def test_random_four_input_balanced_tables(seed):
    rng = random.Random(seed)
    ones = set(rng.sample(range(16), 8))
    table = tuple(int(i in ones) for i in range(16))
    circuit = build_two_input(table, allow_exponential=True)
    assert tuple(evaluate_two_input(circuit, x) for x in inputs(4)) == table
    assert deutsch_jozsa_classify(circuit, seed & 1).verdict is Verdict.BALANCED


def test_gate_levels_follow_inputs():
    circuit = build_two_input("0110")
    gates = circuit.gates([1, 0])
    assert all(gates[g] is Rail.of((1, 0)[v]) for g, v in circuit.gate_vars.items())


# ----------------------------------------------------------------- baseline


def _counted(fn):
    calls = []

    def oracle(x):
        calls.append(x)
        return fn(x)

    return oracle, calls


def test_brute_force_identity_single_input():
    oracle, calls = _counted(lambda x: x)
    assert brute_force_classify(oracle, 1) == (Verdict.BALANCED, 2)
    assert calls == [0, 1]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("value", [0, 1])
def test_brute_force_constant_uses_half_plus_one(n, value):
    oracle, calls = _counted(lambda x: value)
    verdict, queries = brute_force_classify(oracle, n)
    assert verdict is Verdict.CONSTANT
    assert queries == len(calls) == 2 ** (n - 1) + 1


def test_brute_force_first_input_function():
    verdict, queries = brute_force_classify(lambda x: x >> 1, 2)
    assert verdict is Verdict.BALANCED and queries <= 3
