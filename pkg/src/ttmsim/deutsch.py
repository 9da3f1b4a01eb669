"""Balanced/constant classification by one source-out step, plus the classical baseline."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import PromiseViolation, RedundantInput
from .railnet import (
    Y,
    Y_BAR,
    Z,
    Z_BAR,
    Polarity,
    QuadVector,
    Rail,
    SingleCell,
    SwitchNet,
    oriented_switch,
    resolve,
    source_out,
    source_out_gates,
    sum_detector,
)


class Verdict(enum.Enum):
    BALANCED = "balanced"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    queries: int
    quad: QuadVector | None = None


def census(table: Sequence[int]) -> Verdict:
    ones = sum(table)
    if ones in (0, len(table)):
        return Verdict.CONSTANT
    if 2 * ones == len(table):
        return Verdict.BALANCED
    raise PromiseViolation(f"table with {ones} ones out of {len(table)} is neither balanced nor constant")


def parse_table(table) -> tuple[int, ...]:
    """Truth table as a tuple indexed by the input with the first variable as MSB."""
    if isinstance(table, str):
        table = [int(c) for c in table.strip()]
    bits = tuple(int(b) for b in table)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("truth table entries must be 0 or 1")
    n = len(bits).bit_length() - 1
    if n < 1 or len(bits) != 1 << n:
        raise ValueError(f"truth table length {len(bits)} is not a power of two >= 2")
    return bits


def depends_on(table: Sequence[int], var: int, n: int) -> bool:
    mask = 1 << (n - 1 - var)
    return any(table[i] != table[i ^ mask] for i in range(len(table)))


@dataclass(frozen=True)
class TwoInputCircuit:
    """Minterm/maxterm network for a promise table.

    ``gate_vars`` maps each gate node to the input it follows.  The answer
    qubit gates are ordered (x_N, x_N_bar, x_P, x_P_bar).
    """

    table: tuple
    n: int
    answer: int
    net: SwitchNet
    gate_vars: Mapping[str, int]
    answer_qubit: tuple

    def gates(self, inputs: Sequence[int]) -> dict[str, Rail]:
        return {g: Rail.of(inputs[v]) for g, v in self.gate_vars.items()}


class _Builder:
    def __init__(self):
        self.switches = []
        self.gate_vars: dict[str, int] = {}
        self._count = itertools.count()

    def node(self, tag: str) -> str:
        return f"{tag}.{next(self._count)}"

    def add(self, pol: Polarity, var: int, high: str, low: str, branch: str, gate: str | None = None) -> str:
        gate = gate or f"g{next(self._count)}"
        self.gate_vars[gate] = var
        self.switches.append(oriented_switch(pol, gate, high, low, branch))
        return gate

    def literal(self, var: int, value: int, high: str, low: str, branch: str):
        # a true literal x_v is an N switch; its complement is a P switch on the same line
        self.add(Polarity.N if value else Polarity.P, var, high, low, branch)

    def sop(self, minterms, others, high, low, branch):
        """Parallel chains, one per minterm, each a series of literals."""
        for term in minterms:
            prev = high
            for k, (var, value) in enumerate(zip(others, term)):
                nxt = low if k == len(others) - 1 else self.node(branch)
                self.literal(var, value, prev, nxt, branch)
                prev = nxt

    def pos(self, minterms, others, high, low, branch):
        """Series of parallel groups, each the complement of one minterm."""
        prev = high
        for k, term in enumerate(minterms):
            nxt = low if k == len(minterms) - 1 else self.node(branch)
            for var, value in zip(others, term):
                self.literal(var, 1 - value, prev, nxt, branch)
            prev = nxt


def build_two_input(table, answer: int | None = None, *, allow_exponential: bool = False) -> TwoInputCircuit:
    """Network for a promise table on 1 or 2 inputs (3-4 with ``allow_exponential``).

    Each of the four branches is expanded on the answer variable, so that
    variable's N and P switches sit next to the circuit corners.  The rest of
    a branch is the cofactor as minterm chains (horizontal branches) or as
    their DeMorgan complement (vertical branches).
    """
    bits = parse_table(table)
    n = len(bits).bit_length() - 1
    if n > 4 or (n > 2 and not allow_exponential):
        raise ValueError(f"{n}-input networks need allow_exponential=True and n <= 4")
    verdict = census(bits)
    if answer is None:
        live = [v for v in range(n) if depends_on(bits, v, n)]
        answer = live[0] if live else 0
    if not 0 <= answer < n:
        raise ValueError(f"answer input {answer + 1} out of range for {n} inputs")
    if verdict is Verdict.BALANCED and not depends_on(bits, answer, n):
        raise RedundantInput(f"input {answer + 1} never changes the balanced function")

    others = [v for v in range(n) if v != answer]

    def row(a: int, term) -> int:
        full = dict(zip(others, term))
        full[answer] = a
        return bits[sum(full[v] << (n - 1 - v) for v in range(n))]

    terms = list(itertools.product((0, 1), repeat=len(others)))
    minterms = {a: [t for t in terms if row(a, t)] for a in (0, 1)}

    b = _Builder()
    branches = {"H1": (Y, Z_BAR), "H2": (Z, Y_BAR), "V1": (Y, Z), "V2": (Z_BAR, Y_BAR)}
    answer_gates: dict[tuple[str, Polarity], str] = {}
    for name, (hi, lo) in branches.items():
        horizontal = name.startswith("H")
        for a, pol in ((1, Polarity.N), (0, Polarity.P)):
            ones = minterms[a]
            conducts_somewhere = bool(ones) if horizontal else len(ones) < len(terms)
            if not conducts_somewhere:
                continue
            is_wire = len(ones) == len(terms) if horizontal else not ones
            gate = f"{name}.{pol.value}"
            answer_gates[(name, pol)] = gate
            if pol is Polarity.N:
                mid = hi if is_wire else b.node(name)
                b.add(pol, answer, mid, lo, name, gate=gate)
                span = (hi, mid)
            else:
                mid = lo if is_wire else b.node(name)
                b.add(pol, answer, hi, mid, name, gate=gate)
                span = (mid, lo)
            if not is_wire:
                (b.sop if horizontal else b.pos)(ones, others, *span, name)

    def pick(pol: Polarity, first: str, second: str) -> tuple[str, str]:
        for s1, s2 in ((first + "1", first + "2"), (second + "1", second + "2")):
            if (s1, pol) in answer_gates:
                return answer_gates[(s1, pol)], answer_gates[(s2, pol)]
        raise AssertionError("answer variable has no switch of this polarity")

    quad = pick(Polarity.N, "H", "V") + pick(Polarity.P, "V", "H")
    net = SwitchNet.build(b.switches, {Y: Rail.PLUS, Y_BAR: Rail.MINUS}, extra_nodes=(Z, Z_BAR))
    return TwoInputCircuit(bits, n, answer, net, dict(b.gate_vars), quad)


def evaluate_two_input(circuit: TwoInputCircuit, inputs: Sequence[int]) -> int:
    pots = resolve(circuit.net, circuit.gates(inputs), observe=[Z_BAR])
    return pots[Z_BAR].bit


def deutsch_classify(cell: SingleCell, common_mode: int = 1) -> Classification:
    """One source-out on a black-box cell; nonzero rail sum means balanced."""
    quad = source_out(cell, common_mode)
    verdict = Verdict.BALANCED if sum_detector(quad) else Verdict.CONSTANT
    return Classification(verdict, queries=1, quad=quad)


def deutsch_jozsa_classify(circuit: TwoInputCircuit, common_mode: int = 1) -> Classification:
    """Source out only the answer qubit's four gates and sum them."""
    gates = circuit.gates([common_mode] * circuit.n)
    settled, _ = source_out_gates(circuit.net, gates, circuit.answer_qubit)
    quad = QuadVector(*(settled[g] for g in circuit.answer_qubit))
    verdict = Verdict.BALANCED if sum_detector(quad) else Verdict.CONSTANT
    return Classification(verdict, queries=1, quad=quad)


def brute_force_classify(oracle: Callable[[int], int], n: int) -> tuple[Verdict, int]:
    """Query inputs 0, 1, 2, ... until two values differ or 2^(n-1)+1 agree."""
    first = oracle(0)
    queries = 1
    for x in range(1, (1 << (n - 1)) + 1):
        queries += 1
        if oracle(x) != first:
            return Verdict.BALANCED, queries
    return Verdict.CONSTANT, queries
