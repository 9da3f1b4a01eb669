"""Dual-rail switch networks: rails, four-rail qubit inputs, resolution, sourcing out.

A network is a set of nodes, some driven to +V or -V, joined by ideal N- or
P-type switches.  An N switch conducts when its gate is at +V, a P switch
when its gate is at -V.  Resolution groups nodes into equipotential
components over the conducting switches.

Every switch also records which terminal is its *source*.  Sourcing out a
gate ties it to that terminal's potential, which is how the networks
perform their one-step Hadamard.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ConflictError, FloatingError


class Rail(enum.IntEnum):
    MINUS = -1
    PLUS = 1

    @property
    def complement(self) -> "Rail":
        return Rail(-self.value)

    @property
    def bit(self) -> int:
        return 1 if self is Rail.PLUS else 0

    @classmethod
    def of(cls, bit: int) -> "Rail":
        return cls.PLUS if bit else cls.MINUS

    def __str__(self) -> str:
        return "+V" if self is Rail.PLUS else "-V"


class PairMode(enum.Enum):
    COMMON = "common"
    DIFFERENTIAL = "differential"


class QuadMode(enum.Enum):
    COMMON_PAIRS = "common_pairs"
    DIFFERENTIAL_PAIRS = "differential_pairs"


@dataclass(frozen=True)
class QuadVector:
    """Gate levels (x_N, x_N_bar, x_P, x_P_bar) of one synthetic qubit."""

    x_n: Rail
    x_n_bar: Rail
    x_p: Rail
    x_p_bar: Rail

    @classmethod
    def of(cls, *levels) -> "QuadVector":
        if len(levels) == 1:
            levels = tuple(levels[0])
        if len(levels) != 4:
            raise ValueError("a quad vector has exactly four rails")
        return cls(*(Rail(int(v)) for v in levels))

    @classmethod
    def common(cls, bit: int) -> "QuadVector":
        r = Rail.of(bit)
        return cls(r, r, r, r)

    def __iter__(self):
        return iter((self.x_n, self.x_n_bar, self.x_p, self.x_p_bar))

    def __str__(self) -> str:
        return "(" + ", ".join(str(r) for r in self) + ")"


class CellKind(enum.Enum):
    IDENTITY = "identity"
    NEGATION = "negation"
    CONST0 = "const0"
    CONST1 = "const1"

    @property
    def balanced(self) -> bool:
        return self in (CellKind.IDENTITY, CellKind.NEGATION)

    def __call__(self, x: int) -> int:
        return {
            CellKind.IDENTITY: x,
            CellKind.NEGATION: 1 - x,
            CellKind.CONST0: 0,
            CellKind.CONST1: 1,
        }[self]


class Polarity(enum.Enum):
    N = "N"
    P = "P"


@dataclass(frozen=True)
class Switch:
    a: str
    b: str
    polarity: Polarity
    gate: str
    source: str
    branch: str = ""

    def conducts(self, gate_level: Rail) -> bool:
        if self.polarity is Polarity.N:
            return gate_level is Rail.PLUS
        return gate_level is Rail.MINUS

    @property
    def drain(self) -> str:
        return self.b if self.source == self.a else self.a


def oriented_switch(
    polarity: Polarity, gate: str, high: str, low: str, branch: str = ""
) -> Switch:
    """Switch between ``high`` and ``low`` ends of a branch.

    P sources sit on the high end and N sources on the low end, so a
    sourced-out gate always lands on the level that turns its switch off
    (or leaves both terminals equal).
    """
    source = high if polarity is Polarity.P else low
    return Switch(high, low, polarity, gate, source, branch)


@dataclass(frozen=True)
class SwitchNet:
    nodes: frozenset
    drivers: Mapping[str, Rail] = field(hash=False)
    switches: tuple

    def __post_init__(self):
        missing = {n for sw in self.switches for n in (sw.a, sw.b)} - self.nodes
        missing |= set(self.drivers) - self.nodes
        if missing:
            raise ValueError(f"switch or driver on unknown node(s): {sorted(missing)}")
        for sw in self.switches:
            if sw.source not in (sw.a, sw.b):
                raise ValueError(f"source {sw.source} is not a terminal of {sw}")

    @classmethod
    def build(cls, switches: Iterable[Switch], drivers: Mapping[str, Rail], extra_nodes=()):
        switches = tuple(switches)
        nodes = {n for sw in switches for n in (sw.a, sw.b)}
        nodes |= set(drivers) | set(extra_nodes)
        return cls(frozenset(nodes), dict(drivers), switches)

    @property
    def gate_nodes(self) -> frozenset:
        return frozenset(sw.gate for sw in self.switches)

    def switches_on(self, gate: str) -> list[Switch]:
        return [sw for sw in self.switches if sw.gate == gate]


def _find(parent: dict, node: str) -> str:
    while parent[node] != node:
        parent[node] = parent[parent[node]]
        node = parent[node]
    return node


def components(net: SwitchNet, gates: Mapping[str, Rail]) -> dict[str, list[str]]:
    """Equipotential groups keyed by an arbitrary representative."""
    parent = {node: node for node in net.nodes}
    for sw in net.switches:
        try:
            level = gates[sw.gate]
        except KeyError:
            raise ValueError(f"no level assigned to gate {sw.gate!r}") from None
        if sw.conducts(Rail(level)):
            ra, rb = _find(parent, sw.a), _find(parent, sw.b)
            if ra != rb:
                parent[ra] = rb
    groups: dict[str, list[str]] = {}
    for node in net.nodes:
        groups.setdefault(_find(parent, node), []).append(node)
    return groups


def resolve(
    net: SwitchNet,
    gates: Mapping[str, Rail],
    *,
    drivers: Mapping[str, Rail] | None = None,
    observe: Iterable[str] = (),
    retained: Mapping[str, Rail] | None = None,
) -> dict[str, Rail]:
    """Potential of every determined node.

    ``drivers`` overrides the net's own drivers.  ``retained`` supplies
    stored charge for components with no driver; without it such nodes are
    left out of the result.  Observed nodes that end up undetermined raise
    FloatingError.
    """
    drivers = net.drivers if drivers is None else drivers
    potentials: dict[str, Rail] = {}
    for group in components(net, gates).values():
        driven = {drivers[n] for n in group if n in drivers}
        if len(driven) > 1:
            raise ConflictError(group)
        if not driven and retained is not None:
            driven = {retained[n] for n in group if n in retained}
            if len(driven) > 1:
                # charge sharing between opposite stored levels has no logic value
                continue
        if driven:
            level = Rail(driven.pop())
            for n in group:
                potentials[n] = level
    floating = [n for n in observe if n not in potentials]
    if floating:
        raise FloatingError(floating)
    return potentials


def is_zero_current(net: SwitchNet, gates: Mapping[str, Rail], potentials: Mapping[str, Rail]) -> bool:
    """True when no conducting switch joins two different known potentials."""
    for sw in net.switches:
        if sw.conducts(Rail(gates[sw.gate])):
            pa, pb = potentials.get(sw.a), potentials.get(sw.b)
            if pa is not None and pb is not None and pa != pb:
                return False
    return True


def source_out_gates(
    net: SwitchNet,
    gates: Mapping[str, Rail],
    targets: Sequence[str],
    *,
    drivers: Mapping[str, Rail] | None = None,
    retained: Mapping[str, Rail] | None = None,
) -> tuple[dict[str, Rail], dict[str, Rail]]:
    """Tie each target gate to its switch's source until nothing changes.

    Nodes that lose every driven path keep their previous level (dynamic
    charge storage).  Returns the settled gate levels and node potentials.
    """
    sources = {}
    for g in targets:
        owned = net.switches_on(g)
        if len(owned) != 1:
            raise ValueError(f"gate {g!r} controls {len(owned)} switches; expected exactly one")
        sources[g] = owned[0].source
    current = {k: Rail(v) for k, v in gates.items()}
    pots = resolve(net, current, drivers=drivers, observe=sources.values(), retained=retained)
    for _ in range(len(targets) + 2):
        nxt = dict(current)
        nxt.update({g: pots[src] for g, src in sources.items()})
        if nxt == current:
            return current, pots
        current = nxt
        pots = resolve(net, current, drivers=drivers, observe=sources.values(), retained=pots)
    raise RuntimeError("source-out did not reach a fixpoint")


def classify_pair(a: Rail, b: Rail) -> PairMode:
    return PairMode.COMMON if Rail(a) == Rail(b) else PairMode.DIFFERENTIAL


def classify_quad(q: QuadVector) -> QuadMode:
    same = classify_pair(q.x_n, q.x_n_bar) == classify_pair(q.x_p, q.x_p_bar)
    return QuadMode.COMMON_PAIRS if same else QuadMode.DIFFERENTIAL_PAIRS


def sum_detector(q: QuadVector) -> int:
    """Analog sum of the four gate rails in units of V."""
    return sum(int(r) for r in q)


# Corner roles of a single-input cell.  Y and Y_BAR are the control rails,
# Z carries y XOR f and Z_BAR its complement.  Horizontal branches join
# Y-Z_BAR and Z-Y_BAR; vertical branches join Y-Z and Z_BAR-Y_BAR.
QUAD_LABELS = ("x_n", "x_n_bar", "x_p", "x_p_bar")
Y, Y_BAR, Z, Z_BAR = "y", "y_bar", "y_xor_f", "y_xor_f_bar"


def cell_switches(kind: CellKind, hi: str, lo: str, z: str, zb: str, quad: Sequence[str]) -> list[Switch]:
    """The four transistors of a single-input XOR cell.

    ``hi``/``lo`` are the corners that sit at +V/-V when the cell's sources
    are designated; ``quad`` names the x_N, x_N_bar, x_P, x_P_bar gates.
    """
    gn, gnb, gp, gpb = quad
    branches = {"H1": (hi, zb), "H2": (z, lo), "V1": (hi, z), "V2": (zb, lo)}
    N, P = Polarity.N, Polarity.P
    layout = {
        CellKind.IDENTITY: [(N, gn, "H1"), (N, gnb, "H2"), (P, gp, "V1"), (P, gpb, "V2")],
        CellKind.NEGATION: [(N, gn, "V1"), (N, gnb, "V2"), (P, gp, "H1"), (P, gpb, "H2")],
        CellKind.CONST0: [(N, gn, "V1"), (N, gnb, "V2"), (P, gp, "V1"), (P, gpb, "V2")],
        CellKind.CONST1: [(N, gn, "H1"), (N, gnb, "H2"), (P, gp, "H1"), (P, gpb, "H2")],
    }[kind]
    return [oriented_switch(pol, gate, *branches[br], branch=br) for pol, gate, br in layout]


@dataclass(frozen=True)
class SingleCell:
    kind: CellKind
    net: SwitchNet
    quad: tuple = QUAD_LABELS
    y: str = Y
    y_bar: str = Y_BAR
    z: str = Z
    z_bar: str = Z_BAR

    @property
    def corners(self) -> tuple[str, str, str, str]:
        return (self.y, self.y_bar, self.z, self.z_bar)

    def gates_for(self, state) -> dict[str, Rail]:
        if isinstance(state, QuadVector):
            return dict(zip(self.quad, state))
        if isinstance(state, Mapping):
            return {g: Rail(state[g]) for g in self.quad}
        return {g: Rail.of(int(state)) for g in self.quad}


def build_single_cell(kind: CellKind) -> SingleCell:
    """Four-transistor cell with y at +V and y_bar at -V."""
    switches = cell_switches(kind, Y, Y_BAR, Z, Z_BAR, QUAD_LABELS)
    net = SwitchNet.build(switches, {Y: Rail.PLUS, Y_BAR: Rail.MINUS}, extra_nodes=(Z, Z_BAR))
    return SingleCell(kind, net)


def evaluate_cell(cell: SingleCell, x: int, y: int = 1) -> int:
    """f for input x with the control pair driven to (y, not y)."""
    drivers = {cell.y: Rail.of(y), cell.y_bar: Rail.of(1 - y)}
    pots = resolve(cell.net, cell.gates_for(x), drivers=drivers, observe=[cell.z_bar])
    # the (y xor f)-bar corner carries not(y xor f)
    return y ^ (1 - pots[cell.z_bar].bit)


def source_out(cell: SingleCell, state) -> QuadVector:
    """Sourced-out gate levels of a cell.

    ``state`` is the common-mode input bit applied before the step, or the
    current QuadVector of gate levels.
    """
    gates, _ = source_out_gates(cell.net, cell.gates_for(state), cell.quad)
    return QuadVector(*(gates[g] for g in cell.quad))


def hadamard2(v: Sequence[float]) -> tuple[float, float]:
    a, b = v
    k = 1.0 / math.sqrt(2.0)
    return (k * (a + b), k * (a - b))
