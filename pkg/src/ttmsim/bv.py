"""Cascaded Toffoli cells for f(x) = s.x and one-pass recovery of s."""

from __future__ import annotations

from dataclasses import dataclass, field

from .bits import BitsLike, format_bits, to_int, to_tuple
from .railnet import (
    CellKind,
    QuadMode,
    QuadVector,
    Rail,
    SwitchNet,
    cell_switches,
    classify_quad,
    resolve,
    source_out_gates,
)


@dataclass(frozen=True)
class CascadeCircuit:
    """Chain of single-input cells; y_{i+1} = s_i x_i XOR y_i.

    Cell i joins the rail pair (hi_i, lo_i) to (z_i, zb_i), and the next cell
    continues from (z_i, zb_i).  Only the x gate lines, the control pair and
    the output pair are meant to be touched from outside.
    """

    n: int
    net: SwitchNet
    quads: tuple
    rails: tuple
    y: str = "y"
    y_bar: str = "y_bar"
    _s: tuple = field(default=(), repr=False, compare=False)

    @property
    def cell_count(self) -> int:
        return len(self.quads)

    def output_nodes(self) -> tuple[str, str]:
        """(f, f_bar) terminals by the label-chain rule.

        A balanced cell moves the y label across the rail pair, a constant
        cell leaves it.  f defaults to the node carrying the final y label and
        is swapped with its partner when the number of balanced cells is even.
        """
        on_high = True
        for s in self._s:
            if s:
                on_high = not on_high
        z, zb = self.rails[-1]
        f, f_bar = (z, zb) if on_high else (zb, z)
        if sum(self._s) % 2 == 0:
            f, f_bar = f_bar, f
        return f, f_bar

    def gates(self, x: int) -> dict[str, Rail]:
        return {g: Rail.of(xi) for quad, xi in zip(self.quads, to_tuple(x, self.n)) for g in quad}


def synthesize_cascade(s: BitsLike, n: int | None = None) -> CascadeCircuit:
    """IDENTITY cells where s_i = 1 and CONST0 cells where s_i = 0."""
    if isinstance(s, int) and n is None:
        raise ValueError("an integer secret needs an explicit width n")
    if n is None:
        n = len(s)
    bits = to_tuple(to_int(s, n), n)
    if n < 1:
        raise ValueError("a cascade needs at least one cell")
    switches, quads, rails = [], [], []
    hi, lo = "y", "y_bar"
    for i, si in enumerate(bits, start=1):
        z, zb = f"z{i}", f"zb{i}"
        quad = tuple(f"x{i}.{label}" for label in ("n", "n_bar", "p", "p_bar"))
        kind = CellKind.IDENTITY if si else CellKind.CONST0
        switches += cell_switches(kind, hi, lo, z, zb, quad)
        quads.append(quad)
        rails.append((z, zb))
        hi, lo = z, zb
    net = SwitchNet.build(switches, {"y": Rail.PLUS, "y_bar": Rail.MINUS})
    return CascadeCircuit(n, net, tuple(quads), tuple(rails), _s=bits)


def evaluate_cascade(c: CascadeCircuit, x: BitsLike) -> int:
    f_node, _ = c.output_nodes()
    pots = resolve(c.net, c.gates(to_int(x, c.n)), observe=[f_node])
    return pots[f_node].bit


@dataclass(frozen=True)
class Recovery:
    secret: tuple
    quads: tuple
    queries: int = 1

    @property
    def bits(self) -> str:
        return "".join(map(str, self.secret))


def bv_recover(c: CascadeCircuit) -> Recovery:
    """Hold x = 0 on every cell, source out all quads in one step, read the modes."""
    targets = [g for quad in c.quads for g in quad]
    gates, _ = source_out_gates(c.net, c.gates(0), targets)
    quads = tuple(QuadVector(*(gates[g] for g in quad)) for quad in c.quads)
    secret = tuple(int(classify_quad(q) is QuadMode.DIFFERENTIAL_PAIRS) for q in quads)
    return Recovery(secret, quads)


def secret_string(c: CascadeCircuit) -> str:
    """The hidden string, for test oracles only."""
    return format_bits(to_int(c._s), c.n)
