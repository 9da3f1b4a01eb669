"""Reference solvers used to check the simulator.

Nothing here touches the switch networks or the H-pulse machinery.  Bit
vectors are plain lists of 0/1 with position 0 = x_1, a deliberately
different representation from the packed ints used elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import SecretZero

Vector = list[int]


def _unpack(value: int, n: int) -> Vector:
    return [int(c) for c in format(value, f"0{n}b")]


def _pack(vec: Sequence[int]) -> int:
    return int("".join(map(str, vec)) or "0", 2)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x & y for x, y in zip(a, b)) % 2


@dataclass(frozen=True)
class Gf2System:
    rows: tuple
    rhs: tuple

    def __post_init__(self):
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError(f"rows have mixed widths {sorted(widths)}")
        if len(self.rhs) != len(self.rows):
            raise ValueError("rhs length must equal the number of rows")

    @classmethod
    def from_ints(cls, rows: Sequence[int], rhs: Sequence[int] | int, n: int) -> "Gf2System":
        if isinstance(rhs, int):
            rhs = _unpack(rhs, len(rows)) if rows else []
        return cls(tuple(tuple(_unpack(r, n)) for r in rows), tuple(int(b) for b in rhs))

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0


@dataclass(frozen=True)
class Gf2Solution:
    rank: int
    particular: tuple | None  # None when the system is inconsistent
    nullspace: tuple  # basis vectors

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    def nullspace_ints(self) -> set[int]:
        """Every vector of the nullspace, packed with x_1 as MSB."""
        out = {0}
        for v in self.nullspace:
            p = _pack(v)
            out |= {w ^ p for w in out}
        return out


def gf2_solve(system: Gf2System, width: int | None = None) -> Gf2Solution:
    """Row-reduce the augmented matrix, pivoting on the lowest column first."""
    n = system.width if width is None else width
    aug = [list(r) + [b] for r, b in zip(system.rows, system.rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pick = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if pick is None:
            continue
        aug[r], aug[pick] = aug[pick], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                aug[i] = [a ^ b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    rank = r
    if any(row[n] for row in aug[rank:]):
        particular = None
    else:
        sol = [0] * n
        for i, col in enumerate(pivots):
            sol[col] = aug[i][n]
        particular = tuple(sol)
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for i, col in enumerate(pivots):
            v[col] = aug[i][free]
        basis.append(tuple(v))
    return Gf2Solution(rank, particular, tuple(basis))


def brute_force_simon(instance) -> tuple[int, int]:
    """Scan x = 0, 1, 2, ... until two inputs collide; return (x XOR x', queries)."""
    seen: dict[int, int] = {}
    queries = 0
    for x in range(1 << instance.n):
        queries += 1
        fx = instance.value(x)
        if fx in seen:
            return seen[fx] ^ x, queries
        seen[fx] = x
    raise ValueError("no collision: not a 2:1 function")


def brute_force_bv(f: Callable[[int], int], n: int) -> tuple[int, int]:
    """Recover s from f(x) = s.x with f(0) and the n unit vectors."""
    base = f(0)
    s = 0
    for i in range(n):
        s = (s << 1) | (f(1 << (n - 1 - i)) ^ base)
    return s, n + 1


def truth_census(table: Sequence[int]) -> str:
    ones = sum(table)
    if ones in (0, len(table)):
        return "constant"
    if 2 * ones == len(table):
        return "balanced"
    return "neither"


def enumerate_separable(secret: int, n: int) -> list[int]:
    """All nonzero coefficient vectors orthogonal to ``secret``, in increasing order."""
    if secret == 0:
        raise SecretZero("secret string must be nonzero")
    s = _unpack(secret, n)
    return [
        _pack(y)
        for y in itertools.product((0, 1), repeat=n)
        if any(y) and _dot(y, s) == 0
    ]


def exhaustive_verify(
    bank_rows: Sequence[int],
    s_hat: int,
    instance,
    complements: Sequence[int] | None = None,
) -> bool:
    """Each fitted row agrees with its output bit on at least half the inputs.

    ``complements`` fixes the constant term of each fitted function; by
    default whichever of the two alignments agrees more often is used.
    """
    n = instance.n
    if n > 12:
        raise ValueError("exhaustive verification is limited to n <= 12")
    s = _unpack(s_hat, n)
    rows = [_unpack(r, n) for r in bank_rows]
    if any(_dot(r, s) for r in rows):
        return False
    inputs = [_unpack(x, n) for x in range(1 << n)]
    values = [_unpack(instance.value(x), n) for x in range(1 << n)]
    half = (1 << n) // 2
    for i, r in enumerate(rows):
        agree = sum(_dot(r, xv) == fv[i] for xv, fv in zip(inputs, values))
        if complements is None:
            best = max(agree, (1 << n) - agree)
        else:
            best = agree if complements[i] == 0 else (1 << n) - agree
        if best < half:
            return False
    return True
