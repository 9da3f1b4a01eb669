"""Bit-vector helpers.

Vectors are packed into ints with index 0 (x_1) as the most significant
bit, so ``format_bits(v, n)`` prints in the order x_1 x_2 ... x_n.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

BitsLike = Union[int, str, Sequence[int]]


def to_int(bits: BitsLike, n: int | None = None) -> int:
    """Pack a string like ``"1001"``, a 0/1 sequence, or an int."""
    if isinstance(bits, bool):
        raise TypeError("expected a bit vector, got bool")
    if isinstance(bits, int):
        if bits < 0 or (n is not None and bits >> n):
            raise ValueError(f"{bits} does not fit in {n} bits")
        return bits
    if isinstance(bits, str):
        text = bits.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a binary string: {bits!r}")
        if n is not None and len(text) != n:
            raise ValueError(f"expected {n} bits, got {len(text)}")
        return int(text, 2)
    seq = list(bits)
    if n is not None and len(seq) != n:
        raise ValueError(f"expected {n} bits, got {len(seq)}")
    value = 0
    for b in seq:
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {b!r}")
        value = (value << 1) | int(b)
    return value


def format_bits(value: int, n: int) -> str:
    return format(value, f"0{n}b") if n else ""


def to_tuple(value: int, n: int) -> tuple[int, ...]:
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


def bit(value: int, i: int, n: int) -> int:
    """Bit at position ``i`` (0-based from x_1)."""
    return (value >> (n - 1 - i)) & 1


def unit(i: int, n: int) -> int:
    return 1 << (n - 1 - i)


def dot(a: int, b: int) -> int:
    """Inner product over GF(2)."""
    return (a & b).bit_count() & 1


def weight(value: int) -> int:
    return value.bit_count()


def indices(value: int, n: int) -> list[int]:
    """Positions of the set bits, lowest index (x_1) first."""
    return [i for i in range(n) if bit(value, i, n)]


def span(basis: Iterable[int]) -> set[int]:
    out = {0}
    for v in basis:
        out |= {w ^ v for w in out}
    return out
