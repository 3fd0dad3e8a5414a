"""Fixed-width bit strings, GF(2) inner products, and the hardness function g.

Convention used everywhere (text forms, JSON, CLI): a width-n string is
written big-endian, leftmost character = bit 1, so unit_string(1, n) prints
as "100...0". Internally a string is a canonical Python int with bit j
stored at position n - j.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractViolation

MAX_WIDTH = 24  # keeps 2^n enumerations and statevectors desk-scale


class GVariant(str, Enum):
    """Choice of the one-bit function g applied to node secrets.

    HAMMING_MOD3 maps Hamming weight w to 1 iff w = 1 (mod 3); both output
    classes are nonempty for every width >= 1, which instance generation
    relies on. PARITY is a degenerate fixture (it makes the sampling
    problem classically easy) and is never the default.
    """

    HAMMING_MOD3 = "hamming-mod3"
    PARITY = "parity"


@dataclass(frozen=True)
class BitString:
    """An immutable n-bit string, 1 <= n <= 24, canonical beyond-width bits zero."""

    width: int
    value: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ContractViolation(f"width must be in [1, {MAX_WIDTH}], got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ContractViolation(
                f"value {self.value} does not fit in {self.width} bits"
            )

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        """Parse a big-endian '0'/'1' string."""
        if not text or any(c not in "01" for c in text):
            raise ContractViolation(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_bits(cls, bits) -> "BitString":
        """Build from an iterable of bits, element 0 = bit 1 (leftmost)."""
        bits = list(bits)
        value = 0
        for b in bits:
            value = (value << 1) | (b & 1)
        return cls(len(bits), value)

    def text(self) -> str:
        return format(self.value, f"0{self.width}b")

    def bit(self, j: int) -> int:
        """Bit j, 1-indexed from the left."""
        if not 1 <= j <= self.width:
            raise ContractViolation(f"bit index {j} out of range for width {self.width}")
        return (self.value >> (self.width - j)) & 1

    def popcount(self) -> int:
        return self.value.bit_count()

    def __xor__(self, other: "BitString") -> "BitString":
        if self.width != other.width:
            raise ContractViolation("xor of mismatched widths")
        return BitString(self.width, self.value ^ other.value)

    def __str__(self) -> str:
        return self.text()


def inner_product(a: BitString, b: BitString) -> int:
    """Mod-2 inner product: parity of the bitwise AND."""
    if a.width != b.width:
        raise ContractViolation(
            f"inner_product width mismatch: {a.width} vs {b.width}"
        )
    return (a.value & b.value).bit_count() & 1


def g_eval(s: BitString, variant: GVariant = GVariant.HAMMING_MOD3) -> int:
    """The one-bit hardness function g of a secret."""
    w = s.popcount()
    if variant is GVariant.HAMMING_MOD3:
        return 1 if w % 3 == 1 else 0
    return w & 1


def unit_string(j: int, n: int) -> BitString:
    """The width-n string with a single 1 in position j (1-indexed)."""
    if not 1 <= j <= n:
        raise ContractViolation(f"unit index {j} out of range for width {n}")
    return BitString(n, 1 << (n - j))


def g_table(n: int, variant: GVariant = GVariant.HAMMING_MOD3) -> np.ndarray:
    """g over all 2^n values, as a uint8 array indexed by integer value."""
    if not 1 <= n <= MAX_WIDTH:
        raise ContractViolation(f"width must be in [1, {MAX_WIDTH}], got {n}")
    vals = np.arange(1 << n, dtype=np.uint32)
    pc = np.zeros(1 << n, dtype=np.uint8)
    for j in range(n):
        pc += ((vals >> j) & 1).astype(np.uint8)
    if variant is GVariant.HAMMING_MOD3:
        return (pc % 3 == 1).astype(np.uint8)
    return (pc & 1).astype(np.uint8)
