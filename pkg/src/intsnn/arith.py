"""Bounded integer lattice primitives shared by every state update."""

from __future__ import annotations

from dataclasses import dataclass

UNSIGNED = "unsigned"
SIGNED = "signed"
SATURATE = "saturate"
WRAP = "wrap"


@dataclass(frozen=True)
class IntegerDomain:
    """Value lattice of a membrane potential: width, signedness, overflow rule.

    An unsigned domain covers [0, 2^bits - 1]; a signed one covers
    [-2^(bits-1), 2^(bits-1) - 1]. Either way the cardinality is 2^bits.
    """

    bits: int
    signedness: str = UNSIGNED
    overflow_mode: str = SATURATE

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or not 1 <= self.bits <= 64:
            raise ValueError(f"bits must lie in 1..64, got {self.bits!r}")
        if self.signedness not in (UNSIGNED, SIGNED):
            raise ValueError(f"unknown signedness {self.signedness!r}")
        if self.overflow_mode not in (SATURATE, WRAP):
            raise ValueError(f"unknown overflow_mode {self.overflow_mode!r}")

    @property
    def min_value(self) -> int:
        if self.signedness == SIGNED:
            return -(1 << (self.bits - 1))
        return 0

    @property
    def max_value(self) -> int:
        if self.signedness == SIGNED:
            return (1 << (self.bits - 1)) - 1
        return (1 << self.bits) - 1

    @property
    def cardinality(self) -> int:
        return 1 << self.bits


def clamp(x: int, domain: IntegerDomain) -> int:
    """Force x into the domain range by saturation or modular wrap."""
    lo = domain.min_value
    if domain.overflow_mode == SATURATE:
        if x < lo:
            return lo
        hi = domain.max_value
        return hi if x > hi else x
    return ((x - lo) % domain.cardinality) + lo


def leak_shift(v: int, k: int) -> int:
    """One decay step: v - (v >> k).

    For v >= 0 this equals ceil(v * (1 - 2^-k)) and never leaves [0, v];
    values below 2^k are leak-invariant. Negative v uses the arithmetic
    shift, so the result moves toward zero without crossing it.
    """
    if k < 1:
        raise ValueError(f"shift amount must be >= 1, got {k}")
    return v - (v >> k)
