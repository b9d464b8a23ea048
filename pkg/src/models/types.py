"""
Shared Value Types

Exact dyadic-rational vectors and the lexicographic order on them.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

Rational = Union[int, Fraction]
RationalVector = Tuple[Fraction, ...]


class DimensionMismatchError(ValueError):
    """Raised when two geometric objects live in different dimensions"""
    pass


class Ordering(Enum):
    """Result of an exact three-way comparison"""
    LESS = -1
    EQUAL = 0
    GREATER = 1


def check_same_dim(a: Sequence, b: Sequence) -> int:
    """Return the shared dimension of a and b, raising on mismatch"""
    if len(a) != len(b):
        raise DimensionMismatchError(f"dimension mismatch: {len(a)} vs {len(b)}")
    if len(a) < 1:
        raise DimensionMismatchError("vectors must have dimension >= 1")
    return len(a)


def lex_compare(
    a: Sequence[Rational],
    b: Sequence[Rational],
    permutation: Optional[Sequence[int]] = None
) -> Ordering:
    """
    Compare two vectors in the coordinate-cascade (lexicographic) order

    The first coordinate that differs decides. With a permutation the
    coordinates are visited in that order instead of 0..n-1.

    Args:
        a: First vector (ints or Fractions, compared exactly)
        b: Second vector
        permutation: Optional visiting order of coordinates

    Returns:
        Ordering.LESS, Ordering.EQUAL or Ordering.GREATER

    Raises:
        DimensionMismatchError: If a and b differ in length

    Examples:
        >>> lex_compare((1, 2), (1, 3))
        <Ordering.LESS: -1>
        >>> lex_compare((2, 0), (1, 9))
        <Ordering.GREATER: 1>
    """
    n = check_same_dim(a, b)
    order = range(n) if permutation is None else permutation
    for j in order:
        if a[j] < b[j]:
            return Ordering.LESS
        if a[j] > b[j]:
            return Ordering.GREATER
    return Ordering.EQUAL


def lex_key(vector: Sequence[Rational], permutation: Optional[Sequence[int]] = None) -> tuple:
    """Sort key realizing lex_compare (optionally over permuted coordinates)"""
    if permutation is None:
        return tuple(vector)
    return tuple(vector[j] for j in permutation)


def semitile_permutation(dim: int, r: int) -> Tuple[int, ...]:
    """
    Coordinate order under which semitile r plays the role of semitile 2^n

    Semitile index r-1 written in binary (most significant bit = coordinate 0)
    has a 1 in at least one coordinate when r >= 2. Visiting such a coordinate
    first makes every point of the first semitile precede every point of
    semitile r, which is what the energy selection needs.

    Raises:
        ValueError: If r is outside 2..2^dim
    """
    if not 2 <= r <= 2 ** dim:
        raise ValueError(f"r must lie in 2..{2 ** dim}, got {r}")
    bits = [((r - 1) >> (dim - 1 - j)) & 1 for j in range(dim)]
    lead = bits.index(1)
    return (lead,) + tuple(j for j in range(dim) if j != lead)


@dataclass(frozen=True)
class InequalityCheck:
    """A computed inequality lhs ≤ rhs"""

    name: str
    lhs: float
    rhs: float
    passed: bool
    oracle_delta: Optional[float] = None

    @classmethod
    def leq(cls, name: str, lhs: float, rhs: float, oracle_delta: Optional[float] = None) -> "InequalityCheck":
        return cls(name, float(lhs), float(rhs), bool(lhs <= rhs), oracle_delta)
