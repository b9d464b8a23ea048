"""
Dyadic Cubes

Integer-exact dyadic cubes ∏ [m_j 2^k, (m_j + 1) 2^k) and closed boxes with
dyadic-rational corners for enlargements such as 3J or 2^k I.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from src.models.types import DimensionMismatchError, RationalVector, Rational


def _pow2(k: int) -> Fraction:
    return Fraction(2) ** k


@dataclass(frozen=True)
class Box:
    """Closed axis-parallel box [lo_1, hi_1] × … × [lo_n, hi_n]"""

    lo: RationalVector
    hi: RationalVector

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatchError(
                f"box corners differ in dimension: {len(self.lo)} vs {len(self.hi)}"
            )

    @property
    def dim(self) -> int:
        return len(self.lo)

    def volume(self) -> Fraction:
        vol = Fraction(1)
        for a, b in zip(self.lo, self.hi):
            vol *= max(Fraction(0), b - a)
        return vol

    def contains_point(self, x: Sequence[Rational]) -> bool:
        return all(a <= xj <= b for a, xj, b in zip(self.lo, x, self.hi))

    def contains_cube(self, cube: "DyadicCube") -> bool:
        """True iff the closure of cube lies inside the box"""
        lo, hi = cube.lower(), cube.upper()
        return all(a <= l and u <= b for a, l, u, b in zip(self.lo, lo, hi, self.hi))

    def intersects(self, other: "Box") -> bool:
        """Closed boxes intersect iff their projections overlap on every axis"""
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return all(
            a1 <= b2 and a2 <= b1
            for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi)
        )


@dataclass(frozen=True, order=False)
class DyadicCube:
    """
    Dyadic cube with side 2^scale and integer corner index

    The cube is ∏_j [corner_j · 2^scale, (corner_j + 1) · 2^scale).
    """

    scale: int
    corner: Tuple[int, ...]

    def __post_init__(self):
        if len(self.corner) < 1:
            raise DimensionMismatchError("cube dimension must be >= 1")
        object.__setattr__(self, "corner", tuple(int(m) for m in self.corner))
        object.__setattr__(self, "scale", int(self.scale))

    @property
    def dim(self) -> int:
        return len(self.corner)

    def side(self) -> Fraction:
        return _pow2(self.scale)

    def volume(self) -> Fraction:
        return _pow2(self.scale * self.dim)

    def lower(self) -> RationalVector:
        s = self.side()
        return tuple(m * s for m in self.corner)

    def upper(self) -> RationalVector:
        s = self.side()
        return tuple((m + 1) * s for m in self.corner)

    def center(self) -> RationalVector:
        s = self.side()
        return tuple((m + Fraction(1, 2)) * s for m in self.corner)

    def _check(self, other: "DyadicCube"):
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def contains(self, other: "DyadicCube") -> bool:
        """True iff other ⊆ self"""
        self._check(other)
        if other.scale > self.scale:
            return False
        shift = self.scale - other.scale
        return all((mo >> shift) == ms for mo, ms in zip(other.corner, self.corner))

    def intersects(self, other: "DyadicCube") -> bool:
        """Dyadic cubes intersect iff one contains the other"""
        return self.contains(other) or other.contains(self)

    def contains_point(self, x: Sequence[Rational]) -> bool:
        return all(l <= xj < u for l, xj, u in zip(self.lower(), x, self.upper()))

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.scale + 1, tuple(m >> 1 for m in self.corner))

    def ancestor(self, scale: int) -> "DyadicCube":
        """The dyadic cube of the given (larger or equal) scale containing self"""
        if scale < self.scale:
            raise ValueError(f"ancestor scale must be >= {self.scale}, got {scale}")
        shift = scale - self.scale
        return DyadicCube(scale, tuple(m >> shift for m in self.corner))

    def children(self) -> List["DyadicCube"]:
        """The 2^n half-side subcubes, in lexicographic order of their centers"""
        return [self.child(bits) for bits in _bit_vectors(self.dim)]

    def child(self, bits: Sequence[int]) -> "DyadicCube":
        return DyadicCube(self.scale - 1, tuple(2 * m + b for m, b in zip(self.corner, bits)))

    def descendants(self, scale: int) -> Iterator["DyadicCube"]:
        """All subcubes at the given (smaller or equal) scale, lex order of corners"""
        if scale > self.scale:
            raise ValueError(f"descendant scale must be <= {self.scale}, got {scale}")
        count = 1 << (self.scale - scale)
        base = tuple(m * count for m in self.corner)
        for offset in _index_vectors(self.dim, count):
            yield DyadicCube(scale, tuple(b + o for b, o in zip(base, offset)))

    def enlarged(self, factor: Rational) -> Box:
        """The closed box a·I with the same center and side a·side(I)"""
        half = Fraction(factor) * self.side() / 2
        c = self.center()
        return Box(tuple(cj - half for cj in c), tuple(cj + half for cj in c))

    def as_box(self) -> Box:
        return Box(self.lower(), self.upper())


def _bit_vectors(dim: int) -> Iterator[Tuple[int, ...]]:
    # first coordinate most significant, so the order matches lex order of centers
    for i in range(1 << dim):
        yield tuple((i >> (dim - 1 - j)) & 1 for j in range(dim))


def _index_vectors(dim: int, count: int) -> Iterator[Tuple[int, ...]]:
    if dim == 1:
        for i in range(count):
            yield (i,)
        return
    for i in range(count):
        for rest in _index_vectors(dim - 1, count):
            yield (i,) + rest


def box_distance(a: DyadicCube, b: DyadicCube) -> float:
    """Euclidean distance between the closures of two cubes"""
    gaps = []
    for la, ua, lb, ub in zip(a.lower(), a.upper(), b.lower(), b.upper()):
        gap = max(Fraction(0), lb - ua, la - ub)
        gaps.append(float(gap))
    return float(sum(g * g for g in gaps) ** 0.5)
