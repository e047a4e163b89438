"""Count-vector draws and the dissimilarity between them.

An unordered draw of size K with replacement from I distinguishable objects
is recorded as a count vector: entry i is the number of copies of object i
in the draw, and the entries sum to K. Two draws are compared by the
fraction of cross-pairings (one element from each draw) that mismatch:

    dissimilarity = 1 - <g1, g2> / K^2

which takes values in {0, 1/K^2, 2/K^2, ..., 1}. It is 0 only when both
draws are K copies of the same object, and 1 only when the draws share no
object. It is not a distance metric: a draw containing more than one kind
of object has positive dissimilarity with itself.

All values are exact: counts are integers and dissimilarities are stored
as an integer numerator over K^2. Conversion to float happens only at
output time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class DrawVector:
    """One unordered draw: counts per object, summing to the draw size."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) < 1:
            raise ValueError("a draw needs at least one object slot")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative count in draw {self.counts}")
        if sum(self.counts) < 1:
            raise ValueError("draw size must be at least 1")

    @property
    def draw_size(self) -> int:
        """Number of items in the draw (the row sum)."""
        return sum(self.counts)

    @property
    def n_objects(self) -> int:
        """Number of object slots (the vector length)."""
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True)
class PairMatrix:
    """Ordered pair of draws, viewed as a 2 x I nonnegative-integer matrix.

    Both rows must have the same length and the same row sum.
    """

    row1: DrawVector
    row2: DrawVector

    def __post_init__(self):
        if self.row1.n_objects != self.row2.n_objects:
            raise ValueError(
                f"rows cover different object counts: "
                f"{self.row1.n_objects} vs {self.row2.n_objects}"
            )
        if self.row1.draw_size != self.row2.draw_size:
            raise ValueError(
                f"rows have different draw sizes: "
                f"{self.row1.draw_size} vs {self.row2.draw_size}"
            )

    @property
    def draw_size(self) -> int:
        return self.row1.draw_size

    @property
    def n_objects(self) -> int:
        return self.row1.n_objects

    @property
    def columns(self) -> tuple[tuple[int, int], ...]:
        """The matrix columns as (top, bottom) count pairs."""
        return tuple(zip(self.row1.counts, self.row2.counts))


@dataclass(frozen=True)
class DissimilarityValue:
    """Exact dissimilarity: an integer numerator over K^2.

    Kept unreduced so the denominator always identifies the draw size.
    """

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("denominator must be positive")
        if not 0 <= self.numerator <= self.denominator:
            raise ValueError(
                f"dissimilarity {self.numerator}/{self.denominator} out of [0, 1]"
            )

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def _as_draw(g) -> DrawVector:
    return g if isinstance(g, DrawVector) else DrawVector(tuple(g))


def dissimilarity(g1, g2) -> DissimilarityValue:
    """Dissimilarity between two draws: 1 - <g1, g2> / K^2.

    Counts, for a uniformly random element of each draw, the probability
    that the two elements are different objects. Symmetric in its
    arguments; exact.

    Raises ValueError if the draws have different lengths or draw sizes.
    """
    d1, d2 = _as_draw(g1), _as_draw(g2)
    if d1.n_objects != d2.n_objects:
        raise ValueError(
            f"draws cover different object counts: {d1.n_objects} vs {d2.n_objects}"
        )
    if d1.draw_size != d2.draw_size:
        raise ValueError(
            f"draws have different sizes: {d1.draw_size} vs {d2.draw_size}"
        )
    k = d1.draw_size
    overlap = sum(a * b for a, b in zip(d1.counts, d2.counts))
    return DissimilarityValue(k * k - overlap, k * k)


def inner_product(p: Sequence, q: Sequence):
    """Standard inner product of two equal-length vectors.

    Exact when both vectors hold ints/Fractions; float otherwise.
    """
    if len(p) != len(q):
        raise ValueError(f"length mismatch: {len(p)} vs {len(q)}")
    return sum(a * b for a, b in zip(p, q))
