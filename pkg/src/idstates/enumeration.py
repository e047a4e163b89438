"""Enumeration of identity states for unordered pairs of unordered draws.

An identity state is an equivalence class of pairs of size-K draws under
two symmetries: swapping the two draws, and relabeling the I objects. Each
pair, written as a 2 x I count matrix, maps to a (K+1) x (K+1) matrix M
whose (i, j) entry counts the columns equal to (i-1, j-1). Column
relabeling leaves M unchanged and swapping the draws transposes it, so
identity states correspond exactly to such matrices up to transpose.

Enumeration walks candidate pairs directly:

 1. top rows: one left-justified, nonincreasing placement per partition
    of K (every pair can be column-permuted into this form, so nothing
    is lost);
 2. bottom rows: every placement of every partition of K in 2K slots
    (2K slots suffice because a pair contains at most 2K distinct
    objects);
 3. each candidate pair is folded to its M matrix;
 4. matrices are deduplicated up to transpose.

States for I < 2K are the subset whose pairs fit in I columns; for
I > 2K the catalog is the same as at 2K with extra all-zero columns.

The canonical form of M is the row-major lexicographic minimum of M and
its transpose; catalogs are emitted sorted by that flattened form.
"""

from __future__ import annotations

import concurrent.futures
import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .core import DissimilarityValue, DrawVector, PairMatrix, dissimilarity


@dataclass(frozen=True)
class StateMatrix:
    """(K+1) x (K+1) column-type count matrix for a pair of size-K draws.

    Entry (i, j) (0-based) counts columns whose top entry is i and bottom
    entry is j. Both weighted sums sum(i * entries[i][j]) and
    sum(j * entries[i][j]) equal K, and the total of all entries is the
    number of object slots I.
    """

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", grid)
        side = len(grid)
        if side < 2 or any(len(row) != side for row in grid):
            raise ValueError("state matrix must be square with side >= 2")
        if any(v < 0 for row in grid for v in row):
            raise ValueError("state matrix entries must be nonnegative")
        k = side - 1
        top = sum(i * v for i, row in enumerate(grid) for v in row)
        bottom = sum(j * v for row in grid for j, v in enumerate(row))
        if top != k or bottom != k:
            raise ValueError(
                f"weighted sums ({top}, {bottom}) do not match draw size {k}"
            )

    @property
    def draw_size(self) -> int:
        return len(self.entries) - 1

    @property
    def n_objects(self) -> int:
        return sum(v for row in self.entries for v in row)

    @property
    def flattened(self) -> tuple[int, ...]:
        """Row-major flattening; the sort/dedup key for canonical forms."""
        return tuple(v for row in self.entries for v in row)

    def transpose(self) -> "StateMatrix":
        return StateMatrix(tuple(zip(*self.entries)))


@dataclass(frozen=True)
class IdentityState:
    """One identity state: canonical matrix plus derived bookkeeping.

    The representative pair has its columns sorted in decreasing
    lexicographic order by (top, bottom), which puts nonzero columns
    first and reproduces the canonical matrix exactly (not just up to
    transpose).

    Three nested flags describe the relation between the two rows:
    row_equal (identical vectors) implies is_symmetric (some relabeling
    swaps the rows, i.e. the matrix equals its transpose), which implies
    row_equiv (the rows use the same partition of the draw size). The
    middle one is the strongest that probability weighting cares about;
    row_equiv alone does not make the two draw orders relabel onto the
    same pairs (e.g. rows (2,1,0) and (1,0,2)).
    """

    canonical_matrix: StateMatrix
    representative: PairMatrix
    dissimilarity: DissimilarityValue
    n_distinct: int
    is_symmetric: bool
    stabilizer_size: int
    row_equiv: bool
    row_equal: bool

    def __post_init__(self):
        rebuilt = canonicalize(state_matrix(self.representative))
        if rebuilt != self.canonical_matrix:
            raise ValueError("representative does not reproduce canonical matrix")
        if not 1 <= self.n_distinct <= min(
            self.representative.n_objects, 2 * self.representative.draw_size
        ):
            raise ValueError(f"n_distinct {self.n_distinct} out of range")
        if self.row_equal and not self.is_symmetric:
            raise ValueError("equal rows must give a symmetric matrix")
        if self.is_symmetric and not self.row_equiv:
            raise ValueError("a symmetric matrix forces row-equivalent rows")


def unordered_partitions(total: int) -> list[tuple[int, ...]]:
    """All partitions of `total` into nonincreasing positive parts.

    Emitted in lexicographically decreasing order, e.g. 3 -> (3,), (2, 1),
    (1, 1, 1).
    """
    if total < 1:
        raise ValueError(f"cannot partition {total}; need a positive integer")
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, cap), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(total, total, [])
    return out


def placements(partition, slots: int) -> list[tuple[int, ...]]:
    """All distinct length-`slots` vectors using the partition's entries.

    Each result places the partition's values (in some order) into the
    slots and fills the rest with zeros; duplicates from repeated values
    appear once. Emitted in lexicographically decreasing order.
    """
    partition = tuple(partition)
    if len(partition) > slots:
        raise ValueError(
            f"partition has {len(partition)} parts but only {slots} slots"
        )
    counts = Counter(partition)
    counts[0] += slots - len(partition)
    distinct = sorted(counts, reverse=True)
    out: list[tuple[int, ...]] = []
    buf: list[int] = []

    def rec(depth: int):
        if depth == slots:
            out.append(tuple(buf))
            return
        for v in distinct:
            if counts[v]:
                counts[v] -= 1
                buf.append(v)
                rec(depth + 1)
                buf.pop()
                counts[v] += 1

    rec(0)
    return out


def state_matrix(pair: PairMatrix) -> StateMatrix:
    """Fold a pair into its column-type count matrix.

    Invariant to column permutations of the pair; swapping the rows
    transposes the result.
    """
    side = pair.draw_size + 1
    grid = [[0] * side for _ in range(side)]
    for top, bottom in pair.columns:
        grid[top][bottom] += 1
    return StateMatrix(tuple(tuple(row) for row in grid))


def canonicalize(m: StateMatrix) -> StateMatrix:
    """Canonical form under transpose: the flattening-smaller of m, m^T."""
    t = m.transpose()
    return m if m.flattened <= t.flattened else t


def n_distinct(pair: PairMatrix) -> int:
    """Number of distinct objects appearing in the pair (nonzero columns)."""
    return sum(1 for top, bottom in pair.columns if top or bottom)


def _row1_candidates(draw_size: int) -> list[tuple[int, ...]]:
    # One placement per partition: nonincreasing, left-justified. Any pair
    # can be column-permuted into this form, so the catalog is complete.
    span = 2 * draw_size
    return [
        part + (0,) * (span - len(part)) for part in unordered_partitions(draw_size)
    ]


def _row2_candidates(draw_size: int) -> list[tuple[int, ...]]:
    span = 2 * draw_size
    return [
        pl for part in unordered_partitions(draw_size) for pl in placements(part, span)
    ]


def _keys_for_row1(args: tuple[int, tuple[int, ...]]) -> set[tuple[int, ...]]:
    """Canonical flattened matrices for one fixed top row (worker unit)."""
    draw_size, row1 = args
    side = draw_size + 1
    cells = side * side
    t_idx = [(pos % side) * side + pos // side for pos in range(cells)]
    offsets = [v * side for v in row1]
    seen: set[tuple[int, ...]] = set()
    for row2 in _row2_candidates(draw_size):
        m = [0] * cells
        for off, v in zip(offsets, row2):
            m[off + v] += 1
        flat = tuple(m)
        flipped = tuple(map(flat.__getitem__, t_idx))
        seen.add(flat if flat <= flipped else flipped)
    return seen


def _worker_count() -> int:
    """Worker cap from IDSTATES_THREADS (unset/1 = serial, 0 = all cores)."""
    raw = os.environ.get("IDSTATES_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"IDSTATES_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError("IDSTATES_THREADS must be >= 0")
    return n if n else (os.cpu_count() or 1)


@lru_cache(maxsize=None)
def _canonical_flat_keys(draw_size: int) -> tuple[tuple[int, ...], ...]:
    """Sorted flattened canonical matrices at I = 2K (the full catalog).

    The result is independent of the worker count: partial key sets are
    merged with set union and sorted once at the end.
    """
    work = [(draw_size, row1) for row1 in _row1_candidates(draw_size)]
    workers = min(_worker_count(), len(work))
    if workers > 1:
        try:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
                chunks = list(ex.map(_keys_for_row1, work))
        except OSError:
            chunks = [_keys_for_row1(item) for item in work]
    else:
        chunks = [_keys_for_row1(item) for item in work]
    return tuple(sorted(set().union(*chunks)))


def _unflatten(flat: tuple[int, ...], side: int) -> StateMatrix:
    rows = tuple(flat[r * side : (r + 1) * side] for r in range(side))
    return StateMatrix(rows)


def _representative_pair(matrix: StateMatrix) -> PairMatrix:
    """Pair realizing the matrix, columns in decreasing lexicographic order."""
    columns: list[tuple[int, int]] = []
    for top, row in enumerate(matrix.entries):
        for bottom, count in enumerate(row):
            columns.extend([(top, bottom)] * count)
    columns.sort(reverse=True)
    row1 = tuple(c[0] for c in columns)
    row2 = tuple(c[1] for c in columns)
    return PairMatrix(DrawVector(row1), DrawVector(row2))


def _build_state(matrix: StateMatrix, nonzero_cols: int) -> IdentityState:
    grid = matrix.entries
    rep = _representative_pair(matrix)
    row_sums = tuple(sum(row) for row in grid)
    col_sums = tuple(sum(col) for col in zip(*grid))
    stab = 1
    for top, row in enumerate(grid):
        for bottom, count in enumerate(row):
            if (top, bottom) != (0, 0):
                stab *= factorial(count)
    return IdentityState(
        canonical_matrix=matrix,
        representative=rep,
        dissimilarity=dissimilarity(rep.row1, rep.row2),
        n_distinct=nonzero_cols,
        is_symmetric=grid == tuple(zip(*grid)),
        stabilizer_size=stab,
        row_equiv=row_sums == col_sums,
        row_equal=all(
            v == 0 for i, row in enumerate(grid) for j, v in enumerate(row) if i != j
        ),
    )


def _check_sizes(draw_size: int, objects: int):
    if draw_size < 1:
        raise ValueError(f"draw size must be >= 1, got {draw_size}")
    if objects < 1:
        raise ValueError(f"object count must be >= 1, got {objects}")


def enumerate_states(draw_size: int, n_objects: int) -> list[IdentityState]:
    """Full identity-state catalog for the given draw size and object count.

    Exactly one record per state, sorted by flattened canonical matrix.
    For n_objects >= 2K the catalog has the same states as at 2K (padded
    with zero columns); below 2K it is the subset fitting in n_objects
    columns.
    """
    _check_sizes(draw_size, n_objects)
    span = 2 * draw_size
    side = draw_size + 1
    states = []
    for flat in _canonical_flat_keys(draw_size):
        nonzero_cols = span - flat[0]
        if nonzero_cols > n_objects:
            continue
        adjusted = (n_objects - nonzero_cols,) + flat[1:]
        states.append(_build_state(_unflatten(adjusted, side), nonzero_cols))
    states.sort(key=lambda s: s.canonical_matrix.flattened)
    return states


def state_count(draw_size: int, n_objects: int) -> int:
    """Number of identity states, without building state records."""
    _check_sizes(draw_size, n_objects)
    span = 2 * draw_size
    return sum(
        1 for flat in _canonical_flat_keys(draw_size) if span - flat[0] <= n_objects
    )


def state_from_matrix(matrix: StateMatrix) -> IdentityState:
    """Rebuild the full state record from a canonical matrix."""
    if matrix != canonicalize(matrix):
        raise ValueError("matrix is not in canonical (transpose-minimal) form")
    return _build_state(matrix, matrix.n_objects - matrix.entries[0][0])
