"""Exact probabilities of identity states under two frequency vectors.

The first draw samples K objects with replacement using frequencies p,
the second using q. The probability of an identity state sums the
probabilities of every labeled pair in its equivalence class. Collapsing
the class structure gives a closed form per state:

    P[state] = m(g1) * m(g2) / ((1 + swap_fixed) * stabilizer)
               * sum over injective index tuples (i_1..i_N) of
                 prod_j p_{i_j}^{g1_j} q_{i_j}^{g2_j}
               + prod_j p_{i_j}^{g2_j} q_{i_j}^{g1_j}

where m() is the multinomial coefficient counting orderings of a draw, N
is the state's number of distinct objects, g1/g2 are the representative's
nonzero columns, and the stabilizer counts column permutations fixing the
representative. swap_fixed is 1 exactly when some relabeling turns
(g1, g2) into (g2, g1), i.e. when the state matrix is symmetric: then the
two draw orders relabel onto the same pairs and the sum double-counts.
Rows merely sharing a partition of K is not enough: (2,1,0)/(1,0,2) has
no single relabeling swapping its rows, and its class sum needs both
orientations at full weight.

Two numeric modes: exact rationals (Fraction entries; all identities hold
bit-exactly) and floats. Two independent oracles check the closed form:
an exhaustive iteration over all ordered outcome pairs, and a seeded
Monte Carlo sampler.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import DrawVector, PairMatrix
from .enumeration import IdentityState, StateMatrix, canonicalize, state_matrix

_EXACT_TYPES = (int, Fraction)

#: Largest I**(2K) the exhaustive oracle will attempt without force=True.
BRUTE_FORCE_GUARD = 10**8


def _is_exact(values) -> bool:
    return all(isinstance(v, _EXACT_TYPES) for v in values)


@dataclass(frozen=True)
class FrequencyVector:
    """Probability vector over I objects; exact (Fraction) or float entries.

    Exact vectors must sum to exactly 1. Float vectors may deviate from 1
    by at most 1e-9 and are renormalized on construction.
    """

    entries: tuple
    exact: bool

    SUM_TOLERANCE = 1e-9

    def __post_init__(self):
        values = tuple(self.entries)
        if not values:
            raise ValueError("frequency vector must not be empty")
        if self.exact:
            if not _is_exact(values):
                raise ValueError(
                    "exact mode needs int/Fraction entries; "
                    "parse strings with Fraction() first"
                )
            values = tuple(Fraction(v) for v in values)
            total = sum(values)
            if total != 1:
                raise ValueError(f"frequencies sum to {total}, expected exactly 1")
        else:
            values = tuple(float(v) for v in values)
            total = math.fsum(values)
            if abs(total - 1.0) > self.SUM_TOLERANCE:
                raise ValueError(f"frequencies sum to {total:.12g}, expected 1")
            if total != 1.0:
                values = tuple(v / total for v in values)
        if any(v < 0 for v in values):
            raise ValueError("frequencies must be nonnegative")
        object.__setattr__(self, "entries", values)

    @classmethod
    def from_values(cls, values, mode: str = "auto") -> "FrequencyVector":
        """Build a vector; mode is "rational", "float", or "auto".

        Auto picks rational exactly when every entry is an int/Fraction.
        """
        values = tuple(values)
        if mode == "auto":
            exact = _is_exact(values)
        elif mode == "rational":
            exact = True
        elif mode == "float":
            exact = False
        else:
            raise ValueError(f"unknown mode {mode!r}")
        return cls(values, exact)

    @classmethod
    def uniform(cls, n_objects: int, exact: bool = True) -> "FrequencyVector":
        if n_objects < 1:
            raise ValueError("need at least one object")
        if exact:
            return cls((Fraction(1, n_objects),) * n_objects, True)
        return cls((1.0 / n_objects,) * n_objects, False)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class StateProbability:
    """Probability assigned to one identity state."""

    state: IdentityState
    value: object

    def __post_init__(self):
        slack = 0 if isinstance(self.value, _EXACT_TYPES) else 1e-12
        if not -slack <= self.value <= 1 + slack:
            raise ValueError(f"probability {self.value} out of [0, 1]")


def multinomial(total: int, parts) -> int:
    """Orderings of a draw: total! / prod(parts[i]!), exact integer."""
    parts = tuple(parts)
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    if sum(parts) != total:
        raise ValueError(f"parts {parts} sum to {sum(parts)}, expected {total}")
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


def row_signature(g: DrawVector) -> tuple[int, ...]:
    """Length-(K+1) value histogram of a draw: entry v counts positions equal to v.

    Two draws have equal signatures exactly when one is a position
    permutation of the other.
    """
    sig = [0] * (g.draw_size + 1)
    for c in g.counts:
        sig[c] += 1
    return tuple(sig)


def stabilizer_size(pair: PairMatrix) -> int:
    """Number of permutations of the nonzero columns that fix the pair.

    Equal columns are interchangeable, so this is the product of
    factorials of the equal-column class sizes.
    """
    classes = {}
    for col in pair.columns:
        if col != (0, 0):
            classes[col] = classes.get(col, 0) + 1
    out = 1
    for count in classes.values():
        out *= math.factorial(count)
    return out


def _check_freqs(p, q):
    if len(p) != len(q):
        raise ValueError(f"frequency length mismatch: {len(p)} vs {len(q)}")


def ordered_pair_probability(pair: PairMatrix, p, q):
    """Probability of drawing exactly (row1 from p, row2 from q), in order."""
    if len(p) != pair.n_objects or len(q) != pair.n_objects:
        raise ValueError(
            f"pair covers {pair.n_objects} objects, frequencies cover "
            f"{len(p)} and {len(q)}"
        )
    k = pair.draw_size
    out = multinomial(k, pair.row1.counts) * multinomial(k, pair.row2.counts)
    for freq, counts in ((p, pair.row1.counts), (q, pair.row2.counts)):
        for f, c in zip(freq, counts):
            if c:
                out *= f**c
    return out


def _injective_pair_sum(p, q, exp1, exp2, one):
    """Sum over injective index tuples of both p/q orientations of the product."""
    n = len(exp1)
    slots = len(p)
    total = one - one  # zero of the working numeric type

    def rec(depth, mask, fwd, rev):
        nonlocal total
        if depth == n:
            total += fwd + rev
            return
        e1, e2 = exp1[depth], exp2[depth]
        for i in range(slots):
            if mask >> i & 1:
                continue
            pi, qi = p[i], q[i]
            f = fwd * pi**e1 * qi**e2
            r = rev * pi**e2 * qi**e1
            if f or r:  # all continuations of a doubly-zero branch are zero
                rec(depth + 1, mask | 1 << i, f, r)

    rec(0, 0, one, one)
    return total


def _injective_single_sum(p, exps, one):
    n = len(exps)
    slots = len(p)
    total = one - one

    def rec(depth, mask, prod):
        nonlocal total
        if depth == n:
            total += prod
            return
        e = exps[depth]
        for i in range(slots):
            if mask >> i & 1:
                continue
            nxt = prod * p[i] ** e
            if nxt:
                rec(depth + 1, mask | 1 << i, nxt)

    rec(0, 0, one)
    return total


def _state_exponents(state: IdentityState):
    n = state.n_distinct
    return (
        state.representative.row1.counts[:n],
        state.representative.row2.counts[:n],
    )


def state_probability(state: IdentityState, p, q) -> StateProbability:
    """Probability of the state when the draws use frequencies p and q.

    Exact when both vectors are exact. A state needing more distinct
    objects than p provides has probability zero (empty injective sum),
    not an error. Cost grows as the falling factorial I * (I-1) * ...
    over the state's distinct-object count (zero entries prune early),
    so keep I small for large draw sizes.
    """
    _check_freqs(p, q)
    exact = _is_exact(p) and _is_exact(q)
    zero = Fraction(0) if exact else 0.0
    if state.n_distinct > len(p):
        return StateProbability(state, zero)
    exp1, exp2 = _state_exponents(state)
    k = state.representative.draw_size
    weight = multinomial(k, exp1) * multinomial(k, exp2)
    divisor = (1 + state.is_symmetric) * state.stabilizer_size
    one = Fraction(1) if exact else 1.0
    total = _injective_pair_sum(tuple(p), tuple(q), exp1, exp2, one)
    if exact:
        value = Fraction(weight, divisor) * total
    else:
        value = weight / divisor * total
    return StateProbability(state, value)


def state_probability_same(state: IdentityState, p) -> StateProbability:
    """Probability of the state when both draws use frequencies p.

    Simplified single-product form; agrees exactly with
    state_probability(state, p, p).
    """
    exact = _is_exact(p)
    zero = Fraction(0) if exact else 0.0
    if state.n_distinct > len(p):
        return StateProbability(state, zero)
    exp1, exp2 = _state_exponents(state)
    k = state.representative.draw_size
    weight = multinomial(k, exp1) * multinomial(k, exp2)
    divisor = (1 + state.is_symmetric) * state.stabilizer_size
    one = Fraction(1) if exact else 1.0
    combined = tuple(a + b for a, b in zip(exp1, exp2))
    total = _injective_single_sum(tuple(p), combined, one)
    if exact:
        value = Fraction(2 * weight, divisor) * total
    else:
        value = 2 * weight / divisor * total
    return StateProbability(state, value)


def brute_force_state_distribution(
    draw_size: int, n_objects: int, p, q, force: bool = False
) -> dict[StateMatrix, object]:
    """Exhaustive ground truth: iterate every ordered outcome pair.

    Walks all I^K ordered outcomes per side, accumulating each outcome's
    probability (a plain product of entry frequencies) onto the canonical
    state of its pair. No multinomials, no stabilizers: independent of the
    closed form it checks. Exact in rational mode; the result sums to 1.
    """
    _check_freqs(p, q)
    if len(p) != n_objects:
        raise ValueError(f"frequencies cover {len(p)} objects, expected {n_objects}")
    cost = n_objects ** (2 * draw_size)
    if cost > BRUTE_FORCE_GUARD and not force:
        raise ValueError(
            f"{n_objects}^(2*{draw_size}) = {cost} ordered outcome pairs "
            f"exceeds the guard ({BRUTE_FORCE_GUARD}); pass force=True to override"
        )
    exact = _is_exact(p) and _is_exact(q)

    def side_totals(freq):
        # probability mass reaching each count vector, one ordered outcome
        # at a time
        acc: dict[tuple[int, ...], list] = {}
        for outcome in itertools.product(range(n_objects), repeat=draw_size):
            prob = Fraction(1) if exact else 1.0
            counts = [0] * n_objects
            for obj in outcome:
                prob *= freq[obj]
                counts[obj] += 1
            acc.setdefault(tuple(counts), []).append(prob)
        if exact:
            return {g: sum(terms) for g, terms in acc.items()}
        return {g: math.fsum(terms) for g, terms in acc.items()}

    totals1 = side_totals(p)
    totals2 = side_totals(q)
    dist: dict[StateMatrix, list] = {}
    for g1, pr1 in totals1.items():
        if not pr1:
            continue
        for g2, pr2 in totals2.items():
            if not pr2:
                continue
            pair = PairMatrix(DrawVector(g1), DrawVector(g2))
            key = canonicalize(state_matrix(pair))
            dist.setdefault(key, []).append(pr1 * pr2)
    if exact:
        return {key: sum(terms) for key, terms in dist.items()}
    return {key: math.fsum(terms) for key, terms in dist.items()}


def monte_carlo_state_distribution(
    draw_size: int, n_objects: int, p, q, n_samples: int, seed: int
) -> dict[StateMatrix, Fraction]:
    """Empirical state frequencies from seeded sampling.

    Each sample draws K objects from p and K from q (as multinomial count
    vectors via numpy's PCG64 generator) and classifies the pair by
    canonical state matrix. Frequencies are exact counts over n_samples,
    so they sum to exactly 1. Reproducible for a fixed (seed, numpy
    version).
    """
    _check_freqs(p, q)
    if len(p) != n_objects:
        raise ValueError(f"frequencies cover {len(p)} objects, expected {n_objects}")
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples}")
    rng = np.random.default_rng(seed)
    pf = np.asarray([float(v) for v in p])
    qf = np.asarray([float(v) for v in q])
    draws1 = rng.multinomial(draw_size, pf / pf.sum(), size=n_samples)
    draws2 = rng.multinomial(draw_size, qf / qf.sum(), size=n_samples)
    pairs, counts = np.unique(
        np.hstack([draws1, draws2]), axis=0, return_counts=True
    )
    freq: dict[StateMatrix, Fraction] = {}
    for row, count in zip(pairs, counts):
        g1 = tuple(int(v) for v in row[:n_objects])
        g2 = tuple(int(v) for v in row[n_objects:])
        key = canonicalize(state_matrix(PairMatrix(DrawVector(g1), DrawVector(g2))))
        freq[key] = freq.get(key, Fraction(0)) + Fraction(int(count), n_samples)
    return freq
