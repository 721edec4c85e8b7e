"""Invariant measures with exact cylinder masses, entropy and integration.

Variants: ``Periodic`` (orbit average over a cyclic word, possibly with inf),
``FiniteMarkov`` (stationary chain on a finite symbol set), ``Bernoulli``
(i.i.d. with a law on N), ``Combo`` (sub-probability combination) and
``DiracInfinity`` (the point mass at (inf, inf, ...)).

Cylinder queries take *patterns*: tuples whose entries are symbols (ints or
INF) or ``Bucket`` objects.  A bucket matches every symbol outside its
``keep`` set, INF included; ``WILD`` (empty keep set) matches anything.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    InfinitePartitionEntropy, NotCyclicallyAdmissible, PreconditionViolated,
    SeriesUndecidable, WeightSumError,
)
from .potential import Potential
from .series import GeometricLaw, Tail, law_tail_sum
from .shift import INF, is_cyclically_admissible, is_inf

MINUS_INFINITY = -math.inf


@dataclass(frozen=True)
class Bucket:
    """Pattern entry matching every symbol not in ``keep`` (INF included)."""

    keep: frozenset = frozenset()

    def matches(self, s) -> bool:
        return s not in self.keep

    def __repr__(self):
        return "*" if not self.keep else f">{max(self.keep)}"


WILD = Bucket()


def _matches(entry, s) -> bool:
    if isinstance(entry, Bucket):
        return entry.matches(s)
    return entry == s


def to_exact(x):
    """Fraction for ints, Fractions and 'p/q' strings; floats stay floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


class Measure:
    """Common interface.  Masses are Fractions when exact, floats otherwise."""

    approximate = False

    def mass_pattern(self, pattern: Sequence):
        raise NotImplementedError

    def mass(self, cylinder: Sequence):
        return self.mass_pattern(tuple(cylinder))

    def total(self):
        raise NotImplementedError

    def support(self) -> frozenset:
        """Finite symbols carrying positive depth-1 mass (None if infinite)."""
        raise NotImplementedError

    def depth1(self) -> dict:
        """symbol -> mass of [symbol] for finitely supported measures."""
        return {a: self.mass((a,)) for a in sorted(self.support())}

    def entropy(self) -> float:
        raise NotImplementedError

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Measure) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


# ---------------------------------------------------------------------------
# periodic


def _canonical_cycle(word):
    w = tuple(word)
    n = len(w)
    # primitive root
    for d in range(1, n + 1):
        if n % d == 0 and w == w[:d] * (n // d):
            w = w[:d]
            break
    rots = [w[i:] + w[:i] for i in range(len(w))]
    return min(rots)


class Periodic(Measure):
    """Orbit average over the cyclic shifts of ``word``."""

    def __init__(self, word: Sequence):
        w = tuple(word)
        if not w:
            raise ValueError("periodic word must be nonempty")
        self.word = _canonical_cycle(w)
        self.period = len(self.word)
        self._windows = {}

    def _count(self, pattern):
        w, p = self.word, self.period
        L = len(pattern)
        hits = 0
        for i in range(p):
            if all(_matches(pattern[j], w[(i + j) % p]) for j in range(L)):
                hits += 1
        return hits

    def mass_pattern(self, pattern):
        if not pattern:
            return Fraction(1)
        return Fraction(self._count(tuple(pattern)), self.period)

    def window_counts(self, L: int, keep: frozenset | None = None) -> Counter:
        """Counts of cyclic windows of length L; with ``keep``, symbols outside it become a bucket."""
        key = (L, keep)
        c = self._windows.get(key)
        if c is None:
            w = self.word
            if keep is not None:
                b = Bucket(keep)
                w = tuple(s if s in keep else b for s in w)
            ext = w * (1 + (L + self.period - 1) // self.period)
            c = Counter(ext[i:i + L] for i in range(self.period))
            self._windows[key] = c
        return c

    def total(self):
        return Fraction(1)

    def support(self):
        return frozenset(s for s in self.word if not is_inf(s))

    def entropy(self):
        return 0.0

    def _key(self):
        return ("periodic", self.word)

    def __repr__(self):
        return "Periodic((" + ",".join("inf" if is_inf(s) else str(s) for s in self.word) + "))"


def periodic_measure(word: Sequence, shift=None) -> Periodic:
    """Periodic measure of the cyclic word; checked against ``shift`` when given."""
    w = tuple(word)
    if shift is not None and not is_cyclically_admissible(shift, w):
        raise NotCyclicallyAdmissible(f"{w} is not cyclically admissible")
    return Periodic(w)


# ---------------------------------------------------------------------------
# finite Markov


def stationary_gth(P):
    """Stationary vector of an irreducible stochastic matrix by GTH elimination.

    Works on Fractions (exactly) or floats; no subtractions are performed.
    """
    n = len(P)
    A = [list(row) for row in P]
    for k in range(n - 1, 0, -1):
        s = sum(A[k][:k])
        if s == 0:
            raise ValueError("matrix is not irreducible")
        for i in range(k):
            A[i][k] = A[i][k] / s
        for i in range(k):
            for j in range(k):
                A[i][j] = A[i][j] + A[i][k] * A[k][j]
    x = [None] * n
    x[0] = A[0][0] * 0 + 1
    for k in range(1, n):
        x[k] = sum(x[i] * A[i][k] for i in range(k))
    tot = sum(x)
    return [v / tot for v in x]


class FiniteMarkov(Measure):
    """Stationary Markov chain on a finite symbol set.

    Exact (Fractions) when every entry of P (and p, if given) is an int,
    Fraction or 'p/q' string; otherwise floats and ``approximate`` is True.
    """

    def __init__(self, symbols: Sequence[int], P, p=None, *, tol: float = 1e-10):
        syms = tuple(int(s) for s in symbols)
        if len(set(syms)) != len(syms):
            raise ValueError("symbols must be distinct")
        k = len(syms)
        Pm = [[to_exact(x) for x in row] for row in P]
        if len(Pm) != k or any(len(r) != k for r in Pm):
            raise ValueError("P must be square and match the symbols")
        exact = all(isinstance(x, Fraction) for r in Pm for x in r)
        if p is not None:
            pv = [to_exact(x) for x in p]
            exact = exact and all(isinstance(x, Fraction) for x in pv)
        if not exact:
            Pm = [[float(x) for x in r] for r in Pm]
        if any(x < 0 for r in Pm for x in r):
            raise ValueError("P has a negative entry")
        for r in Pm:
            s = sum(r)
            if (s != 1) if exact else abs(s - 1) > tol:
                raise ValueError("rows of P must sum to 1")
        if p is None:
            pv = stationary_gth(Pm)
        else:
            pv = [x if exact else float(x) for x in pv]
            for j in range(k):
                s = sum(pv[i] * Pm[i][j] for i in range(k))
                if (s != pv[j]) if exact else abs(s - pv[j]) > tol:
                    raise ValueError("p is not stationary for P")
        self.symbols = syms
        self.index = {s: i for i, s in enumerate(syms)}
        self.P = tuple(tuple(r) for r in Pm)
        self.p = tuple(pv)
        self.approximate = not exact
        self._Pnp = np.array([[float(x) for x in r] for r in Pm])

    def check_support(self, shift) -> bool:
        return all(shift.allowed(a, b) for a in self.symbols for b in self.symbols
                   if self.P[self.index[a]][self.index[b]] != 0)

    def _allowed_states(self, entry):
        if isinstance(entry, Bucket):
            return [i for i, s in enumerate(self.symbols) if entry.matches(s)]
        i = self.index.get(entry)
        return [] if i is None else [i]

    def mass_pattern(self, pattern):
        zero = Fraction(0) if not self.approximate else 0.0
        if not pattern:
            return zero + 1
        first = self._allowed_states(pattern[0])
        v = {i: self.p[i] for i in first if self.p[i] != 0}
        for entry in pattern[1:]:
            nxt = {}
            for j in self._allowed_states(entry):
                s = zero
                for i, vi in v.items():
                    pij = self.P[i][j]
                    if pij:
                        s += vi * pij
                if s:
                    nxt[j] = s
            v = nxt
            if not v:
                return zero
        return sum(v.values(), zero)

    def total(self):
        return Fraction(1) if not self.approximate else 1.0

    def support(self):
        return frozenset(s for s, pi in zip(self.symbols, self.p) if pi > 0)

    def entropy(self):
        h = 0.0
        for i, pi in enumerate(self.p):
            for pij in self.P[i]:
                if pij > 0 and pi > 0:
                    h -= float(pi) * float(pij) * math.log(float(pij))
        return h

    def _key(self):
        return ("markov", self.symbols, self.P, self.p)

    def __repr__(self):
        tag = "~" if self.approximate else ""
        return f"FiniteMarkov{tag}({self.symbols})"


def bernoulli_finite(probs: dict) -> FiniteMarkov:
    """I.i.d. measure on finitely many symbols, given as {symbol: probability}."""
    syms = sorted(probs)
    row = [probs[s] for s in syms]
    return FiniteMarkov(syms, [row] * len(syms), row)


# ---------------------------------------------------------------------------
# Bernoulli on N


class Bernoulli(Measure):
    """I.i.d. measure on the full shift with marginal ``law`` on N = {1, 2, ...}."""

    def __init__(self, law):
        self.law = law
        self.approximate = not isinstance(law, GeometricLaw) or not isinstance(law.r, Fraction)

    def _position_mass(self, entry):
        if isinstance(entry, Bucket):
            return 1 - sum((self.law.p(s) for s in entry.keep if isinstance(s, int) and s >= 1),
                           Fraction(0) if not self.approximate else 0.0)
        if is_inf(entry) or not isinstance(entry, int) or entry < 1:
            return 0
        return self.law.p(entry)

    def mass_pattern(self, pattern):
        out = Fraction(1) if not self.approximate else 1.0
        for e in pattern:
            out = out * self._position_mass(e)
        return out

    def total(self):
        return Fraction(1) if not self.approximate else 1.0

    def support(self):
        return None

    def depth1(self):
        raise SeriesUndecidable("a Bernoulli measure on N has infinite support")

    def entropy(self):
        return _law_entropy(self.law)

    def _key(self):
        return ("bernoulli", self.law)

    def __repr__(self):
        return f"Bernoulli({self.law})"


def _law_entropy(law) -> float:
    return law_tail_sum(law, law.neg_log_p())


# ---------------------------------------------------------------------------
# point mass at infinity and combinations


class DiracInfinity(Measure):
    def mass_pattern(self, pattern):
        return Fraction(1) if all(is_inf(e) or isinstance(e, Bucket) for e in pattern) else Fraction(0)

    def total(self):
        return Fraction(1)

    def support(self):
        return frozenset()

    def entropy(self):
        return 0.0

    def _key(self):
        return ("dirac_inf",)

    def __repr__(self):
        return "DiracInfinity()"


class Combo(Measure):
    """sum_i w_i mu_i with positive weights of total at most one."""

    def __init__(self, weights, parts):
        merged: dict = {}
        order = []
        for w, m in zip(weights, parts):
            w = to_exact(w)
            if w <= 0:
                raise ValueError("weights must be positive")
            for ww, mm in (((w * a, b) for a, b in zip(m.weights, m.parts)) if isinstance(m, Combo) else [(w, m)]):
                if mm in merged:
                    merged[mm] = merged[mm] + ww
                else:
                    merged[mm] = ww
                    order.append(mm)
        tot = sum(merged.values(), Fraction(0))
        if tot > 1 + (1e-12 if isinstance(tot, float) else 0):
            raise WeightSumError(f"weights sum to {tot} > 1")
        self.parts = tuple(order)
        self.weights = tuple(merged[m] for m in order)
        self.approximate = any(isinstance(w, float) for w in self.weights) or any(m.approximate for m in self.parts)

    def mass_pattern(self, pattern):
        return sum((w * m.mass_pattern(pattern) for w, m in zip(self.weights, self.parts)), Fraction(0))

    def total(self):
        return sum(self.weights, Fraction(0))

    def support(self):
        out = set()
        for m in self.parts:
            s = m.support()
            if s is None:
                return None
            out |= s
        return frozenset(out)

    def entropy(self):
        return math.fsum(float(w) * m.entropy() for w, m in zip(self.weights, self.parts))

    def _key(self):
        return ("combo", tuple(sorted(((repr(m._key()), w) for w, m in zip(self.weights, self.parts)))))

    def __repr__(self):
        return " + ".join(f"{w}*{m!r}" for w, m in zip(self.weights, self.parts)) or "0"


def convex_combo(weights, parts) -> Combo:
    """Combination with positive weights summing to at most one."""
    weights, parts = list(weights), list(parts)
    if len(weights) != len(parts):
        raise ValueError("weights and parts differ in length")
    return Combo(weights, parts)


def zero_measure() -> Combo:
    return Combo([], [])


# ---------------------------------------------------------------------------
# module-level operations


def mass(measure: Measure, cylinder: Sequence):
    return measure.mass(tuple(cylinder))


def mass_at_infinity(measure: Measure):
    return measure.mass((INF,))


def entropy(measure: Measure) -> float:
    return measure.entropy()


def _series_depth1(measure: Measure, f_tail: Tail, f_value=None):
    """integral of f(x_1) over the finite symbols; f_value overrides the tail on listed symbols."""
    if isinstance(measure, Combo):
        return math.fsum(float(w) * _series_depth1(m, f_tail, f_value) for w, m in zip(measure.weights, measure.parts)) \
            if not any(_is_inf_val(_series_depth1(m, f_tail, f_value)) for m in measure.parts) \
            else _combine_inf([(_series_depth1(m, f_tail, f_value), w) for w, m in zip(measure.weights, measure.parts)])
    if isinstance(measure, Bernoulli):
        return law_tail_sum(measure.law, f_tail)
    supp = measure.support()
    return math.fsum(float(measure.mass((a,))) * f_tail(a) for a in sorted(supp))


def _is_inf_val(x):
    return math.isinf(x)


def _combine_inf(pairs):
    vals = [v for v, w in pairs if w > 0]
    if any(v == INF for v in vals) and any(v == -INF for v in vals):
        raise SeriesUndecidable("integral of the form inf - inf")
    return math.fsum(float(w) * v for v, w in pairs)


def integrate(measure: Measure, potential: Potential) -> float:
    """integral of phi d mu; -inf (MINUS_INFINITY) when the series diverges to -inf.

    Uses phi = tail(x_1) + sum over head words w of (head(w) - tail(w_1)) 1_[w].
    """
    if measure.mass((INF,)) != 0:
        raise ValueError("potential is not defined at inf but the measure charges it")
    base = _series_depth1(measure, potential.tail)
    corr = math.fsum(float(measure.mass(w)) * (v - potential.tail(w[0])) for w, v in potential.head)
    if math.isinf(base):
        return base
    return base + corr


def partition_entropy_H(measure: Measure) -> float:
    """-sum_n mu([n]) log mu([n]) over the partition into depth-1 cylinders of N."""
    if isinstance(measure, Bernoulli):
        return _law_entropy(measure.law)
    if isinstance(measure, Combo) and measure.support() is None:
        return _combo_partition_entropy(measure)
    h = 0.0
    for a, m in measure.depth1().items():
        m = float(m)
        if m > 0:
            h -= m * math.log(m)
    return h


def _combo_partition_entropy(c: Combo) -> float:
    inf_parts = [(w, m) for w, m in zip(c.weights, c.parts) if m.support() is None]
    fin_parts = [(w, m) for w, m in zip(c.weights, c.parts) if m.support() is not None]
    if len(inf_parts) != 1 or not isinstance(inf_parts[0][1], Bernoulli):
        raise SeriesUndecidable("partition entropy of this combination is not supported")
    wb, b = inf_parts[0]
    wb = float(wb)
    N0 = max((max(m.support(), default=0) for _, m in fin_parts), default=0)
    h = 0.0
    for a in range(1, N0 + 1):
        x = float(c.mass((a,)))
        if x > 0:
            h -= x * math.log(x)
    # beyond N0 only the Bernoulli part contributes: mass wb * p_n
    tail_mass = float(b.law.tail_mass(N0))
    rest = law_tail_sum(b.law, b.law.neg_log_p(), start=N0 + 1) if N0 else _law_entropy(b.law)
    if N0 and not math.isinf(rest):
        rest = _tail_only(b.law, N0)
    if math.isinf(rest):
        raise InfinitePartitionEntropy("partition entropy is infinite")
    return h + wb * rest - wb * math.log(wb) * tail_mass


def _tail_only(law, N0):
    """sum_{n > N0} p_n (-log p_n)."""
    import mpmath
    f = law.neg_log_p()
    with mpmath.workdps(30):
        s = mpmath.nsum(lambda n: law.mp(n) * f.mp(n), [N0 + 1, mpmath.inf])
    return float(s)


def overlap_mass(measure: Measure, A: Sequence, k: int):
    """mu(A intersected with sigma^{-k} A)."""
    A = tuple(A)
    L = len(A)
    if k < L:
        if A[k:] != A[:L - k]:
            return Fraction(0)
        return measure.mass_pattern(A[:k] + A)
    return measure.mass_pattern(A + (WILD,) * (k - L) + A)


@dataclass(frozen=True)
class ReturnTime:
    k: int
    mass: object
    bound: Fraction


def return_time_witness(measure: Measure, A: Sequence, m: int, h: int) -> ReturnTime:
    """Some k in [h, h+2m) with mu(A and sigma^{-k}A) > 2^{-2m}, given mu(A) > 1/m."""
    A = tuple(A)
    if m < 1 or h < 1:
        raise ValueError("m and h must be positive")
    if not measure.mass(A) > Fraction(1, m):
        raise PreconditionViolated(f"mass of {A} is not above 1/{m}")
    bound = Fraction(1, 2 ** (2 * m))
    for k in range(h, h + 2 * m):
        v = overlap_mass(measure, A, k)
        if v > bound:
            assert v > bound and h <= k < h + 2 * m
            return ReturnTime(k, v, bound)
    raise AssertionError("no return time in the window; the pigeonhole argument was violated")
