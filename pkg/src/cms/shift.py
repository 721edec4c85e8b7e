"""Shift presentations, admissibility over N and N u {inf}, word search and metrics.

Words are plain tuples of symbols.  Symbols are non-negative integers; the
extra symbol of the compactified alphabet is ``INF`` (``math.inf``), which
compares greater than every integer, so lexicographic order on tuples puts it
after all finite symbols.

Infinite alphabets are never materialised.  Every presentation streams the
successors of a symbol in increasing order, and each search takes explicit
caps and reports whether it was exhaustive.
"""
from __future__ import annotations

import bisect
import itertools
import math
import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CapZero, LengthMismatch, NotFoundWithinBound, TailRuleUnsupported

INF = math.inf

#: default bound on symbol values explored by searches over infinite alphabets
DEFAULT_SYMBOL_CAP = 10_000
#: loop counts above this are never needed exactly by the symbol encoding
COUNT_CAP = 2 ** 62


def is_inf(s) -> bool:
    return s == INF


def fmt_symbol(s) -> str:
    return "inf" if is_inf(s) else str(s)


class ShiftPresentation:
    """A transitive countable Markov shift given by a 0/1 transition rule.

    Subclasses implement the graph queries below.  ``distance`` is the length
    of a shortest path (number of transitions) and returns ``None`` when it
    exceeds ``limit``.
    """

    kind = "abstract"

    # -- graph queries -------------------------------------------------
    @property
    def finite_alphabet(self) -> bool:
        raise NotImplementedError

    def symbols(self) -> Iterator[int]:
        raise NotImplementedError

    def has_symbol(self, a) -> bool:
        raise NotImplementedError

    def allowed(self, a, b) -> bool:
        raise NotImplementedError

    def successors(self, a) -> Iterator[int]:
        raise NotImplementedError

    def predecessors(self, a) -> Iterator[int]:
        raise NotImplementedError

    def out_finite(self, a) -> bool:
        raise NotImplementedError

    def in_finite(self, a) -> bool:
        raise NotImplementedError

    def distance(self, a, b, limit: int) -> int | None:
        raise NotImplementedError

    def toward(self, a, target, steps: int) -> tuple[Iterator[int], bool]:
        """Successors ``s`` of ``a`` with ``distance(s, target) <= steps``.

        Returns the ascending stream and whether it is known to be finite.
        """
        stream = (s for s in self.successors(a) if self.distance(s, target, steps) is not None)
        return stream, self.out_finite(a)

    # -- compactification ----------------------------------------------
    def bar_admissible(self, word: Sequence) -> bool:
        raise NotImplementedError

    def contains_infinity_point(self) -> bool:
        """Whether the fixed point (inf, inf, ...) lies in the compactification."""
        raise NotImplementedError

    # -- helpers -------------------------------------------------------
    def first_symbols(self, k: int) -> tuple:
        return tuple(itertools.islice(self.symbols(), k))

    def describe(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# finite matrices


class FiniteMatrix(ShiftPresentation):
    """Subshift of finite type on a finite alphabet, given by its edge set."""

    kind = "finite_matrix"

    def __init__(self, alphabet: Iterable[int], edges: Iterable[tuple[int, int]], *, check_transitive=True):
        alpha = tuple(sorted(set(int(a) for a in alphabet)))
        if not alpha:
            raise ValueError("alphabet must be nonempty")
        if any(a < 0 for a in alpha):
            raise ValueError("symbols must be non-negative integers")
        aset = set(alpha)
        E = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i not in aset or j not in aset:
                raise ValueError(f"edge ({i},{j}) uses a symbol outside the alphabet")
            E.add((i, j))
        self.alphabet = alpha
        self.edges = frozenset(E)
        self._succ = {a: tuple(sorted(b for (x, b) in E if x == a)) for a in alpha}
        self._pred = {a: tuple(sorted(x for (x, b) in E if b == a)) for a in alpha}
        for a in alpha:
            if not self._succ[a] or not self._pred[a]:
                raise ValueError(f"symbol {a} has an all-zero row or column")
        self._dist = {a: self._bfs(a) for a in alpha}
        self.transitive = all(len(d) == len(alpha) for d in self._dist.values())
        if check_transitive and not self.transitive:
            raise ValueError("transition graph is not strongly connected")

    @classmethod
    def from_matrix(cls, M, alphabet=None):
        n = len(M)
        alphabet = list(alphabet) if alphabet is not None else list(range(1, n + 1))
        edges = [(alphabet[i], alphabet[j]) for i in range(n) for j in range(n) if M[i][j]]
        return cls(alphabet, edges)

    def _bfs(self, a):
        dist = {a: 0}
        q = deque([a])
        while q:
            u = q.popleft()
            for v in self._succ[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        return dist

    @property
    def finite_alphabet(self):
        return True

    def symbols(self):
        return iter(self.alphabet)

    def has_symbol(self, a):
        return a in self._succ

    def allowed(self, a, b):
        return (a, b) in self.edges

    def successors(self, a):
        return iter(self._succ.get(a, ()))

    def predecessors(self, a):
        return iter(self._pred.get(a, ()))

    def out_finite(self, a):
        return True

    def in_finite(self, a):
        return True

    def distance(self, a, b, limit):
        d = self._dist.get(a, {}).get(b)
        return d if d is not None and d <= limit else None

    def matrix(self):
        idx = {a: i for i, a in enumerate(self.alphabet)}
        M = [[0] * len(self.alphabet) for _ in self.alphabet]
        for i, j in self.edges:
            M[idx[i]][idx[j]] = 1
        return M

    def bar_admissible(self, word):
        if any(is_inf(s) for s in word):
            return False
        return _finite_admissible(self, word)

    def contains_infinity_point(self):
        return False

    def describe(self):
        return {"type": self.kind, "alphabet": list(self.alphabet), "edges": sorted([list(e) for e in self.edges])}

    def __repr__(self):
        return f"FiniteMatrix(alphabet={self.alphabet}, edges={sorted(self.edges)})"


def golden_mean() -> FiniteMatrix:
    """The golden-mean shift on {1, 2}: every transition except 2 -> 2."""
    return FiniteMatrix([1, 2], [(1, 1), (1, 2), (2, 1)])


# ---------------------------------------------------------------------------
# full shift


class FullShift(ShiftPresentation):
    """Full shift on N = {1, 2, 3, ...}."""

    kind = "full_shift"

    @property
    def finite_alphabet(self):
        return False

    def symbols(self):
        return itertools.count(1)

    def has_symbol(self, a):
        return isinstance(a, int) and a >= 1

    def allowed(self, a, b):
        return self.has_symbol(a) and self.has_symbol(b)

    def successors(self, a):
        return itertools.count(1)

    def predecessors(self, a):
        return itertools.count(1)

    def out_finite(self, a):
        return False

    def in_finite(self, a):
        return False

    def distance(self, a, b, limit):
        d = 0 if a == b else 1
        return d if d <= limit else None

    def toward(self, a, target, steps):
        if steps >= 1:
            return itertools.count(1), False
        return iter([target] if steps == 0 else []), True

    def bar_admissible(self, word):
        return all(is_inf(s) or self.has_symbol(s) for s in word)

    def contains_infinity_point(self):
        return True

    def describe(self):
        return {"type": self.kind}

    def __eq__(self, other):
        return isinstance(other, FullShift)

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return "FullShift()"


# ---------------------------------------------------------------------------
# loop systems


@dataclass(frozen=True)
class LoopTail:
    """Rule giving the loop count a_n for n beyond the explicit head.

    kinds: ``zero``; ``constant`` (``value`` a positive int or INF);
    ``exponential`` (a_n = base**n); ``double_exponential`` (a_n = base**(base**n)).
    """

    kind: str = "zero"
    value: float | int | None = None

    KINDS = ("zero", "constant", "exponential", "double_exponential")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise TailRuleUnsupported(f"unknown tail rule {self.kind!r}")
        if self.kind == "constant":
            if not (is_inf(self.value) or (isinstance(self.value, int) and self.value >= 0)):
                raise TailRuleUnsupported("constant tail needs a count in N or inf")
        if self.kind in ("exponential", "double_exponential"):
            if not (isinstance(self.value, int) and self.value >= 2):
                raise TailRuleUnsupported(f"{self.kind} tail needs an integer base >= 2")

    def count(self, n: int):
        if self.kind == "zero":
            return 0
        if self.kind == "constant":
            return self.value
        if self.kind == "exponential":
            return self.value ** n
        return self.value ** (self.value ** n)

    def log_count(self, n: int) -> float:
        """log a_n without forming a_n (which may be astronomically large)."""
        if self.kind == "zero" or (self.kind == "constant" and self.value == 0):
            return -INF
        if self.kind == "constant":
            return INF if is_inf(self.value) else math.log(self.value)
        if self.kind == "exponential":
            return n * math.log(self.value)
        if n * math.log(self.value) > 700:
            return INF
        return float(self.value) ** n * math.log(self.value)

    @property
    def nonzero(self) -> bool:
        return not (self.kind == "zero" or (self.kind == "constant" and self.value == 0))

    @property
    def infinite_counts(self) -> bool:
        return self.kind == "constant" and is_inf(self.value)

    @property
    def log_growth(self) -> float:
        """limsup (1/n) log a_n along the tail (-inf when the tail is empty)."""
        if not self.nonzero:
            return -INF
        if self.kind == "constant":
            return INF if is_inf(self.value) else 0.0
        if self.kind == "exponential":
            return math.log(self.value)
        return INF

    def describe(self):
        if self.kind == "zero":
            return "zero"
        v = "inf" if is_inf(self.value) else self.value
        key = "value" if self.kind == "constant" else "base"
        return {"kind": self.kind, key: v}


class LoopSystem(ShiftPresentation):
    """Bouquet of simple loops at one base vertex.

    ``loops`` maps a loop length n to the number a_n of loops of that length
    (an int or INF).  Lengths above the largest head key follow ``tail``.
    The base vertex is the symbol ``base``; interior vertices get the
    consecutive symbols ``base+1, base+2, ...`` loop by loop, where loops
    (n, j) (length n, copy j < a_n) are listed by increasing n + j and then
    by increasing n.
    """

    kind = "loop_system"

    def __init__(self, loops: dict, tail: LoopTail | str = "zero", *, base: int = 0):
        head = {}
        for n, c in loops.items():
            n = int(n)
            if n < 1:
                raise ValueError("loop lengths start at 1")
            if not (is_inf(c) or (isinstance(c, int) and c >= 0)):
                raise ValueError(f"loop count for n={n} must be in N or inf")
            head[n] = c
        if head.get(1, 0) not in (0, 1):
            raise ValueError("a 0/1 matrix allows at most one loop of length 1")
        if isinstance(tail, str):
            tail = LoopTail(tail)
        self.head = dict(sorted(head.items()))
        self.tail = tail
        self.base = int(base)
        self.max_head = max(self.head) if self.head else 0
        if not self._has_any_cycle():
            raise ValueError("loop system has no loops")
        self._lock = threading.Lock()
        self._loops: list[tuple[int, int, int]] = []   # (length, copy, first interior symbol)
        self._starts: list[int] = []
        self._next_symbol = self.base + 1
        self._diag = 2
        self._done = False
        self._last_diag = self._final_diagonal()

    # -- counts ----------------------------------------------------------
    def count(self, n: int):
        """a_n exactly (may be huge for fast-growing tails; see ``count_capped``)."""
        if n in self.head:
            return self.head[n]
        if n <= self.max_head:
            return 0
        return self.tail.count(n)

    def count_capped(self, n: int, cap: int = COUNT_CAP):
        """min(a_n, cap), with INF kept as INF; never forms huge integers."""
        if n <= self.max_head or self.tail.kind in ("zero", "constant"):
            c = self.count(n)
            return c if is_inf(c) else min(c, cap)
        return cap if self.tail.log_count(n) >= math.log(cap) else self.tail.count(n)

    def log_count(self, n: int) -> float:
        if n <= self.max_head:
            c = self.count(n)
            return -INF if c == 0 else (INF if is_inf(c) else math.log(c))
        return self.tail.log_count(n)

    def _has_any_cycle(self):
        return any((c == INF or c > 0) for c in self.head.values()) or self.tail.nonzero

    @property
    def a1(self) -> int:
        return 1 if self.count(1) == 1 else 0

    @property
    def finitely_many_loops(self) -> bool:
        return not self.tail.nonzero and not any(is_inf(c) for c in self.head.values())

    @property
    def bounded_lengths(self) -> bool:
        return not self.tail.nonzero

    def max_length(self):
        if not self.bounded_lengths:
            return INF
        return max(n for n, c in self.head.items() if is_inf(c) or c > 0)

    def infinitely_many_of_length_at_least(self, L: int) -> bool:
        if self.tail.nonzero:
            return True
        return any(is_inf(c) for n, c in self.head.items() if n >= L)

    def _final_diagonal(self):
        if not self.finitely_many_loops:
            return None
        last = 1
        for n, c in self.head.items():
            if n >= 2 and c > 0:
                last = max(last, n + c - 1)
        return last

    # -- lazy loop index -----------------------------------------------
    def _extend_one_diagonal(self):
        s = self._diag
        for n in range(2, s + 1):
            j = s - n
            c = self.count_capped(n)
            if is_inf(c) or j < c:
                self._loops.append((n, j, self._next_symbol))
                self._starts.append(self._next_symbol)
                self._next_symbol += n - 1
        self._diag += 1
        if self._last_diag is not None and self._diag > self._last_diag:
            self._done = True

    def _ensure_symbol(self, sym):
        with self._lock:
            while not self._done and self._next_symbol <= sym:
                self._extend_one_diagonal()

    def _ensure_loops(self, k):
        with self._lock:
            while not self._done and len(self._loops) < k:
                self._extend_one_diagonal()

    def _ensure_diagonal(self, d):
        with self._lock:
            while not self._done and self._diag <= d:
                self._extend_one_diagonal()

    def loop(self, i: int):
        """The i-th loop as (length, copy, first interior symbol), or None."""
        self._ensure_loops(i + 1)
        return self._loops[i] if i < len(self._loops) else None

    def iter_loops(self) -> Iterator[tuple[int, int, int]]:
        i = 0
        while True:
            lp = self.loop(i)
            if lp is None:
                return
            yield lp
            i += 1

    def locate(self, sym):
        """Return (loop index, position) for an interior symbol; position 1..n-1."""
        if not isinstance(sym, int) or sym <= self.base:
            return None
        self._ensure_symbol(sym)
        if sym >= self._next_symbol:
            return None
        i = bisect.bisect_right(self._starts, sym) - 1
        n, _, start = self._loops[i]
        return i, sym - start + 1

    def loop_word(self, i: int) -> tuple:
        """Cyclic word of the i-th loop: base followed by its interior symbols."""
        n, _, start = self.loop(i)
        return (self.base,) + tuple(range(start, start + n - 1))

    def first_loop_of_length(self, n: int) -> int | None:
        """Index of the first loop (copy 0) of length n, or None if a_n = 0."""
        if n < 2 or self.count_capped(n) == 0:
            return None
        self._ensure_diagonal(n)
        for i, (L, j, _) in enumerate(self._loops):
            if L == n and j == 0:
                return i
        return None

    # -- graph queries ---------------------------------------------------
    @property
    def finite_alphabet(self):
        return self.finitely_many_loops

    def symbols(self):
        yield self.base
        s = self.base + 1
        while self.has_symbol(s):
            yield s
            s += 1

    def has_symbol(self, a):
        if a == self.base:
            return True
        return self.locate(a) is not None

    def _length_of(self, sym):
        i, p = self.locate(sym)
        return self._loops[i][0], p

    def allowed(self, a, b):
        if not (self.has_symbol(a) and self.has_symbol(b)):
            return False
        if a == self.base:
            if b == self.base:
                return self.a1 == 1
            return self.locate(b)[1] == 1
        n, p = self._length_of(a)
        if p == n - 1:
            return b == self.base
        return b == a + 1

    def _loop_starts(self, max_len=None):
        """Ascending first interior symbols of loops, optionally of length <= max_len."""
        if max_len is None:
            for (_, _, start) in self.iter_loops():
                yield start
            return
        if max_len < 2:
            return
        counts = [(n, self.count_capped(n)) for n in range(2, max_len + 1)]
        stop = None
        if all(not is_inf(c) for _, c in counts):
            stop = max([n + c - 1 for n, c in counts if c > 0], default=1)
        for (n, j, start) in self.iter_loops():
            if stop is not None and n + j > stop:
                return
            if n <= max_len:
                yield start

    def successors(self, a):
        if a == self.base:
            if self.a1:
                yield self.base
            yield from self._loop_starts()
            return
        if not self.has_symbol(a):
            return
        n, p = self._length_of(a)
        yield self.base if p == n - 1 else a + 1

    def predecessors(self, a):
        if a == self.base:
            if self.a1:
                yield self.base
            for (n, _, start) in self.iter_loops():
                yield start + n - 2
            return
        if not self.has_symbol(a):
            return
        _, p = self._length_of(a)
        yield self.base if p == 1 else a - 1

    def out_finite(self, a):
        return a != self.base or self.finitely_many_loops

    def in_finite(self, a):
        return self.out_finite(a)

    def _to_base(self, a):
        if a == self.base:
            return 0
        n, p = self._length_of(a)
        return n - p

    def _from_base(self, b):
        if b == self.base:
            return 0
        return self.locate(b)[1]

    def distance(self, a, b, limit):
        if not (self.has_symbol(a) and self.has_symbol(b)):
            return None
        if a == b:
            d = 0
        elif a != self.base and b != self.base and self.locate(a)[0] == self.locate(b)[0] and b > a:
            d = b - a
        else:
            d = self._to_base(a) + self._from_base(b)
        return d if d <= limit else None

    def toward(self, a, target, steps):
        if a != self.base:
            return (s for s in self.successors(a) if self.distance(s, target, steps) is not None), True
        if not self.has_symbol(target):
            return iter(()), True
        need = self._from_base(target)
        own = None
        if target != self.base:
            i, p = self.locate(target)
            own = self._loops[i][2] if p - 1 <= steps else None
        # a loop of length n started now returns to base after n-1 steps
        max_len = steps + 1 - need
        head = [self.base] if (self.a1 and need <= steps) else []

        def stream():
            yield from head
            emitted_own = False
            for s in self._loop_starts(max_len if max_len >= 2 else 1):
                if own is not None and not emitted_own and own < s:
                    yield own
                    emitted_own = True
                if s == own:
                    emitted_own = True
                yield s
            if own is not None and not emitted_own:
                yield own

        finite = max_len < 2 or all(not is_inf(self.count_capped(n)) for n in range(2, max_len + 1))
        return stream(), finite

    # -- compactification -------------------------------------------------
    def bar_admissible(self, word):
        runs = _runs(word)
        for kind, start, end in runs:
            if kind == "finite" and not _finite_admissible(self, word[start:end]):
                return False
        for kind, start, end in runs:
            if kind != "inf":
                continue
            m = end - start
            left = word[start - 1] if start > 0 else None
            right = word[end] if end < len(word) else None
            if (left is not None and left != self.base) or (right is not None and right != self.base):
                return False
            if left is not None and right is not None:
                if not is_inf(self.count_capped(m + 1)):
                    return False
            elif not self.infinitely_many_of_length_at_least(m + 1):
                return False
        return True

    def contains_infinity_point(self):
        return not self.bounded_lengths

    def describe(self):
        loops = {str(n): ("inf" if is_inf(c) else c) for n, c in self.head.items()}
        out = {"type": self.kind, "loops": loops, "tail": self.tail.describe()}
        if self.base != 0:
            out["base"] = self.base
        return out

    def __repr__(self):
        return f"LoopSystem({self.head!r}, tail={self.tail!r}, base={self.base})"


# ---------------------------------------------------------------------------
# generic operations


def _finite_admissible(shift, word) -> bool:
    if not word:
        return True
    if any(is_inf(s) or not shift.has_symbol(s) for s in word):
        return False
    return all(shift.allowed(a, b) for a, b in zip(word, word[1:]))


def _runs(word):
    """Maximal runs of finite symbols and of INF as (kind, start, end)."""
    out = []
    for key, grp in itertools.groupby(enumerate(word), key=lambda t: is_inf(t[1])):
        idx = [i for i, _ in grp]
        out.append(("inf" if key else "finite", idx[0], idx[-1] + 1))
    return out


def is_admissible(shift: ShiftPresentation, symbols: Sequence) -> bool:
    """True iff every symbol exists and every consecutive pair is allowed."""
    word = tuple(symbols)
    if not word:
        raise ValueError("word must be nonempty")
    return _finite_admissible(shift, word)


def is_bar_admissible(shift: ShiftPresentation, symbols: Sequence) -> bool:
    """True iff the word over N u {inf} is a coordinatewise limit of admissible words."""
    word = tuple(symbols)
    if not word:
        raise ValueError("word must be nonempty")
    if not any(is_inf(s) for s in word):
        return _finite_admissible(shift, word)
    return shift.bar_admissible(word)


def is_cyclically_admissible(shift: ShiftPresentation, symbols: Sequence) -> bool:
    """Admissibility of the periodic point repeating ``symbols`` (wrap included)."""
    word = tuple(symbols)
    if not word:
        return False
    if all(is_inf(s) for s in word):
        return shift.contains_infinity_point()
    if not any(is_inf(s) for s in word):
        return _finite_admissible(shift, word + word[:1])
    return is_bar_admissible(shift, word * 3)


class _SearchStats:
    __slots__ = ("truncated",)

    def __init__(self):
        self.truncated = False


def _walks(shift, first, last, n, symbol_cap, stats):
    """Admissible words of length n from first to last, in lexicographic order."""
    if not (shift.has_symbol(first) and shift.has_symbol(last)):
        return
    if n == 1:
        if first == last:
            yield (first,)
        return
    if shift.distance(first, last, n - 1) is None:
        return

    def rec(prefix, r):
        a = prefix[-1]
        if r == 1:
            if shift.allowed(a, last):
                yield prefix + (last,)
            return
        stream, finite = shift.toward(a, last, r - 1)
        if not finite:
            stats.truncated = True
        for s in stream:
            if s > symbol_cap:
                stats.truncated = True
                break
            yield from rec(prefix + (s,), r - 1)

    yield from rec((first,), n - 1)


@dataclass(frozen=True)
class WordList:
    words: tuple
    exhaustive: bool

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)


def enumerate_words(shift, n: int, first, last, cap: int, *, symbol_cap: int = DEFAULT_SYMBOL_CAP) -> WordList:
    """All admissible words of length ``n`` from ``first`` to ``last``, at most ``cap`` of them.

    The result is lexicographically ordered; ``exhaustive`` is False when the
    list was cut at ``cap`` or when an infinite successor stream had to be
    truncated at ``symbol_cap``.
    """
    if cap < 1:
        raise CapZero("cap must be at least 1")
    if n < 1:
        raise ValueError("length must be at least 1")
    stats = _SearchStats()
    gen = _walks(shift, first, last, n, symbol_cap, stats)
    words = list(itertools.islice(gen, cap))
    exhaustive = True
    if len(words) == cap:
        more = next(gen, None)
        if more is not None:
            exhaustive = False
    if stats.truncated:
        exhaustive = False
    return WordList(tuple(words), exhaustive)


def connect(shift, a, b, max_len: int, *, min_transitions: int = 0,
            symbol_cap: int = DEFAULT_SYMBOL_CAP, allowed_symbols=None) -> tuple:
    """Shortest admissible word from ``a`` to ``b`` (ties broken lexicographically).

    ``max_len`` bounds the number of symbols.  ``min_transitions=1`` asks for
    a genuine path even when ``a == b``.  ``allowed_symbols`` restricts the
    intermediate symbols.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    view = shift if allowed_symbols is None else _Restricted(shift, allowed_symbols)
    for L in range(max(1, min_transitions + 1), max_len + 1):
        stats = _SearchStats()
        w = next(_walks(view, a, b, L, symbol_cap, stats), None)
        if w is not None:
            return w
    raise NotFoundWithinBound(f"no admissible word {fmt_symbol(a)} -> {fmt_symbol(b)} of length <= {max_len}")


class _Restricted(ShiftPresentation):
    """View of a presentation restricted to a finite symbol subset."""

    def __init__(self, shift, symbols):
        self.shift = shift
        self.keep = frozenset(symbols)
        self.order = tuple(sorted(self.keep))

    def has_symbol(self, a):
        return a in self.keep and self.shift.has_symbol(a)

    def allowed(self, a, b):
        return a in self.keep and b in self.keep and self.shift.allowed(a, b)

    def successors(self, a):
        return (b for b in self.order if self.allowed(a, b))

    def distance(self, a, b, limit):
        seen = {a: 0}
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                return seen[u] if seen[u] <= limit else None
            for v in self.successors(u):
                if v not in seen:
                    seen[v] = seen[u] + 1
                    q.append(v)
        return None

    def out_finite(self, a):
        return True

    def toward(self, a, target, steps):
        return (s for s in self.successors(a) if self.distance(s, target, steps) is not None), True


# ---------------------------------------------------------------------------
# metrics


def metric_d(x: Sequence, y: Sequence) -> Fraction:
    """2^-(m-1) at the first disagreement m; 0 when one word is a prefix of the other."""
    for i, (a, b) in enumerate(zip(x, y), start=1):
        if a != b:
            return Fraction(1, 2 ** (i - 1))
    return Fraction(0)


def _inv(s) -> Fraction:
    if is_inf(s):
        return Fraction(0)
    if not isinstance(s, int) or s < 1:
        raise ValueError(f"rho is defined on symbols 1, 2, ... and inf, got {s!r}")
    return Fraction(1, s)


def rho_bar(a, b) -> Fraction:
    """|1/a - 1/b| with 1/inf = 0."""
    return abs(_inv(a) - _inv(b))


@dataclass(frozen=True)
class DRho:
    """Partial sum of d_rho over the seen coordinates, plus a bound on the unseen tail."""

    partial: Fraction
    tail: Fraction

    @property
    def upper(self) -> Fraction:
        return self.partial + self.tail


def metric_d_rho(x: Sequence, y: Sequence) -> DRho:
    if len(x) != len(y):
        raise LengthMismatch(f"words have lengths {len(x)} and {len(y)}")
    partial = sum((rho_bar(a, b) / 2 ** n for n, (a, b) in enumerate(zip(x, y), start=1)), Fraction(0))
    return DRho(partial, Fraction(1, 2 ** len(x)))


def clopen_radius(a: int) -> Fraction:
    """Radius of the d_rho ball around a point of [a] that stays inside [a]."""
    return Fraction(1, 2 * a * (a + 1))
