"""The F-property, finite uniform Romes, and loop-system classification."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import PreconditionViolated
from .rules import RuleGraph
from .shift import (
    INF, FiniteMatrix, FullShift, LoopSystem, LoopTail, is_bar_admissible, is_inf,
)

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"


@dataclass(frozen=True)
class Verdict:
    """Tri-state answer with an optional witness."""

    status: str
    witness: object = None
    note: str = ""
    cap: int | None = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def to_dict(self):
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.note:
            out["note"] = self.note
        if self.cap is not None:
            out["cap"] = self.cap
        return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, float) and is_inf(x):
        return "inf"
    return x


@dataclass(frozen=True)
class PropertyReport:
    f_property: Verdict
    finite_uniform_rome: Verdict
    finite_entropy: Verdict
    locally_compact: Verdict

    def to_dict(self):
        return {k: getattr(self, k).to_dict() for k in
                ("f_property", "finite_uniform_rome", "finite_entropy", "locally_compact")}


# ---------------------------------------------------------------------------
# F-property


def check_f_property(shift, cap: int = 64) -> Verdict:
    """Decide whether every a -> a word count of each length is finite.

    The witness of failure is (a, n): infinitely many admissible words of
    length n start and end at a.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if isinstance(shift, FiniteMatrix):
        return Verdict(HOLDS, note="finite alphabet: the shift is compact")
    if isinstance(shift, FullShift):
        return Verdict(FAILS, witness=(1, 3), note="the words (1, k, 1) for every k")
    if isinstance(shift, LoopSystem):
        bad = _first_infinite_count(shift)
        if bad is None:
            return Verdict(HOLDS, note="every loop count a_n is finite")
        return Verdict(FAILS, witness=(shift.base, bad + 1), note=f"a_{bad} is infinite")
    if isinstance(shift, RuleGraph):
        if shift.f_property is None:
            return Verdict(UNKNOWN, note=f"rule {shift.name!r} does not declare it", cap=cap)
        if shift.f_property:
            return Verdict(HOLDS, note=shift.note)
        return Verdict(FAILS, witness=shift.f_witness, note=shift.note)
    return Verdict(UNKNOWN, cap=cap)


def _first_infinite_count(L: LoopSystem):
    for n, c in L.head.items():
        if is_inf(c):
            return n
    if L.tail.infinite_counts:
        return L.max_head + 1
    return None


# ---------------------------------------------------------------------------
# uniform Romes


def _finite_longest(symbols, succ, F, need):
    """Longest path (in vertices) inside symbols minus F; INF if it contains a cycle."""
    V = [s for s in symbols if s not in F]
    Vs = set(V)
    adj = {v: [w for w in succ(v) if w in Vs] for v in V}
    # depth-first topological sort, detecting cycles
    colour, order = {}, []
    cyc = None
    for root in V:
        if root in colour:
            continue
        stack = [(root, iter(adj[root]))]
        colour[root] = 1
        path = [root]
        while stack and cyc is None:
            v, it = stack[-1]
            for w in it:
                if colour.get(w) == 1:
                    cyc = path[path.index(w):]
                    break
                if w not in colour:
                    colour[w] = 1
                    stack.append((w, iter(adj[w])))
                    path.append(w)
                    break
            else:
                colour[v] = 2
                order.append(v)
                stack.pop()
                path.pop()
        if cyc is not None:
            walk = list(itertools.islice(itertools.cycle(cyc), need)) if need else cyc
            return INF, tuple(walk)
    best = {}
    nxt = {}
    for v in order:  # reverse topological: successors first
        best[v], nxt[v] = 1, None
        for w in adj[v]:
            if best[w] + 1 > best[v]:
                best[v], nxt[v] = best[w] + 1, w
    if not best:
        return 0, ()
    start = min(best, key=lambda v: (-best[v], v))
    path = [start]
    while nxt[path[-1]] is not None:
        path.append(nxt[path[-1]])
    return best[start], tuple(path)


def longest_avoiding_path(shift, F, need: int | None = None, symbol_cap: int = 256):
    """Length (in vertices) of the longest path avoiding F, with a witness.

    Returns (length, path, exact).  Length INF means arbitrarily long paths
    exist; then the witness has ``need`` vertices when given.  ``exact`` is
    False for bounded searches on rule graphs, where the length is only a
    lower bound.
    """
    F = frozenset(F)
    need = need or 1
    if isinstance(shift, FiniteMatrix):
        L, w = _finite_longest(shift.alphabet, shift.successors, F, need)
        return L, w, True
    if isinstance(shift, FullShift):
        s = next(x for x in itertools.count(1) if x not in F)
        return INF, (s,) * need, True
    if isinstance(shift, LoopSystem):
        return _loop_longest(shift, F, need) + (True,)
    return _bounded_longest(shift, F, need, symbol_cap) + (False,)


def _loop_longest(L: LoopSystem, F, need):
    if L.finitely_many_loops:
        syms = list(L.symbols())
        return _finite_longest(syms, lambda v: list(L.successors(v)), F, need)
    if L.base not in F:
        if L.a1:
            return INF, (L.base,) * need
        for i, _ in enumerate(L.iter_loops()):
            w = L.loop_word(i)
            if not F.intersection(w):
                return INF, tuple(itertools.islice(itertools.cycle(w), need))
    if not L.bounded_lengths:
        # a loop longer than need + 1 whose interior misses F
        for i, (n, _, _) in enumerate(L.iter_loops()):
            w = L.loop_word(i)
            if n - 1 >= need and not F.intersection(w[1:]):
                return INF, w[1:need + 1]
    Lmax = L.max_length()
    counts = {n: L.count_capped(n) for n in range(2, Lmax + 1)}
    inf_lengths = {n for n, c in counts.items() if is_inf(c)}
    finite_last = max((n + c - 1 for n, c in counts.items() if not is_inf(c) and c > 0), default=1)
    best, wit, seen = 0, (), set()
    for i, (n, j, _) in enumerate(L.iter_loops()):
        if n + j > finite_last and inf_lengths <= seen:
            break
        interior = L.loop_word(i)[1:]
        if n in inf_lengths:
            # one F-free copy represents all the others
            if n in seen or F.intersection(interior):
                continue
            seen.add(n)
        seg = _longest_segment(interior, F)
        if len(seg) > best:
            best, wit = len(seg), seg
    return best, wit


def _longest_segment(word, F):
    best, cur = (), []
    for s in word:
        if s in F:
            cur = []
        else:
            cur.append(s)
            if len(cur) > len(best):
                best = tuple(cur)
    return best


def _bounded_longest(shift, F, need, symbol_cap):
    """Depth-first search for an F-avoiding path of ``need`` vertices below symbol_cap."""
    best = ()
    for s in itertools.islice(shift.symbols(), symbol_cap):
        if s in F:
            continue
        stack = [(s,)]
        while stack:
            p = stack.pop()
            if len(p) > len(best):
                best = p
            if len(p) >= need:
                return INF, p
            nxt = []
            for t in shift.successors(p[-1]):
                if t > symbol_cap:
                    break
                if t not in F:
                    nxt.append(p + (t,))
            stack.extend(reversed(nxt))
    return len(best), best


def check_uniform_rome(shift, F, N: int, *, symbol_cap: int = 256) -> Verdict:
    """Whether no path of N+1 vertices avoids the finite set F."""
    F = frozenset(F)
    if not F:
        raise ValueError("F must be nonempty")
    if N < 1:
        raise ValueError("N must be at least 1")
    length, path, exact = longest_avoiding_path(shift, F, need=N + 1, symbol_cap=symbol_cap)
    if length > N:
        return Verdict(FAILS, witness=tuple(path[:N + 1]), note="path avoiding F")
    if exact:
        return Verdict(HOLDS, witness=(tuple(sorted(F)), N))
    return Verdict(UNKNOWN, note="no avoiding path found by bounded search", cap=symbol_cap)


@dataclass(frozen=True)
class RomeSearch:
    found: bool
    F: tuple = ()
    N: int | None = None
    note: str = ""

    def to_dict(self):
        if self.found:
            return {"status": "found", "F": list(self.F), "N": self.N}
        return {"status": "none_within_caps", "note": self.note}


def find_finite_rome(shift, symbol_cap: int = 6, N_cap: int = 16) -> RomeSearch:
    """Search F among the first ``symbol_cap`` symbols, by size then lexicographically.

    The reported N is the smallest window length such that every admissible
    word of N symbols meets F (one more than the longest F-avoiding path);
    it satisfies ``check_uniform_rome(shift, F, N)``.
    """
    if symbol_cap < 1 or N_cap < 1:
        raise ValueError("caps must be at least 1")
    if isinstance(shift, RuleGraph) and shift.has_finite_rome is False:
        return RomeSearch(False, note=shift.note)
    if isinstance(shift, FullShift):
        return RomeSearch(False, note="every finite F leaves a symbol with a self-loop outside it")
    syms = shift.first_symbols(symbol_cap)
    for size in range(1, len(syms) + 1):
        for F in itertools.combinations(syms, size):
            length, _, exact = longest_avoiding_path(shift, F, need=N_cap + 1)
            if exact and not is_inf(length) and length + 1 <= N_cap:
                return RomeSearch(True, tuple(F), int(length) + 1)
    return RomeSearch(False, note=f"no F within the first {symbol_cap} symbols works with N <= {N_cap}")


# ---------------------------------------------------------------------------
# loop systems


def classify_loop_system(head: dict, tail="zero", *, base: int = 0) -> PropertyReport:
    """Fill all four properties from the loop counts.

    * F-property iff every a_n is finite;
    * finite entropy iff every a_n is finite and limsup (1/n) log a_n < inf;
    * locally compact iff sum a_n < inf;
    * a finite uniform Rome exists iff loop lengths are bounded (F = {base}).
    """
    if isinstance(tail, str):
        tail = LoopTail(tail)
    elif isinstance(tail, dict):
        tail = LoopTail(tail["kind"], tail.get("value", tail.get("base")))
    L = LoopSystem(head, tail, base=base)
    f = check_f_property(L)
    if L.bounded_lengths:
        n = L.max_length()
        rome = Verdict(HOLDS, witness=((L.base,), n), note="loop lengths are bounded")
    else:
        rome = Verdict(FAILS, witness="loops of unbounded length avoid any finite set",
                       note="interiors of long loops avoid F")
    growth = L.tail.log_growth
    if f.fails:
        ent = Verdict(FAILS, note="some a_n is infinite")
    elif growth < INF:
        ent = Verdict(HOLDS, witness=_num(growth), note="limsup (1/n) log a_n")
    else:
        ent = Verdict(FAILS, witness="inf", note="limsup (1/n) log a_n is infinite")
    if L.finitely_many_loops:
        lc = Verdict(HOLDS, note="finitely many loops")
    else:
        lc = Verdict(FAILS, note="sum of a_n is infinite")
    return PropertyReport(f, rome, ent, lc)


def _num(x):
    return "-inf" if x == -INF else x


def classify(shift, cap: int = 64, symbol_cap: int = 6, N_cap: int = 16) -> PropertyReport:
    """Property report for any presentation."""
    if isinstance(shift, LoopSystem):
        return classify_loop_system(shift.head, shift.tail, base=shift.base)
    f = check_f_property(shift, cap)
    if isinstance(shift, FiniteMatrix):
        r = find_finite_rome(shift, symbol_cap=len(shift.alphabet), N_cap=len(shift.alphabet) + 1)
        rome = Verdict(HOLDS, witness=(r.F, r.N)) if r.found else Verdict(UNKNOWN, cap=symbol_cap)
        return PropertyReport(f, rome, Verdict(HOLDS, note="finite alphabet"), Verdict(HOLDS, note="finite alphabet"))
    if isinstance(shift, FullShift):
        return PropertyReport(
            f,
            Verdict(FAILS, witness="constant words outside F", note="every symbol carries a self-loop"),
            Verdict(FAILS, note="infinitely many fixed points"),
            Verdict(FAILS, note="every symbol has infinitely many successors"),
        )
    if isinstance(shift, RuleGraph):
        def tri(v, note=""):
            return Verdict(UNKNOWN, cap=cap) if v is None else Verdict(HOLDS if v else FAILS, note=note)
        return PropertyReport(f, tri(shift.has_finite_rome, shift.note), tri(shift.finite_entropy),
                              tri(shift.locally_compact))
    return PropertyReport(f, Verdict(UNKNOWN, cap=cap), Verdict(UNKNOWN, cap=cap), Verdict(UNKNOWN, cap=cap))


def f_property_word_restriction_check(shift, samples=None, cap: int = 64) -> bool:
    """With the F-property, no word (finite, inf-block, finite) is admissible in the compactification.

    Returns True iff every sampled sandwich word is rejected.
    """
    if not check_f_property(shift, cap).holds:
        raise PreconditionViolated("the shift does not have the F-property")
    if samples is None:
        samples = sandwich_words(shift)
    return all(not is_bar_admissible(shift, w) for w in samples)


def sandwich_words(shift, n_symbols: int = 4, max_block: int = 3):
    syms = shift.first_symbols(n_symbols)
    return [(a,) + (INF,) * m + (b,) for a in syms for b in syms for m in range(1, max_block + 1)]
