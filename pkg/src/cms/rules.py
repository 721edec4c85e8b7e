"""Named rule graphs: infinite presentations with hand-proved structural facts.

A rule graph supplies its own transition rule together with the facts that
cannot be decided generically: transitivity, the compactification rule, and
(optionally) the F-property and Rome status.  ``None`` for a fact means unknown.
"""
from __future__ import annotations

import itertools
from typing import Callable

from .errors import Undecidable
from .shift import ShiftPresentation, _finite_admissible, _runs, is_inf


class RuleGraph(ShiftPresentation):
    kind = "rule"

    name = "abstract"
    transitive = True
    #: True / False / None (unknown)
    f_property: bool | None = None
    #: witness (symbol, word length) for failure of the F-property
    f_witness: tuple | None = None
    has_finite_rome: bool | None = None
    locally_compact: bool | None = None
    finite_entropy: bool | None = None
    note = ""

    @property
    def finite_alphabet(self):
        return False

    def symbols(self):
        return itertools.count(0)

    def has_symbol(self, a):
        return isinstance(a, int) and a >= 0

    def bar_admissible(self, word):
        raise Undecidable(0, f"rule graph {self.name!r} has no compactification rule")

    def escape_word(self, n: int) -> tuple:
        """A cycle all of whose symbols leave every fixed finite set as n grows."""
        raise NotImplementedError

    def describe(self):
        return {"type": "rule", "name": self.name}

    def __eq__(self, other):
        return isinstance(other, RuleGraph) and other.name == self.name

    def __hash__(self):
        return hash(("rule", self.name))

    def __repr__(self):
        return f"RuleGraph({self.name!r})"


class LoopsPlusRandomWalk(RuleGraph):
    """Infinitely many 2-loops at a vertex 0, plus a nearest-neighbour walk on Z through 0.

    Encoding: 0 is the shared vertex; 3k+1 is the midpoint of the k-th 2-loop;
    3k+2 is the walk vertex +(k+1); 3k+3 is the walk vertex -(k+1).

    Facts (proved by hand):
      * strongly connected;
      * the F-property fails at 0: the words (0, m, 0) over all midpoints m;
      * no finite uniform Rome: the walk contains a ray avoiding any finite set;
      * a symbol other than 0 has at most two neighbours, and the only
        arbitrarily large neighbours of 0 are loop midpoints, whose unique
        neighbour is 0.  So a run of inf touching a finite symbol has length 1
        and its finite neighbours are 0; runs without finite neighbours are
        realised far out on the walk.
    """

    name = "loops2_plus_random_walk"
    f_property = False
    f_witness = (0, 3)
    has_finite_rome = False
    locally_compact = False
    finite_entropy = False
    note = "contains a ray (the random walk), so no finite set meets every long path"

    @staticmethod
    def _decode(s):
        if s == 0:
            return ("walk", 0)
        k, r = divmod(s - 1, 3)
        if r == 0:
            return ("mid", k)
        return ("walk", k + 1) if r == 1 else ("walk", -(k + 1))

    @staticmethod
    def walk_symbol(z: int) -> int:
        if z == 0:
            return 0
        return 3 * (z - 1) + 2 if z > 0 else 3 * (-z - 1) + 3

    def allowed(self, a, b):
        if not (self.has_symbol(a) and self.has_symbol(b)):
            return False
        ka, va = self._decode(a)
        kb, vb = self._decode(b)
        if ka == "mid":
            return b == 0
        if kb == "mid":
            return a == 0
        return abs(va - vb) == 1

    def _walk_neighbours(self, z):
        return sorted({self.walk_symbol(z - 1), self.walk_symbol(z + 1)})

    def successors(self, a):
        kind, v = self._decode(a)
        if kind == "mid":
            yield 0
            return
        if a == 0:
            # midpoints 1, 4, 7, ... merged with the walk neighbours 2, 3
            walk = self._walk_neighbours(0)
            mids = (3 * k + 1 for k in itertools.count())
            yield from _merge_sorted(walk, mids)
            return
        yield from self._walk_neighbours(v)

    predecessors = successors

    def out_finite(self, a):
        return a != 0

    in_finite = out_finite

    def _pos(self, s):
        kind, v = self._decode(s)
        return (0, 1) if kind == "mid" else (v, 0)

    def distance(self, a, b, limit):
        if a == b:
            d = 0
        else:
            (za, ma), (zb, mb) = self._pos(a), self._pos(b)
            d = ma + abs(za - zb) + mb
        return d if d <= limit else None

    def toward(self, a, target, steps):
        stream = (s for s in self.successors(a) if self.distance(s, target, steps) is not None)
        if a != 0:
            return stream, True
        # midpoints are useful only when 0 is reachable from them in time
        finite = steps < 1 + (self.distance(0, target, 10 ** 9) or 0)
        if finite:
            stream = (s for s in self._walk_neighbours(0) + ([target] if self._decode(target)[0] == "mid" else [])
                      if self.distance(s, target, steps) is not None)
            stream = iter(sorted(set(stream)))
        return stream, finite

    def bar_admissible(self, word):
        runs = _runs(word)
        for kind, start, end in runs:
            if kind == "finite" and not _finite_admissible(self, word[start:end]):
                return False
        for kind, start, end in runs:
            if kind != "inf":
                continue
            left = word[start - 1] if start > 0 else None
            right = word[end] if end < len(word) else None
            if left is None and right is None:
                continue
            if end - start != 1:
                return False
            if left not in (None, 0) or right not in (None, 0):
                return False
        return True

    def contains_infinity_point(self):
        return True

    def escape_word(self, n):
        return (self.walk_symbol(n), self.walk_symbol(n + 1))


class HalfLineWalk(RuleGraph):
    """Nearest-neighbour walk on {1, 2, 3, ...} with a self-loop at 1.

    Locally compact (every vertex has at most three neighbours), hence the
    F-property holds; the walk is a ray, so there is no finite uniform Rome.
    A finite symbol has bounded neighbours, so inf can only appear in words
    consisting entirely of inf.
    """

    name = "half_line_walk"
    f_property = True
    has_finite_rome = False
    locally_compact = True
    finite_entropy = True
    note = "a ray escapes every finite set"

    def symbols(self):
        return itertools.count(1)

    def has_symbol(self, a):
        return isinstance(a, int) and a >= 1

    def allowed(self, a, b):
        if not (self.has_symbol(a) and self.has_symbol(b)):
            return False
        return abs(a - b) == 1 or a == b == 1

    def successors(self, a):
        if a == 1:
            yield from (1, 2)
        else:
            yield from (a - 1, a + 1)

    predecessors = successors

    def out_finite(self, a):
        return True

    in_finite = out_finite

    def distance(self, a, b, limit):
        d = abs(a - b)
        return d if d <= limit else None

    def bar_admissible(self, word):
        if all(is_inf(s) for s in word):
            return True
        return not any(is_inf(s) for s in word) and _finite_admissible(self, word)

    def contains_infinity_point(self):
        return True

    def escape_word(self, n):
        return (n, n + 1)


def _merge_sorted(finite_list, infinite_iter):
    finite_list = list(finite_list)
    i = 0
    for x in infinite_iter:
        while i < len(finite_list) and finite_list[i] < x:
            yield finite_list[i]
            i += 1
        yield x


_REGISTRY: dict[str, Callable[[], RuleGraph]] = {
    LoopsPlusRandomWalk.name: LoopsPlusRandomWalk,
    HalfLineWalk.name: HalfLineWalk,
}


def rule_graph(name: str) -> RuleGraph:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ValueError(f"unknown rule graph {name!r}; known: {sorted(_REGISTRY)}") from None


def register_rule(name: str, factory: Callable[[], RuleGraph]) -> None:
    """Add a rule graph.  The factory's class must implement ``allowed``,
    ``successors``, ``distance`` and ``bar_admissible``."""
    _REGISTRY[name] = factory


def rule_names() -> list[str]:
    return sorted(_REGISTRY)
