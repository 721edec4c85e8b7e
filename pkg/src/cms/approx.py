"""Constructive approximation: orbit gluing, compactified approximants, escaping sequences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    BlockNotAdmissible, ConnectorNotFound, FPropertyHolds, FPropertyUndecided,
    NotFoundWithinBound, TargetsNotFinitelySupported,
)
from .measures import FiniteMarkov, Measure, Periodic, convex_combo
from .properties import (
    check_f_property, f_property_word_restriction_check, find_finite_rome, sandwich_words,
)
from .rules import RuleGraph
from .shift import (
    INF, FullShift, LoopSystem, connect, fmt_symbol, is_bar_admissible,
    is_cyclically_admissible, is_inf,
)
from .topology import masses, metric_config, weakstar_distance


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class TypicalWord:
    word: tuple
    frequencies: dict
    seed: object

    def __len__(self):
        return len(self.word)


def _rng(seed):
    return np.random.default_rng(seed)


def typical_word(measure: FiniteMarkov, length: int, seed) -> TypicalWord:
    """A word sampled from the stationary chain, with its symbol frequencies."""
    if length < 1:
        raise ValueError("length must be at least 1")
    if not isinstance(measure, FiniteMarkov):
        raise TypeError("typical_word samples a FiniteMarkov measure")
    rng = _rng(seed)
    syms = measure.symbols
    p = np.array([float(x) for x in measure.p])
    cum = np.cumsum(np.array([[float(x) for x in row] for row in measure.P]), axis=1)
    u = rng.random(length)
    i = int(np.searchsorted(np.cumsum(p), u[0] * np.cumsum(p)[-1], side="right"))
    i = min(i, len(syms) - 1)
    out = [i]
    for t in range(1, length):
        row = cum[i]
        i = min(int(np.searchsorted(row, u[t] * row[-1], side="right")), len(syms) - 1)
        out.append(i)
    word = tuple(syms[j] for j in out)
    counts = np.bincount(out, minlength=len(syms))
    freqs = {s: int(c) / length for s, c in zip(syms, counts)}
    return TypicalWord(word, freqs, seed)


def _periodic_prefix(mu: Periodic, length: int) -> tuple:
    w = mu.word
    return tuple(w[i % len(w)] for i in range(length))


# ---------------------------------------------------------------------------
# gluing


@dataclass
class GluingPlan:
    targets: list
    weights: list
    segment_lengths: list
    segments: list
    connectors: list
    offsets: list
    L0: int
    word: tuple
    scores: list
    seed: int
    window: tuple

    def to_dict(self):
        return {
            "targets": self.targets,
            "weights": [f"{w.numerator}/{w.denominator}" for w in self.weights],
            "segment_lengths": self.segment_lengths,
            "connectors": [[fmt_symbol(s) for s in c] for c in self.connectors],
            "offsets": self.offsets,
            "L0": self.L0,
            "period": len(self.word),
            "word": [fmt_symbol(s) for s in self.word],
            "empirical_errors": self.scores,
            "seed": self.seed,
            "window": list(self.window),
        }


def _support(mu):
    s = mu.support()
    if s is None:
        raise TargetsNotFinitelySupported(f"{mu!r} has infinite support")
    return s


def glue_periodic_approximation(shift, targets: Sequence[Measure], n: int, seed: int = 7, *,
                                m: int = 2, candidates: int = 1, typicality: float | None = None, depth: int = 6,
                                max_connector: int = 64, restrict_to=None):
    """Periodic measure close to the average of ``targets``, built by gluing orbit segments.

    Each target contributes a segment y_i of n_i + 1 symbols, n_i being the
    first k in [n, n + 2m) whose next symbol lies in K, the union of the
    supports.  A Markov target contributes one seeded sample; with
    ``candidates > 1`` the draw closest to the target is kept, stopping early
    once one is within ``typicality / n``.  Connectors are shortest words between
    consecutive segments; the cyclic word is y_1 w_1 ... y_N w_N with the
    shared endpoints written once.
    """
    targets = list(targets)
    if not targets:
        raise ValueError("need at least one target")
    if n < 1:
        raise ValueError("segment length must be positive")
    K = frozenset().union(*(_support(t) for t in targets))
    cfg = metric_config(shift, depth, bar=True)
    seqs = np.random.SeedSequence(seed).spawn(len(targets))
    segments, lengths, scores = [], [], []
    for t, ss in zip(targets, seqs):
        if isinstance(t, Periodic):
            raw = _periodic_prefix(t, n + 2 * m + 1)
            score = 0.0
        elif isinstance(t, FiniteMarkov):
            best = None
            target_masses = masses(t, cfg)
            eps = typicality / n if typicality else None
            for cs in ss.spawn(candidates):
                cand = typical_word(t, n + 2 * m + 1, cs).word
                got = masses(Periodic(cand[:n]), cfg)
                sc = sum(float(w) * abs(float(a) - float(b)) for w, a, b in zip(cfg.weights, got, target_masses))
                if best is None or sc < best[0]:
                    best = (sc, cand)
                if eps is not None and sc <= eps:
                    break
            score, raw = best
        else:
            raise TargetsNotFinitelySupported(f"cannot sample {t!r}")
        k = next((k for k in range(n, n + 2 * m) if raw[k] in K), n)
        segments.append(raw[:k + 1])
        lengths.append(k)
        scores.append(score)

    connectors = []
    allowed = restrict_to if restrict_to is not None else None
    N = len(segments)
    for i in range(N):
        a, b = segments[i][-1], segments[(i + 1) % N][0]
        try:
            c = connect(shift, a, b, max_connector, allowed_symbols=allowed)
        except NotFoundWithinBound as e:
            raise ConnectorNotFound(str(e)) from None
        connectors.append(c)

    word, offsets = [], []
    for y, c in zip(segments, connectors):
        offsets.append(len(word))
        word.extend(y[:-1])
        word.extend(c[:-1])
    word = tuple(word)
    if not is_cyclically_admissible(shift, word):
        raise AssertionError("glued word is not cyclically admissible")
    plan = GluingPlan([repr(t) for t in targets], [Fraction(1, N)] * N, lengths, segments, connectors,
                      offsets, max(len(c) for c in connectors), word, scores, seed, (n, n + 2 * m))
    return Periodic(word), plan


def average(targets: Sequence[Measure]) -> Measure:
    N = len(targets)
    return convex_combo([Fraction(1, N)] * N, list(targets))


# ---------------------------------------------------------------------------
# compactified approximants


def compactified_periodic_approximant(shift, x: Sequence, w: Sequence, k: int) -> Periodic:
    """Periodic measure on x repeated k times followed by the block w, which contains inf."""
    x, w = tuple(x), tuple(w)
    if k < 1 or not x or not w:
        raise ValueError("need k >= 1 and nonempty x and w")
    v = check_f_property(shift)
    if v.holds:
        raise FPropertyHolds("the shift has the F-property, so no inf-block can be inserted")
    if not v.fails:
        raise FPropertyUndecided("the F-property is undecided for this presentation")
    if not any(is_inf(s) for s in w):
        raise BlockNotAdmissible("the block must contain inf")
    word = x * k + w
    if not is_cyclically_admissible(shift, word):
        raise BlockNotAdmissible("x^k w is not admissible in the compactification")
    return Periodic(word)


def approximant_bound(x: Sequence, w: Sequence, k: int, config) -> Fraction:
    """Upper bound on the distance between Periodic(x^k w) and Periodic(x).

    A window of length L differs between the two orbits only if it meets the
    block or its L - 1 predecessors.
    """
    P = k * len(x) + len(w)
    return sum((wt * min(Fraction(1), Fraction(len(c) - 1 + len(w), P))
                for wt, c in zip(config.weights, config.cylinders)), Fraction(0))


def infinity_block(shift, a, n: int) -> tuple:
    """A bar-admissible word from a to a of length <= max(n, 3) carrying inf inside."""
    for L in range(3, max(n, 3) + 1):
        cand = (a,) + (INF,) * (L - 2) + (a,)
        if is_bar_admissible(shift, cand):
            return cand
    raise BlockNotAdmissible(f"no inf-block found at {fmt_symbol(a)}")


def splice_block(shift, x: tuple, block: tuple, *, max_len: int = 32) -> tuple:
    """Connectors around ``block`` so that x^k + result is cyclically admissible."""
    a = block[0]
    c1 = connect(shift, x[-1], a, max_len)
    c2 = connect(shift, block[-1], x[0], max_len)
    return c1[1:] + block[1:-1] + c2[:-1]


# ---------------------------------------------------------------------------
# escaping sequences


@dataclass(frozen=True)
class Refused:
    reason: str
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"refused": self.reason, **self.detail}


def zero_measure_sequence(shift, n_list: Sequence[int]):
    """Periodic measures whose cylinder masses tend to zero, or Refused."""
    rome = find_finite_rome(shift)
    if rome.found:
        return Refused("FiniteUniformRome", {"F": list(rome.F), "N": rome.N})
    out = []
    for n in n_list:
        if isinstance(shift, LoopSystem):
            L = n
            idx = None
            while idx is None:
                idx = shift.first_loop_of_length(L)
                L += 1
                if L > n + 10_000:
                    return Refused("NoLongLoops")
            out.append(Periodic(shift.loop_word(idx)))
        elif isinstance(shift, FullShift):
            out.append(Periodic(tuple(range(n, 2 * n))))
        elif isinstance(shift, RuleGraph):
            try:
                out.append(Periodic(shift.escape_word(n)))
            except NotImplementedError:
                return Refused("Undecided", {"note": f"rule {shift.name!r} has no escape construction"})
        else:
            return Refused("Undecided", {"note": rome.note})
    return out


# ---------------------------------------------------------------------------
# the dichotomy


@dataclass
class DichotomyReport:
    branch: str
    details: dict

    def to_dict(self):
        return {"branch": self.branch, **self.details}


def random_cycle(shift, rng, symbol_cap: int = 8, max_len: int = 4) -> tuple:
    """A short cyclically admissible word over the first symbols, drawn with ``rng``."""
    syms = shift.first_symbols(symbol_cap)
    L = int(rng.integers(1, max_len + 1))
    a = syms[int(rng.integers(len(syms)))]
    walk = [a]
    for _ in range(L - 1):
        nxt = [s for s in syms if shift.allowed(walk[-1], s)]
        walk.append(nxt[int(rng.integers(len(nxt)))])
    back = connect(shift, walk[-1], walk[0], 2 * symbol_cap + 2, min_transitions=1)
    return tuple(walk) + back[1:-1]


def dichotomy_report(shift, *, T: int = 5, tau: float = 0.05, depth: int = 5, seed: int = 7,
                     k_max: int = 4096, symbol_cap: int = 8) -> DichotomyReport:
    """Either the F-property holds and inf only appears in (inf, inf, ...), or new ergodic
    measures approximate random periodic targets."""
    v = check_f_property(shift)
    if v.status == "unknown":
        raise FPropertyUndecided("the F-property is undecided for this presentation")
    if v.holds:
        words = sandwich_words(shift)
        ok = f_property_word_restriction_check(shift, words)
        return DichotomyReport("F-holds", {
            "sandwich_words_checked": len(words), "all_rejected": ok,
            "new_ergodic": "delta at infinity only (spot-checked)",
        })
    a, n = v.witness
    block = infinity_block(shift, a, n)
    cfg = metric_config(shift, depth, bar=True)
    rng = _rng(seed)
    rows = []
    for _ in range(T):
        x = random_cycle(shift, rng, symbol_cap)
        w = splice_block(shift, x, block)
        target = Periodic(x)
        k, dist = 4, None
        while k <= k_max:
            mu = compactified_periodic_approximant(shift, x, w, k)
            dist = float(weakstar_distance(mu, target, cfg))
            if dist <= tau:
                break
            k *= 2
        rows.append({"target": [fmt_symbol(s) for s in x], "block": [fmt_symbol(s) for s in w],
                     "k": k, "distance": dist, "mass_at_infinity": float(mu.mass((INF,)))})
    worst = max(r["distance"] for r in rows)
    return DichotomyReport("F-fails", {
        "witness": [fmt_symbol(a), n], "targets": rows, "max_distance": worst,
        "within_tau": sum(r["distance"] <= tau for r in rows), "tau": tau, "depth": depth, "seed": seed,
    })
