"""Pressure, s_inf, pressure at infinity, equilibrium states and the dual check.

Pressure is computed by whichever of these applies, most rigorous first:
closed form on the full shift, the loop generating function on loop
systems, and transfer matrices on finite truncations.  Partition sums over
periodic orbits through a base symbol are available as a lower-bound check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    CertificateInvalid, HypothesisViolated, InfinitePartitionEntropy, NotEscaping,
    NotIrreducible, NullWeightsDiverge, PreconditionViolated, SeriesUndecidable,
    TailSeriesDiverges, WeightSumError,
)
from .measures import (
    Bernoulli, Combo, FiniteMarkov, Measure, integrate, partition_entropy_H,
)
from .potential import Potential
from .series import Tail, exp_tail_finite, exp_tail_sum
from .shift import FiniteMatrix, FullShift, LoopSystem, is_inf

INF = math.inf
CEILING = 50.0


@dataclass
class PressureEstimate:
    value: float
    method: str
    table: list = field(default_factory=list)
    error: float | None = 0.0
    one_sided: bool = False
    note: str = ""

    @property
    def finite(self) -> bool:
        return not math.isinf(self.value)

    def to_dict(self):
        return {"value": self.value if self.finite else "inf", "method": self.method,
                "error_bound": "one-sided (lower)" if self.one_sided else self.error,
                "table": self.table, "note": self.note}


# ---------------------------------------------------------------------------
# transfer matrices


def _states(shift, symbols, depth):
    if depth == 1:
        return [(s,) for s in symbols]
    words = [(s,) for s in symbols]
    for _ in range(depth - 2):
        words = [w + (s,) for w in words for s in symbols if shift.allowed(w[-1], s)]
    return words


def log_transfer_matrix(shift, symbols, potential: Potential):
    """(states, log W) with W[u, v] = exp(phi(u v_last)) on allowed edges, -inf elsewhere."""
    k = potential.depth
    states = _states(shift, list(symbols), k)
    index = {u: i for i, u in enumerate(states)}
    L = np.full((len(states), len(states)), -np.inf)
    for u in states:
        for s in symbols:
            if not shift.allowed(u[-1], s):
                continue
            v = (u + (s,))[1:] if k > 1 else (s,)
            j = index.get(v)
            if j is None:
                continue
            word = u + (s,) if k > 1 else u
            L[index[u], j] = potential(word)
    return states, L


def log_spectral_radius(L) -> float:
    finite = L[np.isfinite(L)]
    if finite.size == 0:
        return -INF
    m = float(finite.max())
    M = np.where(np.isfinite(L), np.exp(L - m), 0.0)
    rho = float(np.max(np.abs(np.linalg.eigvals(M))))
    if rho <= 0:
        return -INF
    return m + math.log(rho)


def _perron(L):
    finite = L[np.isfinite(L)]
    m = float(finite.max())
    M = np.where(np.isfinite(L), np.exp(L - m), 0.0)
    w, V = np.linalg.eig(M)
    i = int(np.argmax(w.real))
    lam = float(w[i].real)
    r = np.abs(V[:, i].real)
    wl, U = np.linalg.eig(M.T)
    l = np.abs(U[:, int(np.argmax(wl.real))].real)
    return M, lam, m, r, l


# ---------------------------------------------------------------------------
# pressure methods


def _truncation(shift, potential, *, K0=4, K_max=256, tol=1e-9, max_states=600):
    table, prev, K = [], None, K0
    incs = []
    while True:
        syms = shift.first_symbols(K)
        if len(syms) ** max(potential.depth - 1, 1) > max_states and potential.depth > 1:
            break
        _, L = log_transfer_matrix(shift, syms, potential)
        v = log_spectral_radius(L)
        table.append({"K": len(syms), "value": v})
        if prev is not None:
            if v < prev - 1e-9:
                raise AssertionError("truncation pressure decreased")
            incs.append(v - prev)
            if v - prev <= tol:
                return PressureEstimate(v, "truncation", table, error=v - prev)
        if v > CEILING:
            return PressureEstimate(INF, "truncation", table, error=None, note="exceeded ceiling")
        exhausted = len(syms) < K
        if exhausted:
            return PressureEstimate(v, "truncation", table, error=0.0, note="whole alphabet")
        if K >= K_max:
            break
        prev, K = v, 2 * K
    last = incs[-5:]
    ratios = [b / a for a, b in zip(last, last[1:]) if a > 0]
    if ratios and sum(ratios) / len(ratios) >= 0.9:
        return PressureEstimate(INF, "truncation", table, error=None,
                                note="increments do not shrink; treated as divergent (heuristic)")
    r = max(ratios) if ratios else 0.5
    err = incs[-1] * r / (1 - r) if incs and r < 1 else None
    return PressureEstimate(table[-1]["value"], "truncation", table, error=err,
                            note="Cauchy tolerance not reached; error is a geometric extrapolation")


def _full_shift_closed(potential: Potential) -> PressureEstimate:
    if potential.depth != 1:
        raise SeriesUndecidable("closed form needs a depth-1 potential")
    if not exp_tail_finite(potential.tail):
        return PressureEstimate(INF, "closed-form", note="sum of exp(phi) over symbols diverges")
    s = exp_tail_sum(potential.tail)
    for (n,), v in potential.head:
        if n >= 1:
            s += math.exp(v) - math.exp(potential.tail(n))
    return PressureEstimate(math.log(s), "closed-form", error=1e-15)


def _loop_weights(L: LoopSystem, potential: Potential):
    """(explicit A_n for n <= N0, N0, tail description) for a depth-1 potential."""
    if potential.depth != 1:
        raise SeriesUndecidable("loop generating function needs a depth-1 potential")
    phi_b = potential.on_symbol(L.base)
    heads = [w[0] for w, _ in potential.head if w[0] != L.base]
    max_h = max(heads, default=L.base)
    special = {}
    if heads:
        for i, (n, _, start) in enumerate(L.iter_loops()):
            if start > max_h:
                break
            word = L.loop_word(i)
            if any(s in potential.head_map or (s,) in potential.head_map for s in word[1:]):
                special.setdefault(n, []).append(sum(potential.on_symbol(s) for s in word))
    infinite_part = L.finitely_many_loops is False
    if infinite_part and potential.tail.kind != "constant":
        raise SeriesUndecidable("infinitely many loops need a constant tail potential")
    c = potential.tail.const if potential.tail.kind == "constant" else None
    N0 = max([L.max_head] + list(special)) if (L.head or special) else 1
    if not infinite_part:
        N0 = max(N0, L.max_length())
    A = {}
    for n in range(1, N0 + 1):
        cnt = L.count(n)
        if n == 1:
            A[1] = math.exp(phi_b) if cnt == 1 else 0.0
            continue
        if is_inf(cnt):
            A[n] = INF
            continue
        sp = special.get(n, [])
        if cnt == 0:
            A[n] = 0.0
            continue
        if c is None:
            # finitely many loops: weigh each one
            vals = []
            for i, (m, _, _) in enumerate(L.iter_loops()):
                if m == n:
                    vals.append(math.exp(sum(potential.on_symbol(s) for s in L.loop_word(i))))
            A[n] = math.fsum(vals)
        else:
            generic = math.exp(phi_b + (n - 1) * c)
            A[n] = cnt * generic + math.fsum(math.exp(v) - generic for v in sp)
    return A, N0, phi_b, c


def _loop_gf(L: LoopSystem, potential: Potential) -> PressureEstimate:
    A, N0, phi_b, c = _loop_weights(L, potential)
    if any(is_inf(v) for v in A.values()) or L.tail.infinite_counts:
        return PressureEstimate(INF, "loop-gf", note="infinitely many loops of one length")
    tail = L.tail
    if tail.kind == "double_exponential":
        return PressureEstimate(INF, "loop-gf", note="loop counts grow too fast")
    if not tail.nonzero:
        rate, R = None, INF
    else:
        rate = 1.0 if tail.kind == "constant" else float(tail.value)
        R = math.exp(-c) / rate
    k = float(tail.value) if tail.kind == "constant" and tail.nonzero else 1.0

    def F(x):
        s = math.fsum(a * x ** n for n, a in A.items() if a)
        if rate is not None:
            q = rate * math.exp(c) * x
            if q >= 1:
                return INF
            s += k * math.exp(phi_b - c) * q ** (N0 + 1) / (1 - q)
        return s

    hi = 1.0 if math.isinf(R) else R * 0.5
    j = 1
    while F(hi) <= 1:
        if math.isinf(R):
            hi *= 2
            if hi > 1e300:
                return PressureEstimate(-INF, "loop-gf", note="no loops carry weight")
        else:
            j += 1
            if j > 60:
                return PressureEstimate(-math.log(R), "loop-gf", note="no root below the radius; pressure is -log R")
            hi = R * (1 - 2.0 ** -j)
    x = brentq(lambda t: F(t) - 1, 0.0, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    table = [{"n": n, "A_n": a} for n, a in sorted(A.items())]
    return PressureEstimate(-math.log(x), "loop-gf", table, error=1e-12)


def partition_sums(shift, potential: Potential, base, n_max: int, *, K: int = 32) -> PressureEstimate:
    """(1/n) log Z_n with Z_n summing exp(S_n phi) over period-n points whose orbit meets base.

    Computed on the first K symbols as tr(W^n) - tr(W_0^n), W_0 being W
    with the base symbol removed.  A lower bound for infinite alphabets.
    """
    syms = list(shift.first_symbols(K))
    if base not in syms:
        raise ValueError("base symbol is not among the first K symbols")
    states, L = log_transfer_matrix(shift, syms, potential)
    keep = [i for i, u in enumerate(states) if base not in u]
    finite = L[np.isfinite(L)]
    m = float(finite.max()) if finite.size else 0.0
    W = np.where(np.isfinite(L), np.exp(L - m), 0.0)
    W0 = W[np.ix_(keep, keep)]
    table, P, P0 = [], np.eye(len(states)), np.eye(len(keep))
    value = -INF
    for n in range(1, n_max + 1):
        P, P0 = P @ W, P0 @ W0
        z = float(np.trace(P) - np.trace(P0))
        value = m + math.log(z) / n if z > 0 else -INF
        table.append({"n": n, "value": value})
        if np.abs(P).max() > 1e250:
            raise OverflowError("partition sums overflow; lower n_max")
    exact = shift.finite_alphabet and len(syms) >= sum(1 for _ in shift.symbols())
    return PressureEstimate(value, "partition-sum", table, error=None, one_sided=not exact,
                            note="periodic orbits through the base symbol")


def pressure(shift, potential: Potential | None = None, method: str = "auto", **params) -> PressureEstimate:
    """Gurevich pressure estimate; value +inf when it diverges."""
    potential = potential or Potential.constant(0.0)
    if method == "auto":
        if shift.finite_alphabet:
            method = "truncation"
        elif isinstance(shift, FullShift) and potential.depth == 1:
            method = "closed-form"
        elif isinstance(shift, LoopSystem) and potential.depth == 1:
            try:
                return _loop_gf(shift, potential)
            except SeriesUndecidable:
                method = "truncation"
        else:
            method = "truncation"
    if method == "truncation":
        return _truncation(shift, potential, **params)
    if method == "closed-form":
        if not isinstance(shift, FullShift):
            raise ValueError("closed form is only available on the full shift")
        return _full_shift_closed(potential)
    if method == "loop-gf":
        if not isinstance(shift, LoopSystem):
            raise ValueError("loop generating function needs a loop system")
        try:
            return _loop_gf(shift, potential)
        except SeriesUndecidable as e:
            raise TailSeriesDiverges(str(e)) from None
    if method == "partition-sum":
        base = params.pop("base", getattr(shift, "base", None))
        if base is None:
            base = shift.first_symbols(1)[0]
        return partition_sums(shift, potential, base, params.pop("n", 30), **params)
    raise ValueError(f"unknown pressure method {method!r}")


# ---------------------------------------------------------------------------
# s_inf


@dataclass
class SInfinity:
    value: float
    edge: str | None
    heuristic: bool
    note: str = ""

    def to_dict(self):
        return {"value": self.value, "edge": self.edge, "heuristic": self.heuristic, "note": self.note}


def _finite_oracle(shift, potential):
    if shift.finite_alphabet:
        return (lambda t: True), False
    if isinstance(shift, FullShift) and potential.depth == 1:
        return (lambda t: exp_tail_finite(potential.tail, t)), False
    if isinstance(shift, LoopSystem) and potential.depth == 1:
        def f(t):
            return pressure(shift, potential.scaled(t), "loop-gf").finite
        try:
            f(1.0)
            return f, False
        except TailSeriesDiverges:
            pass
    return (lambda t: pressure(shift, potential.scaled(t), "truncation").finite), True


def s_infinity(shift, potential: Potential, tol: float = 1e-4, t_max: float = 64.0) -> SInfinity:
    """inf{t >= 0 : P(t phi) < inf} by bisection on a finiteness oracle."""
    finite, heuristic = _finite_oracle(shift, potential)
    if finite(0.0) or finite(tol / 4):
        return SInfinity(0.0, "0-edge", heuristic)
    hi = 1.0
    while not finite(hi):
        hi *= 2
        if hi > t_max:
            return SInfinity(INF, None, heuristic, f"P(t phi) infinite for every t <= {t_max}")
    lo = hi / 2 if hi > 1 else 0.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if finite(mid):
            hi = mid
        else:
            lo = mid
    v = (lo + hi) / 2
    edge = "1-edge" if abs(v - 1) <= tol else None
    note = "finiteness decided by a truncation heuristic" if heuristic else ""
    return SInfinity(v, edge, heuristic, note)


# ---------------------------------------------------------------------------
# pressure at infinity


@dataclass
class InfinityBound:
    lower: float
    values: list
    lam: float
    note: str = ""

    def to_dict(self):
        return {"lower_bound": self.lower, "free_energies": self.values, "lambda": self.lam, "note": self.note}


def free_energy(measure: Measure, potential: Potential) -> float:
    return measure.entropy() + integrate(measure, potential)


def pressure_at_infinity_lower(shift, sequence: Sequence[Measure] | None, potential: Potential, *,
                               ns=None, depth: int = 2) -> InfinityBound:
    """A lower bound for the pressure at infinity from a sequence escaping to zero."""
    from .approx import Refused, zero_measure_sequence
    from .topology import DELTA_INFINITY, aitken, diagnose_convergence

    if not sequence:
        ns = list(ns or (8, 16, 32, 64))
        got = zero_measure_sequence(shift, ns)
        if isinstance(got, Refused):
            raise NotEscaping(f"no escaping sequence: {got.reason}")
        sequence = got
    seq = list(sequence)
    report = diagnose_convergence(seq, shift, depth, ns=ns)
    if report.classification != DELTA_INFINITY:
        raise NotEscaping(f"sequence is classified {report.classification}, not total escape")
    vals = [free_energy(m, potential) for m in seq]
    if len(vals) >= 3:
        lim = aitken(*vals[-3:])
        lower = min(lim, max(vals[len(vals) // 2:])) if lim > max(vals) else lim
    else:
        lower = vals[-1]
    return InfinityBound(float(lower), vals, report.lam, "lower bound from the supplied sequence")


# ---------------------------------------------------------------------------
# equilibrium states on finite shifts


def equilibrium_finite(shift, potential: Potential | None = None, *, tol: float = 1e-10):
    """(FiniteMarkov equilibrium state, pressure) for a potential of depth <= 2."""
    potential = potential or Potential.constant(0.0)
    if not shift.finite_alphabet:
        raise PreconditionViolated("equilibrium_finite needs a finite alphabet")
    if potential.depth > 2:
        raise PreconditionViolated("only potentials of depth 1 or 2 are supported")
    syms = list(shift.symbols())
    if isinstance(shift, FiniteMatrix) and not shift.transitive:
        raise NotIrreducible("matrix is not irreducible")
    if potential.depth == 1:
        potential2 = Potential(2, {(a, b): potential((a,)) for a in syms for b in syms if shift.allowed(a, b)})
    else:
        potential2 = potential
    _, L = log_transfer_matrix(shift, syms, potential2)
    M, lam, m, r, l = _perron(L)
    if np.any(r <= 0) or np.any(l <= 0):
        raise NotIrreducible("Perron vectors are not positive")
    P = M * r[None, :] / (lam * r[:, None])
    P = P / P.sum(axis=1, keepdims=True)
    p = l * r / float(l @ r)
    mu = FiniteMarkov(syms, P.tolist(), p.tolist(), tol=1e-8)
    press = m + math.log(lam)
    check = mu.entropy() + integrate(mu, potential)
    if abs(check - press) >= tol:
        raise AssertionError(f"variational identity off by {abs(check - press):.3e}")
    return mu, press


# ---------------------------------------------------------------------------
# dual variational principle


@dataclass
class DualityReport:
    target: float
    inf_value: float
    gap: float
    certificate: dict
    min_evaluated_gap: float
    evaluations: int
    family: dict
    hypotheses: dict

    def to_dict(self):
        return {"target": self.target, "inf": self.inf_value, "gap": self.gap,
                "certificate_g": self.certificate, "min_evaluated_gap": self.min_evaluated_gap,
                "evaluations": self.evaluations, "family": self.family, "hypotheses": self.hypotheses}


def _cylinder_family(shift, depth, K):
    syms = list(shift.first_symbols(K))
    words = [(s,) for s in syms]
    for _ in range(depth - 1):
        words = [w + (s,) for w in words for s in syms if shift.allowed(w[-1], s)]
    return words


def check_hypotheses(shift, potential: Potential, mu: Measure) -> dict:
    """Raise HypothesisViolated on the first failed hypothesis; return the computed values."""
    sup = potential.sup()
    if not sup < INF:
        raise HypothesisViolated("sup", "sup of the potential is infinite")
    P = pressure(shift, potential)
    if not P.finite:
        raise HypothesisViolated("P", "P=inf: the pressure of the potential is infinite")
    s = s_infinity(shift, potential)
    if not s.value < 1:
        raise HypothesisViolated("s_inf", f"s_inf = {s.value} is not below 1")
    integral = integrate(mu, potential)
    if integral == -INF:
        raise HypothesisViolated("integral", "the potential is not integrable for the measure")
    return {"sup": sup, "pressure": P.value, "s_infinity": s.value, "integral": integral}


def dual_vp_check(shift, potential: Potential | None, mu: Measure, *, depth: int = 2, K: int = 8,
                  seed: int = 7, restarts: int = 3, box: float | None = None,
                  max_sweeps: int = 60, eps: float = 1e-10) -> DualityReport:
    """Minimise P(phi + g) - int g dmu over g in the span of depth-k cylinder indicators.

    Every evaluated g must satisfy P(phi + g) - int g dmu >= h(mu) + int phi dmu - eps.
    """
    potential = potential or Potential.constant(0.0)
    hyp = check_hypotheses(shift, potential, mu)
    target = mu.entropy() + hyp["integral"]
    depth = max(depth, potential.depth)
    family = _cylinder_family(shift, depth, K)
    weights = np.array([float(mu.mass(w)) for w in family])
    B = box if box is not None else 10 * (1 + abs(hyp["pressure"]))

    if shift.finite_alphabet:
        syms = list(shift.symbols())
        base_vals = {}
        all_words = _cylinder_family(shift, depth, len(syms))
        for w in all_words:
            base_vals[w] = potential(w)
        idx = {w: i for i, w in enumerate(family)}

        def P_of(c):
            head = {w: base_vals[w] + (c[idx[w]] if w in idx else 0.0) for w in all_words}
            _, L = log_transfer_matrix(shift, syms, Potential(depth, head, Tail.constant(0.0)))
            return log_spectral_radius(L)
    elif isinstance(shift, FullShift) and depth == 1:
        def P_of(c):
            head = dict(potential.head_map)
            for (n,), ci in zip(family, c):
                head[(n,)] = potential((n,)) + ci
            return _full_shift_closed(Potential(1, head, potential.tail)).value
    else:
        raise PreconditionViolated("dual check needs a finite alphabet or a depth-1 family on the full shift")

    evals = {"n": 0, "min_gap": INF}

    def J(c):
        v = P_of(c) - float(np.dot(c, weights))
        evals["n"] += 1
        gap = v - target
        if gap < evals["min_gap"]:
            evals["min_gap"] = gap
        if gap < -eps:
            raise AssertionError(f"P(phi+g) - int g dmu fell below the target by {-gap:.3e}")
        return v

    def descend(c):
        c = np.array(c, dtype=float)
        best = J(c)
        for _ in range(max_sweeps):
            old = best
            for i in range(len(c)):
                def f(x, i=i):
                    d = c.copy()
                    d[i] = x
                    return J(d)
                res = minimize_scalar(f, bounds=(-B, B), method="bounded", options={"xatol": 1e-10})
                if res.fun < best:
                    c[i], best = res.x, res.fun
            if old - best < 1e-13:
                break
        return c, best

    rng = np.random.default_rng(seed)
    starts = [np.zeros(len(family))] + [rng.uniform(-B, B, len(family)) for _ in range(restarts)]
    best_c, best = None, INF
    for s in starts:
        c, v = descend(s)
        if v < best:
            best_c, best = c, v
    cert = {",".join(str(a) for a in w): float(x) for w, x in zip(family, best_c)}
    return DualityReport(target, best, best - target, cert, evals["min_gap"], evals["n"],
                         {"depth": depth, "symbols": K, "size": len(family), "box": B, "seed": seed},
                         hyp)


# ---------------------------------------------------------------------------
# a potential with a prescribed equilibrium-like measure


@dataclass
class PsiConstruction:
    potential: Potential
    pressure: float
    integral: float
    partition_entropy: float
    null_mass: float

    def to_dict(self):
        return {"potential": self.potential.describe(), "pressure": self.pressure,
                "integral": self.integral, "partition_entropy": self.partition_entropy,
                "null_weight_sum": self.null_mass}


def construct_psi(mu: Measure, log_null_weights: Tail | None = None) -> PsiConstruction:
    """Depth-1 potential on the full shift: log mu([n]) on charged symbols, log a_n elsewhere.

    ``log_null_weights`` is the formula n -> log a_n used on symbols of zero mass.
    Then P(psi) = log(1 + sum of a_n over null symbols) and int psi dmu = -H_mu.
    """
    H = partition_entropy_H(mu)
    if math.isinf(H):
        raise InfinitePartitionEntropy("partition entropy is infinite")
    if isinstance(mu, Bernoulli):
        psi = Potential(1, {}, mu.law.neg_log_p().scaled(-1.0))
        null = 0.0
    else:
        d1 = mu.depth1()
        support = {a: m for a, m in d1.items() if m > 0 and isinstance(a, int) and a >= 1}
        if log_null_weights is None:
            log_null_weights = Tail.polynomial(0.0, -math.log(2))
        if not exp_tail_finite(log_null_weights):
            raise NullWeightsDiverge("the null weights are not summable")
        null = exp_tail_sum(log_null_weights) - math.fsum(math.exp(log_null_weights(a)) for a in support)
        psi = Potential(1, {(a,): math.log(float(m)) for a, m in support.items()}, log_null_weights)
    P = math.log1p(null) if null else 0.0
    closed = _full_shift_closed(psi).value
    if abs(closed - P) > 1e-12:
        raise AssertionError(f"closed-form pressure {closed} disagrees with log(1 + null mass) {P}")
    integral = integrate(mu, psi)
    return PsiConstruction(psi, P, integral, H, null)


# ---------------------------------------------------------------------------
# measures that are not equilibrium states


@dataclass
class Certificate:
    entropies: list
    limit_entropy: float
    gap: float
    limit: str
    reason: str

    def to_dict(self):
        return {"entropies": self.entropies, "limit_entropy": self.limit_entropy, "gap": self.gap,
                "limit": self.limit, "reason": self.reason}


def geometric_weights(N: int) -> list:
    """2^-1, ..., 2^-(N-1) and a last weight lumping the tail, so the sum is 1."""
    w = [Fraction(1, 2 ** n) for n in range(1, N)]
    w.append(1 - sum(w, Fraction(0)))
    return w


def non_equilibrium_measure(measures: Sequence[Measure], weights: Sequence, limit: Measure, *,
                            tol: float = 1e-9):
    """sum p_n mu_n with a certificate that the entropies of mu_n stay below h(limit)."""
    ms, ws = list(measures), list(weights)
    if len(ms) != len(ws) or not ms:
        raise ValueError("need as many weights as measures")
    total = sum(ws, Fraction(0)) if all(isinstance(w, (int, Fraction)) for w in ws) else math.fsum(map(float, ws))
    if abs(float(total) - 1) > 1e-12 or any(w <= 0 for w in ws):
        raise WeightSumError(f"weights must be positive and sum to 1, got {float(total)}")
    ent = [m.entropy() for m in ms]
    h_lim = limit.entropy()
    tail_sup = max(ent[len(ent) // 2:])
    gap = h_lim - tail_sup
    if not gap > tol:
        raise CertificateInvalid(f"entropy gap {gap:.3e} is not positive")
    mu = Combo(ws, ms)
    cert = Certificate(ent, h_lim, gap, repr(limit),
                       "the entropies along the sequence stay below the entropy of its limit, "
                       "so no bounded-above continuous potential has this combination as equilibrium state")
    return mu, cert


__all__ = [
    "PressureEstimate", "pressure", "partition_sums", "log_transfer_matrix", "log_spectral_radius",
    "SInfinity", "s_infinity", "InfinityBound", "pressure_at_infinity_lower", "free_energy",
    "equilibrium_finite", "DualityReport", "dual_vp_check", "check_hypotheses",
    "PsiConstruction", "construct_psi", "Certificate", "geometric_weights", "non_equilibrium_measure",
]
