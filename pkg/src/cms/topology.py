"""Metrics for the cylinder and weak* topologies and convergence diagnostics.

Both metrics are weighted sums ``sum_i 2**-i |mu(C_i) - nu(C_i)|`` over a fixed
enumeration of cylinders: length ascending, lexicographic inside a length.
For the weak* metric every position also offers a bucket slot, placed after
the symbol cap, standing for "a symbol beyond the cap or inf".  That set is
clopen in the compactification, so its indicator is continuous, whereas the
single point set {inf} is not open.  Any such summable weighting metrizes
the same topology; the numbers themselves depend on the configuration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotConverged, PreconditionViolated
from .measures import Bucket, Combo, DiracInfinity, Measure, Periodic
from .shift import is_admissible

DEFAULT_SYMBOL_CAP = 8
DEFAULT_MAX_CYLINDERS = 512


@dataclass(frozen=True)
class MetricConfig:
    depth: int
    symbols: tuple
    bar: bool
    cylinders: tuple
    weights: tuple
    tail_bound: Fraction
    bucket: Bucket | None = None

    @property
    def keep(self) -> frozenset:
        return frozenset(self.symbols)

    def describe(self):
        return {
            "depth": self.depth,
            "symbols": list(self.symbols),
            "bucket": self.bucket is not None,
            "cylinders": len(self.cylinders),
            "tail_bound": f"{self.tail_bound.numerator}/{self.tail_bound.denominator}",
            "note": "distances depend on this enumeration and its weights",
        }


def metric_config(shift, depth: int, *, symbol_cap: int = DEFAULT_SYMBOL_CAP, bar: bool = False,
                  max_cylinders: int = DEFAULT_MAX_CYLINDERS) -> MetricConfig:
    """Cylinders of length <= depth over the first ``symbol_cap`` symbols.

    With ``bar`` and an infinite alphabet a bucket slot follows the symbols.
    Transitions between two listed symbols must be allowed.
    """
    if depth < 1 or symbol_cap < 1 or max_cylinders < 1:
        raise ValueError("depth, symbol_cap and max_cylinders must be positive")
    syms = tuple(shift.first_symbols(symbol_cap))
    bucket = Bucket(frozenset(syms)) if bar and not shift.finite_alphabet else None
    slots = syms + ((bucket,) if bucket is not None else ())

    def ok(a, b):
        if isinstance(a, Bucket) or isinstance(b, Bucket):
            return True
        return is_admissible(shift, (a, b))

    out = []
    level = [(s,) for s in slots]
    full = True
    for d in range(1, depth + 1):
        for c in level:
            if len(out) >= max_cylinders:
                full = False
                break
            out.append(c)
        if not full or d == depth:
            break
        level = [c + (s,) for c in level for s in slots if ok(c[-1], s)]
    weights = tuple(Fraction(1, 2 ** i) for i in range(1, len(out) + 1))
    return MetricConfig(depth, syms, bucket is not None, tuple(out), weights,
                        Fraction(1, 2 ** len(out)), bucket)


# ---------------------------------------------------------------------------
# masses on an enumeration


class TableMeasure(Measure):
    """Finitely many cylinder values, e.g. fitted limits.  Not a measure in general."""

    def __init__(self, values: dict, label: str = "table"):
        self.values = dict(values)
        self.label = label

    def mass_pattern(self, pattern):
        return self.values[tuple(pattern)]

    def total(self):
        return None

    def support(self):
        return None

    def entropy(self):
        raise NotImplementedError("a table of limits has no entropy")

    def _key(self):
        return ("table", tuple(sorted(self.values.items(), key=repr)))

    def __repr__(self):
        return f"TableMeasure({self.label})"


def masses(measure: Measure, config: MetricConfig) -> list:
    """Masses of every enumerated cylinder."""
    if isinstance(measure, Periodic):
        keep = config.keep
        out = []
        for c in config.cylinders:
            cnt = measure.window_counts(len(c), keep)
            # bucketed windows carry Bucket(keep) objects equal to config.bucket
            out.append(Fraction(cnt.get(c, 0), measure.period))
        return out
    if isinstance(measure, Combo):
        acc = [Fraction(0)] * len(config.cylinders)
        for w, m in zip(measure.weights, measure.parts):
            acc = [a + w * v for a, v in zip(acc, masses(m, config))]
        return acc
    return [measure.mass_pattern(c) for c in config.cylinders]


@dataclass(frozen=True)
class Distance:
    value: object
    bound: Fraction

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        v = self.value
        return {"value": float(v), "exact": f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else None,
                "tail_bound": float(self.bound)}


def _weighted(a: list, b: list, config: MetricConfig):
    exact = all(isinstance(x, Fraction) for x in a) and all(isinstance(x, Fraction) for x in b)
    if exact:
        return sum((w * abs(x - y) for w, x, y in zip(config.weights, a, b)), Fraction(0))
    return math.fsum(float(w) * abs(float(x) - float(y)) for w, x, y in zip(config.weights, a, b))


def _check(config, bar):
    if config.bar != bar and config.bucket is not None:
        raise ValueError("metric configuration built for the other topology")


def cylinder_distance(mu: Measure, nu: Measure, config: MetricConfig) -> Distance:
    _check(config, False)
    return Distance(_weighted(masses(mu, config), masses(nu, config), config), config.tail_bound)


def weakstar_distance(mu: Measure, nu: Measure, config: MetricConfig) -> Distance:
    return Distance(_weighted(masses(mu, config), masses(nu, config), config), config.tail_bound)


# ---------------------------------------------------------------------------
# extrapolation


def aitken(x0, x1, x2):
    """Aitken delta-squared limit of three terms; the last term when degenerate."""
    d1, d2 = x1 - x0, x2 - x1
    den = d2 - d1
    if den == 0 or d2 == 0:
        return x2
    return x2 - d2 * d2 / den


def _fit(column: list, tol: float):
    """(limit, residual, converged) for one cylinder column."""
    if len(column) < 3:
        return column[-1], 0.0, True
    x0, x1, x2 = column[-3:]
    lim = aitken(x0, x1, x2)
    lim = min(max(lim, 0), 1)
    d1, d2 = abs(float(x1 - x0)), abs(float(x2 - x1))
    ok = d2 <= tol or d2 <= 0.95 * d1
    if len(column) >= 4 and ok:
        prev = min(max(aitken(*column[-4:-1]), 0), 1)
        ok = abs(float(prev - lim)) <= max(tol, 2 * d2)
    return lim, abs(float(x2 - lim)), ok


def k_mass(measure: Measure, K) -> object:
    return sum((measure.mass((a,)) for a in K), Fraction(0))


# ---------------------------------------------------------------------------
# diagnosis

PROBABILITY = "probability"
ESCAPE = "escape"
DELTA_INFINITY = "delta_infinity"
OUTSIDE_HULL = "outside_convex_hull"


@dataclass
class ConvergenceReport:
    ns: list
    lam: float
    lam_by_cap: dict
    classification: str
    residual: float
    additivity_defect: dict
    escaping_beyond_cap: dict
    table: list
    consistent: bool
    limit: TableMeasure = field(repr=False, default=None)
    weak_limit: TableMeasure = field(repr=False, default=None)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "n": list(self.ns),
            "lambda": self.lam,
            "lambda_by_cap": {str(k): v for k, v in self.lam_by_cap.items()},
            "classification": self.classification,
            "max_residual": self.residual,
            "additivity_defect": {str(k): v for k, v in self.additivity_defect.items()},
            "escaping_beyond_cap": {str(k): v for k, v in self.escaping_beyond_cap.items()},
            "topologies_agree": self.consistent,
            "table": self.table,
            "notes": list(self.notes),
        }


def diagnose_convergence(sequence: Sequence[Measure], shift, depth: int = 3, *, ns=None,
                         symbol_cap: int = DEFAULT_SYMBOL_CAP, tol: float = 1e-6,
                         ratio: float = 0.9) -> ConvergenceReport:
    """Fit cylinder limits of a sequence and classify the limit.

    Mass escaping past the cap is measured at two caps, c and 4c.  If it
    does not shrink (ratio >= ``ratio``) and exceeds ``tol``, the cylinder
    limits are not countably additive and the limit lies outside the convex
    hull of invariant measures and delta at infinity.
    """
    seq = list(sequence)
    if len(seq) < 3:
        raise PreconditionViolated("need at least three measures")
    ns = list(ns) if ns is not None else list(range(1, len(seq) + 1))
    caps = (symbol_cap, 4 * symbol_cap)
    cyl = metric_config(shift, depth, symbol_cap=symbol_cap)
    weak = metric_config(shift, depth, symbol_cap=symbol_cap, bar=True)

    cols = list(zip(*[masses(m, cyl) for m in seq]))
    wcols = list(zip(*[masses(m, weak) for m in seq]))
    limits, residual, bad = {}, 0.0, []
    for c, col in zip(cyl.cylinders, cols):
        lim, r, ok = _fit(list(col), tol)
        limits[c] = lim
        residual = max(residual, r)
        if not ok:
            bad.append(c)
    wlimits = {}
    for c, col in zip(weak.cylinders, wcols):
        lim, r, ok = _fit(list(col), tol)
        wlimits[c] = lim
        if not ok:
            bad.append(c)
    if bad:
        raise NotConverged(f"{len(bad)} cylinder columns fail the Cauchy test",
                           {"columns": [list(map(repr, c)) for c in bad[:10]], "n": ns})

    lam_by_cap, defect, escaping = {}, {}, {}
    for cap in caps:
        K = shift.first_symbols(cap)
        lam_by_cap[cap] = float(_fit([k_mass(m, K) for m in seq], tol)[0])
    head = shift.first_symbols(min(symbol_cap, 4))
    for a in head:
        row = {}
        for cap in caps:
            keep = frozenset(shift.first_symbols(cap))
            if shift.finite_alphabet:
                row[cap] = 0.0
                continue
            pat = (a, Bucket(keep))
            row[cap] = float(_fit([m.mass_pattern(pat) for m in seq], tol)[0])
        escaping[a] = row
        listed = sum(float(limits.get((a, s), 0)) for s in cyl.symbols)
        defect[a] = float(limits[(a,)]) - listed
    lam = lam_by_cap[caps[1]]

    outside = any(r[caps[0]] > tol and r[caps[1]] >= ratio * r[caps[0]] for r in escaping.values())
    if outside:
        cls = OUTSIDE_HULL
    elif lam <= tol:
        cls = DELTA_INFINITY
    elif lam < 1 - tol:
        cls = ESCAPE
    else:
        cls = PROBABILITY

    limit = TableMeasure(limits, "cylinder limit")
    wlimit = TableMeasure(wlimits, "weak* limit")
    table = []
    cd, wd = [], []
    for n, m in zip(ns, seq):
        row = {"n": n, "K_mass": float(k_mass(m, shift.first_symbols(symbol_cap)))}
        c = cylinder_distance(m, limit, cyl)
        w = weakstar_distance(m, wlimit, weak)
        row["cylinder_distance"] = float(c)
        row["weakstar_distance"] = float(w)
        row["by_depth"] = _by_depth(m, limit, cyl)
        cd.append(float(c))
        wd.append(float(w))
        table.append(row)
    conv_c = cd[-1] <= max(10 * tol, 0.5 * cd[0]) or cd[-1] < 1e-9
    conv_w = wd[-1] <= max(10 * tol, 0.5 * wd[0]) or wd[-1] < 1e-9
    notes = []
    if cls == OUTSIDE_HULL:
        notes.append("cylinder limits are only finitely additive; the weak* limit still exists in the compactification")
    return ConvergenceReport(ns, lam, lam_by_cap, cls, residual, defect, escaping, table,
                             conv_c == conv_w, limit, wlimit, notes)


def _by_depth(m, limit, config):
    a = masses(m, config)
    b = masses(limit, config)
    out = {}
    for c, w, x, y in zip(config.cylinders, config.weights, a, b):
        out[len(c)] = out.get(len(c), 0.0) + float(w) * abs(float(x) - float(y))
    return {str(k): v for k, v in sorted(out.items())}


def mass_escape_profile(sequence: Sequence[Measure], M_list: Sequence[int], shift=None) -> dict:
    """M -> (masses of K_M along the sequence, tail infimum estimate).

    K_M is the union of the first M symbols (1..M without a shift).
    """
    seq = list(sequence)
    out = {}
    for M in M_list:
        K = shift.first_symbols(M) if shift is not None else tuple(range(1, M + 1))
        col = [k_mass(m, K) for m in seq]
        tail = col[len(col) // 2:]
        out[M] = {"masses": col, "tail_inf": min(tail)}
    return out


def candidate_limit(lam, mu: Measure) -> Measure:
    """lam * mu + (1 - lam) * delta_inf, the weak* partner of a cylinder limit lam * mu."""
    lam = Fraction(lam) if not isinstance(lam, float) else lam
    parts, weights = [], []
    if lam > 0:
        parts.append(mu)
        weights.append(lam)
    if lam < 1:
        parts.append(DiracInfinity())
        weights.append(1 - lam)
    return Combo(weights, parts)
