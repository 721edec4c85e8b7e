"""Per-symbol formulas f(n), probability laws on N, and the series oracle.

The oracle decides convergence of the series it is asked about from the
formula families alone, and only then evaluates the sum numerically
(mpmath at 30 digits, Hurwitz zeta or geometric closed forms where they
exist).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import SeriesUndecidable

INF = math.inf
_DPS = 30


def _sign(x):
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Tail:
    """Formula for f(n), n = 1, 2, 3, ...

    kinds:
      * ``constant``:   f(n) = const
      * ``log``:        f(n) = coeff * log n + const
      * ``polynomial``: f(n) = sum_k coeffs[k] * n**k
      * ``geometric``:  f(n) = C * lam**n + const
    """

    kind: str = "constant"
    const: float = 0.0
    coeff: float = 0.0
    coeffs: tuple = ()
    C: float = 0.0
    lam: float = 0.0

    KINDS = ("constant", "log", "polynomial", "geometric")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise SeriesUndecidable(f"unknown tail formula {self.kind!r}")
        if self.kind == "polynomial":
            cs = tuple(float(c) for c in self.coeffs)
            while len(cs) > 1 and cs[-1] == 0.0:
                cs = cs[:-1]
            object.__setattr__(self, "coeffs", cs or (0.0,))
        if self.kind == "geometric" and self.lam <= 0:
            raise SeriesUndecidable("geometric tail needs lam > 0")

    # constructors
    @classmethod
    def constant(cls, c=0.0):
        return cls("constant", const=float(c))

    @classmethod
    def log(cls, coeff, const=0.0):
        return cls("log", coeff=float(coeff), const=float(const))

    @classmethod
    def polynomial(cls, *coeffs):
        return cls("polynomial", coeffs=tuple(float(c) for c in coeffs))

    @classmethod
    def geometric(cls, C, lam, const=0.0):
        return cls("geometric", C=float(C), lam=float(lam), const=float(const))

    # evaluation
    def __call__(self, n):
        if self.kind == "constant":
            return self.const
        if self.kind == "log":
            return self.coeff * math.log(n) + self.const
        if self.kind == "polynomial":
            return sum(c * n ** k for k, c in enumerate(self.coeffs))
        return self.C * self.lam ** n + self.const

    def mp(self, n):
        n = mpmath.mpf(n)
        if self.kind == "constant":
            return mpmath.mpf(self.const)
        if self.kind == "log":
            return self.coeff * mpmath.log(n) + self.const
        if self.kind == "polynomial":
            return mpmath.fsum(c * n ** k for k, c in enumerate(self.coeffs))
        return self.C * mpmath.mpf(self.lam) ** n + self.const

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.kind == "polynomial" else 0

    def scaled(self, t: float) -> "Tail":
        t = float(t)
        if self.kind == "constant":
            return Tail.constant(t * self.const)
        if self.kind == "log":
            return Tail.log(t * self.coeff, t * self.const)
        if self.kind == "polynomial":
            return Tail.polynomial(*(t * c for c in self.coeffs))
        return Tail.geometric(t * self.C, self.lam, t * self.const)

    def shifted(self, c: float) -> "Tail":
        """f + c."""
        c = float(c)
        if self.kind == "polynomial":
            cs = list(self.coeffs)
            cs[0] += c
            return Tail.polynomial(*cs)
        if self.kind == "constant":
            return Tail.constant(self.const + c)
        if self.kind == "log":
            return Tail.log(self.coeff, self.const + c)
        return Tail.geometric(self.C, self.lam, self.const + c)

    def limit_behaviour(self) -> int:
        """-1 if f(n) -> -inf, +1 if f(n) -> +inf, 0 if f stays bounded."""
        if self.kind == "constant":
            return 0
        if self.kind == "log":
            return _sign(self.coeff)
        if self.kind == "polynomial":
            return _sign(self.coeffs[-1]) if self.degree >= 1 else 0
        return _sign(self.C) if self.lam > 1 else 0

    def sup(self, start: int = 1) -> float:
        """sup of f(n) over n >= start."""
        b = self.limit_behaviour()
        if b > 0:
            return INF
        if self.kind == "constant":
            return self.const
        if self.kind == "geometric" and self.lam <= 1:
            vals = [self(start)]
            if self.lam < 1:
                vals.append(self.const)
            elif self.C != 0:
                vals.append(self(start))
            return max(vals)
        # eventually decreasing to -inf: scan until past every critical point
        n, best = start, self(start)
        horizon = start + 16
        if self.kind == "polynomial":
            bound = 1 + max(abs(c / self.coeffs[-1]) for c in self.coeffs[:-1]) if self.degree >= 1 else 1
            horizon = max(horizon, int(bound) + 2)
        while n <= horizon:
            best = max(best, self(n))
            n += 1
        return best

    def describe(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": self.const}
        if self.kind == "log":
            d = {"kind": "log", "coeff": self.coeff}
            if self.const:
                d["const"] = self.const
            return d
        if self.kind == "polynomial":
            return {"kind": "polynomial", "coeffs": list(self.coeffs)}
        d = {"kind": "geometric", "C": self.C, "lambda": self.lam}
        if self.const:
            d["const"] = self.const
        return d


# ---------------------------------------------------------------------------
# probability laws on N


@dataclass(frozen=True)
class GeometricLaw:
    """p_n = (1 - r) r**(n-1), n >= 1.  r = 1/2 gives p_n = 2**-n."""

    r: Fraction

    kind = "geometric"

    def __post_init__(self):
        r = Fraction(self.r) if not isinstance(self.r, float) else self.r
        if not 0 < r < 1:
            raise ValueError("geometric law needs 0 < r < 1")
        object.__setattr__(self, "r", r)

    def p(self, n: int):
        return (1 - self.r) * self.r ** (n - 1)

    def mp(self, n):
        r = mpmath.mpf(self.r.numerator) / self.r.denominator if isinstance(self.r, Fraction) else mpmath.mpf(self.r)
        return (1 - r) * r ** (n - 1)

    def tail_mass(self, n: int):
        """sum_{k > n} p_k."""
        return self.r ** n

    def neg_log_p(self) -> Tail:
        r = float(self.r)
        return Tail.polynomial(-math.log(1 - r) + math.log(r), -math.log(r))

    def describe(self):
        return {"kind": "geometric", "r": _frac_str(self.r)}


@dataclass(frozen=True)
class PowerLaw:
    """p_n = n**-s / zeta(s), s > 1."""

    s: float

    kind = "power"

    def __post_init__(self):
        if not self.s > 1:
            raise ValueError("power law needs s > 1")

    @property
    def Z(self):
        return float(mpmath.zeta(self.s))

    def p(self, n: int):
        return n ** -self.s / self.Z

    def mp(self, n):
        return mpmath.mpf(n) ** (-self.s) / mpmath.zeta(self.s)

    def tail_mass(self, n: int):
        return float(mpmath.zeta(self.s, n + 1) / mpmath.zeta(self.s))

    def neg_log_p(self) -> Tail:
        return Tail.log(self.s, math.log(self.Z))

    def describe(self):
        return {"kind": "power", "s": self.s}


def _frac_str(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


# ---------------------------------------------------------------------------
# the oracle


def _law_tail_verdict(law, tail: Tail) -> int:
    """0 if sum p_n f(n) converges, otherwise the sign of its divergence."""
    if tail.kind in ("constant", "log"):
        return 0
    if law.kind == "geometric":
        if tail.kind == "polynomial":
            return 0
        r = float(law.r)
        return 0 if (tail.lam * r < 1 or tail.C == 0) else _sign(tail.C)
    if law.kind == "power":
        if tail.kind == "polynomial":
            d = tail.degree
            return 0 if (d == 0 or law.s - d > 1) else _sign(tail.coeffs[-1])
        return 0 if (tail.lam <= 1 or tail.C == 0) else _sign(tail.C)
    raise SeriesUndecidable(f"no rule for law {law!r}")


def law_tail_sum(law, tail: Tail, start: int = 1) -> float:
    """sum_{n >= start} p_n f(n), possibly +-inf."""
    v = _law_tail_verdict(law, tail)
    if v:
        return v * INF
    with mpmath.workdps(_DPS):
        s = mpmath.nsum(lambda n: law.mp(n) * tail.mp(n), [start, mpmath.inf])
    return float(s)


def law_partial(law, f, n_max: int) -> float:
    return math.fsum(float(law.p(n)) * f(n) for n in range(1, n_max + 1))


def _exp_verdict(tail: Tail, t: float) -> bool:
    """Whether sum_n exp(t f(n)) converges."""
    if t == 0:
        return False
    g = tail.scaled(t)
    if g.kind == "log":
        return g.coeff < -1
    return g.limit_behaviour() < 0


def exp_tail_finite(tail: Tail, t: float = 1.0) -> bool:
    return _exp_verdict(tail, t)


def exp_tail_sum(tail: Tail, start: int = 1, t: float = 1.0) -> float:
    """sum_{n >= start} exp(t f(n)), possibly +inf."""
    if not _exp_verdict(tail, t):
        return INF
    g = tail.scaled(t)
    with mpmath.workdps(_DPS):
        if g.kind == "log":
            s = mpmath.exp(g.const) * mpmath.zeta(-g.coeff, start)
        elif g.kind == "polynomial" and g.degree == 1:
            c0, c1 = g.coeffs
            q = mpmath.exp(c1)
            s = mpmath.exp(c0) * q ** start / (1 - q)
        else:
            s = mpmath.nsum(lambda n: mpmath.exp(g.mp(n)), [start, mpmath.inf])
    return float(s)
