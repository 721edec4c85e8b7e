"""Locally constant potentials with a formula tail."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .series import Tail


@dataclass(frozen=True)
class VarBound:
    """Bound on var_n: ``zero`` beyond the depth, or C * lam**n."""

    kind: str = "zero"
    C: float = 0.0
    lam: float = 0.0

    def __call__(self, n: int) -> float:
        if self.kind == "zero":
            return 0.0
        return self.C * self.lam ** n

    def describe(self):
        if self.kind == "zero":
            return {"kind": "zero"}
        return {"kind": self.kind, "C": self.C, "lambda": self.lam}


@dataclass(frozen=True)
class Potential:
    """phi(x) = head[x_1..x_k] when listed, else tail(x_1).

    ``head`` maps words of length ``depth`` to values.
    """

    depth: int = 1
    head: tuple = ()
    tail: Tail = field(default_factory=Tail.constant)
    var_bound: VarBound = field(default_factory=VarBound)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        items = self.head.items() if isinstance(self.head, Mapping) else self.head
        norm = []
        for w, v in items:
            w = (w,) if isinstance(w, int) else tuple(w)
            if len(w) != self.depth:
                raise ValueError(f"head word {w} does not have length {self.depth}")
            norm.append((w, float(v)))
        object.__setattr__(self, "head", tuple(sorted(norm)))
        object.__setattr__(self, "_map", dict(norm))

    @classmethod
    def constant(cls, c: float = 0.0) -> "Potential":
        return cls(1, {}, Tail.constant(c))

    @classmethod
    def depth1(cls, values: Mapping[int, float] | None = None, tail: Tail | None = None) -> "Potential":
        return cls(1, {(int(k),): v for k, v in (values or {}).items()}, tail or Tail.constant(0.0))

    @classmethod
    def indicator(cls, word, value: float = 1.0) -> "Potential":
        w = tuple(word)
        return cls(len(w), {w: value}, Tail.constant(0.0))

    @property
    def head_map(self) -> dict:
        return self._map

    def __call__(self, word) -> float:
        w = tuple(word[: self.depth])
        if len(w) < self.depth:
            raise ValueError("word shorter than the potential's depth")
        v = self._map.get(w)
        return v if v is not None else self.tail(w[0])

    def on_symbol(self, a) -> float:
        """Value on [a] for a depth-1 potential."""
        if self.depth != 1:
            raise ValueError("on_symbol needs a depth-1 potential")
        return self((a,))

    def scaled(self, t: float) -> "Potential":
        return Potential(self.depth, {w: t * v for w, v in self.head}, self.tail.scaled(t),
                         VarBound(self.var_bound.kind, abs(t) * self.var_bound.C, self.var_bound.lam))

    def sup(self) -> float:
        heads = [v for _, v in self.head]
        return max(heads + [self.tail.sup(1)])

    @property
    def is_zero(self) -> bool:
        return not self.head and self.tail.kind == "constant" and self.tail.const == 0.0

    def describe(self):
        head = {",".join(str(s) for s in w): v for w, v in self.head}
        return {"depth": self.depth, "head": head, "tail": self.tail.describe(),
                "var_bound": self.var_bound.describe()}
