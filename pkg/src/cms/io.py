"""JSON/CSV serialization, presentation and measure loaders, experiment configs."""
from __future__ import annotations

import csv
import dataclasses
import io as _io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CMSError
from .measures import (
    Bernoulli, Bucket, Combo, DiracInfinity, FiniteMarkov, Measure, Periodic,
)
from .potential import Potential, VarBound
from .rules import rule_graph
from .series import GeometricLaw, PowerLaw, Tail
from .shift import INF, FiniteMatrix, FullShift, LoopSystem, LoopTail, is_inf


class ConfigError(CMSError):
    """Malformed input; ``field`` is a dotted path into the document."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------------------
# plain values


def to_jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, Bucket):
        return repr(x)
    if hasattr(x, "to_dict"):
        return to_jsonable(x.to_dict())
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(x):
        return to_jsonable(dataclasses.asdict(x))
    if isinstance(x, Measure):
        return measure_to_json(x)
    if hasattr(x, "item"):
        return to_jsonable(x.item())
    return repr(x)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    _atomic_write(path, dumps(obj))


def write_csv(path, columns, rows, meta: dict | None = None):
    """CSV preceded by ``# key: value`` metadata lines."""
    buf = _io.StringIO()
    for k, v in sorted((meta or {}).items()):
        buf.write(f"# {k}: {json.dumps(to_jsonable(v), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    _atomic_write(path, buf.getvalue())


def _cell(v):
    v = to_jsonable(v)
    return "" if v is None else (repr(v) if isinstance(v, float) else v)


def parse_number(x, where: str):
    """int, Fraction ('p/q'), float or inf."""
    if isinstance(x, bool):
        raise ConfigError(where, "expected a number")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf", "infinity"):
            return INF
        try:
            return Fraction(s) if "/" in s else (int(s) if s.lstrip("-").isdigit() else float(s))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(where, f"expected a number, got {x!r}")


def parse_symbol(x, where: str):
    if x in ("inf", "∞") or (isinstance(x, float) and is_inf(x)):
        return INF
    if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
        return x
    if isinstance(x, str) and x.isdigit():
        return int(x)
    raise ConfigError(where, f"expected a symbol (non-negative int or 'inf'), got {x!r}")


def load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(str(path), f"cannot read file ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict):
        raise ConfigError(where, "expected an object")
    if key not in obj:
        raise ConfigError(f"{where}.{key}", "missing field")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise ConfigError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return v


# ---------------------------------------------------------------------------
# presentations


def shift_from_json(obj, where: str = "shift"):
    t = _need(obj, "type", where, str)
    try:
        if t == "full_shift":
            return FullShift()
        if t == "finite_matrix":
            alpha = [parse_symbol(a, f"{where}.alphabet[{i}]") for i, a in enumerate(_need(obj, "alphabet", where, list))]
            edges = []
            for i, e in enumerate(_need(obj, "edges", where, list)):
                if not (isinstance(e, list) and len(e) == 2):
                    raise ConfigError(f"{where}.edges[{i}]", "expected a pair")
                edges.append((parse_symbol(e[0], f"{where}.edges[{i}][0]"), parse_symbol(e[1], f"{where}.edges[{i}][1]")))
            return FiniteMatrix(alpha, edges)
        if t == "loop_system":
            loops = {}
            for k, v in _need(obj, "loops", where, dict).items():
                if not str(k).isdigit():
                    raise ConfigError(f"{where}.loops.{k}", "loop lengths are positive integers")
                loops[int(k)] = parse_symbol(v, f"{where}.loops.{k}")
            return LoopSystem(loops, _tail_rule(obj.get("tail", "zero"), f"{where}.tail"), base=int(obj.get("base", 0)))
        if t == "rule":
            return rule_graph(_need(obj, "name", where, str))
    except ConfigError:
        raise
    except (ValueError, CMSError) as e:
        raise ConfigError(where, str(e)) from None
    raise ConfigError(f"{where}.type", f"unknown presentation type {t!r}")


def _tail_rule(x, where):
    if isinstance(x, str):
        if x.startswith("constant:"):
            return LoopTail("constant", parse_symbol(x.split(":", 1)[1], where))
        return LoopTail(x)
    if isinstance(x, dict):
        kind = _need(x, "kind", where, str)
        v = x.get("value", x.get("base"))
        if kind == "constant":
            v = parse_symbol(v, f"{where}.value")
        return LoopTail(kind, v)
    raise ConfigError(where, "expected a tail rule")


def shift_to_json(shift):
    return shift.describe()


# ---------------------------------------------------------------------------
# potentials


def tail_from_json(obj, where="tail"):
    if isinstance(obj, (int, float)):
        return Tail.constant(obj)
    kind = _need(obj, "kind", where, str)
    if kind == "constant":
        return Tail.constant(float(obj.get("value", 0.0)))
    if kind == "log":
        return Tail.log(float(_need(obj, "coeff", where)), float(obj.get("const", 0.0)))
    if kind == "polynomial":
        return Tail.polynomial(*[float(c) for c in _need(obj, "coeffs", where, list)])
    if kind == "geometric":
        return Tail.geometric(float(_need(obj, "C", where)), float(_need(obj, "lambda", where)), float(obj.get("const", 0.0)))
    raise ConfigError(f"{where}.kind", f"unknown tail formula {kind!r}")


def potential_from_json(obj, where: str = "potential") -> Potential:
    if not isinstance(obj, dict):
        raise ConfigError(where, "expected an object")
    depth = obj.get("depth", 1)
    if not isinstance(depth, int) or depth < 1:
        raise ConfigError(f"{where}.depth", "expected a positive integer")
    head = {}
    for k, v in obj.get("head", {}).items():
        try:
            word = tuple(int(s) for s in str(k).split(","))
        except ValueError:
            raise ConfigError(f"{where}.head.{k}", "keys are comma-separated symbols") from None
        if len(word) != depth:
            raise ConfigError(f"{where}.head.{k}", f"expected a word of length {depth}")
        head[word] = float(parse_number(v, f"{where}.head.{k}"))
    tail = tail_from_json(obj.get("tail", {"kind": "constant", "value": 0.0}), f"{where}.tail")
    vb = obj.get("var_bound", {"kind": "zero"})
    var = VarBound(vb.get("kind", "zero"), float(vb.get("C", 0.0)), float(vb.get("lambda", 0.0)))
    return Potential(depth, head, tail, var)


# ---------------------------------------------------------------------------
# measures


def measure_from_json(obj, where: str = "measure", shift=None) -> Measure:
    t = _need(obj, "type", where, str)
    if t == "periodic":
        w = [parse_symbol(s, f"{where}.word[{i}]") for i, s in enumerate(_need(obj, "word", where, list))]
        if not w:
            raise ConfigError(f"{where}.word", "empty word")
        return Periodic(w)
    if t == "markov":
        syms = [parse_symbol(s, f"{where}.symbols[{i}]") for i, s in enumerate(_need(obj, "symbols", where, list))]
        P = [[parse_number(x, f"{where}.P[{i}][{j}]") for j, x in enumerate(row)]
             for i, row in enumerate(_need(obj, "P", where, list))]
        p = obj.get("p")
        if p is not None:
            p = [parse_number(x, f"{where}.p[{i}]") for i, x in enumerate(p)]
        try:
            return FiniteMarkov(syms, P, p)
        except ValueError as e:
            raise ConfigError(where, str(e)) from None
    if t == "bernoulli":
        law = _need(obj, "law", where, dict)
        kind = _need(law, "kind", f"{where}.law", str)
        if kind == "geometric":
            return Bernoulli(GeometricLaw(parse_number(law.get("r", "1/2"), f"{where}.law.r")))
        if kind == "power":
            return Bernoulli(PowerLaw(float(_need(law, "s", f"{where}.law"))))
        raise ConfigError(f"{where}.law.kind", f"unknown law {kind!r}")
    if t == "dirac_infinity":
        return DiracInfinity()
    if t == "combo":
        ws = [parse_number(x, f"{where}.weights[{i}]") for i, x in enumerate(_need(obj, "weights", where, list))]
        parts = [measure_from_json(m, f"{where}.parts[{i}]", shift) for i, m in enumerate(_need(obj, "parts", where, list))]
        return Combo(ws, parts)
    if t in ("parry", "equilibrium"):
        if shift is None or not shift.finite_alphabet:
            raise ConfigError(where, f"{t} needs a finite-alphabet shift")
        from .thermo import equilibrium_finite
        pot = potential_from_json(obj["potential"], f"{where}.potential") if "potential" in obj else None
        return equilibrium_finite(shift, pot)[0]
    raise ConfigError(f"{where}.type", f"unknown measure type {t!r}")


def measure_to_json(m: Measure):
    if isinstance(m, Periodic):
        return {"type": "periodic", "word": [("inf" if is_inf(s) else s) for s in m.word]}
    if isinstance(m, FiniteMarkov):
        return {"type": "markov", "symbols": list(m.symbols), "P": to_jsonable(m.P), "p": to_jsonable(m.p),
                "approximate": m.approximate}
    if isinstance(m, Bernoulli):
        return {"type": "bernoulli", "law": to_jsonable(m.law.describe())}
    if isinstance(m, DiracInfinity):
        return {"type": "dirac_infinity"}
    if isinstance(m, Combo):
        return {"type": "combo", "weights": to_jsonable(list(m.weights)), "parts": [measure_to_json(p) for p in m.parts]}
    return {"type": "other", "repr": repr(m)}


def sequence_from_json(obj, shift, where: str = "sequence"):
    """(ns, measures).  Either an explicit list or a template indexed by n.

    ``{"n": [4, 8], "measures": [...]}`` or
    ``{"n": [4, 8], "template": {"type": "periodic", "word": [1, "n"]}}`` or
    ``{"n": [8, 16], "family": "zero_measure_sequence"}``.
    """
    ns = _need(obj, "n", where, list)
    if "measures" in obj:
        ms = [measure_from_json(m, f"{where}.measures[{i}]", shift) for i, m in enumerate(obj["measures"])]
        if len(ms) != len(ns):
            raise ConfigError(f"{where}.measures", "needs one measure per n")
        return ns, ms
    if "template" in obj:
        out = []
        for n in ns:
            out.append(measure_from_json(_substitute(obj["template"], n), f"{where}.template", shift))
        return ns, out
    if obj.get("family") == "zero_measure_sequence":
        from .approx import Refused, zero_measure_sequence
        got = zero_measure_sequence(shift, ns)
        if isinstance(got, Refused):
            raise ConfigError(f"{where}.family", f"refused: {got.reason}")
        return ns, got
    raise ConfigError(where, "expected 'measures', 'template' or 'family'")


def _substitute(x, n):
    if x == "n":
        return n
    if isinstance(x, str) and x.startswith("n") and x[1:].lstrip("+-").isdigit():
        return n + int(x[1:])
    if isinstance(x, list):
        return [_substitute(v, n) for v in x]
    if isinstance(x, dict):
        return {k: _substitute(v, n) for k, v in x.items()}
    return x


# ---------------------------------------------------------------------------
# experiment configs


@dataclass
class ExperimentConfig:
    command: str
    shift: object = None
    potential: object = None
    measure: object = None
    params: dict = field(default_factory=dict)
    out: str | None = None
    csv: str | None = None
    seed: int | None = None

    @classmethod
    def from_json(cls, obj, base: Path | None = None) -> "ExperimentConfig":
        cmd = _need(obj, "command", "config", str)
        base = base or Path(".")

        def ref(key, loader):
            v = obj.get(key)
            if v is None:
                return None
            if isinstance(v, str):
                return loader(load_json(base / v), key)
            return loader(v, key)

        shift = ref("shift", shift_from_json)
        pot = ref("potential", potential_from_json)
        meas = ref("measure", lambda o, w: measure_from_json(o, w, shift))
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("config.params", "expected an object")
        seed = obj.get("seed")
        if cmd in ("approximate", "dichotomy", "dualvp") and seed is None:
            raise ConfigError("config.seed", f"{cmd} samples randomly and needs a seed")
        out, csv = (str(base / obj[k]) if obj.get(k) else None for k in ("out", "csv"))
        return cls(cmd, shift, pot, meas, params, out, csv, seed)
