"""Command line: ``cms <command> ...``.

Exit codes: 0 success, 2 refused or undecided, 1 error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import approx, properties, thermo, topology
from .errors import (
    CMSError, FPropertyUndecided, HypothesisViolated, NotEscaping, Undecidable,
)
from .io import (
    ConfigError, ExperimentConfig, dumps, load_json, measure_from_json, potential_from_json,
    sequence_from_json, shift_from_json, write_csv, write_json,
)
from .measures import Periodic
from .potential import Potential

OK, ERROR, REFUSED = 0, 1, 2


# ---------------------------------------------------------------------------
# commands; each returns a JSON-able report (and optionally CSV rows)


def cmd_classify(cfg: ExperimentConfig):
    p = cfg.params
    report = properties.classify(cfg.shift, cap=p.get("cap", 64))
    rome = properties.find_finite_rome(cfg.shift, p.get("symbol_cap", 6), p.get("N_cap", 16))
    return {"shift": cfg.shift.describe(), "properties": report, "rome_search": rome}, None


def cmd_pressure(cfg: ExperimentConfig):
    est = thermo.pressure(cfg.shift, cfg.potential, cfg.params.get("method", "auto"))
    rows = [dict(r) for r in est.table]
    return {"shift": cfg.shift.describe(), "pressure": est}, ((list(rows[0]), rows) if rows else None)


def cmd_s_infinity(cfg: ExperimentConfig):
    s = thermo.s_infinity(cfg.shift, cfg.potential or Potential.constant(0.0), cfg.params.get("tol", 1e-4))
    return {"shift": cfg.shift.describe(), "s_infinity": s}, None


def cmd_converge(cfg: ExperimentConfig):
    seq_obj = cfg.params.get("sequence")
    if seq_obj is None:
        raise ConfigError("params.sequence", "missing sequence")
    ns, seq = sequence_from_json(seq_obj, cfg.shift)
    depth = cfg.params.get("depth", 3)
    rep = topology.diagnose_convergence(seq, cfg.shift, depth, ns=ns, symbol_cap=cfg.params.get("cap", 8))
    rows = [{"n": r["n"], "K_mass": r["K_mass"], "cylinder_distance": r["cylinder_distance"],
             "weakstar_distance": r["weakstar_distance"]} for r in rep.table]
    metric = topology.metric_config(cfg.shift, depth, symbol_cap=cfg.params.get("cap", 8), bar=True).describe()
    return {"shift": cfg.shift.describe(), "report": rep, "metric": metric}, (["n", "K_mass", "cylinder_distance", "weakstar_distance"], rows)


def cmd_approximate(cfg: ExperimentConfig):
    targets_obj = cfg.params.get("targets")
    if not isinstance(targets_obj, list):
        raise ConfigError("params.targets", "expected a list of measures")
    targets = [measure_from_json(t, f"targets[{i}]", cfg.shift) for i, t in enumerate(targets_obj)]
    n, depth = cfg.params.get("n", 512), cfg.params.get("depth", 6)
    mu, plan = approx.glue_periodic_approximation(cfg.shift, targets, n, cfg.seed, depth=depth)
    conf = topology.metric_config(cfg.shift, depth, bar=True)
    d = topology.weakstar_distance(mu, approx.average(targets), conf)
    return {"plan": plan, "weakstar_distance": d, "metric": conf.describe()}, None


def cmd_dichotomy(cfg: ExperimentConfig):
    p = cfg.params
    rep = approx.dichotomy_report(cfg.shift, T=p.get("T", 5), tau=p.get("tau", 0.05), depth=p.get("depth", 6),
                                  seed=cfg.seed if cfg.seed is not None else 7)
    rows = rep.details.get("targets")
    csv_part = (["k", "distance", "mass_at_infinity"], rows) if rows else None
    return {"shift": cfg.shift.describe(), "dichotomy": rep}, csv_part


def cmd_dualvp(cfg: ExperimentConfig):
    p = cfg.params
    if cfg.measure is None:
        raise ConfigError("measure", "missing measure")
    rep = thermo.dual_vp_check(cfg.shift, cfg.potential, cfg.measure, depth=p.get("depth", 2),
                               K=p.get("symbols", 8), seed=cfg.seed)
    return {"shift": cfg.shift.describe(), "duality": rep}, None


def demo_escape_full_shift(cfg: ExperimentConfig):
    """Periodic((1, n)) on the full shift: [1] keeps mass 1/2 while every [1, s] empties."""
    ns = cfg.params.get("n", [4, 8, 16, 32, 64, 128, 256])
    S = cfg.params.get("s", list(range(1, 9)))
    rows = []
    for n in ns:
        mu = Periodic((1, n))
        row = {"n": n, "mu([1])": mu.mass((1,))}
        for s in S:
            row[f"mu([1,{s}])"] = mu.mass((1, s))
        rows.append(row)
    last = rows[-1]
    listed = sum((last[f"mu([1,{s}])"] for s in S), Fraction(0))
    report = {
        "demo": "escape-full-shift",
        "rows": rows,
        "mass_of_[1]_constant": all(r["mu([1])"] == Fraction(1, 2) for r in rows),
        "additivity_gap_at_last_n": last["mu([1])"] - listed,
        "note": "the limit m([1]) = 1/2 is not the sum of the limits of m([1, s])",
    }
    cols = ["n", "mu([1])"] + [f"mu([1,{s}])" for s in S]
    return report, (cols, rows)


DEMOS = {"escape-full-shift": demo_escape_full_shift}

COMMANDS = {
    "classify": cmd_classify,
    "pressure": cmd_pressure,
    "s-infinity": cmd_s_infinity,
    "converge": cmd_converge,
    "approximate": cmd_approximate,
    "dichotomy": cmd_dichotomy,
    "dualvp": cmd_dualvp,
}

def run(config: ExperimentConfig, stdout=None) -> int:
    """Execute one command; write the JSON report (and CSV if requested)."""
    stdout = stdout or sys.stdout
    try:
        if config.command == "demo":
            name = config.params.get("name", "escape-full-shift")
            if name not in DEMOS:
                raise ConfigError("params.name", f"unknown demo {name!r}; known: {sorted(DEMOS)}")
            report, table = DEMOS[name](config)
        elif config.command in COMMANDS:
            if config.shift is None:
                raise ConfigError("shift", "missing shift presentation")
            report, table = COMMANDS[config.command](config)
        else:
            raise ConfigError("command", f"unknown command {config.command!r}")
    except (FPropertyUndecided, Undecidable, NotEscaping, HypothesisViolated) as e:
        payload = {"status": "refused", "reason": type(e).__name__, "message": str(e)}
        _emit(config, payload, None, stdout)
        return REFUSED
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR
    except CMSError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return ERROR
    _emit(config, report, table, stdout)
    return OK


def _emit(config, report, table, stdout):
    text = dumps(report)
    if config.out:
        write_json(config.out, report)
    else:
        stdout.write(text)
    if config.csv and table:
        cols, rows = table
        meta = {"command": config.command, "params": {k: v for k, v in config.params.items()
                                                      if k not in ("sequence", "targets")},
                "seed": config.seed, "note": "values are truncations at the stated caps and depths"}
        if isinstance(report, dict) and "metric" in report:
            meta["metric"] = report["metric"]
        write_csv(config.csv, cols, rows, meta)


# ---------------------------------------------------------------------------
# argument parsing


def _parser():
    p = argparse.ArgumentParser(prog="cms", description="Countable Markov shift computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, shift=True):
        if shift:
            sp.add_argument("--shift", required=True, help="presentation JSON file")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--csv", help="also write the per-step table as CSV")
        return sp

    sp = common(sub.add_parser("classify", help="F-property, Rome, entropy, local compactness"))
    sp.add_argument("--cap", type=int, default=64)
    sp.add_argument("--symbol-cap", type=int, default=6)
    sp.add_argument("--N-cap", type=int, default=16)

    sp = common(sub.add_parser("pressure", help="Gurevich pressure estimate"))
    sp.add_argument("--potential", help="potential JSON file (default: zero)")
    sp.add_argument("--method", default="auto", choices=["auto", "truncation", "loop-gf", "partition-sum", "closed-form"])

    sp = common(sub.add_parser("s-infinity", help="threshold of finite pressure along t*phi"))
    sp.add_argument("--potential", required=True)
    sp.add_argument("--tol", type=float, default=1e-4)

    sp = common(sub.add_parser("converge", help="diagnose a sequence of measures"))
    sp.add_argument("--sequence", required=True)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--cap", type=int, default=8)

    sp = common(sub.add_parser("approximate", help="glue periodic orbits toward target measures"))
    sp.add_argument("--targets", required=True)
    sp.add_argument("--n", type=int, default=512)
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--seed", type=int, required=True)

    sp = common(sub.add_parser("dichotomy", help="which new ergodic measures the compactification has"))
    sp.add_argument("--T", type=int, default=5)
    sp.add_argument("--tau", type=float, default=0.05)
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--seed", type=int, default=7)

    sp = common(sub.add_parser("dualvp", help="numerical check of the dual variational principle"))
    sp.add_argument("--potential")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--symbols", type=int, default=8)
    sp.add_argument("--seed", type=int, default=7)

    sp = common(sub.add_parser("demo", help="built-in demonstrations"), shift=False)
    sp.add_argument("name", choices=sorted(DEMOS))

    sp = sub.add_parser("run", help="run an experiment config file")
    sp.add_argument("config")
    return p


def _config_from_args(a) -> ExperimentConfig:
    shift = shift_from_json(load_json(a.shift), "shift") if getattr(a, "shift", None) else None
    pot = potential_from_json(load_json(a.potential), "potential") if getattr(a, "potential", None) else None
    params, seed, measure = {}, getattr(a, "seed", None), None
    c = a.command
    if c == "classify":
        params = {"cap": a.cap, "symbol_cap": a.symbol_cap, "N_cap": a.N_cap}
    elif c == "pressure":
        params = {"method": a.method}
    elif c == "s-infinity":
        params = {"tol": a.tol}
    elif c == "converge":
        params = {"sequence": load_json(a.sequence), "depth": a.depth, "cap": a.cap}
    elif c == "approximate":
        params = {"targets": load_json(a.targets), "n": a.n, "depth": a.depth}
    elif c == "dichotomy":
        params = {"T": a.T, "tau": a.tau, "depth": a.depth}
    elif c == "dualvp":
        measure = measure_from_json(load_json(a.measure), "measure", shift)
        params = {"depth": a.depth, "symbols": a.symbols}
    elif c == "demo":
        params = {"name": a.name}
    return ExperimentConfig(c, shift, pot, measure, params, a.out, a.csv, seed)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            path = Path(args.config)
            cfg = ExperimentConfig.from_json(load_json(path), path.parent)
        else:
            cfg = _config_from_args(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
