"""Command-line front end: ``python -m shiftorbit <subcommand> ...``.

Exit status is 0 once an analysis completes (whatever its verdict), 2 for usage
or configuration errors and 3 for capacity / truncation errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from .classify import (DEFAULT_TOL_INF, DEFAULT_TOL_ZERO, abs_cesaro_bound_estimate,
                       classify_operator, classify_orbit, default_powers,
                       hypercyclicity_criterion_check, kitai_witness_check, mean_liyorke_stat)
from .operators import BUILTINS, ShiftOperator, parse_operator
from .orbitstats import (cesaro_series, density, dyadic_blocks_set, exceedance_density,
                         write_series_csv)
from .seqcore import (BILATERAL, CapacityError, TruncationError,
                      block_bounds, compensated_cumsum, log2_weights)
from .vectors import SupportedVector, parse_space, parse_vector

SUBCOMMANDS = ("orbit", "classify", "products", "density", "criterion", "kitai", "liyorke",
               "abs-bound", "list-builtins")

SETS = {
    "evens": lambda n: n % 2 == 0,
    "naturals": lambda n: n >= 1,
    "dyadic-blocks": dyadic_blocks_set,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Parsed command line; ``to_argv`` gives back an equivalent argument list."""

    subcommand: str
    operator: str = "paper-blocks"
    vector: str | None = None
    vector2: str | None = None
    space: str = "l2"
    horizon: int | None = None
    window: int | None = None
    tol_zero: float = DEFAULT_TOL_ZERO
    tol_inf: float = DEFAULT_TOL_INF
    eps: float | None = None
    big: float | None = None
    kmax: int | None = None
    powers: str | None = None
    seed: int = 0
    samples: int | None = None
    stride: int = 1
    output: str | None = None
    format: str | None = None
    to: int | None = None
    set: str | None = None
    periodic: str | None = None
    period: int = 1

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(**{f.name: getattr(ns, f.name) for f in fields(cls) if hasattr(ns, f.name)})

    def to_argv(self) -> list:
        argv = [self.subcommand]
        for f in fields(self):
            if f.name == "subcommand":
                continue
            val = getattr(self, f.name)
            if val is None or val == f.default:
                continue
            argv += ["--" + f.name.replace("_", "-"), repr(val) if isinstance(val, float) else str(val)]
        return argv


def _common(p: argparse.ArgumentParser, vectors=True):
    p.add_argument("--operator", default="paper-blocks",
                   help="paper-blocks | rolewicz:<l> | ratio-power:<p> | constant:<l>[:side] "
                        "| @file.spec (default: paper-blocks)")
    if vectors:
        p.add_argument("--vector", default=None,
                       help="e<j> | random[:K[:rho]] | @file.json | inline JSON "
                            "(default: e0, or e1 for unilateral operators)")
    p.add_argument("--space", default="l2", help="l1 | l2 | lp:<p> | c0 (default: l2)")
    p.add_argument("--seed", type=int, default=0, help="seed for random vectors (default: 0)")
    p.add_argument("--output", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "records"), default=None,
                   help="csv or records (one JSON object per line)")


def _horizon(p, default_text):
    p.add_argument("--horizon", type=int, default=None, help=f"horizon N (default: {default_text})")
    p.add_argument("--window", type=int, default=None, help="tail window W (default: N/2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftorbit",
        description="Orbit statistics of weighted backward shifts.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("orbit", help="Cesaro series of one orbit as CSV")
    _common(p)
    _horizon(p, "c_18 for paper-blocks, else 10000")
    p.add_argument("--stride", type=int, default=1, help="emit every stride-th row (default: 1)")

    p = sub.add_parser("classify", help="finite-horizon trichotomy verdict")
    _common(p)
    _horizon(p, "c_16 for paper-blocks, else 10000")
    p.add_argument("--tol-zero", type=float, default=DEFAULT_TOL_ZERO,
                   help=f"near-zero threshold (default: {DEFAULT_TOL_ZERO})")
    p.add_argument("--tol-inf", type=float, default=DEFAULT_TOL_INF,
                   help=f"divergence threshold (default: {DEFAULT_TOL_INF})")
    p.add_argument("--samples", type=int, default=None,
                   help="without --vector: number of seeded random vectors (default: 4)")

    p = sub.add_parser("products", help="weight products prod_{j=-n}^0 w_j (prod_{j=1}^n when unilateral)")
    _common(p, vectors=False)
    p.add_argument("--to", type=int, default=None, help="last n (default: --horizon or 64)")
    p.add_argument("--horizon", type=int, default=None, help="alias for --to")

    p = sub.add_parser("density", help="density estimate of an integer set or exceedance set")
    _common(p)
    _horizon(p, "10**6")
    p.add_argument("--set", default=None,
                   help="evens | naturals | dyadic-blocks | @file (JSON list); "
                        "omit to use the exceedance set of --vector's orbit")
    p.add_argument("--eps", type=float, default=None, help="exceedance level (default: 1.0)")

    p = sub.add_parser("criterion", help="hypercyclicity product-criterion witnesses")
    _common(p, vectors=False)
    p.add_argument("--kmax", type=int, default=8, help="center radius K (default: 8)")
    p.add_argument("--powers", default=None,
                   help="comma list | blocks:<m> (b_1..b_m) | pow2:<m> "
                        "(default: blocks:18 for paper-blocks, else pow2:18)")
    p.add_argument("--eps", type=float, default=None, help="backward bound (default: 1e-3)")
    p.add_argument("--big", type=float, default=None, help="forward bound (default: 1e6)")

    p = sub.add_parser("kitai", help="Kitai-criterion witness report")
    _common(p)
    p.add_argument("--vector2", default=None, help="y sample for the right inverse (default: as --vector)")
    p.add_argument("--kmax", type=int, default=30, help="number of iterates (default: 30)")
    p.add_argument("--periodic", default=None,
                   help="periodic-point candidate: vector designation or geometric:<r>:<K>")
    p.add_argument("--period", type=int, default=1, help="period of the candidate (default: 1)")

    p = sub.add_parser("liyorke", help="mean Li-Yorke pair statistic")
    _common(p)
    _horizon(p, "2**18")
    p.add_argument("--vector2", default=None, help="second vector (default: zero vector)")

    p = sub.add_parser("abs-bound", help="absolute Cesaro bound estimate")
    _common(p, vectors=False)
    p.add_argument("--horizon", type=int, default=10000, help="horizon N (default: 10000)")
    p.add_argument("--samples", type=int, default=20,
                   help="basis vectors e_1..e_m (or e_-m..e_m) plus m random vectors (default: 20)")
    p.add_argument("--big", type=float, default=1e6, help="cap flagging unboundedness (default: 1e6)")

    sub.add_parser("list-builtins", help="list built-in operator designations")
    return parser


# --- output helpers ---------------------------------------------------------

def _g(x) -> str:
    return format(float(x), ".17g")


def _jsonable(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _records(rows) -> str:
    return "".join(json.dumps(_jsonable(r), sort_keys=True) + "\n" for r in rows)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_g(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _vector(cfg, T, text=None):
    text = text if text is not None else cfg.vector
    if text is None:
        text = "e0" if T.side == BILATERAL else "e1"
    if text.startswith("geometric:"):
        _, r, K = text.split(":")
        r = float(r)
        return SupportedVector.from_dict({k: r ** k for k in range(1, int(K) + 1)}, T.side)
    return parse_vector(text, T.side, cfg.seed)


def _default_horizon(T, blocks):
    return block_bounds(blocks).c if T.weights.kind == "paper_blocks" else 10000


# --- subcommands ------------------------------------------------------------

def cmd_orbit(cfg, T, space):
    x = _vector(cfg, T)
    N = cfg.horizon or _default_horizon(T, 18)
    s = cesaro_series(T, x, space, N, cfg.window)
    if cfg.stride < 1:
        raise UsageError("--stride must be >= 1")
    if (cfg.format or "csv") == "csv":
        expcol = T.weights.is_dyadic and len(x) == 1 and math.frexp(abs(x.items[0][1]))[0] == 0.5
        return write_series_csv(s, stride=cfg.stride, exponent_column=expcol)
    rows = [{"n": n, "norm": s.norms[n - 1], "partial_sum": s.partial_sums[n - 1],
             "cesaro_avg": s.averages[n - 1]}
            for n in sorted(set(range(cfg.stride, N + 1, cfg.stride)) | {N})]
    return _records(rows)


def _report_row(rec):
    ev, th = rec["evidence"], rec["thresholds"]
    return [rec["operator"], rec["vector"], rec["N"], rec["W"], th["tol_zero"], th["tol_inf"],
            rec["verdict"], ev["A_N"], ev["tail_window_min"], ev["tail_window_max"],
            ev["growth_ratio"]]


_REPORT_HEADER = ["operator", "vector", "N", "W", "tol_zero", "tol_inf", "verdict", "A_N",
                  "tail_window_min", "tail_window_max", "growth_ratio"]


def cmd_classify(cfg, T, space):
    N = cfg.horizon or _default_horizon(T, 16)
    W = cfg.window
    if cfg.vector is not None:
        x = _vector(cfg, T)
        recs = [classify_orbit(T, x, space, N, W, cfg.tol_zero, cfg.tol_inf)
                .to_record(T.describe(), x.describe())]
    else:
        n_random = 4 if cfg.samples is None else cfg.samples
        rep = classify_operator(T, space, N, W, cfg.tol_zero, cfg.tol_inf,
                                n_random=n_random, seed=cfg.seed)
        recs = [r.to_record(T.describe(), f"sample[{t}]") for t, r in enumerate(rep.reports)]
        recs.append({"operator": T.describe(), "label": rep.label, "majority": rep.majority.value,
                     "counts": rep.counts, "N": N, "seed": cfg.seed})
    if cfg.format == "csv":
        return _csv(_REPORT_HEADER, [_report_row(r) for r in recs if "verdict" in r])
    return _records(recs)


def cmd_products(cfg, T, space):
    to = cfg.to if cfg.to is not None else (cfg.horizon if cfg.horizon is not None else 64)
    if to < 0:
        raise UsageError("--to must be >= 0")
    spec = T.weights
    if T.side == BILATERAL:
        lg = log2_weights(spec, -to, 0)[::-1]
        ns = range(0, to + 1)
    else:
        lg = log2_weights(spec, 1, max(to, 1))[:to]
        ns = range(1, to + 1)
    cum = np.cumsum(lg) if spec.is_dyadic else compensated_cumsum(lg)
    rows = []
    for n, e in zip(ns, cum.tolist()):
        if spec.is_dyadic:
            rows.append([n, math.ldexp(1.0, int(e)), int(e)])
        else:
            rows.append([n, 2.0 ** e, e])
    header = ["n", "product", "exponent" if spec.is_dyadic else "log2_product"]
    if cfg.format == "records":
        return _records([dict(zip(header, r)) for r in rows])
    return _csv(header, rows)


def _parse_set(text):
    if text in SETS:
        return SETS[text]
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return [int(k) for k in json.load(fh)]
    raise UsageError(f"unknown set {text!r} (evens, naturals, dyadic-blocks, @file)")


def cmd_density(cfg, T, space):
    N = cfg.horizon or 10 ** 6
    rec = {"N": N}
    if cfg.set is not None:
        est = density(_parse_set(cfg.set), N, cfg.window)
        rec["set"] = cfg.set
    else:
        eps = 1.0 if cfg.eps is None else cfg.eps
        x = _vector(cfg, T)
        est, bound = exceedance_density(T, x, space, eps, N, cfg.window)
        rec.update({"operator": T.describe(), "vector": x.describe(), "eps": eps,
                    "cesaro_liminf_lower_bound": bound})
    rec.update({"W": est.window, "count_N": int(est.count_prefix[-1]),
                "udens_estimate": est.udens_estimate, "ldens_estimate": est.ldens_estimate})
    if cfg.format == "csv":
        keys = sorted(rec)
        return _csv(keys, [[rec[k] for k in keys]])
    return _records([rec])


def _parse_powers(text, T):
    if text is None:
        return default_powers(T)
    if text.startswith("blocks:"):
        return [block_bounds(i).b for i in range(1, int(text[7:]) + 1)]
    if text.startswith("pow2:"):
        return [1 << m for m in range(1, int(text[5:]) + 1)]
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --powers {text!r}") from None


def cmd_criterion(cfg, T, space):
    eps = 1e-3 if cfg.eps is None else cfg.eps
    big = 1e6 if cfg.big is None else cfg.big
    res = hypercyclicity_criterion_check(T, cfg.kmax, _parse_powers(cfg.powers, T), eps, big)
    rows = []
    for k, w in res.witnesses.items():
        if w is None:
            rows.append({"k": k, "n": None, "witness": False})
        else:
            rows.append({"k": k, "n": w.n, "witness": True,
                         "backward_product": w.backward_product.value,
                         "backward_log2": w.backward_product.log2,
                         "forward_log2": w.forward_product.log2})
    if cfg.format == "csv":
        return _csv(["k", "n", "witness", "backward_log2", "forward_log2"],
                    [[r["k"], r["n"] if r["n"] is not None else "", r["witness"],
                      r.get("backward_log2", ""), r.get("forward_log2", "")] for r in rows])
    rows.append({"operator": T.describe(), "K": cfg.kmax, "eps": eps, "big": big,
                 "passed": res.passed, "failing": res.failing})
    return _records(rows)


def cmd_kitai(cfg, T, space):
    x = _vector(cfg, T)
    y = _vector(cfg, T, cfg.vector2) if cfg.vector2 is not None else x
    periodic = None
    if cfg.periodic is not None:
        periodic = (_vector(cfg, T, cfg.periodic), cfg.period)
    rep = kitai_witness_check(T, [x], [y], cfg.kmax, space, periodic)
    rec = {"operator": T.describe(), "x": x.describe(), "y": y.describe(), "kmax": cfg.kmax,
           "inverse_law_ok": rep.inverse_law_ok,
           "forward_decay": rep.forward_decay[0].tolist(),
           "backward_decay": rep.backward_decay[0].tolist(),
           "forward_decay_flag": rep.forward_flags[0],
           "backward_decay_flag": rep.backward_flags[0]}
    if rep.periodic_point is not None:
        rec["periodic_point"] = {"period": rep.periodic_point[1],
                                 "residual": rep.periodic_point[2]}
    if cfg.format == "csv":
        return _csv(["k", "forward_norm", "backward_norm"],
                    [[k + 1, rep.forward_decay[0][k], rep.backward_decay[0][k]]
                     for k in range(cfg.kmax)])
    return _records([rec])


def cmd_liyorke(cfg, T, space):
    N = cfg.horizon or 2 ** 18
    x = _vector(cfg, T)
    y = _vector(cfg, T, cfg.vector2) if cfg.vector2 is not None else SupportedVector.empty(T.side)
    lo, hi = mean_liyorke_stat(T, x, y, space, N, cfg.window)
    rec = {"operator": T.describe(), "x": x.describe(), "y": y.describe(), "N": N,
           "W": cfg.window or max(1, N // 2), "tail_window_min": lo, "tail_window_max": hi}
    if cfg.format == "csv":
        keys = sorted(rec)
        return _csv(keys, [[rec[k] for k in keys]])
    return _records([rec])


def cmd_abs_bound(cfg, T, space):
    from .vectors import basis, sample_vector
    m = cfg.samples
    idx = range(1, m + 1) if T.side != BILATERAL else range(-m, m + 1)
    samples = [basis(j, T.side) for j in idx]
    samples += [sample_vector(cfg.seed + s, T.side, m) for s in range(m)]
    est = abs_cesaro_bound_estimate(T, space, samples, cfg.horizon, cfg.big)
    rec = {"operator": T.describe(), "N": cfg.horizon, "C_hat": est.c_hat,
           "witness": est.witness.describe(), "witness_n": est.witness_n,
           "cap": est.cap, "exceeds_cap": est.exceeds_cap}
    if cfg.format == "csv":
        keys = sorted(rec)
        return _csv(keys, [[rec[k] for k in keys]])
    return _records([rec])


def cmd_list_builtins(cfg):
    return "".join(f"{name}\t{desc}\n" for name, desc in BUILTINS.items())


COMMANDS = {
    "orbit": cmd_orbit, "classify": cmd_classify, "products": cmd_products,
    "density": cmd_density, "criterion": cmd_criterion, "kitai": cmd_kitai,
    "liyorke": cmd_liyorke, "abs-bound": cmd_abs_bound,
}


def execute(cfg: RunConfig) -> str:
    if cfg.subcommand == "list-builtins":
        return cmd_list_builtins(cfg)
    T = parse_operator(cfg.operator)
    space = parse_space(cfg.space)
    return COMMANDS[cfg.subcommand](cfg, T, space)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig.from_namespace(ns)
    try:
        text = execute(cfg)
    except (CapacityError, TruncationError) as exc:
        print(f"shiftorbit: capacity error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, OSError) as exc:
        print(f"shiftorbit: {exc}", file=sys.stderr)
        return 2
        print(f"shiftorbit: capacity error: {exc}", file=sys.stderr)
        return 3
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())
