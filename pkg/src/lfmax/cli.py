"""Experiment runner.

Subcommands map one-to-one onto module entry points; configuration is a
flat key=value file with section prefixes (``tail.N=50``), overridable
from the command line.  Every run writes its artifacts plus a manifest
into a directory derived from the config hash, so identical configs
land in (and reproduce) the same place.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__, analysis, ensembles, families, montecarlo, zeta
from .errors import (
    ConfigError,
    DomainError,
    FormatError,
    IntegrityError,
    LfmaxError,
    NumericalError,
    ResourceError,
)
from .mathfn import sieve_von_mangoldt

SCHEMA_LINE = "# schema=1\n"

_KNOWN_KEYS = {
    "tail": {"kind", "N", "trials", "seed", "statistic", "lam", "log_k"},
    "maxens": {"kind", "N", "M", "statistic", "seed"},
    "primes": {"X", "trials", "seed"},
    "zeros": {"t_max"},
    "scan": {"t0", "t1", "A"},
    "hybrid": {"t0", "t1", "count", "X", "zeros_t_max", "mangoldt_limit"},
    "stat": {"t_max", "step"},
    "moments": {"log_T", "k_values", "N_values"},
    "bounds": {"log_T", "constant"},
    "saddle": {"log_T", "alphas", "ds"},
    "family": {"d_max", "tol"},
}

_DEFAULTS = {
    "tail": {"kind": "unitary", "N": "50", "trials": "100000", "seed": "1",
             "statistic": "at_point_zero", "lam": "0.3"},
    "maxens": {"kind": "unitary", "N": "100", "M": "22026", "seed": "1",
               "statistic": "max_over_theta"},
    "primes": {"X": "10000", "trials": "100000", "seed": "1"},
    "zeros": {"t_max": "100"},
    "scan": {"t0": "0", "t1": "100", "A": "0.5"},
    "hybrid": {"t0": "100", "t1": "500", "count": "5", "X": "10,20,40",
               "zeros_t_max": "600", "mangoldt_limit": "1000"},
    "stat": {"t_max": "100", "step": "0.5"},
    "moments": {"log_T": "1e6", "k_values": "1,2,3", "N_values": "10,20,50"},
    "bounds": {"log_T": "1e8", "constant": "1"},
    "saddle": {"log_T": "1e8", "alphas": "0.1,0.25,0.4", "ds": "0.3,0.7071067811865476,1.0"},
    "family": {"d_max": "10000", "tol": "1e-8"},
}

_KINDS = {
    "unitary": ensembles.Kind.UNITARY,
    "symplectic": ensembles.Kind.SYMPLECTIC,
    "so_even": ensembles.Kind.SO_EVEN,
}
_STATISTICS = {s.value: s for s in montecarlo.Statistic}


def parse_config_file(path: str) -> dict[str, str]:
    """Flat key=value lines; '#' comments; keys are section-prefixed."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if "." not in key:
                raise ConfigError(
                    f"{path}:{lineno}: key {key!r} lacks a section prefix"
                )
            out[key] = value
    return out


def build_config(subcommand: str, file_items: dict[str, str], overrides: list[str]):
    cfg = dict(_DEFAULTS[subcommand])
    known = _KNOWN_KEYS[subcommand]
    for key, value in file_items.items():
        section, _, name = key.partition(".")
        if section != subcommand:
            continue  # other sections may legitimately share the file
        if name not in known:
            raise ConfigError(f"unknown key {key!r} for subcommand {subcommand}")
        cfg[name] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, _, value = item.partition("=")
        key = key.strip()
        if key.startswith(subcommand + "."):
            key = key[len(subcommand) + 1 :]
        if key not in known:
            raise ConfigError(f"unknown key {key!r} for subcommand {subcommand}")
        cfg[key] = value.strip()
    return cfg


def _as_int(cfg, key) -> int:
    try:
        return int(float(cfg[key]))
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {cfg[key]!r} as integer")


def _as_float(cfg, key) -> float:
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {cfg[key]!r} as number")


def _as_floats(cfg, key) -> list[float]:
    try:
        return [float(v) for v in cfg[key].split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {cfg[key]!r} as number list")


def _as_kind(cfg) -> ensembles.Kind:
    name = cfg["kind"].lower()
    if name not in _KINDS:
        raise ConfigError(f"unknown ensemble kind {cfg['kind']!r}")
    return _KINDS[name]


def _as_statistic(cfg) -> montecarlo.Statistic:
    name = cfg["statistic"].lower()
    if name not in _STATISTICS:
        raise ConfigError(f"unknown statistic {cfg['statistic']!r}")
    return _STATISTICS[name]


def config_hash(subcommand: str, cfg: dict) -> str:
    canon = json.dumps({"subcommand": subcommand, "config": cfg}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(SCHEMA_LINE)
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_svg(path: str, xs: list[float], series: dict[str, list[float]],
              title: str) -> None:
    """Minimal deterministic line plot: fixed canvas, no external renderer."""
    width, height, pad = 640, 400, 50
    finite = [v for vs in series.values() for v in vs if math.isfinite(v)]
    fx = [x for x in xs if math.isfinite(x)]
    if not finite or not fx:
        finite, fx = [0.0, 1.0], [0.0, 1.0]
    x0, x1 = min(fx), max(fx) or 1.0
    y0, y1 = min(finite), max(finite)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width//2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>',
    ]
    for i, (label, ys) in enumerate(sorted(series.items())):
        pts = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(xs, ys)
            if math.isfinite(x) and math.isfinite(y)
        )
        color = colors[i % len(colors)]
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{width-pad}" y="{pad + 16*i}" text-anchor="end" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# Subcommand bodies: each returns the list of artifact file names
# ---------------------------------------------------------------------------


def _run_tail(cfg, out_dir, workers):
    kwargs = dict(
        kind=_as_kind(cfg),
        N=_as_int(cfg, "N"),
        trials=_as_int(cfg, "trials"),
        root_seed=_as_int(cfg, "seed"),
        statistic=_as_statistic(cfg),
    )
    if cfg.get("log_k"):
        kwargs["log_k"] = _as_float(cfg, "log_k")
    else:
        kwargs["lam"] = _as_float(cfg, "lam")
    est = montecarlo.estimate_tail(montecarlo.ExperimentConfig(**kwargs), workers)
    csv_name = "tail.csv"
    write_csv(
        os.path.join(out_dir, csv_name),
        ["threshold_log_k", "trials", "hits", "p_hat", "log_p_hat",
         "std_err_log", "predicted_log_p"],
        [(est.threshold_log_k, est.trials, est.hits, est.p_hat,
          est.log_p_hat, est.std_err_log, est.predicted_log_p)],
    )
    # rate comparison across a threshold ladder at the same N
    taus = [est.threshold_log_k * f for f in (0.6, 0.8, 1.0, 1.2, 1.4)]
    preds = [
        montecarlo.predicted_log_tail(kwargs["kind"], kwargs["statistic"],
                                      kwargs["N"], tau)
        for tau in taus
    ]
    svg_name = "tail_rate.svg"
    observed = [est.log_p_hat if math.isfinite(est.log_p_hat) else min(preds)] * len(taus)
    write_svg(os.path.join(out_dir, svg_name), taus,
              {"predicted": preds, "observed_at_tau": observed},
              "tail rate vs threshold")
    return [csv_name, svg_name]


def _run_maxens(cfg, out_dir, workers):
    kind = _as_kind(cfg)
    n_dim = _as_int(cfg, "N")
    m = _as_int(cfg, "M")
    value = montecarlo.max_over_ensemble(
        kind, n_dim, m, _as_statistic(cfg), _as_int(cfg, "seed"), workers
    )
    log_m = math.log(m)
    expect = math.sqrt(log_m * math.log(n_dim))
    write_csv(
        os.path.join(out_dir, "maxens.csv"),
        ["kind", "N", "M", "max_log", "sqrt_logM_logN", "ratio"],
        [(kind.name.lower(), n_dim, m, value, expect, value / expect)],
    )
    return ["maxens.csv"]


def _run_primes(cfg, out_dir, workers):
    summary = montecarlo.prime_phase_sample(
        _as_int(cfg, "X"), _as_int(cfg, "trials"), _as_int(cfg, "seed"), workers
    )
    path = os.path.join(out_dir, "primes.json")
    with open(path, "w", encoding="ascii") as fh:
        json.dump(
            {
                "trials": summary.trials,
                "mean": summary.mean,
                "variance": summary.variance,
                "excess_kurtosis": summary.excess_kurtosis,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    return ["primes.json"]


def _run_zeros(cfg, out_dir, workers):
    table = zeta.find_zeros(_as_float(cfg, "t_max"))
    path = os.path.join(out_dir, "zeros.txt")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# zeros of Z(t) in (0, {cfg['t_max']}]\n")
        for gamma in table.ordinates:
            fh.write(f"{gamma:.9f}\n")
    return ["zeros.txt"]


def _run_scan(cfg, out_dir, workers):
    record = zeta.scan_max(_as_float(cfg, "t0"), _as_float(cfg, "t1"),
                           _as_float(cfg, "A"))
    write_csv(
        os.path.join(out_dir, "scan.csv"),
        ["t0", "t1", "argmax_t", "max_log", "conjecture_log", "ratio"],
        [(record.t0, record.t1, record.argmax_t, record.max_log_abs_zeta,
          record.conjecture_log, record.ratio)],
    )
    # running max vs the conjecture curve over nested prefixes
    t1 = record.t1
    prefixes = [record.t0 + (t1 - record.t0) * f for f in (0.25, 0.5, 0.75, 1.0)]
    maxima, curve = [], []
    for p in prefixes:
        rec = zeta.scan_max(record.t0, p, _as_float(cfg, "A"))
        maxima.append(rec.max_log_abs_zeta)
        curve.append(rec.conjecture_log)
    write_svg(os.path.join(out_dir, "scan.svg"), prefixes,
              {"running_max": maxima, "conjecture": curve},
              "max log|zeta| vs conjecture")
    return ["scan.csv", "scan.svg"]


def _zero_table_for(t_needed: float, cfg_key: str, cfg) -> zeta.ZeroTable:
    env_path = os.environ.get("ZERO_TABLE_PATH")
    if env_path:
        table = zeta.ingest_zero_table(env_path)
        if table.t_max >= t_needed:
            return table
    return zeta.find_zeros(max(t_needed, _as_float(cfg, cfg_key)))


def _run_hybrid(cfg, out_dir, workers):
    xs = _as_floats(cfg, "X")
    t0, t1 = _as_float(cfg, "t0"), _as_float(cfg, "t1")
    count = _as_int(cfg, "count")
    ts = list(np.linspace(t0, t1, count))
    zeros_needed = t1 + max(zeta._zero_window(x) for x in xs)
    zeros = _zero_table_for(zeros_needed, "zeros_t_max", cfg)
    mangoldt = sieve_von_mangoldt(max(_as_int(cfg, "mangoldt_limit"),
                                      int(max(xs)) + 1))
    rows = []
    for t in ts:
        for x in xs:
            h = zeta.hybrid_residual(float(t), float(x), zeros, mangoldt)
            rows.append((h.t, h.X, abs(h.p_value), abs(h.z_value),
                         abs(h.zeta_value), h.rel_residual))
    write_csv(
        os.path.join(out_dir, "hybrid.csv"),
        ["t", "X", "abs_p", "abs_z", "abs_zeta", "rel_residual"],
        rows,
    )
    return ["hybrid.csv"]


def _run_stat(cfg, out_dir, workers):
    t_max = _as_float(cfg, "t_max")
    step = _as_float(cfg, "step")
    zeros = _zero_table_for(t_max + 1.0, "t_max", cfg)
    rows = []
    t = step
    while t <= t_max:
        try:
            rows.append((t, zeta.s_of_t(t, zeros)))
        except DomainError:
            pass  # skip samples that land on an ordinate
        t += step
    write_csv(os.path.join(out_dir, "stat.csv"), ["t", "s_of_t"], rows)
    return ["stat.csv"]


def _run_moments(cfg, out_dir, workers):
    log_t = _as_float(cfg, "log_T")
    rows_ks = [(k, analysis.ks_log_moment(log_t, k)) for k in _as_floats(cfg, "k_values")]
    write_csv(os.path.join(out_dir, "ks_moments.csv"), ["k", "log_moment"], rows_ks)
    rows_cue = []
    for n_dim in _as_floats(cfg, "N_values"):
        for k, _ in rows_ks:
            rows_cue.append((int(n_dim), k, ensembles.cue_log_moment(int(n_dim), k)))
    write_csv(os.path.join(out_dir, "cue_moments.csv"), ["N", "k", "log_moment"],
              rows_cue)
    rows_mgf = []
    for n_dim in _as_floats(cfg, "N_values"):
        for s in (0.5, 1.0, 2.0):
            rows_mgf.append(
                (int(n_dim), s,
                 ensembles.sp_log_mgf(int(n_dim), s),
                 ensembles.so_log_mgf(int(n_dim), s))
            )
    write_csv(os.path.join(out_dir, "mgf.csv"), ["N", "s", "sp_log_mgf", "so_log_mgf"],
              rows_mgf)
    return ["ks_moments.csv", "cue_moments.csv", "mgf.csv"]


def _run_bounds(cfg, out_dir, workers):
    log_t = _as_float(cfg, "log_T")
    constant = _as_float(cfg, "constant")
    opt = analysis.optimize_upper_bound(log_t, constant)
    tau = analysis.tau_optimal(log_t)
    limit = analysis.ks_validity_limit(log_t)
    scale = math.sqrt(log_t / math.log(log_t))
    payload = {
        "log_T": log_t,
        "c_star": opt["c_star"],
        "upper_bound": opt["bound"],
        "conjecture_log": analysis.conjecture_curve(log_t),
        "tau_k_star": tau["k_star"],
        "tau_log": tau["tau_log"],
        "ks_validity_limit": limit,
        "contradiction_above": analysis.validity_contradiction(
            log_t, 2.0 * analysis.SQRT2 + 0.1, constant
        ),
        "contradiction_below": analysis.validity_contradiction(
            log_t, 2.0 * analysis.SQRT2 - 0.5, constant
        ),
        "validity_limit_over_scale": limit / scale,
    }
    path = os.path.join(out_dir, "bounds.json")
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ["bounds.json"]


def _run_saddle(cfg, out_dir, workers):
    log_t = _as_float(cfg, "log_T")
    rows = []
    for alpha in _as_floats(cfg, "alphas"):
        for d in _as_floats(cfg, "ds"):
            sol = analysis.saddle_point_x0(log_t, alpha, d)
            rows.append((alpha, d, sol["x0"], sol["f_value"],
                         sol["f_value"] / (2.0 * d * d * log_t)))
    write_csv(os.path.join(out_dir, "saddle.csv"),
              ["alpha", "d", "x0", "f_value", "f_over_2d2logT"], rows)
    return ["saddle.csv"]


def _run_family(cfg, out_dir, workers):
    record = families.family_scan(_as_int(cfg, "d_max"), _as_float(cfg, "tol"))
    write_csv(
        os.path.join(out_dir, "family.csv"),
        ["d_max", "count", "argmax_d", "max_log_l", "normalization", "ratio"],
        [(record.d_max, record.count, record.argmax_d, record.max_log_l,
          record.normalization, record.ratio)],
    )
    return ["family.csv"]


_RUNNERS = {
    "tail": _run_tail,
    "maxens": _run_maxens,
    "primes": _run_primes,
    "zeros": _run_zeros,
    "scan": _run_scan,
    "hybrid": _run_hybrid,
    "stat": _run_stat,
    "moments": _run_moments,
    "bounds": _run_bounds,
    "saddle": _run_saddle,
    "family": _run_family,
}


def run(subcommand: str, cfg: dict, out_root: str, workers: int) -> str:
    """Execute one subcommand; returns the artifact directory."""
    digest = config_hash(subcommand, cfg)
    out_dir = os.path.join(out_root, f"{subcommand}_{digest[:12]}")
    os.makedirs(out_dir, exist_ok=True)
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()
    outputs = _RUNNERS[subcommand](cfg, out_dir, workers)
    manifest = {
        "subcommand": subcommand,
        "config": cfg,
        "root_seed": cfg.get("seed"),
        "version": __version__,
        "started": started,
        "finished": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "outputs": sorted(outputs),
        "config_hash": digest,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out_dir


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lfmax", description="extreme-value experiments for zeta and L-families"
    )
    parser.add_argument("subcommand", choices=sorted(_RUNNERS))
    parser.add_argument("overrides", nargs="*", metavar="KEY=VALUE",
                        help="config overrides (win over the file)")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--out", default=None, help="results root directory")
    parser.add_argument("--workers", type=int,
                        default=max(1, os.cpu_count() or 1))
    args = parser.parse_args(argv)

    try:
        file_items = parse_config_file(args.config) if args.config else {}
        cfg = build_config(args.subcommand, file_items, args.overrides)
        out_root = args.out or os.environ.get("RESULTS_DIR") or "results"
        out_dir = run(args.subcommand, cfg, out_root, args.workers)
    except ConfigError as exc:
        print(f"lfmax {args.subcommand}: config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NumericalError, ResourceError) as exc:
        print(f"lfmax {args.subcommand}: {exc}", file=sys.stderr)
        return 3
    except (IntegrityError, FormatError) as exc:
        line = getattr(exc, "line", None)
        where = f" (line {line})" if line else ""
        print(f"lfmax {args.subcommand}: integrity error{where}: {exc}",
              file=sys.stderr)
        return 4
    except FileNotFoundError as exc:
        print(f"lfmax {args.subcommand}: config error: {exc}", file=sys.stderr)
        return 2
    except LfmaxError as exc:
        print(f"lfmax {args.subcommand}: {exc}", file=sys.stderr)
        return 3
    print(out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
