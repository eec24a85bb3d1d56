"""Command-line front end: single-point evaluation, parameter sweeps and
analytic-versus-Monte-Carlo validation, all driven by a JSON config.

Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
failure.
"""
import argparse
import json
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import channels
from .montecarlo import McConfig, mc_asc, mc_gain_sum_stats, mc_sop
from .secrecy import (
    Link,
    Model,
    SopMode,
    SystemParams,
    asc_approx,
    asc_exact,
    avg_capacity,
    sop,
)
from .specfun import QuadratureError

SWEEPABLE = ("p_s", "n_0", "beta", "n_cells", "r_d", "r_e", "r_s", "c_th")
OUTPUT_NAMES = ("asc_exact", "asc_approx", "sop_corrected", "sop_paper_literal", "mc_asc", "mc_sop")
MC_OUTPUTS = frozenset({"mc_asc", "mc_sop"})
DEFAULT_OUTPUTS = ("asc_exact", "asc_approx", "sop_corrected")

_BASE_DEFAULTS = {"p_s": 10.0, "n_0": 1.0, "beta": 2.7, "n_cells": 16, "r_d": 4.0, "r_e": 8.0}
DEFAULT_RELAY_R_S = 10.0
DEFAULT_C_TH = 1.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """A 1-D sweep over one parameter, inclusive of both endpoints."""

    param: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.param not in SWEEPABLE:
            raise ConfigError(f"sweep.param must be one of {SWEEPABLE}, got {self.param!r}")
        if not self.start < self.stop:
            raise ConfigError("sweep requires start < stop")
        if self.steps < 2:
            raise ConfigError("sweep.steps must be >= 2")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"sweep.scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not self.start > 0.0:
            raise ConfigError("log-scale sweeps require start > 0")

    def values(self):
        if self.scale == "log":
            vals = np.geomspace(self.start, self.stop, self.steps)
        else:
            vals = np.linspace(self.start, self.stop, self.steps)
        if self.param == "n_cells":
            return [max(1, int(round(v))) for v in vals]
        return [float(v) for v in vals]


@dataclass(frozen=True)
class RunConfig:
    base: SystemParams
    sweep: SweepSpec | None
    c_th: float
    mc: McConfig | None
    outputs: tuple

    def __post_init__(self):
        if not self.outputs:
            raise ConfigError("at least one output must be requested")
        for out in self.outputs:
            if out not in OUTPUT_NAMES:
                raise ConfigError(f"unknown output {out!r}; valid outputs: {OUTPUT_NAMES}")
        if MC_OUTPUTS.intersection(self.outputs) and self.mc is None:
            raise ConfigError("Monte-Carlo outputs require an 'mc' config block")
        if not self.c_th > 0.0:
            raise ConfigError("c_th must be > 0")
        if self.sweep is not None and self.sweep.param == "r_s" and self.base.model is Model.V2V_RIS_AP:
            raise ConfigError("r_s can only be swept for the relay model")


def _require_keys(section: str, doc: dict, allowed):
    unknown = set(doc) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {sorted(unknown)}")


def _parse_base(doc: dict) -> SystemParams:
    _require_keys("base", doc, ("model",) + tuple(_BASE_DEFAULTS) + ("r_s",))
    if "model" not in doc:
        raise ConfigError("base.model is required ('v2v_ris_ap' or 'vanet_ris_relay')")
    try:
        model = Model(doc["model"])
    except ValueError:
        raise ConfigError(f"unknown model {doc['model']!r}") from None
    fields = dict(_BASE_DEFAULTS)
    for key in _BASE_DEFAULTS:
        if key in doc:
            fields[key] = doc[key]
    fields["n_cells"] = int(fields["n_cells"])
    if model is Model.VANET_RIS_RELAY:
        fields["r_s"] = float(doc.get("r_s", DEFAULT_RELAY_R_S))
    elif "r_s" in doc:
        raise ConfigError("r_s applies only to the relay model")
    try:
        return SystemParams(model=model, **fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def build_run_config(doc: dict, *, seed: int | None = None, trials: int | None = None) -> RunConfig:
    """Resolve a JSON config document (plus CLI overrides) into a RunConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _require_keys("config", doc, ("base", "sweep", "c_th", "mc", "outputs"))
    if "base" not in doc:
        raise ConfigError("config requires a 'base' section")
    base = _parse_base(doc["base"])
    sweep = None
    if doc.get("sweep") is not None:
        sw = doc["sweep"]
        _require_keys("sweep", sw, ("param", "start", "stop", "steps", "scale"))
        try:
            sweep = SweepSpec(
                param=sw.get("param", ""),
                start=float(sw.get("start", 0.0)),
                stop=float(sw.get("stop", 0.0)),
                steps=int(sw.get("steps", 0)),
                scale=sw.get("scale", "linear"),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid sweep section: {exc}") from None
    mc = None
    if doc.get("mc") is not None:
        m = doc["mc"]
        _require_keys("mc", m, ("trials", "seed", "batch"))
        try:
            mc = McConfig(
                trials=int(m.get("trials", McConfig.trials)),
                seed=int(m.get("seed", McConfig.seed)),
                batch=int(m.get("batch", McConfig.batch)),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if seed is not None or trials is not None:
        try:
            if mc is None:
                mc = McConfig()
            if seed is not None:
                mc = replace(mc, seed=seed)
            if trials is not None:
                mc = replace(mc, trials=trials)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    outputs = tuple(doc.get("outputs", DEFAULT_OUTPUTS))
    try:
        return RunConfig(base=base, sweep=sweep, c_th=float(doc.get("c_th", DEFAULT_C_TH)),
                         mc=mc, outputs=outputs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical JSON form of a RunConfig; re-parsing it yields an equal config."""
    base = {
        "model": cfg.base.model.value,
        "p_s": cfg.base.p_s,
        "n_0": cfg.base.n_0,
        "beta": cfg.base.beta,
        "n_cells": cfg.base.n_cells,
        "r_d": cfg.base.r_d,
        "r_e": cfg.base.r_e,
    }
    if cfg.base.model is Model.VANET_RIS_RELAY:
        base["r_s"] = cfg.base.r_s
    doc = {"base": base}
    if cfg.sweep is not None:
        doc["sweep"] = {
            "param": cfg.sweep.param,
            "start": cfg.sweep.start,
            "stop": cfg.sweep.stop,
            "steps": cfg.sweep.steps,
            "scale": cfg.sweep.scale,
        }
    doc["c_th"] = cfg.c_th
    if cfg.mc is not None:
        doc["mc"] = {"trials": cfg.mc.trials, "seed": cfg.mc.seed, "batch": cfg.mc.batch}
    doc["outputs"] = list(cfg.outputs)
    return doc


def _point(cfg: RunConfig, value=None):
    """(SystemParams, c_th) at one sweep value (or the base point)."""
    if cfg.sweep is None or value is None:
        return cfg.base, cfg.c_th
    if cfg.sweep.param == "c_th":
        return cfg.base, float(value)
    return replace(cfg.base, **{cfg.sweep.param: value}), cfg.c_th


def _columns(outputs):
    cols = []
    se_cols = []
    for out in OUTPUT_NAMES:
        if out not in outputs:
            continue
        if out == "mc_asc":
            cols += ["mc_asc_diff", "mc_asc_pos"]
            se_cols += ["mc_asc_diff_se", "mc_asc_pos_se"]
        elif out == "mc_sop":
            cols.append("mc_sop")
            se_cols.append("mc_sop_se")
        else:
            cols.append(out)
    return cols + se_cols


def evaluate_point(params: SystemParams, c_th: float, cfg: RunConfig) -> dict:
    """Every requested metric at one parameter point, keyed by column name."""
    row = {}
    if "asc_exact" in cfg.outputs:
        c_d = avg_capacity(params, Link.DESTINATION)
        c_e = avg_capacity(params, Link.EAVESDROPPER)
        row["c_d"] = c_d
        row["c_e"] = c_e
        row["asc_exact"] = c_d - c_e
    if "asc_approx" in cfg.outputs:
        row["asc_approx"] = asc_approx(params)
    if "sop_corrected" in cfg.outputs:
        row["sop_corrected"] = sop(params, c_th, SopMode.CORRECTED)
    if "sop_paper_literal" in cfg.outputs:
        row["sop_paper_literal"] = sop(params, c_th, SopMode.PAPER_LITERAL)
    if "mc_asc" in cfg.outputs:
        diff, pos = mc_asc(params, cfg.mc)
        row["mc_asc_diff"] = diff.value
        row["mc_asc_pos"] = pos.value
        row["mc_asc_diff_se"] = diff.std_error
        row["mc_asc_pos_se"] = pos.std_error
    if "mc_sop" in cfg.outputs:
        est = mc_sop(params, c_th, cfg.mc)
        row["mc_sop"] = est.value
        row["mc_sop_se"] = est.std_error
    return row


def _fmt(v) -> str:
    # repr round-trips doubles exactly, which keeps CSV output lossless
    return repr(int(v)) if isinstance(v, (int, np.integer)) else repr(float(v))


def run_point(cfg: RunConfig, out, as_csv: bool = False) -> None:
    row = evaluate_point(cfg.base, cfg.c_th, cfg)
    cols = _columns(cfg.outputs)
    if as_csv:
        out.write(",".join(cols) + "\n")
        out.write(",".join(_fmt(row[c]) for c in cols) + "\n")
        return
    items = [("model", cfg.base.model.value), ("p_s", cfg.base.p_s), ("n_0", cfg.base.n_0),
             ("beta", cfg.base.beta), ("n_cells", cfg.base.n_cells), ("r_d", cfg.base.r_d),
             ("r_e", cfg.base.r_e)]
    if cfg.base.model is Model.VANET_RIS_RELAY:
        items.append(("r_s", cfg.base.r_s))
    items.append(("c_th", cfg.c_th))
    if "c_d" in row:
        items += [("c_d", row["c_d"]), ("c_e", row["c_e"])]
    items += [(c, row[c]) for c in cols]
    width = max(len(k) for k, _ in items)
    for k, v in items:
        sval = v if isinstance(v, str) else f"{v:.12g}"
        out.write(f"{k:<{width}}  {sval}\n")


def run_sweep(cfg: RunConfig, out) -> None:
    cols = _columns(cfg.outputs)
    out.write(",".join([cfg.sweep.param] + cols) + "\n")
    for index, value in enumerate(cfg.sweep.values()):
        params, c_th = _point(cfg, value)
        try:
            row = evaluate_point(params, c_th, cfg)
        except QuadratureError as exc:
            raise QuadratureError(
                f"sweep row {index} ({cfg.sweep.param}={value!r}) failed: {exc}",
                exc.best_estimate, exc.error_bound) from exc
        out.write(",".join([_fmt(value)] + [_fmt(row[c]) for c in cols]) + "\n")


def run_validate(cfg: RunConfig, out, mode: SopMode, sop_tol: float = 0.02) -> int:
    """Compare analytic metrics against Monte-Carlo at every point.

    Returns 0 when every check concludes and passes, 1 otherwise.
    """
    if cfg.mc is None:
        raise ConfigError("validate requires an 'mc' config block")
    values = cfg.sweep.values() if cfg.sweep is not None else [None]
    all_ok = True
    for value in values:
        params, c_th = _point(cfg, value)
        label = "base point" if value is None else f"{cfg.sweep.param}={value:g}"
        analytic = asc_exact(params)
        diff, _pos = mc_asc(params, cfg.mc)
        gap = abs(analytic - diff.value)
        bound = 3.0 * diff.std_error
        if bound > 0.1 * max(abs(analytic), 1e-6):
            status = "INCONCLUSIVE (std error too large to conclude)"
            all_ok = False
        elif gap <= bound:
            status = "PASS"
        else:
            status = "FAIL"
            all_ok = False
        out.write(f"{label}: asc_exact={analytic:.6g} mc={diff.value:.6g}"
                  f" +-{diff.std_error:.2g} |gap|={gap:.3g} tol(3se)={bound:.3g} {status}\n")
        analytic_sop = sop(params, c_th, mode)
        mc_est = mc_sop(params, c_th, cfg.mc)
        gap = abs(analytic_sop - mc_est.value)
        if mc_est.std_error > 0.5 * sop_tol:
            status = "INCONCLUSIVE (std error too large to conclude)"
            all_ok = False
        elif gap <= sop_tol:
            status = "PASS"
        else:
            status = "FAIL"
            all_ok = False
        out.write(f"{label}: sop[{mode.value}]={analytic_sop:.6g} mc={mc_est.value:.6g}"
                  f" +-{mc_est.std_error:.2g} |gap|={gap:.3g} tol={sop_tol:g} {status}\n")
    if cfg.base.model is Model.VANET_RIS_RELAY:
        all_ok = _adjudicate_gain_variance(cfg, out) and all_ok
    out.write("VALIDATION: %s\n" % ("PASS" if all_ok else "FAIL"))
    return 0 if all_ok else 1


def _adjudicate_gain_variance(cfg: RunConfig, out) -> bool:
    """Print the measured variance of the summed relay gains next to both
    closed-form candidates (the report always shows the two constants)."""
    n = cfg.base.n_cells
    corrected = n * channels.moments(channels.FadingKind.TRIPLE_CASCADE).variance
    literal = n * channels.PAPER_LITERAL_TRIPLE_VARIANCE
    _mean_est, var_est = mc_gain_sum_stats(cfg.base, cfg.mc)
    se = max(var_est.std_error, 1e-300)
    z_corr = abs(var_est.value - corrected) / se
    z_lit = abs(var_est.value - literal) / se
    ok = z_corr <= 4.0
    out.write(
        f"gain-sum variance (N={n}): mc={var_est.value:.6g} +-{var_est.std_error:.2g}"
        f" corrected={corrected:.6g} ({z_corr:.1f} se) paper_literal={literal:.6g}"
        f" ({z_lit:.1f} se) {'PASS' if ok else 'FAIL'}\n"
    )
    return ok


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-secrecy",
        description="Average secrecy capacity and secrecy outage probability for "
                    "RIS-enabled vehicular links: closed-form analytics, quadrature "
                    "and Monte-Carlo simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("eval", "evaluate all requested metrics at the base parameter point"),
        ("sweep", "sweep one parameter and emit a CSV table"),
        ("validate", "cross-check analytic metrics against Monte-Carlo"),
    ):
        p = sub.add_parser(name, help=descr)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override mc.seed")
        p.add_argument("--trials", type=int, default=None, help="override mc.trials")
        p.add_argument("--mode", choices=("corrected", "paper-literal"), default="corrected",
                       help="relay-model SOP constants used by validate")
        p.add_argument("--dump-config", default=None, metavar="PATH",
                       help="write the fully resolved config as JSON and exit")
        if name == "eval":
            p.add_argument("--csv", action="store_true", help="emit one CSV row instead of a table")
        if name == "validate":
            p.add_argument("--sop-tol", type=float, default=0.02,
                           help="absolute SOP tolerance (default 0.02)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {args.config}: {exc}") from None
        cfg = build_run_config(doc, seed=args.seed, trials=args.trials)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.dump_config is not None:
        with open(args.dump_config, "w", encoding="utf-8") as fh:
            json.dump(config_to_dict(cfg), fh, indent=2)
            fh.write("\n")
        return 0
    mode = SopMode.CORRECTED if args.mode == "corrected" else SopMode.PAPER_LITERAL

    def run(out) -> int:
        if args.command == "eval":
            run_point(cfg, out, as_csv=args.csv)
            return 0
        if args.command == "sweep":
            if cfg.sweep is None:
                raise ConfigError("the sweep command requires a 'sweep' section in the config")
            run_sweep(cfg, out)
            return 0
        return run_validate(cfg, out, mode, sop_tol=args.sop_tol)

    try:
        if args.out is None:
            return run(sys.stdout)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            return run(fh)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
