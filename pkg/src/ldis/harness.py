"""Scenario configs, presets and the work behind each CLI subcommand.

A scenario is one INI-style text file.  Sections:

    [scenario]   mode, xis, seeds, srv_eps
    [base]       nominal law (kind = gaussian | exponential | discrete | mixture)
    [importance] proposal: a model, "tilt" with theta, or "path_mixture"
    [event]      set = [0.8, inf]; [-inf, -1.2]
    [schedule]   n_values, grid (r | c), values, reference_rate (number | auto),
                 prefactor, cap, over_budget (skip | error)
    [grid]       values = ... | linspace = a, b, k | geomspace = a, b, k
    [outputs]    csv, json, svg

Mixture components live in sub-sections named "<section>.<k>".  Shorthands
(tilt, auto, linspace) are resolved on parsing, and ``echo`` writes the
resolved form, so echo -> parse is an exact round trip.
"""
from __future__ import annotations

import configparser
import io
import json
import math
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import limits, oracle
from .distributions import DistributionModel, Exponential, FiniteDiscrete, Gaussian, Mixture, from_config
from .errors import ConfigError, DomainError, LdisError, OracleUnavailable
from .events import EventSet
from .limits import PathMixture, Proposal
from .mc_engine import CSV_COLUMNS, DEFAULT_CAP, DEFAULT_SRV_EPS, ExperimentReport, SampleSchedule, sweep
from .rate_functions import legendre
from .tables import csv_text, svg_plot

MODES = ("simulate", "limit", "lra", "rate", "oracle")


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str
    base: DistributionModel
    importance: Proposal | None = None
    event: EventSet | None = None
    schedule: SampleSchedule | None = None
    over_budget: str = "error"
    xis: tuple[float, ...] = (1.0, 2.0)
    seeds: tuple[int, ...] = (0,)
    srv_eps: float = DEFAULT_SRV_EPS
    grid: tuple[float, ...] | None = None
    outputs: tuple[tuple[str, str], ...] = ()

    def output(self, key: str) -> str | None:
        return dict(self.outputs).get(key)


# parsing


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.replace(";", ",").split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a list of numbers, got {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a list of integers, got {text!r}") from exc


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc


def _read_model(cp: configparser.ConfigParser, name: str, base: DistributionModel | None = None):
    if not cp.has_section(name):
        raise ConfigError(f"missing section [{name}]")
    sec = cp[name]
    kind = sec.get("kind", "").strip()
    if kind == "tilt":
        if base is None:
            raise ConfigError("a tilt shorthand needs a [base] model")
        return base.tilt(_num(sec.get("theta", "0")))
    if kind in ("mixture", "path_mixture"):
        weights = _floats(sec.get("weights", ""))
        names = [t.strip() for t in sec.get("components", "").split(",") if t.strip()]
        if len(names) != len(weights):
            raise ConfigError(f"[{name}] needs one component section per weight")
        comps = tuple(_read_model(cp, c, base) for c in names)
        return PathMixture(weights, comps) if kind == "path_mixture" else Mixture(weights, comps)
    if kind == "gaussian":
        return Gaussian(_num(sec["mean"]), _num(sec["variance"]))
    if kind == "exponential":
        return Exponential(_num(sec["rate"]))
    if kind == "discrete":
        return FiniteDiscrete(_floats(sec["points"]), _floats(sec["probs"]))
    raise ConfigError(f"[{name}] has unknown kind {kind!r}")


def _read_grid(sec) -> tuple[float, ...]:
    if "values" in sec:
        return _floats(sec["values"])
    for key, fn in (("linspace", np.linspace), ("geomspace", np.geomspace)):
        if key in sec:
            a, b, k = _floats(sec[key])
            return tuple(float(v) for v in fn(a, b, int(k)))
    raise ConfigError("[grid] needs values, linspace or geomspace")


def auto_reference_rate(p: DistributionModel, q: Proposal, A: EventSet) -> float:
    """Hit exponent of q at the dominating point: I(x*) - theta x* + Lambda(theta) for a tilt."""
    return limits.required_rate(p, q, A)


def parse_config(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from exc
    try:
        return _build(cp)
    except ConfigError:
        raise
    except (LdisError, KeyError, ValueError) as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc


def _build(cp: configparser.ConfigParser) -> ScenarioConfig:
    if not cp.has_section("scenario"):
        raise ConfigError("missing section [scenario]")
    sc = cp["scenario"]
    mode = sc.get("mode", "").strip()
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}")
    base = _read_model(cp, "base")
    importance = _read_model(cp, "importance", base) if cp.has_section("importance") else None
    event = EventSet.from_text(cp["event"]["set"]) if cp.has_section("event") else None
    schedule, over_budget = None, "error"
    if cp.has_section("schedule"):
        s = cp["schedule"]
        kind = s.get("grid", "r").strip()
        ref = s.get("reference_rate", "").strip()
        ref_val = None
        if kind == "c":
            if ref in ("", "auto"):
                if importance is None or event is None:
                    raise ConfigError("reference_rate = auto needs [importance] and [event]")
                ref_val = auto_reference_rate(base, importance, event)
            else:
                ref_val = _num(ref)
        schedule = SampleSchedule(
            n_values=_ints(s["n_values"]),
            rates=_floats(s["values"]),
            kind=kind,
            reference_rate=ref_val,
            prefactor=int(s.get("prefactor", "100")),
            cap=int(float(s.get("cap", str(DEFAULT_CAP)))),
        )
        over_budget = s.get("over_budget", "error").strip()
        if over_budget not in ("skip", "error"):
            raise ConfigError("over_budget must be skip or error")
    grid = _read_grid(cp["grid"]) if cp.has_section("grid") else None
    outputs = tuple(sorted((k, v) for k, v in cp["outputs"].items())) if cp.has_section("outputs") else ()
    cfg = ScenarioConfig(
        mode=mode,
        base=base,
        importance=importance,
        event=event,
        schedule=schedule,
        over_budget=over_budget,
        xis=_floats(sc.get("xis", "1, 2")),
        seeds=_ints(sc.get("seeds", "0")),
        srv_eps=_num(sc.get("srv_eps", str(DEFAULT_SRV_EPS))),
        grid=grid,
        outputs=outputs,
    )
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    """Fail fast on anything a mode needs but the config lacks."""
    need = {
        "simulate": ("importance", "event", "schedule"),
        "limit": ("importance", "event", "grid"),
        "lra": ("importance", "event", "grid"),
        "rate": ("grid",),
        "oracle": ("event", "schedule"),
    }[cfg.mode]
    for attr in need:
        if getattr(cfg, attr) is None:
            raise ConfigError(f"mode {cfg.mode} needs [{attr}]")
    if not cfg.seeds:
        raise ConfigError("at least one seed is required")
    if any(not x > 0 for x in cfg.xis):
        raise ConfigError("moment orders must be positive")
    if not cfg.srv_eps > 0:
        raise ConfigError("srv_eps must be positive")
    if cfg.seeds and any(s < 0 or s >= 2**64 for s in cfg.seeds):
        raise ConfigError("seeds are unsigned 64-bit integers")


# echo


def _fnum(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))


def _write_model(cp: configparser.ConfigParser, name: str, model) -> None:
    cp.add_section(name)
    sec = cp[name]
    if isinstance(model, (Mixture, PathMixture)):
        sec["kind"] = "path_mixture" if isinstance(model, PathMixture) else "mixture"
        sec["weights"] = ", ".join(_fnum(w) for w in model.weights)
        names = [f"{name}.{k + 1}" for k in range(len(model.components))]
        sec["components"] = ", ".join(names)
        for sub, comp in zip(names, model.components):
            _write_model(cp, sub, comp)
        return
    for k, v in model.to_config().items():
        sec[k] = ", ".join(_fnum(x) for x in v) if isinstance(v, list) else (v if isinstance(v, str) else _fnum(v))


def echo_config(cfg: ScenarioConfig) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp["scenario"] = {
        "mode": cfg.mode,
        "xis": ", ".join(_fnum(x) for x in cfg.xis),
        "seeds": ", ".join(str(s) for s in cfg.seeds),
        "srv_eps": _fnum(cfg.srv_eps),
    }
    _write_model(cp, "base", cfg.base)
    if cfg.importance is not None:
        _write_model(cp, "importance", cfg.importance)
    if cfg.event is not None:
        cp["event"] = {"set": cfg.event.to_text()}
    if cfg.schedule is not None:
        s = cfg.schedule
        sec = {
            "n_values": ", ".join(str(n) for n in s.n_values),
            "grid": s.kind,
            "values": ", ".join(_fnum(v) for v in s.rates),
            "prefactor": str(s.prefactor),
            "cap": str(s.cap),
            "over_budget": cfg.over_budget,
        }
        if s.reference_rate is not None:
            sec["reference_rate"] = _fnum(s.reference_rate)
        cp["schedule"] = sec
    if cfg.grid is not None:
        cp["grid"] = {"values": ", ".join(_fnum(v) for v in cfg.grid)}
    if cfg.outputs:
        cp["outputs"] = dict(cfg.outputs)
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def load_config(path: str | os.PathLike) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text)


# oracles


def alpha_provider(p: DistributionModel, A: EventSet) -> Callable[[int], float] | None:
    """n -> exact log P(S_n/n in A) when an oracle exists for (p, A)."""
    if isinstance(p, Gaussian):
        return lambda n: oracle.exact_alpha_gaussian(n, A, p.mu, p.sigma2).log_value
    if isinstance(p, Exponential):
        return lambda n: oracle.exact_alpha_exponential(n, A, p.rate).log_value
    if isinstance(p, FiniteDiscrete):
        return lambda n: oracle.enumerate_exact(p, p, n, A).log_value
    return None


# mode runners; each returns (csv header, rows, svg text or None, extra json)


@dataclass
class ModeResult:
    header: tuple[str, ...]
    rows: list
    svg: str | None = None
    reports: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def csv(self) -> str:
        return csv_text(self.header, self.rows)

    def json(self, echo: str) -> str:
        doc = {"config": echo, "reports": [r.canonical() for r in self.reports]}
        doc.update(self.extra)
        return json.dumps(_jsonable(doc), sort_keys=True, indent=1, allow_nan=False) + "\n"


def _jsonable(v):
    from .mc_engine import _jsonable as conv

    return conv(v)


def run_simulate(cfg: ScenarioConfig, threads: int | None = None, echo: str | None = None) -> ModeResult:
    echo = echo if echo is not None else echo_config(cfg)
    provider = None
    try:
        provider = alpha_provider(cfg.base, cfg.event)
        if provider is not None:
            provider(cfg.schedule.n_values[-1])
    except (OracleUnavailable, LdisError):
        provider = None
    reports = []
    for seed in cfg.seeds:
        reports.append(
            sweep(
                cfg.schedule, cfg.base, cfg.importance, cfg.event, cfg.xis, seed,
                threads=threads, srv_eps=cfg.srv_eps, alpha_provider=provider,
                over_budget=cfg.over_budget, config={"echo": echo},
            )
        )
    rows = [row for r in reports for row in r.csv_rows()]
    series = {}
    first = reports[0]
    for n in cfg.schedule.n_values:
        recs = [rec for rec in first.records if rec["n"] == n]
        series[f"n={n}"] = ([rec["value"] for rec in recs], [rec.get("y", math.nan) for rec in recs])
    svg = svg_plot(series, title=f"Y_n over the {cfg.schedule.kind} grid (seed {first.seed})", xlabel=cfg.schedule.kind, ylabel="Y_n")
    return ModeResult(CSV_COLUMNS, rows, svg, reports)


def run_limit(cfg: ScenarioConfig) -> ModeResult:
    rows, series = [], {}
    for xi in cfg.xis:
        ys = []
        for r in cfg.grid:
            y = limits.y_limit(cfg.base, cfg.importance, r, cfg.event, xi)
            rows.append((r, xi, y, -y, "zero-hit" if y == limits.ZERO_HIT else "finite"))
            ys.append(y)
        series[f"xi={xi:g}"] = (list(cfg.grid), ys)
    svg = svg_plot(series, title="limiting moment exponent", xlabel="r", ylabel="y(r)")
    return ModeResult(("r", "xi", "y", "exponent", "label"), rows, svg)


def run_lra(cfg: ScenarioConfig) -> ModeResult:
    curve = limits.lra_curve(cfg.base, cfg.importance, cfg.event, cfg.grid)
    rows = [(float(r), float(v), lab) for r, v, lab in zip(curve.r_grid, curve.values, curve.labels)]
    svg = svg_plot({"LRA": (list(curve.r_grid), list(curve.values))}, title="logarithmic relative accuracy", xlabel="r", ylabel="LRA(r)")
    return ModeResult(("r", "lra", "label"), rows, svg, extra={"breakpoints": list(curve.breakpoints), "base_rate": curve.base_rate})


def run_rate(cfg: ScenarioConfig) -> ModeResult:
    rows = []
    for x in cfg.grid:
        ev = legendre(cfg.base, x)
        rows.append((x, ev.value, ev.tilt_param if math.isfinite(ev.tilt_param) else None, "finite" if math.isfinite(ev.value) else "inf"))
    svg = svg_plot({"I(x)": (list(cfg.grid), [r[1] for r in rows])}, title="rate function", xlabel="x", ylabel="I(x)")
    return ModeResult(("x", "rate", "tilt", "label"), rows, svg)


def run_oracle(cfg: ScenarioConfig) -> ModeResult:
    provider = alpha_provider(cfg.base, cfg.event)
    if provider is None:
        raise OracleUnavailable("no exact probability for this base law")
    rows = []
    for n in cfg.schedule.n_values:
        la = provider(n)
        rows.append((n, math.exp(la), la, -la / n))
    svg = svg_plot({"-(1/n) log alpha": ([r[0] for r in rows], [r[3] for r in rows])}, title="exact decay", xlabel="n", ylabel="-(1/n) log alpha_n")
    return ModeResult(("n", "alpha", "log_alpha", "y"), rows, svg)


def run_mode(cfg: ScenarioConfig, threads: int | None = None) -> ModeResult:
    if cfg.mode == "simulate":
        return run_simulate(cfg, threads)
    return {"limit": run_limit, "lra": run_lra, "rate": run_rate, "oracle": run_oracle}[cfg.mode](cfg)


def write_outputs(result: ModeResult, echo: str, csv_path=None, json_path=None, svg_path=None, timing: dict | None = None) -> list[str]:
    """Write the requested files one after another; returns the paths written."""
    written = []
    for path, text in ((csv_path, result.csv()), (json_path, result.json(echo)), (svg_path, result.svg)):
        if path and text is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
            written.append(str(path))
    if json_path and timing is not None:
        tpath = str(json_path) + ".timing.json"
        with open(tpath, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(json.dumps(timing, sort_keys=True, indent=1) + "\n")
        written.append(tpath)
    return written


# presets

EXP1_THETAS = (0.0, 0.4, 2.0)
EXP1_C_GRID = tuple(round(0.6 + 0.1 * k, 10) for k in range(11))
EXP1_CAP = 5 * 10**8
EXP2_N = (100, 200, 300, 400)
EXP2_CAP = 2 * 10**8
EXP2_RATE = 0.036
TWO_SIDED_R_GRID = tuple(float(v) for v in np.linspace(0.01, 4.0, 400))
TWO_SIDED_MC_N = (20,)
TWO_SIDED_MC_R = (0.2, 0.5, 0.8)
PRESETS = ("exp1", "exp2", "two_sided_lra")


def preset_scenarios(name: str, seeds: Sequence[int] = (1,), quick: bool = False) -> list[tuple[str, ScenarioConfig]]:
    """Named scenario configs making up a preset.

    ``quick`` shrinks the replication cap (cells above it are recorded as
    over-budget) for smoke and determinism runs.
    """
    seeds = tuple(int(s) for s in seeds)
    if name == "exp1":
        p = Gaussian(0.0, 1.0)
        A = EventSet.above(0.8)
        out = []
        for th in EXP1_THETAS:
            q = p.tilt(th)
            sched = SampleSchedule(
                (10, 20, 30), EXP1_C_GRID, kind="c", reference_rate=auto_reference_rate(p, q, A),
                prefactor=100, cap=10**6 if quick else EXP1_CAP,
            )
            out.append((f"theta={th:g}", ScenarioConfig("simulate", p, q, A, sched, "skip", (1.0, 2.0), seeds)))
        return out
    if name == "exp2":
        p = Exponential(1.0)
        A = EventSet.above(1.3)
        sched = SampleSchedule(EXP2_N, (EXP2_RATE,), kind="r", prefactor=100, cap=10**6 if quick else EXP2_CAP)
        return [
            ("q1", ScenarioConfig("simulate", p, Exponential(1.0 / 1.3), A, sched, "skip", (1.0, 2.0), seeds)),
            ("q2", ScenarioConfig("simulate", p, Gaussian(1.3, 1.0), A, sched, "skip", (1.0, 2.0), seeds)),
        ]
    if name == "two_sided_lra":
        p = Gaussian(0.0, 1.0)
        A = EventSet.two_sided(1.0, 1.2)
        q = p.tilt(1.0)
        sched = SampleSchedule(TWO_SIDED_MC_N, TWO_SIDED_MC_R, kind="r", prefactor=1, cap=10**6 if quick else 10**8)
        return [
            ("curve", ScenarioConfig("lra", p, q, A, grid=TWO_SIDED_R_GRID, seeds=seeds)),
            ("mc", ScenarioConfig("simulate", p, q, A, sched, "skip", (1.0, 2.0), seeds)),
        ]
    raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


@dataclass
class PresetRun:
    name: str
    scenarios: list
    results: list
    wall_time: dict

    def csv(self) -> str:
        blocks = []
        for (label, cfg), res in zip(self.scenarios, self.results):
            if cfg.mode == "simulate":
                blocks.append((label, res))
        header = ("scenario",) + CSV_COLUMNS
        rows = [(label,) + tuple(row) for label, res in blocks for row in res.rows]
        return csv_text(header, rows)

    def json(self) -> str:
        doc = {"preset": self.name, "scenarios": []}
        for (label, cfg), res in zip(self.scenarios, self.results):
            entry = {"name": label, "config": echo_config(cfg), "reports": [r.canonical() for r in res.reports]}
            if cfg.mode != "simulate":
                entry["header"] = list(res.header)
                entry["rows"] = [list(r) for r in res.rows]
                entry.update(res.extra)
            doc["scenarios"].append(entry)
        return json.dumps(_jsonable(doc), sort_keys=True, indent=1, allow_nan=False) + "\n"

    def svg(self) -> str:
        series = {}
        if self.name == "exp1":
            for (label, cfg), res in zip(self.scenarios, self.results):
                rep = res.reports[0]
                for n in cfg.schedule.n_values:
                    recs = [r for r in rep.records if r["n"] == n]
                    series[f"{label}, n={n}"] = ([r["value"] for r in recs], [r.get("y", math.nan) for r in recs])
            return svg_plot(series, "Y_n(c) for three tilts", "c", "Y_n")
        if self.name == "exp2":
            for (label, cfg), res in zip(self.scenarios, self.results):
                rep = res.reports[0]
                series[label] = ([r["n"] for r in rep.records], [-r.get("y", math.nan) for r in rep.records])
            return svg_plot(series, "-Y_n(r) at r = 0.036", "n", "-Y_n")
        label, cfg = self.scenarios[0]
        res = self.results[0]
        series["LRA"] = ([r[0] for r in res.rows], [r[1] for r in res.rows])
        return svg_plot(series, "LRA(r), two-sided event", "r", "LRA(r)")


def run_preset(name: str, seeds: Sequence[int] = (1,), threads: int | None = None, quick: bool = False) -> PresetRun:
    scenarios = preset_scenarios(name, seeds, quick)
    results, timing = [], {}
    for label, cfg in scenarios:
        t0 = time.perf_counter()
        results.append(run_mode(cfg, threads))
        timing[label] = time.perf_counter() - t0
    return PresetRun(name, scenarios, results, timing)


def write_preset(run: PresetRun, out_dir: str | os.PathLike) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        f"{run.name}.csv": run.csv(),
        f"{run.name}.json": run.json(),
        f"{run.name}.svg": run.svg(),
        f"{run.name}.timing.json": json.dumps(run.wall_time, sort_keys=True, indent=1) + "\n",
    }
    for label, cfg in run.scenarios:
        safe = label.replace("=", "_").replace(".", "p")
        files[f"{run.name}__{safe}.ini"] = echo_config(cfg)
    if run.name == "two_sided_lra":
        files[f"{run.name}_curve.csv"] = run.results[0].csv()
    written = []
    for fname, text in files.items():
        with open(out / fname, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        written.append(str(out / fname))
    return written


def with_seed(cfg: ScenarioConfig, seed: int | None) -> ScenarioConfig:
    return cfg if seed is None else replace(cfg, seeds=(int(seed),))
