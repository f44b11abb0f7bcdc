"""Command-line driver: figure presets, sweeps, oracle verification, CSV output.

Exit codes: 0 success, 2 invalid configuration or usage, 3 oracle failure.
Errors are reported on stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .core import (DEFAULT_TAIL_TOL, FIELD_KINDS, NearbyLevelSet, PhotonStatistics, SystemParams,
                   make_distribution)
from .dressed import effective_model
from .errors import DomainError, JCStarkError, ValidationError
from .spectrum import (DEFAULT_GRID, WEIGHT_MODES, SpectrumResult, asymmetry_metric, default_grid,
                       peak_find, physical_spectrum)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ORACLE = 3

ORACLE_MODES = ("off", "verify", "full")
SWEEP_AXES = ("nbar", "delta", "chi", "gamma")

# Figure presets: fig2 coherent nbar=1, fig3 coherent nbar=10, fig4 thermal nbar=1,
# fig5 thermal nbar=10; suffix a (delta 0, chi 0), b (0, 0.9), c (0.3, 0), d (0.3, 0.9).
# Detuning follows the figure captions (0.3).  The "-prose" variants use the 0.03
# quoted in the discussion text; they are provided for comparison and are not
# the reference figures.
_FIELDS = {"2": ("coherent", 1.0), "3": ("coherent", 10.0), "4": ("thermal", 1.0),
           "5": ("thermal", 10.0)}
_COMBOS = {"a": (0.0, 0.0), "b": (0.0, 0.9), "c": (0.3, 0.0), "d": (0.3, 0.9)}


def _build_presets() -> dict:
    presets = {}
    for fig, (kind, nbar) in _FIELDS.items():
        for suffix, (delta, chi) in _COMBOS.items():
            base = {"field": kind, "nbar": nbar, "delta": delta, "chi": chi,
                    "lambda_c": 1.0, "gamma": 0.1}
            presets[f"fig{fig}{suffix}"] = base
            if delta:
                presets[f"fig{fig}{suffix}-prose"] = {**base, "delta": 0.03}
    return presets


PRESETS = _build_presets()
FIGURE_PRESETS = tuple(k for k in PRESETS if not k.endswith("-prose"))


@dataclass(frozen=True)
class RunConfig:
    field: str = "coherent"
    nbar: float = 1.0
    delta: float = 0.0
    chi: float | None = None
    nearby: tuple | None = None
    lambda_c: float = 1.0
    gamma: float = 0.1
    omega: float = 10.0
    grid: tuple = DEFAULT_GRID
    weight_mode: str = "probability"
    oracle: str = "off"
    output: str = "spectrum"
    probs: tuple | None = None
    tail_tol: float = DEFAULT_TAIL_TOL
    preset: str | None = None

    def __post_init__(self):
        if self.chi is not None and self.nearby is not None:
            raise ValidationError("chi and nearby are mutually exclusive")
        if self.field not in FIELD_KINDS:
            raise ValidationError(f"field must be one of {FIELD_KINDS}, got {self.field!r}")
        if self.weight_mode not in WEIGHT_MODES:
            raise ValidationError(f"weight_mode must be one of {WEIGHT_MODES}")
        if self.oracle not in ORACLE_MODES:
            raise ValidationError(f"oracle must be one of {ORACLE_MODES}")
        lo, hi, pts = self.grid
        if int(pts) != pts or pts < 2:
            raise ValidationError(f"grid needs an integer number of points >= 2, got {pts}")
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValidationError(f"grid bounds must be finite with min < max, got {lo}, {hi}")
        for name in ("nbar", "delta", "omega", "tail_tol"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.field == "custom" and not self.probs:
            raise ValidationError("field=custom needs probs")
        if not self.output:
            raise ValidationError("output prefix must be non-empty")

    def params(self) -> SystemParams:
        return SystemParams.from_detuning(self.delta, self.lambda_c, self.gamma, self.omega)

    def nearby_set(self) -> NearbyLevelSet | None:
        return None if self.nearby is None else NearbyLevelSet(tuple(self.nearby))

    def distribution(self) -> PhotonStatistics:
        return make_distribution(self.field, self.nbar, self.probs, self.tail_tol)

    def grid_array(self) -> np.ndarray:
        lo, hi, pts = self.grid
        return default_grid(lo, hi, int(pts))

    def resolve_chi(self) -> float:
        nb = self.nearby_set()
        if nb is None:
            return 0.0 if self.chi is None else float(self.chi)
        return effective_model(nb, self.params()).chi

    def echo(self) -> dict:
        d = asdict(self)
        d["grid"] = list(self.grid)
        if self.nearby is not None:
            d["nearby"] = [list(p) for p in self.nearby]
        if self.probs is not None:
            d["probs"] = list(self.probs)
        return d


# ---------------------------------------------------------------- parsing

def _parse_float(value, key):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{key}: expected a number, got {value!r}") from None


def parse_grid(value) -> tuple:
    parts = value.split(":") if isinstance(value, str) else list(value)
    if len(parts) != 3:
        raise ValidationError(f"grid: expected min:max:points, got {value!r}")
    lo, hi, pts = (_parse_float(p, "grid") for p in parts)
    return (lo, hi, int(pts) if pts.is_integer() else pts)


def parse_nearby(value) -> tuple:
    if isinstance(value, str):
        items = [s for s in value.split(",") if s.strip()]
        pairs = [s.split(":") for s in items]
    else:
        pairs = [list(p) for p in value]
    if not pairs or any(len(p) != 2 for p in pairs):
        raise ValidationError(f"nearby: expected omega:eta[,omega:eta...], got {value!r}")
    return tuple((_parse_float(w, "nearby"), _parse_float(e, "nearby")) for w, e in pairs)


def parse_probs(value) -> tuple:
    items = value.split(",") if isinstance(value, str) else list(value)
    return tuple(_parse_float(p, "probs") for p in items)


_ALIASES = {"lambda": "lambda_c", "out": "output"}
_CONVERT = {
    "field": str, "weight_mode": str, "oracle": str, "output": str, "preset": str,
    "nbar": _parse_float, "delta": _parse_float, "chi": _parse_float, "lambda_c": _parse_float,
    "gamma": _parse_float, "omega": _parse_float, "tail_tol": _parse_float,
    "grid": parse_grid, "nearby": parse_nearby, "probs": parse_probs,
}


def normalize_settings(raw: dict) -> dict:
    """Canonical keys and typed values; unknown keys are rejected."""
    out = {}
    for key, value in raw.items():
        key = key.replace("-", "_")
        key = _ALIASES.get(key, key)
        if key not in _CONVERT:
            raise ValidationError(f"unknown configuration key {key!r}")
        conv = _CONVERT[key]
        out[key] = conv(value, key) if conv is _parse_float else conv(value)
    if "chi" in out and "nearby" in out:
        raise ValidationError("chi and nearby are mutually exclusive")
    return out


def load_config_file(path) -> dict:
    """``key = value`` lines (``#`` comments) or a JSON object."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError(f"{path}: expected a JSON object")
        return normalize_settings(data)
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        raw[key] = value
    return normalize_settings(raw)


def _layer(acc: dict, layer: dict) -> dict:
    # a later layer naming chi or nearby replaces whichever one came before
    acc = dict(acc)
    if "chi" in layer:
        acc.pop("nearby", None)
    if "nearby" in layer:
        acc.pop("chi", None)
    acc.update(layer)
    return acc


def resolve_config(flags: dict, file_settings: dict | None = None) -> RunConfig:
    """Merge defaults < preset < config file < flags."""
    file_settings = file_settings or {}
    preset = flags.get("preset", file_settings.get("preset"))
    settings = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ValidationError(f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")
        settings = _layer(settings, PRESETS[preset])
    settings = _layer(settings, file_settings)
    settings = _layer(settings, flags)
    return RunConfig(**settings)


# ---------------------------------------------------------------- output

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def csv_text(config: RunConfig, result: SpectrumResult, dist: PhotonStatistics, chi: float) -> str:
    head = [f"jcstark {__version__}"]
    for key, value in config.echo().items():
        if key == "output":
            continue
        head.append(f"{key} = {json.dumps(value)}")
    head += [f"chi_effective = {_fmt(chi)}", f"m_max = {dist.m_max}",
             f"tail = {_fmt(dist.tail)}", "columns = delta,S"]
    rows = [f"{_fmt(d)},{_fmt(s)}" for d, s in zip(result.grid, result.values)]
    return "".join(f"# {h}\n" for h in head) + "\n".join(rows) + "\n"


def lines_json(result: SpectrumResult) -> str:
    data = [{"label": ln.label, "m": ln.m, "center": ln.center, "weight": ln.weight}
            for ln in result.lines]
    return json.dumps(data, indent=1) + "\n"


PLOT_TEMPLATE = '''\
"""Plot {name}.csv; writes {name}.png next to it."""
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

here = Path(__file__).resolve().parent
delta, S = np.loadtxt(here / "{name}.csv", delimiter=",", comments="#", unpack=True)
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(delta, S, lw=1)
ax.set_xlabel(r"$\\delta = (\\nu - \\omega)/\\lambda$")
ax.set_ylabel(r"$S(\\delta)$")
ax.set_title("{title}")
fig.tight_layout()
fig.savefig(here / "{name}.png", dpi=150)
'''


def plot_script(prefix: str, title: str) -> str:
    return PLOT_TEMPLATE.format(name=Path(prefix).name, title=title)


def error_json(exc: BaseException, code: int) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code})


# ---------------------------------------------------------------- run

@dataclass
class RunOutcome:
    exit_code: int
    artifacts: dict = field(default_factory=dict)
    result: SpectrumResult | None = None
    checks: list = field(default_factory=list)
    seconds: float = 0.0


def compute(config: RunConfig):
    params = config.params()
    nb = config.nearby_set()
    if nb is not None:
        nb.validate_against(params)
    chi = config.resolve_chi()
    dist = config.distribution()
    result = physical_spectrum(dist, params, chi, config.grid_array(), config.weight_mode)
    return params, nb, chi, dist, result


def run(config: RunConfig) -> RunOutcome:
    """Compute one spectrum and write its artifacts under ``config.output``."""
    from .oracle.suite import run_verification

    t0 = time.perf_counter()
    params, nb, chi, dist, result = compute(config)
    prefix = config.output
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    art = {"csv": f"{prefix}.csv", "lines": f"{prefix}.lines.json", "plot": f"{prefix}.plot.py"}
    Path(art["csv"]).write_text(csv_text(config, result, dist, chi))
    Path(art["lines"]).write_text(lines_json(result))
    Path(art["plot"]).write_text(plot_script(prefix, config.preset or Path(prefix).name))
    code, checks = EXIT_OK, []
    if config.oracle != "off":
        checks = run_verification(params, chi, dist, result.grid, nb, config.oracle)
        passed = all(c.passed for c in checks)
        report = {"config": config.echo(), "chi_effective": chi, "passed": passed,
                  "checks": [c.as_dict() for c in checks]}
        art["verify"] = f"{prefix}.verify.json"
        Path(art["verify"]).write_text(json.dumps(report, indent=1) + "\n")
        code = EXIT_OK if passed else EXIT_ORACLE
    return RunOutcome(code, art, result, checks, time.perf_counter() - t0)


# ---------------------------------------------------------------- sweep

def parse_sweep(text: str) -> tuple[str, list[float]]:
    if "=" not in text:
        raise ValidationError(f"sweep: expected axis=v1,v2,..., got {text!r}")
    axis, _, rest = text.partition("=")
    axis = axis.strip()
    if axis not in SWEEP_AXES:
        raise ValidationError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = [_parse_float(v, "sweep") for v in rest.split(",") if v.strip()]
    if not values:
        raise ValidationError("sweep needs at least one value")
    if len(set(values)) != len(values):
        raise ValidationError("sweep values must be distinct")
    return axis, values


def sweep_configs(base: RunConfig, axis: str, values) -> list[RunConfig]:
    if axis not in SWEEP_AXES:
        raise ValidationError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    if not values:
        raise ValidationError("sweep needs at least one value")
    out = []
    for v in values:
        changes = {axis: float(v), "output": f"{base.output}_{axis}_{float(v)!r}"}
        if axis == "chi":
            changes["nearby"] = None
        out.append(replace(base, **changes))
    return out


def _sweep_point(config: RunConfig):
    outcome = run(config)
    res = outcome.result
    try:
        asym = asymmetry_metric(res)
    except DomainError:
        asym = float("nan")
    peaks = [p for p, _ in peak_find(res)]
    return outcome.exit_code, outcome.artifacts, asym, peaks


def sweep(base: RunConfig, axis: str, values, jobs: int | None = None) -> RunOutcome:
    """Run every value of ``axis``; points run in separate processes when ``jobs > 1``."""
    t0 = time.perf_counter()
    configs = sweep_configs(base, axis, values)
    jobs = jobs or min(len(configs), os.cpu_count() or 1)
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_sweep_point, configs))
    else:
        points = [_sweep_point(c) for c in configs]
    lines = [f"# jcstark {__version__}", f"# axis = {axis}", "# columns = value,asymmetry,peaks"]
    for cfg, (_, _, asym, peaks) in zip(configs, points):
        lines.append(f"{_fmt(getattr(cfg, axis))},{_fmt(asym)},{';'.join(map(_fmt, peaks))}")
    summary = f"{base.output}_sweep.csv"
    Path(summary).parent.mkdir(parents=True, exist_ok=True)
    Path(summary).write_text("\n".join(lines) + "\n")
    code = max(p[0] for p in points)
    art = {"summary": summary, "points": [p[1] for p in points]}
    return RunOutcome(code, art, seconds=time.perf_counter() - t0)


# ---------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(error_json(ValidationError(message), EXIT_CONFIG), file=sys.stderr)
        self.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jcstark", description="Resonance fluorescence spectrum of the "
                "Jaynes-Cummings model with Stark-shifting nearby levels.",
                epilog="Negative grid bounds need the = form: --grid=-10:10:4001")
    p.add_argument("--preset", help="figure preset, e.g. fig2b (see --list-presets)")
    p.add_argument("--config", help="key = value or JSON file; flags override it")
    p.add_argument("--field", choices=FIELD_KINDS)
    p.add_argument("--nbar", help="mean photon number")
    p.add_argument("--probs", help="custom photon-number probabilities p0,p1,...")
    p.add_argument("--delta", help="atom-field detuning omega0 - omega")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--chi", help="Stark-shift constant, set directly")
    g.add_argument("--nearby", help='nearby levels "omega:eta[,omega:eta...]"')
    p.add_argument("--lambda", dest="lambda_c", help="atom-field coupling")
    p.add_argument("--gamma", help="detector bandwidth")
    p.add_argument("--omega", help="field frequency")
    p.add_argument("--grid", help="min:max:points in units of lambda")
    p.add_argument("--weight-mode", dest="weight_mode", choices=WEIGHT_MODES)
    p.add_argument("--tail-tol", dest="tail_tol", help="photon distribution truncation tolerance")
    p.add_argument("--oracle", choices=ORACLE_MODES)
    p.add_argument("--out", dest="output", help="output path prefix")
    p.add_argument("--sweep", help="axis=v1,v2,... with axis in nbar, delta, chi, gamma")
    p.add_argument("--jobs", type=int, help="worker processes for --sweep")
    p.add_argument("--list-presets", action="store_true", help="print the presets as JSON")
    return p


_SETTING_KEYS = ("preset", "field", "nbar", "probs", "delta", "chi", "nearby", "lambda_c",
                 "gamma", "omega", "grid", "weight_mode", "tail_tol", "oracle", "output")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_presets:
        print(json.dumps(PRESETS, indent=1))
        return EXIT_OK
    try:
        flags = normalize_settings({k: getattr(args, k) for k in _SETTING_KEYS
                                    if getattr(args, k) is not None})
        file_settings = load_config_file(args.config) if args.config else {}
        config = resolve_config(flags, file_settings)
        if args.jobs is not None and args.jobs < 1:
            raise ValidationError("--jobs must be >= 1")
        if args.sweep is not None:
            axis, values = parse_sweep(args.sweep)
            outcome = sweep(config, axis, values, args.jobs)
        else:
            outcome = run(config)
    except (ValidationError, DomainError) as exc:
        print(error_json(exc, EXIT_CONFIG), file=sys.stderr)
        return EXIT_CONFIG
    except JCStarkError as exc:
        print(error_json(exc, EXIT_ORACLE), file=sys.stderr)
        return EXIT_ORACLE
    summary = {"exit_code": outcome.exit_code, "artifacts": outcome.artifacts,
               "seconds": round(outcome.seconds, 3)}
    if outcome.checks:
        summary["failed"] = [c.name for c in outcome.checks if not c.passed]
    print(json.dumps(summary))
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
