"""Command-line scenario runner.

    noon-lab <scenario> [--config file.json] [--param key=value]... [--format csv|json] [--out path]

Every scenario is deterministic: the same configuration produces byte-identical
output.  Exit status is 0 on success, 2 for a configuration error and 1 when
the computation itself fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import photon_cap, photon_cap_scope
from .elements import apply_beamsplitter
from .errors import DimensionError, NoonLabError, ParameterError
from .fock import PureState, tensor_product
from .generation import GenerationResult, generate_noon4_lkd, generate_noon_gc, optimize_success
from .interferometry import (
    OPA_PHASE_GRID,
    Difference,
    FringeScan,
    NoonProjector,
    NPhotonRate,
    effective_wavelength,
    fringe_scan,
    opa_fringe,
    phase_sensitivity,
    reference_limits,
    visibility,
)
from .loss import LossSweep, breakeven_gamma, contrast_curves
from .states import OpaSpec, make_coherent, make_fock, make_noon, make_opa

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_CONFIG = 2
SIG_DIGITS = 12


class ConfigError(Exception):
    """Bad scenario name, parameter or config file."""


Scalar = int | float | str | bool


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    parameters: dict[str, Scalar] = field(default_factory=dict)
    phi_min: float | None = None
    phi_max: float | None = None
    steps: int | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; valid scenarios: {', '.join(SCENARIOS)}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.output_format!r}")
        if self.steps is not None and (isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 2):
            raise ConfigError(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.phi_min is not None and self.phi_max is not None and not self.phi_min < self.phi_max:
            raise ConfigError(f"phi_min must be below phi_max, got {self.phi_min} >= {self.phi_max}")

    def phi_grid(self, lo: float, hi: float, steps: int) -> np.ndarray:
        lo = lo if self.phi_min is None else self.phi_min
        hi = hi if self.phi_max is None else self.phi_max
        if not lo < hi:
            raise ConfigError(f"phi_min must be below phi_max, got {lo} >= {hi}")
        return np.linspace(lo, hi, steps if self.steps is None else self.steps, endpoint=False)


@dataclass
class Report:
    """A scenario result in both serialisations."""

    columns: list[str]
    rows: list[list[Scalar]]
    payload: dict


class Params:
    """Typed access to ``--param`` values that records which keys were used."""

    def __init__(self, raw: dict[str, Scalar]):
        self._raw = dict(raw)
        self._used: set[str] = set()

    def _get(self, key: str, default):
        self._used.add(key)
        return self._raw.get(key, default)

    def integer(self, key: str, default: int) -> int:
        v = self._get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v != int(v):
            raise ConfigError(f"parameter {key!r} must be an integer, got {v!r}")
        return int(v)

    def number(self, key: str, default: float) -> float:
        v = self._get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"parameter {key!r} must be a number, got {v!r}")
        return float(v)

    def choice(self, key: str, default: str, options: Sequence[str]) -> str:
        v = str(self._get(key, default))
        if v not in options:
            raise ConfigError(f"parameter {key!r} must be one of {', '.join(options)}; got {v!r}")
        return v

    def has(self, key: str) -> bool:
        self._used.add(key)
        return key in self._raw

    def check_unused(self) -> None:
        extra = sorted(set(self._raw) - self._used)
        if extra:
            raise ConfigError(f"unknown parameter(s) for this scenario: {', '.join(extra)}")


# scenarios -----------------------------------------------------------------


def _two_mode_input(p: Params) -> tuple[str, PureState, int]:
    kind = p.choice("input", "noon", ("noon", "coherent", "fock"))
    if kind == "noon":
        n = p.integer("N", 3)
        return kind, make_noon(n), n
    if kind == "coherent":
        alpha = p.number("alpha", 1.0)
        return kind, tensor_product(make_coherent(alpha), PureState.vacuum(1)), 1
    n = p.integer("N", 1)
    return kind, make_fock((n, 0)), n


def _scan_report(scan: FringeScan) -> Report:
    rows = [[phi, v, var] for phi, v, var in zip(scan.phis, scan.values, scan.variances)]
    payload = {
        "phis": list(scan.phis),
        "values": list(scan.values),
        "variances": list(scan.variances),
        "observable_tag": scan.observable_tag,
    }
    return Report(["phi_rad", "value", "variance"], rows, payload)


def run_fringe(cfg: ScenarioConfig, p: Params) -> Report:
    kind, state, n = _two_mode_input(p)
    default_obs = "difference" if kind == "coherent" else "rate"
    obs_name = p.choice("observable", default_obs, ("rate", "difference", "projector"))
    gamma = p.number("gamma", 0.0)
    obs = {"rate": NPhotonRate(n), "difference": Difference(), "projector": NoonProjector(n)}[obs_name]
    # N00N light is prepared between the splitters
    bare = kind == "noon"
    scan = fringe_scan(state, cfg.phi_grid(0.0, 2 * math.pi, 361), gamma, obs, bare_phase=bare)
    return _scan_report(scan)


def run_hom(cfg: ScenarioConfig, p: Params) -> Report:
    n_a = p.integer("n_a", 1)
    n_b = p.integer("n_b", n_a)
    theta = p.number("theta", math.pi / 4)
    out = apply_beamsplitter(make_fock((n_a, n_b)), 0, 1, theta)
    total = n_a + n_b
    rows = [[k, total - k, out.probability((k, total - k))] for k in range(total, -1, -1)]
    payload = {
        "input": [n_a, n_b],
        "theta": theta,
        "outcomes": [{"occupation": [r[0], r[1]], "probability": r[2]} for r in rows],
    }
    return Report(["n_c", "n_d", "probability"], rows, payload)


def _generation_report(result: GenerationResult, extra: dict[str, float]) -> Report:
    terms = [(tuple(int(n) for n in occ), complex(a)) for occ, a in zip(result.output.occupations, result.output.amplitudes)]
    fid = result.fidelity_to_target
    rows = [
        [" ".join(map(str, occ)), a.real, a.imag, result.success_probability, "" if fid is None else fid, *extra.values()]
        for occ, a in terms
    ]
    payload = {
        "output": {
            "mode_count": result.output.mode_count,
            "terms": [{"occupation": list(occ), "re": a.real, "im": a.imag} for occ, a in terms],
        },
        "success_probability": result.success_probability,
        "fidelity_to_target": fid,
        **extra,
    }
    cols = ["occupation", "re", "im", "success_probability", "fidelity_to_target", *extra]
    return Report(cols, rows, payload)


def run_herald_gc(cfg: ScenarioConfig, p: Params) -> Report:
    n = p.integer("N", 2)
    chi = p.number("chi", math.pi)
    port = p.choice("port", "D", ("C", "D"))
    return _generation_report(generate_noon_gc(n, chi, port), {"chi": chi})


def run_herald_lkd(cfg: ScenarioConfig, p: Params) -> Report:
    if p.has("tap_theta"):
        theta = p.number("tap_theta", 0.0)
    else:
        theta, _ = optimize_success("probability")
    return _generation_report(generate_noon4_lkd(theta), {"tap_theta": theta})


def run_loss_sweep(cfg: ScenarioConfig, p: Params) -> Report:
    n = p.integer("N", 3)
    n_coherent = p.number("n_coherent", 1.0)
    g_max = p.number("gamma_max", 2.0)
    g_steps = p.integer("gamma_steps", 21)
    if g_max <= 0 or g_steps < 2:
        raise ConfigError("gamma_max must be positive and gamma_steps >= 2")
    # γ = ln 2 is always part of the sweep
    grid = np.union1d(np.linspace(0.0, g_max, g_steps), [math.log(2)])
    sweep: LossSweep = contrast_curves(n, n_coherent, grid)
    rows = [list(r) for r in zip(sweep.gammas, sweep.coherent_contrast, sweep.noon_contrast)]
    payload = {
        "gammas": list(sweep.gammas),
        "coherent_contrast": list(sweep.coherent_contrast),
        "noon_contrast": list(sweep.noon_contrast),
        "N": sweep.N,
        "breakeven_gamma": breakeven_gamma(n) if n >= 2 else None,
    }
    return Report(["gamma", "coherent_contrast", "noon_contrast"], rows, payload)


def run_opa_visibility(cfg: ScenarioConfig, p: Params) -> Report:
    r_min = p.number("r_min", 0.1)
    r_max = p.number("r_max", 2.0)
    r_steps = p.integer("r_steps", 20)
    if not 0 <= r_min < r_max or r_steps < 2:
        raise ConfigError("need 0 <= r_min < r_max and r_steps >= 2")
    specs = [OpaSpec(float(r)) for r in np.linspace(r_min, r_max, r_steps)]
    # two-photon pairs at the cutoff need twice the cutoff in photons
    cap = max(photon_cap(), 2 * max(s.pair_cutoff for s in specs))
    rows = []
    with photon_cap_scope(cap):
        for s in specs:
            rows.append([s.gain_r, visibility(opa_fringe(make_opa(s), OPA_PHASE_GRID)), s.pair_cutoff])
    payload = {
        "gains": [r[0] for r in rows],
        "visibilities": [r[1] for r in rows],
        "pair_cutoffs": [r[2] for r in rows],
    }
    return Report(["r", "value", "pair_cutoff"], rows, payload)


def run_sensitivity(cfg: ScenarioConfig, p: Params) -> Report:
    kind, state, n = _two_mode_input(p)
    gamma = p.number("gamma", 0.0)
    if kind == "noon":
        obs, bare, lo, hi = NoonProjector(n), True, 0.1, 1.0
    else:
        obs, bare, lo, hi = Difference(), False, 0.5, 2.5
    rows, reports = [], []
    for phi in cfg.phi_grid(lo, hi, 5):
        rep = phase_sensitivity(state, obs, float(phi), gamma, bare_phase=bare)
        reports.append(rep)
        rows.append([rep.at_phi, rep.delta_phi, rep.noise**2])
    payload = {
        "observable_tag": obs.tag,
        "reports": [{"delta_phi": r.delta_phi, "at_phi": r.at_phi, "slope": r.slope, "noise": r.noise} for r in reports],
    }
    return Report(["phi_rad", "value", "variance"], rows, payload)


def run_limits(cfg: ScenarioConfig, p: Params) -> Report:
    n = p.number("n", 1e24)
    wavelength = p.number("wavelength", 1e-6)
    big_n = p.integer("N", 10)
    lim = reference_limits(n, wavelength)
    eff = effective_wavelength(wavelength, big_n)
    row = [n, wavelength, lim.snl_phi, lim.hl_phi, lim.snl_x, lim.hl_x, big_n, eff]
    cols = ["n", "wavelength", "snl_phi", "hl_phi", "snl_x", "hl_x", "N", "effective_wavelength"]
    return Report(cols, [row], dict(zip(cols, row)))


SCENARIOS: dict[str, Callable[[ScenarioConfig, Params], Report]] = {
    "fringe": run_fringe,
    "hom": run_hom,
    "herald-gc": run_herald_gc,
    "herald-lkd": run_herald_lkd,
    "loss-sweep": run_loss_sweep,
    "opa-visibility": run_opa_visibility,
    "sensitivity": run_sensitivity,
    "limits": run_limits,
}


# serialisation -------------------------------------------------------------


def _fmt(v: Scalar) -> str:
    if isinstance(v, float):
        return format(v, f".{SIG_DIGITS}g")
    return str(v)


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for row in report.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def to_json(report: Report) -> str:
    return json.dumps(_jsonable(report.payload), indent=2) + "\n"


def run_scenario(cfg: ScenarioConfig) -> str:
    """Run one scenario and return its serialised report."""
    params = Params(cfg.parameters)
    try:
        report = SCENARIOS[cfg.scenario](cfg, params)
    except (ParameterError, DimensionError) as exc:
        raise ConfigError(str(exc)) from exc
    params.check_unused()
    return to_csv(report) if cfg.output_format == "csv" else to_json(report)


# argument handling -----------------------------------------------------------


def parse_value(text: str) -> Scalar:
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _parse_param(text: str) -> tuple[str, Scalar]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"--param expects key=value, got {text!r}")
    return key.strip(), parse_value(value.strip())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="noon-lab", description="Deterministic N00N-state interferometry scenarios.")
    ap.add_argument("scenario", help=f"one of: {', '.join(SCENARIOS)}")
    ap.add_argument("--config", type=Path, help="JSON file with scenario settings; flags override it")
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="scenario parameter (repeatable)")
    ap.add_argument("--phi-min", type=float)
    ap.add_argument("--phi-max", type=float)
    ap.add_argument("--steps", type=int)
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--out", type=Path, help="write here instead of stdout")
    return ap


def _load_config_file(path: Path) -> dict:
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    known = {"scenario", "parameters", "phi_min", "phi_max", "steps", "format"}
    extra = sorted(set(data) - known)
    if extra:
        raise ConfigError(f"unknown config key(s): {', '.join(extra)}")
    return data


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    file_cfg = _load_config_file(args.config) if args.config else {}
    if "scenario" in file_cfg and file_cfg["scenario"] != args.scenario:
        raise ConfigError(f"config file names scenario {file_cfg['scenario']!r} but {args.scenario!r} was requested")
    params = dict(file_cfg.get("parameters", {}))
    params.update(_parse_param(t) for t in args.param)

    def pick(flag, key):
        return flag if flag is not None else file_cfg.get(key)

    return ScenarioConfig(
        scenario=args.scenario,
        parameters=params,
        phi_min=pick(args.phi_min, "phi_min"),
        phi_max=pick(args.phi_max, "phi_max"),
        steps=pick(args.steps, "steps"),
        output_format=pick(args.format, "format") or "csv",
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        text = run_scenario(cfg)
    except ConfigError as exc:
        print(f"noon-lab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoonLabError as exc:
        print(f"noon-lab: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
