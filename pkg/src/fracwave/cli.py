"""Command-line front end.

Configuration files hold one ``key = value`` pair per line with ``#``
comments; keys are namespaced (``problem.alpha``, ``solver.n_steps``, ...).
Values from ``--set key=value`` override the file, which overrides the
subcommand presets.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (Picard
iteration did not converge), 3 failed verification.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Callable, Dict, Optional

import numpy as np

from . import __version__
from . import harness
from .errors import ConfigurationError, FracwaveError
from .mittag_leffler import MlfParams, mlf
from .nonlinearity import admissible_epsilon, critical_q
from .operators import Family, multiplier
from .solver import SolverConfig, Status, illposed_demo, solve
from .spectral import DomainSpec, FractionalIndex, SpectralField, x_norm

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ASSERT = 0, 1, 2, 3

SUBCOMMANDS = ("mlf", "smoothing", "solve", "global", "stability", "convergence", "uniqueness",
               "demo-illposed", "params")


# key registry -------------------------------------------------------------

def _real(lo=-math.inf, hi=math.inf, lo_open=True, hi_open=True):
    def parse(key, text):
        try:
            v = float(text)
        except ValueError:
            raise ConfigurationError(f"expected a number, got {text!r}", key) from None
        below = v <= lo if lo_open else v < lo
        above = v >= hi if hi_open else v > hi
        if not math.isfinite(v) or below or above:
            left, right = "(" if lo_open else "[", ")" if hi_open else "]"
            raise ConfigurationError(f"value {v!r} outside the range {left}{_g(lo)}, {_g(hi)}{right}", key)
        return v
    return parse


def _g(v):
    return "inf" if v == math.inf else "-inf" if v == -math.inf else format(v, "g")


def _integer(lo=None):
    def parse(key, text):
        try:
            v = int(text)
        except ValueError:
            raise ConfigurationError(f"expected an integer, got {text!r}", key) from None
        if lo is not None and v < lo:
            raise ConfigurationError(f"value {v} must be >= {lo}", key)
        return v
    return parse


def _choice(*options):
    def parse(key, text):
        if text not in options:
            raise ConfigurationError(f"expected one of {', '.join(options)}, got {text!r}", key)
        return text
    return parse


def _boolean(key, text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"expected a boolean, got {text!r}", key)


def _listof(item):
    def parse(key, text):
        return [item(key, t.strip()) for t in text.split(",") if t.strip()]
    return parse


def _pairs(key, text):
    out = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            b, t = (float(v) for v in chunk.split(":"))
        except ValueError:
            raise ConfigurationError(f"expected beta:theta pairs separated by ';', got {chunk!r}", key) from None
        if not (0.0 <= t < b <= 1.0):
            raise ConfigurationError(f"pair {chunk!r} violates 0 <= theta < beta <= 1", key)
        out.append((b, t))
    return out


def _text(key, text):
    return text


_pos = _real(0.0)
KEYS: Dict[str, Callable] = {
    "scenario.name": _text,
    "scenario.seed": _integer(0),
    "problem.alpha": _real(1.0, 2.0),
    "problem.rho": _real(1.0),
    "problem.coef": _real(),
    "problem.kind": _choice("power", "zero", "illposed_demo"),
    "problem.N": _integer(1),
    "problem.eps": _pos,
    "problem.u1_index": _real(0.0, 1.0, hi_open=False),
    "domain.dim": _integer(1),
    "domain.length": _listof(_pos),
    "domain.modes": _listof(_integer(1)),
    "domain.grid_points": _listof(_integer(2)),
    "data.u0": _choice("zero", "mode", "smooth", "sharp"),
    "data.u0_amplitude": _real(),
    "data.u0_mode": _integer(1),
    "data.u1": _choice("zero", "mode", "smooth"),
    "data.u1_amplitude": _real(),
    "data.u1_mode": _integer(1),
    "data.decay": _pos,
    "data.sharp_beta": _real(0.0, 1.0, lo_open=False, hi_open=False),
    "data.smallness_fill": _real(0.0, lo_open=False),
    "solver.t_end": _pos,
    "solver.n_steps": _integer(2),
    "solver.grading": _real(1.0, lo_open=False),
    "solver.picard_tol": _pos,
    "solver.picard_max": _integer(1),
    "solver.blowup_cap": _pos,
    "solver.seed": _choice("previous", "zero", "linear"),
    "experiment.families": _listof(_choice("E", "S", "R")),
    "experiment.alphas": _listof(_real(1.0, 2.0)),
    "experiment.pairs": _pairs,
    "experiment.t_min": _pos,
    "experiment.t_max": _pos,
    "experiment.n_t": _integer(4),
    "experiment.bound_t_min": _pos,
    "experiment.bound_t_max": _pos,
    "experiment.n_bound": _integer(1),
    "experiment.slope_tol": _pos,
    "experiment.extend_T": _real(0.0, lo_open=False),
    "experiment.n_samples": _integer(0),
    "experiment.perturbation_beta": _real(0.0, 1.0, lo_open=False),
    "experiment.phi_amplitude": _real(0.0, lo_open=False),
    "experiment.psi_amplitude": _real(0.0, lo_open=False),
    "experiment.fit_t_min": _pos,
    "experiment.decay_factor": _pos,
    "experiment.swap": _boolean,
    "experiment.ladder": _listof(_integer(2)),
    "experiment.reference_steps": _integer(2),
    "experiment.min_order": _real(),
    "experiment.tol_check": _boolean,
    "experiment.seeds": _listof(_choice("previous", "zero", "linear")),
    "experiment.lambda": _pos,
    "experiment.horizon": _pos,
    "experiment.threshold": _pos,
    "experiment.n_points": _integer(2),
}

_BASE = {
    "problem.alpha": "1.5", "problem.rho": "3", "problem.coef": "1", "problem.kind": "power",
    "problem.N": "3", "problem.u1_index": "1",
    "domain.dim": "1", "domain.length": "1", "domain.modes": "32",
    "data.u0": "smooth", "data.u0_amplitude": "2", "data.u0_mode": "1",
    "data.u1": "zero", "data.u1_amplitude": "0", "data.u1_mode": "1", "data.decay": "3",
    "data.sharp_beta": "0.3", "data.smallness_fill": "0",
    "solver.t_end": "1", "solver.n_steps": "128", "solver.grading": "2", "solver.picard_tol": "1e-10",
    "solver.picard_max": "50", "solver.blowup_cap": "1e6", "solver.seed": "previous",
}

PRESETS = {
    "smoothing": {"domain.length": "20", "domain.modes": "32768", "experiment.alphas": "1.25,1.5,1.75"},
    "solve": {"scenario.seed": "1", "problem.eps": "0.1"},
    "global": {"scenario.seed": "2", "problem.rho": "2.3333333333333335", "solver.t_end": "50",
               "solver.n_steps": "256", "data.u1": "smooth", "data.smallness_fill": "1"},
    "stability": {"scenario.seed": "3", "problem.rho": "2.3333333333333335", "problem.eps": "0.2",
                  "domain.length": "300", "domain.modes": "512", "data.u0_amplitude": "0.05",
                  "solver.t_end": "50", "solver.n_steps": "256"},
    "convergence": {"scenario.seed": "1", "problem.eps": "0.1"},
    "uniqueness": {"scenario.seed": "1", "problem.eps": "0.1"},
    "demo-illposed": {"experiment.lambda": "9.869604401089358", "experiment.horizon": "5"},
    "params": {},
}


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    """Parse ``key = value`` lines; unknown keys and malformed lines are errors."""
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigurationError(f"unknown key ({source}:{lineno})", key)
        KEYS[key](key, value)
        out[key] = value
    return out


def parse_config(path, subcommand: str = "solve", overrides: Optional[Dict[str, str]] = None) -> harness.Scenario:
    """Read a configuration file and build the scenario for ``subcommand``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read configuration file: {exc}", "--config") from None
    values = parse_config_text(text, str(path))
    values.update(overrides or {})
    return build_scenario(subcommand, values)


class _Cfg:
    """Typed view on merged string values."""

    def __init__(self, subcommand, values):
        merged = dict(_BASE)
        merged.update(PRESETS.get(subcommand, {}))
        merged.update(values)
        for key in merged:
            if key not in KEYS:
                raise ConfigurationError("unknown key", key)
        self.raw = merged

    def __contains__(self, key):
        return key in self.raw

    def get(self, key, default=None):
        if key not in self.raw:
            return default
        return KEYS[key](key, self.raw[key])


def _field(kind, domain, amplitude, mode, seed, decay, sharp_beta):
    if kind == "zero" or amplitude == 0.0:
        return SpectralField.zeros(domain)
    if kind == "mode":
        k = (mode,) * domain.dim
        return SpectralField.mode(domain, k, amplitude)
    if kind == "sharp":
        return harness.sharp_datum(domain, sharp_beta, amplitude)
    return harness.smooth_data(domain, seed, amplitude, decay)


def _domain(cfg: _Cfg) -> DomainSpec:
    dim = cfg.get("domain.dim")
    if dim not in (1, 2):
        raise ConfigurationError(f"value {dim} must be 1 or 2", "domain.dim")
    try:
        return DomainSpec(dim, cfg.get("domain.length"), cfg.get("domain.modes"), cfg.get("domain.grid_points"))
    except FracwaveError as exc:
        raise ConfigurationError(str(exc), "domain") from None


def build_scenario(subcommand: str, values: Dict[str, str]) -> harness.Scenario:
    """Assemble and validate a scenario from flat string values."""
    cfg = _Cfg(subcommand, values)
    seed = cfg.get("scenario.seed", 0)
    name = cfg.get("scenario.name", subcommand)
    knobs = {k.split(".", 1)[1]: cfg.get(k) for k in cfg.raw if k.startswith("experiment.")}
    if subcommand in ("smoothing", "demo-illposed", "params", "mlf"):
        if subcommand == "smoothing":
            knobs["domain"] = _domain(cfg)
        knobs["alpha"] = cfg.get("problem.alpha")
        return harness.Scenario(name, None, None, seed, knobs)

    alpha, rho, N = cfg.get("problem.alpha"), cfg.get("problem.rho"), cfg.get("problem.N")
    q = critical_q(N, rho)
    if q <= 1.0:
        raise ConfigurationError(f"critical q = N (rho - 1) / 2 = {q:g} must exceed 1", "problem.rho")
    eps_max = admissible_epsilon(N, q, alpha, rho)[1]
    eps = cfg.get("problem.eps", 0.5 * eps_max)
    if not eps < eps_max:
        raise ConfigurationError(f"value {eps!r} outside the admissible range (0, {eps_max:.17g})", "problem.eps")
    u1_index = cfg.get("problem.u1_index")
    if not u1_index > 1.0 - 1.0 / alpha:
        raise ConfigurationError(f"value {u1_index!r} outside the range ({1.0 - 1.0 / alpha:g}, 1]", "problem.u1_index")
    dom = _domain(cfg)
    decay, sb = cfg.get("data.decay"), cfg.get("data.sharp_beta")
    u0 = _field(cfg.get("data.u0"), dom, cfg.get("data.u0_amplitude"), cfg.get("data.u0_mode"), seed, decay, sb)
    u1_amp = cfg.get("data.u1_amplitude")
    fill = cfg.get("data.smallness_fill")
    if fill > 0.0 and cfg.get("data.u1") != "zero" and u1_amp == 0.0:
        u1_amp = 1.0
    u1 = _field(cfg.get("data.u1"), dom, u1_amp, cfg.get("data.u1_mode"), seed + 1, decay, sb)
    kind = cfg.get("problem.kind")
    coef = cfg.get("problem.coef")
    if fill > 0.0:
        consts = harness.theorem_constants(alpha, rho, eps, coef if kind == "power" else 1.0)
        n0 = x_norm(u0, FractionalIndex(1.0, 2.0))
        n1 = x_norm(u1, FractionalIndex(1.0 - 1.0 / alpha, 2.0))
        parts = (n0 > 0.0) + (n1 > 0.0)
        if parts:
            share = fill * consts["mu"] / (4.0 * consts["M"] * parts)
            u0 = u0 * (share / n0) if n0 > 0.0 else u0
            u1 = u1 * (share / n1) if n1 > 0.0 else u1
    try:
        prob = harness.make_problem(alpha=alpha, rho=rho, coef=coef, kind=kind, N=N, eps=eps, dim=dom.dim,
                                    length=dom.lengths if dom.dim == 2 else dom.lengths[0],
                                    modes=dom.modes if dom.dim == 2 else dom.modes[0],
                                    grid_points=dom.grid_points, u0=u0, u1=u1, u1_index=u1_index)
        solver = SolverConfig(cfg.get("solver.t_end"), cfg.get("solver.n_steps"), cfg.get("solver.grading"),
                              cfg.get("solver.picard_tol"), cfg.get("solver.picard_max"),
                              cfg.get("solver.blowup_cap"), cfg.get("solver.seed"))
    except ConfigurationError:
        raise
    except FracwaveError as exc:
        raise ConfigurationError(str(exc), "problem") from None
    return harness.Scenario(name, prob, solver, seed, knobs)


# subcommands --------------------------------------------------------------

_g17 = harness.fmt_float


def _emit(result: harness.RunResult, out, stdout) -> int:
    text = result.to_csv()
    if out:
        result.write(out)
        stdout.write(f"{result.scenario}: {'passed' if result.passed else 'FAILED'} (wrote {out})\n")
    else:
        stdout.write(text)
    for msg in result.failures:
        sys.stderr.write(f"check failed: {msg}\n")
    if result.runtime_failure:
        return EXIT_NUMERIC
    return EXIT_OK if result.passed else EXIT_ASSERT


def _cmd_mlf(args, scenario, stdout):
    value = mlf(MlfParams(args.alpha, args.beta), args.z)
    stdout.write(_g17(value) + "\n")
    return EXIT_OK


def _cmd_params(args, values, stdout):
    cfg = _Cfg("params", values)
    alpha, rho, N = cfg.get("problem.alpha"), cfg.get("problem.rho"), cfg.get("problem.N")
    coef = cfg.get("problem.coef")
    q = critical_q(N, rho)
    lines = [("N", N), ("rho", rho), ("alpha", alpha), ("q", q)]
    if q <= 1.0:
        lines.append(("admissible", "no (critical q <= 1)"))
        stdout.write("".join(f"{k} = {_fmt(v)}\n" for k, v in lines))
        return EXIT_ASSERT
    eps_max = admissible_epsilon(N, q, alpha, rho)[1]
    eps = cfg.get("problem.eps", 0.5 * eps_max)
    if not eps < eps_max:
        raise ConfigurationError(f"value {eps!r} outside the admissible range (0, {eps_max:.17g})", "problem.eps")
    consts = harness.theorem_constants(alpha, rho, eps, coef)
    lines += [("eps_min", 0.0), ("eps_max", eps_max), ("eps", eps)]
    lines += [(k, consts[k]) for k in ("M_E", "M_S", "M_R", "M", "c", "mu", "r")]
    stdout.write("".join(f"{k} = {_fmt(v)}\n" for k, v in lines))
    return EXIT_OK


def _fmt(v):
    if isinstance(v, float):
        return _g17(v)
    return str(v)


def _cmd_solve(args, scenario, stdout):
    traj = solve(scenario.problem, scenario.solver)
    res = harness.RunResult(scenario.name, scenario.seed, ["t", "weighted_norm", "picard_iters", "picard_change"], [])
    res.rows = list(zip(traj.times, traj.weighted_norms, traj.picard_iters, traj.residuals))
    res.summary["status"] = traj.status.value
    if traj.failure_time is not None:
        res.summary["failure_time"] = traj.failure_time
    res.runtime_failure = traj.status is Status.PICARD_FAILED
    if res.runtime_failure:
        res.passed = False
        res.failures.append(f"Picard iteration failed at t={traj.failure_time}")
    return _emit(res, args.out, stdout)


def _cmd_illposed(args, scenario, stdout):
    k = scenario.knob
    alpha = float(k("alpha", 1.5))
    curve = illposed_demo(alpha, float(k("lambda", math.pi ** 2)), float(k("horizon", 5.0)),
                          int(k("n_points", 400)), float(k("threshold", 1e6)))
    lam = float(k("lambda", math.pi ** 2))
    stable = np.array([multiplier(Family.E, alpha, t, [lam])[0] for t in curve.times])
    res = harness.RunResult(scenario.name, scenario.seed, ["t", "forward_multiplier", "wellposed_multiplier"],
                            list(zip(curve.times, curve.values, stable)))
    res.summary["flagged"] = curve.flagged
    if curve.crossing_time is not None:
        res.summary["crossing_time"] = curve.crossing_time
    res.check(bool(np.all(np.diff(curve.values) >= 0.0)), "forward multiplier is not nondecreasing")
    res.check(curve.flagged, "forward multiplier never exceeds the threshold")
    res.check(bool(np.all(np.abs(stable) <= 1.0)), "well-posed multiplier exceeds 1")
    return _emit(res, args.out, stdout)


def _runner(name):
    def cmd(args, scenario, stdout):
        return _emit(harness.RUNNERS[name](scenario), args.out, stdout)
    return cmd


COMMANDS = {
    "mlf": _cmd_mlf,
    "solve": _cmd_solve,
    "demo-illposed": _cmd_illposed,
    "smoothing": _runner("smoothing"),
    "global": _runner("global"),
    "stability": _runner("stability"),
    "convergence": _runner("convergence"),
    "uniqueness": _runner("uniqueness"),
}

# shortcut flags shared by the scenario subcommands
_FLAGS = (("--alpha", "problem.alpha"), ("--t-end", "solver.t_end"), ("--n-steps", "solver.n_steps"),
          ("--modes", "domain.modes"), ("--seed", "scenario.seed"))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracwave", description="Mittag-Leffler spectral laboratory for "
                     "semilinear fractional diffusion-wave equations.")
    parser.add_argument("--version", action="version", version=f"fracwave {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        if name == "mlf":
            p.add_argument("--alpha", type=float, required=True)
            p.add_argument("--beta", type=float, default=1.0)
            p.add_argument("--z", type=float, required=True)
            continue
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], dest="overrides")
        for flag, key in _FLAGS:
            p.add_argument(flag, dest=key, metavar=key.split(".")[1].upper(), default=None)
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("fracwave: error: a subcommand is required\n")
        return EXIT_CONFIG
    try:
        if args.command == "mlf":
            return _cmd_mlf(args, None, stdout)
        values: Dict[str, str] = {}
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigurationError(f"cannot read configuration file: {exc}", "--config") from None
            values.update(parse_config_text(text, args.config))
        for _, key in _FLAGS:
            v = getattr(args, key)
            if v is not None:
                KEYS[key](key, v)
                values[key] = v
        for item in args.overrides:
            if "=" not in item:
                raise ConfigurationError(f"expected KEY=VALUE, got {item!r}", "--set")
            key, value = (s.strip() for s in item.split("=", 1))
            if key not in KEYS:
                raise ConfigurationError("unknown key", key)
            KEYS[key](key, value)
            values[key] = value
        if args.command == "params":
            return _cmd_params(args, values, stdout)
        scenario = build_scenario(args.command, values)
        return COMMANDS[args.command](args, scenario, stdout)
    except ConfigurationError as exc:
        sys.stderr.write(f"fracwave: configuration error: {exc}\n")
        return EXIT_CONFIG
    except FracwaveError as exc:
        sys.stderr.write(f"fracwave: error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
