"""Reproducible verification experiments with CSV output.

Every run returns a :class:`RunResult`; its CSV starts with a ``#`` comment
carrying the scenario name, seed and package version, followed by the header
row and data rows. Summary quantities are appended as trailing ``#`` comment
lines so the data block stays rectangular.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .errors import ConfigurationError
from .nonlinearity import (CriticalParams, Kind, NonlinearitySpec, admissible_epsilon,
                           check_epsilon_regular, critical_q, mu_radius)
from .operators import (Family, OperatorFamily, fit_loglog, lemma_exponent, multiplier,
                        sharp_M)
from .solver import (ProblemSpec, SolverConfig, Status, continue_solution, resubstitution_residual,
                     solve)
from .spectral import (DomainSpec, FractionalIndex, SpectralField, eigenvalues, random_field,
                       x2_norms, x_norm)


def fmt_float(x: float) -> str:
    """Shortest of ``%.15g``, ``%.16g``, ``%.17g`` that round-trips exactly."""
    for digits in (15, 16):
        text = "%.*g" % (digits, x)
        if float(text) == x:
            return text
    return "%.17g" % x


def fmt(value) -> str:
    """Round-trip number formatting used in every CSV cell."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    return str(value)


@dataclass
class Scenario:
    """One experiment: a problem, a solver configuration and extra knobs."""

    name: str
    problem: Optional[ProblemSpec] = None
    solver: Optional[SolverConfig] = None
    seed: int = 0
    knobs: Dict[str, object] = field(default_factory=dict)

    def knob(self, key, default):
        return self.knobs.get(key, default)


@dataclass
class RunResult:
    scenario: str
    seed: int
    columns: List[str]
    rows: List[tuple]
    summary: Dict[str, object] = field(default_factory=dict)
    passed: bool = True
    failures: List[str] = field(default_factory=list)
    runtime_failure: bool = False

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# scenario={self.scenario} seed={self.seed} version={__version__}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(fmt(v) for v in row) + "\n")
        for key, value in self.summary.items():
            buf.write(f"# {key}={fmt(value)}\n")
        buf.write(f"# passed={fmt(self.passed)}\n")
        return buf.getvalue()

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            self.passed = False
            self.failures.append(message)


# scenario construction ----------------------------------------------------

def theorem_constants(alpha: float, rho: float, eps: float, coef: float = 1.0,
                      c_scale: float = 1.0) -> Dict[str, float]:
    """Sharp ``M`` for the three estimates used by the fixed-point argument, with ``mu`` and ``r``.

    ``M_E`` maps ``X^1`` to ``X^(1+eps)`` under ``E``, ``M_S`` maps
    ``X^(1-1/alpha)`` under ``S`` and ``M_R`` maps ``X^(rho eps)`` under ``R``;
    ``M`` is their maximum. ``c_scale >= 1`` inflates the Lipschitz constant
    by an empirical embedding factor.
    """
    M_E = sharp_M(OperatorFamily(Family.E, alpha), 1.0, eps)
    M_S = sharp_M(OperatorFamily(Family.S, alpha), 1.0 - 1.0 / alpha, eps)
    M_R = sharp_M(OperatorFamily(Family.R, alpha), rho * eps, eps)
    M = max(M_E, M_S, M_R)
    c = abs(coef) * rho * max(1.0, c_scale)
    mu, r = mu_radius(M, c, alpha, rho, eps)
    return {"M_E": M_E, "M_S": M_S, "M_R": M_R, "M": M, "c": c, "mu": mu, "r": r}


def make_problem(alpha=1.5, rho=3.0, coef=1.0, kind="power", N=3, eps=None, dim=1, length=1.0,
                 modes=32, grid_points=None, u0=None, u1=None, u1_index=1.0) -> ProblemSpec:
    """Assemble a :class:`ProblemSpec`; ``eps`` defaults to half the admissible maximum."""
    q = critical_q(N, rho)
    if eps is None:
        eps = 0.5 * admissible_epsilon(N, q, alpha, rho)[1]
    params = CriticalParams(N, q, rho, alpha, eps)
    if dim == 1:
        dom = DomainSpec(1, (length,), (modes,), grid_points)
    else:
        dom = DomainSpec(2, length, modes, grid_points)
    f = NonlinearitySpec.power(rho, coef) if kind == "power" else NonlinearitySpec(kind, rho, coef)
    u0 = SpectralField.zeros(dom) if u0 is None else u0(dom) if callable(u0) else u0
    u1 = SpectralField.zeros(dom) if u1 is None else u1(dom) if callable(u1) else u1
    return ProblemSpec(alpha, dom, f, u0, u1, params, u1_index)


def smooth_data(domain: DomainSpec, seed: int, amplitude: float, decay: float = 3.0) -> SpectralField:
    """Seeded smooth field normalized to ``||u||_{X^1_2} = amplitude``."""
    u = random_field(domain, np.random.default_rng(seed), decay=decay)
    n = x_norm(u, FractionalIndex(1.0, 2.0))
    return u * (amplitude / n)


def sharp_datum(domain: DomainSpec, beta: float, amplitude: float) -> SpectralField:
    """Datum ``phi_k ~ lam_k^(3/4 - beta)`` with ``||phi||_{X^beta_2} = amplitude``.

    On a 1-D interval its ``E``-orbit decays at exactly the smoothing rate
    ``t^(-alpha (1 + eps - beta))`` while ``lam_1 t^alpha << 1 << lam_K t^alpha``.
    """
    lam = eigenvalues(domain)
    u = SpectralField(domain, lam ** (0.75 - beta))
    return u * (amplitude / x_norm(u, FractionalIndex(beta, 2.0)))


def cubic_scenario(name="cubic", amplitude=2.0, modes=32, t_end=1.0, n_steps=128, seed=1, **knobs) -> Scenario:
    """Cubic nonlinearity on [0, 1]: alpha = 3/2, rho = 3, N = 3, q = 3, eps = 0.1."""
    prob = make_problem(alpha=1.5, rho=3.0, N=3, eps=0.1, modes=modes,
                        u0=lambda d: smooth_data(d, seed, amplitude))
    return Scenario(name, prob, SolverConfig(t_end, n_steps), seed, dict(knobs))


def global_scenario(name="global", t_end=50.0, n_steps=256, modes=32, seed=2, fill=1.0, **knobs) -> Scenario:
    """alpha = 3/2, rho = 7/3 (N = 3, q = 2) with eps at mid-interval and data at
    ``fill`` times the smallness threshold ``M (||u0|| + ||u1||) = mu / 4``."""
    alpha, rho = 1.5, 7.0 / 3.0
    eps = 0.5 * admissible_epsilon(3, 2.0, alpha, rho)[1]
    consts = theorem_constants(alpha, rho, eps)
    share = fill * consts["mu"] / (8.0 * consts["M"])
    dom = DomainSpec.interval(1.0, modes)
    u0 = smooth_data(dom, seed, share)
    u1 = random_field(dom, np.random.default_rng(seed + 1), decay=3.0)
    u1 = u1 * (share / x_norm(u1, FractionalIndex(1.0 - 1.0 / alpha, 2.0)))
    prob = make_problem(alpha=alpha, rho=rho, N=3, eps=eps, modes=modes, u0=u0, u1=u1)
    knobs.setdefault("extend_T", 0.0)
    return Scenario(name, prob, SolverConfig(t_end, n_steps), seed, dict(knobs))


def stability_scenario(name="stability", t_end=50.0, n_steps=256, length=300.0, modes=512, seed=3,
                       beta=0.3, eps=0.2, amplitude=0.05, base_amplitude=0.05, **knobs) -> Scenario:
    """alpha = 3/2, rho = 7/3, eps = 0.2 with a perturbation of index ``beta`` on a long interval."""
    prob = make_problem(alpha=1.5, rho=7.0 / 3.0, N=3, eps=eps, length=length, modes=modes,
                        u0=lambda d: smooth_data(d, seed, base_amplitude))
    knobs.setdefault("perturbation_beta", beta)
    knobs.setdefault("phi_amplitude", amplitude)
    knobs.setdefault("psi_amplitude", 0.0)
    return Scenario(name, prob, SolverConfig(t_end, n_steps), seed, dict(knobs))


# experiments -------------------------------------------------------------

SMOOTHING_PAIRS = ((1.0, 0.0), (1.0, 0.25), (1.0, 0.5), (0.75, 0.0), (0.75, 0.5), (0.5, 0.0),
                   (0.5, 0.25), (0.25, 0.0), (0.2, 0.1))


def _as_list(value, cast=float):
    if isinstance(value, str):
        return [cast(v) for v in value.split(",") if v.strip()]
    if np.ndim(value) == 0:
        return [cast(value)]
    return [cast(v) for v in value]


def run_smoothing(scenario: Scenario) -> RunResult:
    """Operator norms over a log time grid, slope fits and the sharp-``M`` bound.

    Knobs: ``families``, ``alphas``, ``pairs`` (sequence of (beta, theta)),
    ``t_min``, ``t_max``, ``n_t``, ``slope_tol``, ``bound_t_min``,
    ``bound_t_max``, ``n_bound``, ``domain`` (a long interval with many modes
    by default, so that ``lam t^alpha`` brackets the envelope maximizer
    over the whole fit window).
    """
    k = scenario.knob
    families = [Family(f) for f in _as_list(k("families", "E,S,R"), str)]
    alphas = _as_list(k("alphas", 1.5))
    pairs = k("pairs", SMOOTHING_PAIRS)
    t_grid = np.geomspace(float(k("t_min", 1e-3)), float(k("t_max", 1e-1)), int(k("n_t", 12)))
    if t_grid.size < 4:
        raise ConfigurationError(f"need at least 4 time points, got {t_grid.size}", key="experiment.n_t")
    t_bound = np.geomspace(float(k("bound_t_min", 1e-4)), float(k("bound_t_max", 10.0)), int(k("n_bound", 40)))
    tol = float(k("slope_tol", 0.05))
    domain = k("domain", None)
    if domain is None:
        domain = DomainSpec.interval(20.0, 32768)
    for beta, theta in pairs:
        if not (0.0 <= theta < beta <= 1.0):
            raise ConfigurationError(f"need 0 <= theta < beta <= 1, got ({beta}, {theta})", key="experiment.pairs")
    lam = eigenvalues(domain).ravel()
    res = RunResult(scenario.name, scenario.seed, ["family", "alpha", "beta", "theta", "t", "norm"], [])
    worst_dev, worst_ratio = 0.0, 0.0
    for alpha in alphas:
        for fam in families:
            of = OperatorFamily(fam, alpha)
            # multipliers depend on t only; reuse them across (beta, theta)
            m_fit = [np.abs(multiplier(fam, alpha, t, lam)) for t in t_grid]
            m_bnd = [np.abs(multiplier(fam, alpha, t, lam)) for t in t_bound]
            for beta, theta in pairs:
                lp = lam ** (1.0 + theta - beta)
                norms = np.array([np.max(lp * m) for m in m_fit])
                for t, v in zip(t_grid, norms):
                    res.rows.append((fam.value, alpha, beta, theta, t, v))
                target = lemma_exponent(fam, alpha, beta, theta)
                fit = fit_loglog(t_grid, norms, target)
                M = sharp_M(of, beta, theta)
                ratio = max(np.max(lp * m) / (M * t ** target) for t, m in zip(t_bound, m_bnd))
                tag = f"{fam.value}:alpha={fmt(alpha)}:beta={fmt(beta)}:theta={fmt(theta)}"
                res.summary[f"slope[{tag}]"] = fit.slope
                res.summary[f"target[{tag}]"] = target
                res.summary[f"M[{tag}]"] = M
                res.summary[f"bound_ratio[{tag}]"] = ratio
                dev = abs(fit.slope - target)
                worst_dev, worst_ratio = max(worst_dev, dev), max(worst_ratio, ratio)
                res.check(dev <= tol, f"{tag}: slope {fit.slope:.6g} vs {target:.6g}")
                res.check(ratio <= 1.0 + 1e-9, f"{tag}: norm exceeds M t^exponent by ratio {ratio:.12g}")
    res.summary["max_slope_deviation"] = worst_dev
    res.summary["max_bound_ratio"] = worst_ratio
    return res


def _status_check(res: RunResult, traj, label):
    if traj.status is not Status.COMPLETED:
        res.runtime_failure = traj.status is Status.PICARD_FAILED
        res.check(False, f"{label}: solver status {traj.status.value} at t={traj.failure_time}")
        return False
    return True


def run_global_smalldata(scenario: Scenario) -> RunResult:
    """Weighted norm against ``mu`` under the small-data condition.

    Knobs: ``extend_T`` (continue the run by this much), ``n_samples`` (pairs
    for the empirical embedding factor).
    """
    prob, cfg = scenario.problem, scenario.solver
    p = prob.params
    coef = prob.f.coef if prob.f.kind is Kind.POWER else 1.0
    emb = 1.0
    n_samples = int(scenario.knob("n_samples", 100))
    if prob.f.kind is Kind.POWER and n_samples > 0:
        emb = check_epsilon_regular(prob.f, p, prob.domain, n_samples, seed=scenario.seed).max_ratio
    consts = theorem_constants(prob.alpha, p.rho, p.eps, coef, emb)
    size = consts["M"] * (x_norm(prob.u0, FractionalIndex(1.0, 2.0))
                          + x_norm(prob.u1, FractionalIndex(1.0 - 1.0 / prob.alpha, 2.0)))
    if size > consts["mu"] / 4.0 * (1.0 + 1e-12):
        raise ConfigurationError(
            f"data too large: M (||u0|| + ||u1||) = {size:.6g} exceeds mu / 4 = {consts['mu'] / 4.0:.6g}", key="data")
    traj = solve(prob, cfg)
    extend = float(scenario.knob("extend_T", 0.0))
    if extend > 0.0 and traj.status is Status.COMPLETED:
        traj = continue_solution(traj, prob, cfg, extend)
    res = RunResult(scenario.name, scenario.seed, ["t", "weighted_norm", "mu"], [])
    for t, w in zip(traj.times, traj.weighted_norms):
        res.rows.append((t, w, consts["mu"]))
    res.summary.update(consts)
    res.summary["embedding_factor"] = emb
    res.summary["data_size"] = size
    res.summary["max_weighted_norm"] = float(traj.weighted_norms.max())
    res.summary["t_final"] = float(traj.times[-1])
    if _status_check(res, traj, "global run"):
        res.check(bool(np.all(traj.weighted_norms <= consts["mu"])),
                  f"weighted norm {traj.weighted_norms.max():.6g} exceeds mu {consts['mu']:.6g}")
    return res


def perturbation(scenario: Scenario):
    """The pair ``(phi, psi)`` of a stability scenario."""
    prob = scenario.problem
    beta = float(scenario.knob("perturbation_beta", 0.3))
    limit = 1.0 - 1.0 / prob.alpha
    if not (0.0 <= beta < limit and beta < 1.0 + prob.eps):
        raise ConfigurationError(f"perturbation index must lie in [0, 1 - 1/alpha) = [0, {limit:.6g}), got {beta!r}",
                                 key="experiment.perturbation_beta")
    dom = prob.domain
    phi_amp = float(scenario.knob("phi_amplitude", 0.05))
    psi_amp = float(scenario.knob("psi_amplitude", 0.0))
    phi = sharp_datum(dom, beta, phi_amp) if phi_amp else SpectralField.zeros(dom)
    psi = smooth_data(dom, scenario.seed + 7, psi_amp) if psi_amp else SpectralField.zeros(dom)
    return phi, psi, beta


def run_stability_pair(scenario: Scenario) -> RunResult:
    """Weighted difference of two solutions and of their linear parts.

    Knobs: ``perturbation_beta``, ``phi_amplitude``, ``psi_amplitude``,
    ``fit_t_min`` (start of the late-time fit window, default ``t_end / 10``),
    ``slope_tol``, ``decay_factor``, ``swap`` (exchange the roles of u and v).
    """
    prob, cfg = scenario.problem, scenario.solver
    phi, psi, beta = perturbation(scenario)
    u_prob = prob
    v_prob = prob.with_data(prob.u0 + phi, prob.u1 + psi)
    if scenario.knob("swap", False):
        u_prob, v_prob = v_prob, u_prob
    tu, tv = solve(u_prob, cfg), solve(v_prob, cfg)
    res = RunResult(scenario.name, scenario.seed, ["t", "weighted_diff", "linear_part"], [])
    if not (_status_check(res, tu, "u run") and _status_check(res, tv, "v run")):
        return res
    a, eps = prob.alpha, prob.eps
    t = tu.times
    w = t ** (a * eps)
    lam = eigenvalues(prob.domain).ravel()
    d0 = (u_prob.u0 - v_prob.u0).coeffs.ravel()
    d1 = (u_prob.u1 - v_prob.u1).coeffs.ravel()
    lin = np.array([multiplier(Family.E, a, s, lam) * d0 + multiplier(Family.S, a, s, lam) * d1 for s in t])
    diff = w * x2_norms(tu.coeffs - tv.coeffs, prob.domain, 1.0 + eps)
    lin_col = w * x2_norms(lin, prob.domain, 1.0 + eps)
    diff[0] = lin_col[0] = 0.0
    res.rows = list(zip(t, diff, lin_col))
    target = a * eps - a * (1.0 + eps - beta)
    t_fit = float(scenario.knob("fit_t_min", cfg.t_end / 10.0))
    sel = (t >= t_fit) & (lin_col > 0.0)
    factor = float(scenario.knob("decay_factor", 10.0))
    res.summary["target_slope"] = target
    res.summary["perturbation_beta"] = beta
    res.summary["diff_decay"] = diff.max() / diff[-1] if diff[-1] > 0 else math.inf
    res.summary["linear_decay"] = lin_col.max() / lin_col[-1] if lin_col[-1] > 0 else math.inf
    if not np.any(lin_col > 0.0):
        res.summary["linear_slope"] = math.nan
        return res
    if sel.sum() < 4:
        raise ConfigurationError("late-time fit window holds fewer than 4 points", key="experiment.fit_t_min")
    fit = fit_loglog(t[sel], lin_col[sel], target)
    res.summary["linear_slope"] = fit.slope
    res.summary["fit_t_min"] = t_fit
    res.check(res.summary["diff_decay"] >= factor, f"difference decays only {res.summary['diff_decay']:.4g}x")
    res.check(res.summary["linear_decay"] >= factor, f"linear part decays only {res.summary['linear_decay']:.4g}x")
    res.check(abs(fit.slope - target) <= float(scenario.knob("slope_tol", 0.1)),
              f"linear slope {fit.slope:.6g} vs {target:.6g}")
    return res


def _solve_steps(prob, cfg, n, **changes):
    params = dict(t_end=cfg.t_end, n_steps=n, grading=cfg.grading, picard_tol=cfg.picard_tol,
                  picard_max=cfg.picard_max, blowup_cap=cfg.blowup_cap, seed=cfg.seed)
    params.update(changes)
    return solve(prob, SolverConfig(**params))


def run_convergence(scenario: Scenario) -> RunResult:
    """Self-convergence under step doubling against a fine reference.

    Knobs: ``ladder`` (step counts, each doubling the last), ``reference_steps``,
    ``min_order``, ``tol_check`` (rerun the finest level at half the Picard
    tolerance).
    """
    prob, cfg = scenario.problem, scenario.solver
    ladder = [int(n) for n in _as_list(scenario.knob("ladder", (64, 128, 256)), int)]
    ref_n = int(scenario.knob("reference_steps", 4 * ladder[-1] if ladder else 0))
    if len(ladder) < 3:
        raise ConfigurationError(f"ladder needs at least 3 levels, got {len(ladder)}", key="experiment.ladder")
    if any(b != 2 * a for a, b in zip(ladder, ladder[1:])):
        raise ConfigurationError("ladder levels must double", key="experiment.ladder")
    if ref_n < 4 * ladder[-1] or any(ref_n % n for n in ladder):
        raise ConfigurationError("reference must be a multiple of every level and >= 4x the finest",
                                 key="experiment.reference_steps")
    res = RunResult(scenario.name, scenario.seed, ["n_steps", "error", "order"], [])
    ref = _solve_steps(prob, cfg, ref_n)
    if not _status_check(res, ref, "reference run"):
        return res
    errors = []
    for n in ladder:
        tr = _solve_steps(prob, cfg, n)
        if not _status_check(res, tr, f"{n}-step run"):
            return res
        errors.append(float(np.max(x2_norms(tr.coeffs - ref.coeffs[::ref_n // n], prob.domain, 1.0))))
    linear = prob.f.kind is Kind.ZERO
    orders = [math.nan] + [math.log2(e0 / e1) if e1 > 0 and e0 > 0 else math.nan
                           for e0, e1 in zip(errors, errors[1:])]
    res.rows = list(zip(ladder, errors, orders))
    res.summary["reference_steps"] = ref_n
    res.summary["max_error"] = max(errors)
    if linear:
        scale = max(float(np.max(x2_norms(ref.coeffs, prob.domain, 1.0))), 1.0)
        res.summary["linear_exact"] = max(errors) <= 1e-12 * scale
        res.check(max(errors) <= 1e-12 * scale, f"linear run not exact: error {max(errors):.3g}")
    else:
        min_order = min(orders[1:])
        res.summary["min_order"] = min_order
        res.check(min_order >= float(scenario.knob("min_order", 0.9)), f"observed order {min_order:.4g} below target")
        if scenario.knob("tol_check", True):
            n = ladder[-1]
            a = _solve_steps(prob, cfg, n)
            b = _solve_steps(prob, cfg, n, picard_tol=cfg.picard_tol / 2.0)
            change = float(np.max(x2_norms(a.coeffs - b.coeffs, prob.domain, 1.0)))
            res.summary["tol_sensitivity"] = change
            res.check(change < errors[-1], "halving picard_tol moved results more than the discretization error")
    return res


def run_uniqueness(scenario: Scenario) -> RunResult:
    """Compare Picard seedings and the re-substitution residual.

    Knobs: ``seeds`` (two of 'previous', 'zero', 'linear').
    """
    prob, cfg = scenario.problem, scenario.solver
    seeds = _as_list(scenario.knob("seeds", "zero,linear"), str)
    if len(seeds) != 2:
        raise ConfigurationError("exactly two seeding strategies are required", key="experiment.seeds")
    ta = _solve_steps(prob, cfg, cfg.n_steps, seed=seeds[0])
    tb = _solve_steps(prob, cfg, cfg.n_steps, seed=seeds[1])
    res = RunResult(scenario.name, scenario.seed, ["t", "difference"], [])
    if not (_status_check(res, ta, f"seed {seeds[0]}") and _status_check(res, tb, f"seed {seeds[1]}")):
        return res
    diff = x2_norms(ta.coeffs - tb.coeffs, prob.domain, 1.0 + prob.eps)
    res.rows = list(zip(ta.times, diff))
    limit = 10.0 * cfg.picard_tol
    resid = resubstitution_residual(ta, prob)
    res.summary["max_difference"] = float(diff.max())
    res.summary["residual"] = resid
    res.summary["limit"] = limit
    res.check(float(diff.max()) <= limit, f"seedings differ by {diff.max():.3g}")
    res.check(resid <= limit, f"re-substitution residual {resid:.3g}")
    return res


def continuous_dependence(scenario: Scenario, deltas: Sequence[float] = (1e-2, 5e-3, 2.5e-3)) -> RunResult:
    """``sup_n t_n^(alpha eps) ||u_n - w_n||_{X^(1+eps)_2}`` for data perturbed by ``delta``."""
    prob, cfg = scenario.problem, scenario.solver
    direction = smooth_data(prob.domain, scenario.seed + 11, 1.0)
    base = solve(prob, cfg)
    res = RunResult(scenario.name, scenario.seed, ["delta", "sup_weighted_diff", "ratio"], [])
    if not _status_check(res, base, "base run"):
        return res
    prev = None
    for d in deltas:
        tr = solve(prob.with_data(prob.u0 + direction * d, prob.u1), cfg)
        if not _status_check(res, tr, f"delta={d}"):
            return res
        w = base.times ** (prob.alpha * prob.eps)
        sup = float(np.max(w * x2_norms(base.coeffs - tr.coeffs, prob.domain, 1.0 + prob.eps)))
        ratio = math.nan if prev is None else prev / sup
        res.rows.append((d, sup, ratio))
        if prev is not None:
            res.check(sup <= 1.2 * prev / 2.0, f"delta={d}: {sup:.6g} vs previous {prev:.6g}")
        prev = sup
    res.summary["C"] = max(r[1] / r[0] for r in res.rows)
    return res


def first_step_norms(scenario: Scenario, ladder=(64, 128, 256, 512)) -> RunResult:
    """First-interval weighted norm ``t_1^(alpha eps) ||u_1||`` under refinement."""
    prob, cfg = scenario.problem, scenario.solver
    res = RunResult(scenario.name, scenario.seed, ["n_steps", "t1", "weighted_norm"], [])
    vals = []
    for n in ladder:
        times = SolverConfig(cfg.t_end, n, cfg.grading).mesh()[:3]
        tr = solve(prob, cfg, times=times)
        if not _status_check(res, tr, f"{n}-step run"):
            return res
        vals.append(float(tr.weighted_norms[1]))
        res.rows.append((n, tr.times[1], vals[-1]))
    res.check(all(b < a for a, b in zip(vals, vals[1:])), "first-step weighted norm is not decreasing")
    return res


RUNNERS = {
    "smoothing": run_smoothing,
    "global": run_global_smalldata,
    "stability": run_stability_pair,
    "convergence": run_convergence,
    "uniqueness": run_uniqueness,
}
