"""Command handlers: run a validated RunConfig and collect checks, results and CSV tables."""
import contextlib
import logging
import time
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from classify import Verdict, classify
from errors import BadParams, ConfigError, DimensionMismatch, HankelLabError, NotProjection, UnknownSymbol
from hankel import (
    PositivityVerdict,
    default_gram_points,
    default_sample_pairs,
    gram_matrix,
    norm_lower_bound,
    strict_positivity_report,
    verify_symbol,
)
from identities import run_identity_suite
from measure import builtin_measure, carleson_ratio_check, density_min_eigenvalues
from numerics import QuadratureSpec, log_grid, spectral_norm, symmetric_log_grid
from pick import kappa_bound_check, kappa_symmetry_report, lebesgue2_pick, pick_boundary, pick_consistency, pick_n, z_grid
from reports.analysis import (
    carleson_payload,
    classification_payload,
    flags_payload,
    gram_payload,
    identity_rows,
    kappa_payload,
    positivity_payload,
    symmetry_payload,
)
from reports.common import Check, build_envelope
from reports.simulation import convergence_payload, quadruple_payload
from reports.tables import Table, decay_table, pick_table, symbol_table
from run_config import RunConfig
from simulator import Grid, convergence_sweep, quadruple_checks
from symbol import (
    ProjectionSpec,
    Symbol,
    beta_symbol,
    builtin_symbol,
    check_flat,
    check_sharp,
    check_unitary,
    example_beta_closed,
    example_coupling,
    example_projection,
    imaginary_part_symbol,
    off_diagonal_sup,
    projection_symmetry_check,
)

log = logging.getLogger(__name__)

# Symbols evaluated by quadrature carry quadrature error into every identity.
QUADRATURE_SYMBOLS = frozenset({"beta", "i_imag"})
FLIPPED_SIGN_POWER = -1e-2
EXAMPLE_BETA_POINTS = (-10.0, -1.0, -0.1, 0.1, 1.0, 10.0)
KAPPA_ANGLES = 9

_NUMERIC_ERRORS = (HankelLabError, ValueError, ZeroDivisionError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class AppSettings:
    """The Numerics and Reports sections of the application config."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_refinements: int = 4000
    halfline_map: str = "split_inverse"
    include_timing: bool = False

    @classmethod
    def from_config(cls, config) -> "AppSettings":
        def get(section: str, key: str, default):
            value = config.get(section, key)
            return default if value is None else value

        return cls(
            rel_tol=float(get("Numerics", "RelTol", cls.rel_tol)),
            abs_tol=float(get("Numerics", "AbsTol", cls.abs_tol)),
            max_refinements=int(get("Numerics", "MaxRefinements", cls.max_refinements)),
            halfline_map=str(get("Numerics", "HalflineMap", cls.halfline_map)),
            include_timing=bool(get("Reports", "IncludeTiming", cls.include_timing)),
        )

    @property
    def base_tolerances(self) -> dict[str, float]:
        return {"rel_tol": self.rel_tol, "abs_tol": self.abs_tol}


@dataclass
class CommandResult:
    report: dict
    tables: dict[str, Table] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return bool(self.report["all_passed"])


class _Ledger:
    """Accumulates checks, results, verdicts and tables while a command runs."""

    def __init__(self, logger):
        self.logger = logger
        self.checks: list[Check] = []
        self.errors: list[dict] = []
        self.results: dict = {}
        self.verdicts: dict = {}
        self.tables: dict[str, Table] = {}

    def add(self, name: str, value, threshold, passed) -> bool:
        value = None if value is None else float(value)
        threshold = None if threshold is None else float(threshold)
        passed = bool(passed)
        self.checks.append(Check(name, value, threshold, passed))
        if passed:
            self.logger.log_message(f"check {name} passed (value {value}, threshold {threshold})", "detailed")
        else:
            self.logger.log_message(f"check {name} FAILED (value {value}, threshold {threshold})", "warning")
        return passed

    def at_most(self, name: str, value: float, threshold: float) -> bool:
        return self.add(name, value, threshold, bool(np.isfinite(value)) and value <= threshold)

    def at_least(self, name: str, value: float, threshold: float) -> bool:
        return self.add(name, value, threshold, bool(np.isfinite(value)) and value >= threshold)

    def expect(self, name: str, condition: bool) -> bool:
        return self.add(name, 1.0 if condition else 0.0, 1.0, condition)

    def fail(self, name: str, error: Exception):
        self.errors.append({"check": name, "error": type(error).__name__, "message": str(error)})
        self.logger.log_message(f"{name}: {type(error).__name__}: {error}", "warning")
        self.add(name, None, None, False)

    @contextlib.contextmanager
    def guard(self, name: str):
        """Numeric errors inside the block become a failed check named ``name``."""
        try:
            yield
        except ConfigError:
            raise
        except _NUMERIC_ERRORS as e:
            self.fail(name, e)


# ── Helpers ───────────────────────────────────────────────────────────────────

def quadrature_spec(cfg: RunConfig, settings: AppSettings) -> QuadratureSpec:
    return QuadratureSpec(cfg.tol("rel_tol"), cfg.tol("abs_tol"), settings.max_refinements, settings.halfline_map)


def _positive_grid(cfg: RunConfig, key: str = "x_grid") -> np.ndarray:
    rng = cfg.grids[key]
    return log_grid(rng["lo"], rng["hi"], rng["n"])


def _symmetric_grid(cfg: RunConfig) -> np.ndarray:
    rng = cfg.grids["x_grid"]
    return symmetric_log_grid(rng["lo"], rng["hi"], rng["n"])


def _gram_points(cfg: RunConfig, dim: int):
    gram = cfg.grids["gram"]
    return default_gram_points(dim, gram["n_axis"], gram["generic"])


def _symbol_tol(cfg: RunConfig, h: Symbol, key: str) -> float:
    if h.name in QUADRATURE_SYMBOLS:
        return max(cfg.tol(key), cfg.tol("closed_form"))
    return cfg.tol(key)


def resolve_symbol(cfg: RunConfig, spec: QuadratureSpec) -> Symbol:
    """Build the configured symbol; bad names and parameters are configuration errors."""
    entry = cfg.symbol or {}
    name = entry.get("name")
    params = entry.get("params") or []
    try:
        if name == "beta":
            c = cfg.coupling if cfg.coupling is not None else np.zeros_like(cfg.projection)
            return beta_symbol(cfg.measure, ProjectionSpec(cfg.projection, c), spec)
        if name == "i_imag":
            return imaginary_part_symbol(cfg.measure, spec)
        dim = entry.get("dim") or (cfg.measure.dim if cfg.measure is not None else None)
        return builtin_symbol(name, params, dim)
    except (UnknownSymbol, BadParams, DimensionMismatch, NotProjection) as e:
        raise ConfigError("symbol", str(e)) from e


def _flag_checks(cfg: RunConfig, h: Symbol, xs, ledger: _Ledger, prefix: str = ""):
    unitary_tol = _symbol_tol(cfg, h, "unitarity")
    symmetry_tol = _symbol_tol(cfg, h, "symmetry")
    for name, fn, tol in (
        ("unitary", check_unitary, unitary_tol),
        ("sharp_fixed", check_sharp, symmetry_tol),
        ("flat_fixed", check_flat, symmetry_tol),
    ):
        with ledger.guard(f"{prefix}{name}"):
            rec = fn(h, xs, tol)
            ledger.add(f"{prefix}{name}", rec.defect, rec.tol, rec.passed)


def _simulate_checks(cfg: RunConfig, h: Symbol, ledger: _Ledger):
    sim = cfg.grids["simulator"]
    exact = _symbol_tol(cfg, h, "exact")
    with ledger.guard("sim_quadruple"):
        grid = Grid(int(sim["n"]), float(sim["x_max"]))
        rep = quadruple_checks(h, sim["t_list"], grid, int(sim["trials"]), cfg.seed, _symbol_tol(cfg, h, "unitarity"))
        ledger.results["simulation"] = quadruple_payload(rep)
        ledger.at_most("sim_group_law", rep.group_law, exact)
        ledger.at_most("sim_isometry", rep.isometry, exact)
        ledger.at_most("sim_commutation", rep.commutation, exact)
        if rep.symbol_checks["flat_fixed"] and rep.symbol_checks["unitary"]:
            ledger.at_most("sim_involution", rep.involution, exact)
        ledger.at_most("sim_sharp_stability", rep.sharp_stability, exact)
        ledger.at_least("sim_reflection_positivity", rep.min_rayleigh, -cfg.tol("reflection"))
        ledger.at_most("sim_outgoing_invariance", rep.monotonicity, cfg.tol("reflection"))
        ledger.at_most("sim_decay_monotone", rep.decay_increase, cfg.tol("decay"))
        ledger.tables["decay.csv"] = decay_table(rep.decay_t, rep.decay_curve)

        flipped = quadruple_checks(h.negated(), [0.0], grid, int(sim["trials"]), cfg.seed)
        ledger.results["flipped_sign_min_rayleigh"] = flipped.min_rayleigh
        ledger.at_most("sim_flipped_sign_witness", flipped.min_rayleigh, FLIPPED_SIGN_POWER)

    with ledger.guard("sim_convergence_halving"):
        conv = convergence_sweep([(int(n), float(x)) for n, x in sim["sweep"]], h.dim)
        ledger.results["convergence"] = convergence_payload(conv)
        ledger.expect("sim_convergence_halving", conv.halving)


# ── Commands ──────────────────────────────────────────────────────────────────

def _run_integrals(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    with ledger.guard("identities"):
        results = run_identity_suite(spec)
        ledger.results["identities"] = identity_rows(results)
        for r in results:
            ledger.at_most(f"identity_{r.name}_x{r.x:g}", r.error, cfg.tol("integrals"))


def _run_pick(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    mu = cfg.measure
    xs = _positive_grid(cfg)
    tol = cfg.tol("symmetry")

    with ledger.guard("pick_boundary"):
        samples = [(float(x), *pick_boundary(mu, x, spec)) for x in xs]
        ledger.tables["pick.csv"] = pick_table(samples, mu.dim)
        gap = max(pick_consistency(mu, x, spec) for x in xs)
        ledger.at_most("pick_boundary_consistency", gap, cfg.tol("closed_form"))

    with ledger.guard("pick_symmetry"):
        sym = kappa_symmetry_report(mu, xs, spec)
        ledger.results["symmetry"] = symmetry_payload(sym)
        ledger.at_most("pick_R_even", sym.max_even_defect, tol)
        ledger.at_most("pick_I_odd", sym.max_odd_defect, tol)
        ledger.at_least("pick_I_sign", sym.min_signed_eigenvalue, -tol)

    zs = z_grid(xs, KAPPA_ANGLES)
    with ledger.guard("kappa_bounds"):
        slack = cfg.tol("bound_slack")
        rep = kappa_bound_check(mu, cfg.alpha, zs, spec, slack)
        ledger.results["kappa"] = kappa_payload(rep)
        ledger.at_most("kappa_I_ratio", rep.max_ratio_i, 1.0 + slack)
        ledger.at_most("kappa_R_ratio", rep.max_ratio_r, 1.0 + slack)

    if mu.density is not None and mu.density.name == "lebesgue2" and not mu.atoms:
        with ledger.guard("pick_closed_form"):
            gap = max(spectral_norm(pick_n(mu, z, spec) - lebesgue2_pick(z, mu.dim)) for z in zs)
            ledger.at_most("pick_closed_form", gap, cfg.tol("closed_form"))


def _run_symbol(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    h = resolve_symbol(cfg, spec)
    xs = _symmetric_grid(cfg)
    with ledger.guard("symbol_values"):
        ledger.tables["symbol.csv"] = symbol_table(xs, h.values(xs))
    _flag_checks(cfg, h, xs, ledger)
    if cfg.projection is not None:
        with ledger.guard("projection_symmetry"):
            rec = projection_symmetry_check(h, cfg.projection, xs, _symbol_tol(cfg, h, "symmetry"))
            ledger.add("projection_symmetry", rec.defect, rec.tol, rec.passed)
            if cfg.measure is not None:
                ledger.results["off_diagonal_sup"] = off_diagonal_sup(cfg.measure, cfg.projection, xs[xs > 0], spec)
    ledger.results["symbol"] = {"name": h.name, "dim": h.dim, "params": list(h.params)}
    ledger.results["flags"] = flags_payload(h)


def _run_verify_symbol(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    h = resolve_symbol(cfg, spec)
    pairs = default_sample_pairs(h.dim, int(cfg.grids["samples"]), cfg.seed)
    with ledger.guard("verify_symbol"):
        gap = verify_symbol(cfg.measure, h, pairs, spec)
        ledger.results["verify"] = {"symbol": h.name, "pairs": len(pairs), "max_gap": gap}
        ledger.at_most("verify_symbol", gap, cfg.tol("verify"))


def _run_gram(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    source = cfg.measure if cfg.measure is not None else resolve_symbol(cfg, spec)
    points = _gram_points(cfg, source.dim)
    with ledger.guard("gram_min_eig_nonneg"):
        rep = gram_matrix(source, points, spec)
        ledger.results["gram"] = gram_payload(rep)
        ledger.at_least("gram_min_eig_nonneg", rep.min_eig, -cfg.tol("gram"))
    if cfg.measure is not None:
        with ledger.guard("norm_lower_bound"):
            bound = norm_lower_bound(cfg.measure, points, spec)
            ledger.results["norm_lower_bound"] = bound
            ledger.at_most("norm_lower_bound", bound, cfg.alpha * (1.0 + cfg.tol("bound_slack")))


def _run_positivity(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    grid = _positive_grid(cfg, "positivity_grid")
    with ledger.guard("positivity"):
        rep = strict_positivity_report(cfg.measure, grid, spec, cfg.tol("classify"), cfg.tol("witness"))
        ledger.results["positivity"] = positivity_payload(rep)
        ledger.verdicts["positivity"] = rep.verdict
        if "density_min_eig" in rep.evidence:
            ledger.at_least("density_psd", rep.evidence["density_min_eig"], -cfg.tol("gram"))
        if "witness_form" in rep.evidence:
            ledger.at_most("witness_vanishes", rep.evidence["witness_form"], cfg.tol("witness"))
        ledger.expect("positivity_verdict", rep.verdict in set(PositivityVerdict))


def _run_classify(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    h = resolve_symbol(cfg, spec)
    xs = _symmetric_grid(cfg)
    with ledger.guard("classify"):
        result = classify(h, cfg.projection, cfg.measure, xs, _symbol_tol(cfg, h, "classify"), spec,
                          _gram_points(cfg, h.dim), cfg.tol("complex_structure"))
        ledger.results["classification"] = classification_payload(result)
        ledger.verdicts["classify"] = result.verdict
        ledger.expect("classify", True)
        _complex_structure_checks(cfg, result, ledger)


def _complex_structure_checks(cfg: RunConfig, result, ledger: _Ledger):
    check = result.complex_check
    if check is None:
        return
    ledger.at_most("complex_structure_square", check.max_square_defect, cfg.tol("complex_structure"))
    if check.borchers_defect is not None:
        ledger.at_most("complex_structure_borchers", check.borchers_defect, cfg.tol("complex_structure"))


def expected_example_verdict(t: float, tol: float) -> Verdict:
    """Borchers exactly when the coupling block vanishes at the classification tolerance."""
    return Verdict.BORCHERS if spectral_norm(example_coupling(t)) <= tol else Verdict.STANDARD


def _run_example_t(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    """End-to-end pipeline for the explicit family at one value of t."""
    t = float(cfg.t)
    ledger.results["t"] = t
    try:
        mu = builtin_measure("example_t", (t,), 4)
        closed = example_beta_closed(t)
        ps = example_projection(t)
    except HankelLabError as e:
        ledger.fail("example_measure", e)
        return

    xs = _symmetric_grid(cfg)
    x_pos = _positive_grid(cfg)

    with ledger.guard("density_psd"):
        mins = density_min_eigenvalues(mu, _positive_grid(cfg, "positivity_grid"))
        ledger.results["density_min_eig"] = float(mins.min())
        ledger.at_least("density_psd", float(mins.min()), -cfg.tol("exact"))

    with ledger.guard("carleson_ratios"):
        ratios = carleson_ratio_check(mu, x_pos, spec)
        ledger.results["carleson"] = carleson_payload(ratios)
        worst = max(ratios.max_ratio_low, ratios.max_ratio_high)
        ledger.add("carleson_ratios", worst, None, np.isfinite(worst))

    with ledger.guard("beta_closed_form"):
        quad = beta_symbol(mu, ps, spec)
        pts = np.array(EXAMPLE_BETA_POINTS)
        gap = max(spectral_norm(d) for d in quad.values(pts) - closed.values(pts))
        ledger.results["beta_closed_form_gap"] = gap
        ledger.at_most("beta_closed_form", gap, cfg.tol("closed_form"))
        ledger.results["off_diagonal_sup"] = off_diagonal_sup(mu, ps.p, x_pos, spec)

    _flag_checks(cfg, closed, xs, ledger)
    with ledger.guard("projection_symmetry"):
        rec = projection_symmetry_check(closed, ps.p, xs, cfg.tol("symmetry"))
        ledger.add("projection_symmetry", rec.defect, rec.tol, rec.passed)
    ledger.results["flags"] = flags_payload(closed)

    with ledger.guard("verify_symbol"):
        pairs = default_sample_pairs(4, int(cfg.grids["samples"]), cfg.seed)
        gap = verify_symbol(mu, closed, pairs, spec)
        ledger.results["verify_max_gap"] = gap
        ledger.at_most("verify_symbol", gap, cfg.tol("verify"))

    with ledger.guard("gram_min_eig_strict"):
        rep = gram_matrix(mu, _gram_points(cfg, 4), spec)
        ledger.results["gram"] = gram_payload(rep)
        ledger.add("gram_min_eig_strict", rep.min_eig, cfg.tol("gram"), rep.min_eig > cfg.tol("gram"))

    with ledger.guard("strict_positivity"):
        pos = strict_positivity_report(mu, _positive_grid(cfg, "positivity_grid"), spec,
                                       cfg.tol("classify"), cfg.tol("witness"))
        ledger.results["positivity"] = positivity_payload(pos)
        ledger.verdicts["positivity"] = pos.verdict
        ledger.expect("strict_positivity", pos.verdict == PositivityVerdict.CERTIFIED_POSITIVE)

    with ledger.guard("classify"):
        result = classify(closed, ps.p, mu, xs, cfg.tol("classify"), spec, _gram_points(cfg, 4),
                          cfg.tol("complex_structure"))
        expected = expected_example_verdict(t, cfg.tol("classify"))
        ledger.results["classification"] = classification_payload(result)
        ledger.verdicts["classify"] = result.verdict
        ledger.expect("classify_verdict", result.verdict == expected)
        _complex_structure_checks(cfg, result, ledger)

    _simulate_checks(cfg, closed, ledger)


def _run_simulate(cfg: RunConfig, spec: QuadratureSpec, ledger: _Ledger):
    h = resolve_symbol(cfg, spec)
    ledger.results["symbol"] = {"name": h.name, "dim": h.dim, "params": list(h.params)}
    _simulate_checks(cfg, h, ledger)


_HANDLERS: dict[str, Callable[[RunConfig, QuadratureSpec, _Ledger], None]] = {
    "integrals": _run_integrals,
    "pick": _run_pick,
    "symbol": _run_symbol,
    "verify-symbol": _run_verify_symbol,
    "gram": _run_gram,
    "positivity": _run_positivity,
    "classify": _run_classify,
    "example-t": _run_example_t,
    "simulate": _run_simulate,
}


def run(cfg: RunConfig, logger, settings: AppSettings | None = None) -> CommandResult:
    """Dispatch one command. ``logger`` is anything with ``log_message(message, level)``."""
    settings = settings or AppSettings()
    start = time.perf_counter()
    logger.log_message(f"Running '{cfg.command}' with seed {cfg.seed}", "summary")
    logger.log_message(f"Tolerances: {dict(sorted(cfg.tolerances.items()))}", "debug")

    spec = quadrature_spec(cfg, settings)
    ledger = _Ledger(logger)
    _HANDLERS[cfg.command](cfg, spec, ledger)

    wall_time = time.perf_counter() - start if settings.include_timing else None
    report = build_envelope(cfg.command, cfg.seed, ledger.checks, ledger.results, cfg.echo(),
                            ledger.verdicts, ledger.errors, wall_time)
    passed = sum(c.passed for c in ledger.checks)
    logger.log_message(f"'{cfg.command}' finished: {passed}/{len(ledger.checks)} checks passed", "summary")
    for name, verdict in ledger.verdicts.items():
        logger.log_message(f"{name} verdict: {verdict}", "summary")
    log.debug("command %s produced %d tables", cfg.command, len(ledger.tables))
    return CommandResult(report, ledger.tables)
