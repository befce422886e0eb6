"""Built-in verification battery run by ``qndsim verify``."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .gaussian import GaussianState, apply
from .metrics import analyze, sweep
from .schemes import (
    DEFAULT_REGISTER,
    FIG1_PROBE_SIGNS,
    SchemeDescriptor,
    IdealQndParams,
    build_fig1,
    build_fig3,
    build_fig4,
    build_scheme,
    ideal_qnd_transform,
)
from .symplectic import (
    V_VAC,
    beamsplitter,
    chain,
    check_channel,
    dopa,
    loss_channel,
    nopa,
    symplectic_residual,
)

R_GRID = (0.1, 0.5, 1.0, 2.0, 5.0)
SEED = 20240611
FAULT = 1e-3


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _result(name: str, residual: float, tol: float) -> CheckResult:
    return CheckResult(name, float(residual), tol, bool(residual < tol))


def equivalence_identity(rng: np.random.Generator) -> float:
    reg = DEFAULT_REGISTER
    worst = 0.0
    for r in rng.uniform(-5, 5, 100):
        bs = beamsplitter(reg, "a", "b", variant="symmetric")
        lhs = chain(bs, nopa(reg, "a", "b", r), bs).matrix
        rhs = chain(dopa(reg, "a", r), dopa(reg, "b", -r)).matrix
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def fig3_vs_ideal(fault: float = 0.0) -> float:
    worst = 0.0
    for r in R_GRID:
        got = build_fig3(r).transform.matrix.copy()
        got[0, 0] += fault
        ideal = ideal_qnd_transform(IdealQndParams(2 * math.sinh(r))).matrix
        worst = max(worst, float(np.max(np.abs(got - ideal))))
    return worst


def fig1_vs_ideal() -> float:
    worst = 0.0
    for r in R_GRID:
        got = build_fig1(r).transform.matrix @ FIG1_PROBE_SIGNS
        ideal = ideal_qnd_transform(IdealQndParams(2 * math.sinh(r))).matrix
        worst = max(worst, float(np.max(np.abs(got - ideal))))
    return worst


def fig4_rows() -> float:
    worst = 0.0
    for r in R_GRID:
        m = build_fig4(r).transform.matrix
        A = math.sqrt(math.cosh(2 * r))
        expected = np.array([[-1 / A, math.sinh(2 * r) / A], [0.0, A]])
        worst = max(worst, float(np.max(np.abs(m[:2, :2] - expected))))
    return worst


def back_action_rows() -> float:
    worst = 0.0
    for name in ("fig1_dopa", "fig3_nopa", "fig4_amplified"):
        for r in np.linspace(-3, 3, 13):
            rep = analyze(SchemeDescriptor(name, float(r)))
            worst = max(worst, rep.back_action_residual)
    return worst


def random_element(rng: np.random.Generator, reg, r_scale: float):
    kind = rng.integers(4)
    a, b = rng.permutation(list(reg.labels))[:2]
    r = rng.uniform(-r_scale, r_scale)
    if kind == 0:
        return nopa(reg, a, b, r)
    if kind == 1:
        return dopa(reg, a, r)
    theta = rng.uniform(0, 2 * math.pi)
    variant = ("B1", "B2", "generic-orthogonal", "symmetric")[rng.integers(4)]
    return beamsplitter(reg, a, b, math.sin(theta), math.cos(theta), variant)


def symplectic_battery(rng: np.random.Generator, trials: int = 1000) -> float:
    """Worst residual over single constructors and random 10-element chains.

    Chain elements are drawn with ``|r| <= 0.3`` so that the accumulated
    squeezing stays within the range where 1e-10 is meaningful.
    """
    reg = DEFAULT_REGISTER
    worst = 0.0
    for _ in range(trials):
        single = random_element(rng, reg, 5.0)
        worst = max(worst, symplectic_residual(single))
        elems = [random_element(rng, reg, 0.3) for _ in range(10)]
        worst = max(worst, symplectic_residual(chain(*elems)))
    for name in ("fig1_dopa", "fig3_nopa", "fig4_amplified"):
        for r in R_GRID:
            worst = max(worst, symplectic_residual(build_scheme(name, r).transform))
    return worst


def loss_cp() -> float:
    worst = 0.0
    for eta in np.linspace(0, 1, 11):
        worst = max(worst, check_channel(loss_channel(DEFAULT_REGISTER, "a", eta)).residual)
    return worst


def variance_invariance(rng: np.random.Generator) -> float:
    """Relative change of the signal cosine variance (divided by A^2 for fig4)."""
    reg = DEFAULT_REGISTER
    worst = 0.0
    for _ in range(20):
        sq = rng.uniform(-1.5, 1.5, 2)
        state = apply(
            GaussianState(np.zeros(4), V_VAC * np.eye(4), reg),
            chain(dopa(reg, "a", sq[0]), dopa(reg, "b", sq[1]),
                  random_element(rng, reg, 1.0)),
        )
        v_in = state.cov[1, 1]
        r = rng.uniform(0.1, 3)
        for name, factor in (("fig1_dopa", 1.0), ("fig3_nopa", 1.0),
                             ("fig4_amplified", math.cosh(2 * r))):
            out = apply(state, build_scheme(name, r).transform)
            worst = max(worst, abs(out.cov[1, 1] / (factor * v_in) - 1.0))
    return worst


def snr_slopes() -> float:
    dev4 = abs(sweep("fig4_amplified", 2, 5, 31).fitted_log_slope - 2.0)
    dev3 = abs(sweep("fig3_nopa", 2, 5, 31).fitted_log_slope - 1.0)
    return max(dev4, dev3)


def run_all(inject_fault: bool = False) -> list[CheckResult]:
    """Run every check; ``inject_fault`` perturbs the fig3 matrix so that the
    fig3 check must fail."""
    rng = np.random.default_rng(SEED)
    checks: list[tuple[str, Callable[[], float], float]] = [
        ("equivalence_identity", lambda: equivalence_identity(rng), 1e-12),
        ("fig3_equals_ideal", lambda: fig3_vs_ideal(FAULT if inject_fault else 0.0), 1e-12),
        ("fig1_equals_ideal_mod_probe_sign", fig1_vs_ideal, 1e-12),
        ("fig4_amplified_rows", fig4_rows, 1e-12),
        ("qnd_back_action_rows", back_action_rows, 1e-12),
        ("symplecticity_battery", lambda: symplectic_battery(rng), 1e-10),
        ("loss_channel_complete_positivity", loss_cp, 1e-10),
        ("signal_variance_invariance", lambda: variance_invariance(rng), 1e-10),
        ("snr_log_slopes", snr_slopes, 0.05),
    ]
    return [_result(name, fn(), tol) for name, fn, tol in checks]
