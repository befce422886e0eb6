"""Acceptance gate.

Each criterion prints one ``[PASS]``/``[FAIL]`` line with its measured value
and tolerance; run with ``pytest tests/test_acceptance.py -s`` to see them.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from qndsim.gaussian import GaussianState, apply
from qndsim.metrics import analyze, sweep
from qndsim.schemes import (
    FIG1_PROBE_SIGNS,
    IdealQndParams,
    SchemeDescriptor,
    build_scheme,
    ideal_qnd_transform,
)
from qndsim.symplectic import (
    V_VAC,
    ModeRegister,
    beamsplitter,
    chain,
    dopa,
    loss_channel,
    mode_permutation,
    nopa,
    symplectic_form,
)

REG = ModeRegister.of("a", "b")
R_SET = (0.1, 0.5, 1.0, 2.0, 5.0)
SCHEMES = ("fig1_dopa", "fig3_nopa", "fig4_amplified")


def gate(label, value, tol, ok=None):
    ok = bool(value < tol) if ok is None else ok
    tag = "PASS" if ok else "FAIL"
    print(f"\n[{tag}] {label}: measured {value:.3e}, tolerance {tol:.0e}")
    return ok


@pytest.fixture
def emit(capsys):
    def _emit(label, value, tol, ok=None):
        with capsys.disabled():
            return gate(label, value, tol, ok)
    return _emit


def max_abs(a, b):
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def ideal(gain):
    return ideal_qnd_transform(IdealQndParams(gain)).matrix


def test_ac01_equivalence_identity(emit):
    rng = np.random.default_rng(1)
    bs = beamsplitter(REG, "a", "b", variant="symmetric")
    worst = 0.0
    for r in rng.uniform(-5, 5, 100):
        lhs = chain(bs, nopa(REG, "a", "b", r), bs).matrix
        rhs = chain(dopa(REG, "a", r), dopa(REG, "b", -r)).matrix
        worst = max(worst, max_abs(lhs, rhs))
    assert emit("AC1 symmetric-splitter NOPA equals DOPA pair (100 r)", worst, 1e-12)


def test_ac02_fig3_equals_ideal(emit):
    worst = max(
        max_abs(build_scheme("fig3_nopa", r).transform.matrix, ideal(2 * math.sinh(r)))
        for r in R_SET
    )
    assert emit("AC2 fig3 equals ideal QND with G = 2 sinh r", worst, 1e-12)


def test_ac03_fig1_equals_ideal_mod_sign(emit):
    worst = max(
        max_abs(build_scheme("fig1_dopa", r).transform.matrix @ FIG1_PROBE_SIGNS,
                ideal(2 * math.sinh(r)))
        for r in R_SET
    )
    assert emit("AC3 fig1 times probe sign matrix equals ideal QND", worst, 1e-12)


def test_ac04_fig4_rows(emit):
    worst = 0.0
    for r in R_SET:
        m = build_scheme("fig4_amplified", r).transform.matrix
        a = math.sqrt(math.cosh(2 * r))
        worst = max(
            worst,
            max_abs(m[1, :2], [0.0, a]),
            max_abs(m[0, :2], [-1 / a, math.sinh(2 * r) / a]),
        )
    assert emit("AC4 fig4 cosine rows (0, A) and (-1/A, sinh 2r / A)", worst, 1e-12)


def test_ac05_snr_scaling(emit):
    dev4 = abs(sweep("fig4_amplified", 2, 5, 31).fitted_log_slope - 2.0)
    dev3 = abs(sweep("fig3_nopa", 2, 5, 31).fitted_log_slope - 1.0)
    pointwise = 0.0
    for r in np.linspace(2, 5, 31):
        f4 = analyze(SchemeDescriptor("fig4_amplified", r)).snr_coefficient_ratio
        f3 = analyze(SchemeDescriptor("fig3_nopa", r)).snr_coefficient_ratio
        pointwise = max(pointwise, abs(f4 / f3 - math.cosh(r)))
    ok_slopes = emit("AC5a fig4 log-SNR slope deviation from 2", dev4, 0.05)
    ok_slopes &= emit("AC5b fig3 log-SNR slope deviation from 1", dev3, 0.05)
    ok_ratio = emit("AC5c pointwise fig4/fig3 SNR ratio minus cosh r", pointwise, 1e-10)
    assert ok_slopes and ok_ratio


def _random_element(rng, r_scale):
    kind = rng.integers(5)
    r = rng.uniform(-r_scale, r_scale)
    if kind == 0:
        theta = rng.uniform(0, 2 * math.pi)
        variant = rng.choice(["B1", "B2", "generic-orthogonal"])
        return beamsplitter(REG, "a", "b", math.sin(theta), math.cos(theta), variant)
    if kind == 1:
        return beamsplitter(REG, "a", "b", variant="symmetric")
    if kind == 2:
        return nopa(REG, "a", "b", r)
    if kind == 3:
        return dopa(REG, rng.choice(["a", "b"]), r)
    return mode_permutation(REG, (1, 0))


def _residual(op):
    om = symplectic_form(op.register.n_modes)
    return max_abs(op.matrix @ om @ op.matrix.T, om)


def test_ac06_symplecticity_battery(emit):
    rng = np.random.default_rng(6)
    worst = 0.0
    for trial in range(1000):
        if trial % 2:
            op = chain(*[_random_element(rng, 0.3) for _ in range(10)])
        elif trial % 4 == 0:
            op = _random_element(rng, 5.0)
        else:
            op = build_scheme(rng.choice(SCHEMES), rng.uniform(-5, 5)).transform
        worst = max(worst, _residual(op))
    assert emit("AC6 S Omega S^T = Omega over 1000 constructors and chains", worst, 1e-10)


def _random_covariance(rng):
    ops = [dopa(REG, m, rng.uniform(-1, 1)) for m in ("a", "b")]
    ops.append(nopa(REG, "a", "b", rng.uniform(-0.8, 0.8)))
    theta = rng.uniform(0, 2 * math.pi)
    ops.append(beamsplitter(REG, "a", "b", math.sin(theta), math.cos(theta), "B1"))
    cov = V_VAC * (1 + rng.uniform(0, 1)) * np.eye(4)
    return apply(GaussianState(np.zeros(4), cov, REG), chain(*ops))


def test_ac07_variance_invariance(emit):
    rng = np.random.default_rng(7)
    diff, rel = 0.0, 0.0
    for _ in range(100):
        state = _random_covariance(rng)
        r = rng.uniform(-5, 5)
        v_in = state.cov[1, 1]
        for name in ("fig1_dopa", "fig3_nopa"):
            diff = max(diff, abs(apply(state, build_scheme(name, r).transform).cov[1, 1] - v_in))
        v4 = apply(state, build_scheme("fig4_amplified", r).transform).cov[1, 1]
        rel = max(rel, abs(v4 / (math.cosh(2 * r) * v_in) - 1))
    ok = emit("AC7a fig1/fig3 signal cosine variance unchanged", diff, 1e-12)
    ok &= emit("AC7b fig4 signal cosine variance scaled by cosh 2r", rel, 1e-10)
    assert ok


def test_ac08_uncertainty_preservation(emit):
    rng = np.random.default_rng(8)
    om = symplectic_form(2)
    worst = math.inf
    for _ in range(500):
        ops = [build_scheme(rng.choice(SCHEMES), rng.uniform(-3, 3)).transform]
        for _ in range(rng.integers(1, 4)):
            ops.insert(rng.integers(len(ops) + 1),
                       loss_channel(REG, rng.choice(["a", "b"]), rng.uniform()))
        out = apply(_random_covariance(rng), chain(*ops))
        lam = np.linalg.eigvalsh(out.cov + 0.5j * om).min()
        worst = min(worst, float(lam))
    assert emit("AC8 min eigenvalue of cov + (i/2) Omega, floor", worst, -1e-10, worst > -1e-10)


# Literal 2x2 factors, written out independently of the package.
def _bs1(R, T):
    return np.array([[-R, T], [T, R]])


def _bs2(R, T):
    return np.array([[R, T], [T, -R]])


def _squeeze2(r):
    return np.array([[math.cosh(r), math.sinh(r)], [math.sinh(r), math.cosh(r)]])


def _full(cos_block, sin_block):
    m = np.zeros((4, 4))
    m[:2, :2], m[2:, 2:] = cos_block, sin_block
    return m


_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def literal_fig1(r):
    T = math.exp(r) / math.sqrt(1 + math.exp(2 * r))
    R = 1 / math.sqrt(1 + math.exp(2 * r))
    c = _bs2(R, T) @ np.diag([math.exp(r), math.exp(-r)]) @ _bs1(R, T)
    s = _bs2(R, T) @ np.diag([math.exp(-r), math.exp(r)]) @ _bs1(R, T)
    return _full(_SWAP @ c, _SWAP @ s)


def literal_fig3(r):
    R = math.sqrt((math.cosh(r) - 1) / (2 * math.cosh(r)))
    T = math.sqrt((math.cosh(r) + 1) / (2 * math.cosh(r)))
    return _full(_bs2(R, T) @ _squeeze2(r) @ _bs1(R, T),
                 _bs2(R, T) @ _squeeze2(-r) @ _bs1(R, T))


def literal_fig4(r):
    a = math.sqrt(math.cosh(2 * r))
    R, T = -math.cosh(r) / a, math.sinh(r) / a
    return _full(_squeeze2(r) @ _bs2(R, T), _squeeze2(-r) @ _bs2(R, T))


def test_ac09_oracle_equivalence(emit):
    literal = {"fig1_dopa": literal_fig1, "fig3_nopa": literal_fig3, "fig4_amplified": literal_fig4}
    worst = 0.0
    for name, fn in literal.items():
        for r in R_SET:
            worst = max(worst, max_abs(build_scheme(name, r).transform.matrix, fn(r)))
    assert emit("AC9 builders match literal factor products", worst, 1e-13)


def test_ac10_cli_determinism(emit):
    cmd = [sys.executable, "-m", "qndsim", "sweep", "fig4", "2", "5", "31"]
    runs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    identical = runs[0] == runs[1] and len(runs[0]) > 0
    assert emit("AC10 two CLI sweep runs byte-identical", 0.0 if identical else 1.0, 0.5, identical)
