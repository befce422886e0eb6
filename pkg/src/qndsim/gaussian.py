"""Gaussian states in the quadrature picture and homodyne readout statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, RegisterError
from .symplectic import (
    V_VAC,
    Map,
    ModeRegister,
    as_channel,
    dopa,
    symplectic_form,
)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix of a quadrature vector.

    Uses the cosine-then-sine ordering of :mod:`qndsim.symplectic`; the
    vacuum covariance is ``V_VAC * I``.
    """

    mean: np.ndarray
    cov: np.ndarray
    register: ModeRegister

    def __post_init__(self) -> None:
        dim = self.register.dim
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (dim,):
            raise ValueError(f"mean must have shape ({dim},), got {mean.shape}")
        if cov.shape != (dim, dim):
            raise ValueError(f"cov must have shape ({dim}, {dim}), got {cov.shape}")
        if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(cov))):
            raise ParameterError("covariance matrix must be symmetric")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def uncertainty_min_eigenvalue(self) -> float:
        """Smallest eigenvalue of ``cov + (i/2) Omega``; non-negative for physical states."""
        omega = symplectic_form(self.register.n_modes)
        return float(np.linalg.eigvalsh(self.cov + 0.5j * omega).min())

    def is_physical(self, tol: float = 1e-10) -> bool:
        return self.uncertainty_min_eigenvalue() > -tol

    def quadrature_indices(self, mode: str) -> tuple[int, int]:
        k = self.register.index(mode)
        return k, self.register.n_modes + k


@dataclass(frozen=True)
class HomodyneResult:
    mode: str
    phase: float
    mean: float
    variance: float


def vacuum(register: ModeRegister) -> GaussianState:
    return GaussianState(np.zeros(register.dim), V_VAC * np.eye(register.dim), register)


def coherent(
    register: ModeRegister, mode: str, alpha_c: float, alpha_s: float = 0.0
) -> GaussianState:
    """Vacuum noise displaced by ``(alpha_c, alpha_s)`` on one mode."""
    state = vacuum(register)
    ic, is_ = state.quadrature_indices(mode)
    mean = np.zeros(register.dim)
    mean[ic], mean[is_] = alpha_c, alpha_s
    return GaussianState(mean, state.cov, register)


def squeezed(register: ModeRegister, mode: str, r: float) -> GaussianState:
    """Vacuum squeezed on one mode: cosine variance ``V_VAC e^{2r}``,
    sine variance ``V_VAC e^{-2r}``."""
    return apply(vacuum(register), dopa(register, mode, r))


def product_state(*states: GaussianState) -> GaussianState:
    """Tensor product of independent states; the register concatenates labels."""
    labels: list[str] = []
    for st in states:
        labels.extend(st.register.labels)
    register = ModeRegister(tuple(labels))
    n = register.n_modes
    mean = np.zeros(2 * n)
    cov = np.zeros((2 * n, 2 * n))
    offset = 0
    for st in states:
        m = st.register.n_modes
        idx = list(range(offset, offset + m)) + list(range(n + offset, n + offset + m))
        mean[idx] = st.mean
        cov[np.ix_(idx, idx)] = st.cov
        offset += m
    return GaussianState(mean, cov, register)


def reorder(state: GaussianState, register: ModeRegister) -> GaussianState:
    """Express ``state`` on ``register``, which must hold the same labels."""
    if sorted(state.register.labels) != sorted(register.labels):
        raise RegisterError(
            f"cannot reorder {state.register.labels} onto {register.labels}"
        )
    n = register.n_modes
    src = [state.register.index(label) for label in register.labels]
    idx = src + [n + k for k in src]
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)], register)


def apply(state: GaussianState, op: Map) -> GaussianState:
    """Propagate a state through a transform or channel:
    ``mean -> X mean``, ``cov -> X cov X^T + Y``."""
    if op.register != state.register:
        raise RegisterError(
            f"map acts on {op.register.labels}, state lives on {state.register.labels}"
        )
    ch = as_channel(op)
    x = ch.x_matrix
    mean = x @ state.mean
    cov = x @ state.cov @ x.T + ch.y_matrix
    return GaussianState(mean, (cov + cov.T) / 2, state.register)


def homodyne_stats(state: GaussianState, mode: str, phase: float = 0.0) -> HomodyneResult:
    """Mean and variance of ``cos(phase) q^c + sin(phase) q^s`` on ``mode``.

    ``phase = 0`` reads the cosine quadrature, ``phase = pi/2`` the sine one.
    """
    ic, is_ = state.quadrature_indices(mode)
    w = np.array([math.cos(phase), math.sin(phase)])
    idx = [ic, is_]
    mean = float(w @ state.mean[idx])
    var = float(w @ state.cov[np.ix_(idx, idx)] @ w)
    return HomodyneResult(mode, float(phase), mean, var)
