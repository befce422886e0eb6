"""
Quadrature conventions, symplectic transforms and Gaussian channels.

Quadrature vectors of an N-mode register are ordered with all cosine
quadratures first and all sine quadratures second::

    (q^c_0, ..., q^c_{N-1}, q^s_0, ..., q^s_{N-1})

so that the symplectic form is ``[[0, I], [-I, 0]]`` and every passive or
parametric element used here is block diagonal (one block for the cosine
quadratures, one for the sine quadratures).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import ParameterError, RegisterError

#: Quadrature variance of the vacuum, consistent with ``[q^c, q^s] = i``.
V_VAC = 0.5

#: Largest squeezing factor accepted by element constructors.
R_LIMIT = 300.0

#: Tolerance on ``R**2 + T**2 = 1`` for beamsplitter coefficients.
NORM_TOL = 1e-12

BEAMSPLITTER_VARIANTS = ("B1", "B2", "symmetric", "generic-orthogonal")


@dataclass(frozen=True)
class ModeRegister:
    """An ordered set of named optical modes."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(label) for label in self.labels)
        if not labels:
            raise RegisterError("a register needs at least one mode")
        if len(set(labels)) != len(labels):
            raise RegisterError(f"mode labels must be distinct, got {labels}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, *labels: str) -> "ModeRegister":
        return cls(tuple(labels))

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        """Length of a quadrature vector on this register."""
        return 2 * len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise RegisterError(
                f"unknown mode {label!r}; register has {list(self.labels)}"
            ) from None

    def quadrature_labels(self) -> list[str]:
        """Human-readable names of the quadrature vector entries, in order."""
        return [f"{m}^c" for m in self.labels] + [f"{m}^s" for m in self.labels]


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic form in cosine-then-sine ordering."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def _frozen_array(value, shape: tuple[int, int], what: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{what} must have shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """A real linear map on the quadratures of ``register``.

    The matrix acts on column quadrature vectors: ``q_out = matrix @ q_in``.
    Symplecticity is not enforced on construction; use
    :func:`check_symplectic`.
    """

    matrix: np.ndarray
    register: ModeRegister

    def __post_init__(self) -> None:
        dim = self.register.dim
        object.__setattr__(
            self, "matrix", _frozen_array(self.matrix, (dim, dim), "matrix")
        )

    @classmethod
    def identity(cls, register: ModeRegister) -> "SymplecticTransform":
        return cls(np.eye(register.dim), register)

    @property
    def cos_block(self) -> np.ndarray:
        n = self.register.n_modes
        return self.matrix[:n, :n]

    @property
    def sin_block(self) -> np.ndarray:
        n = self.register.n_modes
        return self.matrix[n:, n:]

    def as_channel(self) -> "GaussianChannel":
        return GaussianChannel(
            self.matrix, np.zeros_like(self.matrix), self.register
        )

    def inverse(self) -> "SymplecticTransform":
        omega = symplectic_form(self.register.n_modes)
        # S^{-1} = -Omega S^T Omega for symplectic S
        return SymplecticTransform(-omega @ self.matrix.T @ omega, self.register)


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Affine map of Gaussian statistics: ``mean -> X mean``,
    ``cov -> X cov X^T + Y``."""

    x_matrix: np.ndarray
    y_matrix: np.ndarray
    register: ModeRegister

    def __post_init__(self) -> None:
        dim = self.register.dim
        x = _frozen_array(self.x_matrix, (dim, dim), "x_matrix")
        y = _frozen_array(self.y_matrix, (dim, dim), "y_matrix")
        if not np.allclose(y, y.T, rtol=0.0, atol=1e-12):
            raise ParameterError("y_matrix must be symmetric")
        object.__setattr__(self, "x_matrix", x)
        object.__setattr__(self, "y_matrix", y)


Map = Union[SymplecticTransform, GaussianChannel]


def as_channel(op: Map) -> GaussianChannel:
    if isinstance(op, SymplecticTransform):
        return op.as_channel()
    return op


def _check_r(r: float, limit: float = R_LIMIT) -> float:
    r = float(r)
    if not math.isfinite(r) or abs(r) > limit:
        raise ParameterError(f"squeezing factor r={r} outside [-{limit}, {limit}]")
    return r


def _pair_indices(register: ModeRegister, mode_i: str, mode_j: str) -> tuple[int, int]:
    i, j = register.index(mode_i), register.index(mode_j)
    if i == j:
        raise RegisterError(f"two-mode element needs distinct modes, got {mode_i!r} twice")
    return i, j


def embed_pair(
    register: ModeRegister,
    i: int,
    j: int,
    cos_block: np.ndarray,
    sin_block: np.ndarray,
) -> SymplecticTransform:
    """Place 2x2 cosine and sine blocks on modes ``(i, j)``; identity elsewhere."""
    n = register.n_modes
    mat = np.eye(2 * n)
    for block, offset in ((cos_block, 0), (sin_block, n)):
        idx = [offset + i, offset + j]
        mat[np.ix_(idx, idx)] = block
    return SymplecticTransform(mat, register)


def beamsplitter_block(variant: str, R, T) -> np.ndarray:
    """2x2 beamsplitter matrix; keeps the numpy dtype of ``R`` and ``T``."""
    if variant == "B1":
        return np.array([[-R, T], [T, R]])
    if variant == "B2":
        return np.array([[R, T], [T, -R]])
    if variant == "symmetric":
        h = 1.0 / math.sqrt(2.0)
        return np.array([[h, h], [h, -h]])
    if variant == "generic-orthogonal":
        return np.array([[T, R], [-R, T]])
    raise ParameterError(
        f"unknown beamsplitter variant {variant!r}; expected one of {BEAMSPLITTER_VARIANTS}"
    )


def beamsplitter(
    register: ModeRegister,
    mode_i: str,
    mode_j: str,
    R: float = 0.0,
    T: float = 1.0,
    variant: str = "B2",
) -> SymplecticTransform:
    """Lossless beamsplitter between two modes.

    The same real 2x2 block acts on the cosine and on the sine quadratures.
    Variants:

    * ``"B1"``: ``[[-R, T], [T, R]]``
    * ``"B2"``: ``[[R, T], [T, -R]]``
    * ``"symmetric"``: 50/50 splitter ``[[1, 1], [1, -1]] / sqrt(2)``;
      ``R`` and ``T`` are ignored
    * ``"generic-orthogonal"``: rotation ``[[T, R], [-R, T]]``

    Raises:
        ParameterError: if ``R**2 + T**2 != 1`` or the variant is unknown.
        RegisterError: for unknown or repeated mode labels.
    """
    i, j = _pair_indices(register, mode_i, mode_j)
    if variant != "symmetric":
        R, T = float(R), float(T)
        if abs(R * R + T * T - 1.0) > NORM_TOL:
            raise ParameterError(f"beamsplitter needs R^2 + T^2 = 1, got R={R}, T={T}")
    block = beamsplitter_block(variant, R, T)
    return embed_pair(register, i, j, block, block)


def nopa_block(r) -> np.ndarray:
    """Two-mode squeezing block ``[[cosh r, sinh r], [sinh r, cosh r]]``.

    Evaluated in the precision of ``r`` (pass ``np.longdouble`` for extended).
    """
    c, s = np.cosh(r), np.sinh(r)
    return np.array([[c, s], [s, c]])


def nopa(register: ModeRegister, mode_i: str, mode_j: str, r: float) -> SymplecticTransform:
    """Non-degenerate parametric amplifier acting on ``(mode_i, mode_j)``.

    The cosine quadratures see ``nopa_block(r)`` and the sine quadratures
    ``nopa_block(-r)``.
    """
    r = _check_r(r)
    i, j = _pair_indices(register, mode_i, mode_j)
    return embed_pair(register, i, j, nopa_block(r), nopa_block(-r))


def dopa(register: ModeRegister, mode: str, r: float) -> SymplecticTransform:
    """Degenerate parametric amplifier: ``q^c -> e^r q^c``, ``q^s -> e^-r q^s``."""
    r = _check_r(r)
    k = register.index(mode)
    n = register.n_modes
    diag = np.ones(2 * n)
    diag[k] = math.exp(r)
    diag[n + k] = math.exp(-r)
    return SymplecticTransform(np.diag(diag), register)


def mode_permutation(register: ModeRegister, order: Sequence[int]) -> SymplecticTransform:
    """Relabel modes: output mode ``k`` carries input mode ``order[k]``."""
    n = register.n_modes
    if sorted(order) != list(range(n)):
        raise RegisterError(f"{list(order)} is not a permutation of {n} modes")
    perm = np.zeros((2 * n, 2 * n))
    for k, src in enumerate(order):
        perm[k, src] = 1.0
        perm[n + k, n + src] = 1.0
    return SymplecticTransform(perm, register)


def compose(first: Map, then: Map) -> Map:
    """Chain two maps in circuit order (``first`` acts first).

    Two symplectic transforms compose to a symplectic transform; anything
    involving a channel yields a :class:`GaussianChannel`.
    """
    if first.register != then.register:
        raise RegisterError(
            f"cannot compose maps on {first.register.labels} and {then.register.labels}"
        )
    if isinstance(first, SymplecticTransform) and isinstance(then, SymplecticTransform):
        return SymplecticTransform(then.matrix @ first.matrix, first.register)
    a, b = as_channel(first), as_channel(then)
    x = b.x_matrix @ a.x_matrix
    y = b.x_matrix @ a.y_matrix @ b.x_matrix.T + b.y_matrix
    return GaussianChannel(x, (y + y.T) / 2, first.register)


def chain(*ops: Map) -> Map:
    """Compose ``ops`` in circuit order."""
    if not ops:
        raise ValueError("chain() needs at least one element")
    out = ops[0]
    for op in ops[1:]:
        out = compose(out, op)
    return out


def loss_channel(register: ModeRegister, mode: str, eta: float) -> GaussianChannel:
    """Pure loss on one mode: mix with vacuum on a beamsplitter of
    transmissivity ``eta``."""
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"loss transmissivity eta={eta} outside [0, 1]")
    k = register.index(mode)
    n = register.n_modes
    x = np.eye(2 * n)
    y = np.zeros((2 * n, 2 * n))
    for idx in (k, n + k):
        x[idx, idx] = math.sqrt(eta)
        y[idx, idx] = (1.0 - eta) * V_VAC
    return GaussianChannel(x, y, register)


class Check(NamedTuple):
    passed: bool
    residual: float


def _matrix_of(op) -> np.ndarray:
    if isinstance(op, SymplecticTransform):
        return op.matrix
    return np.asarray(op, dtype=float)


def symplectic_residual(op) -> float:
    """Max-abs entry of ``S Omega S^T - Omega``."""
    mat = _matrix_of(op)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
        raise ValueError(f"expected a square matrix of even size, got {mat.shape}")
    omega = symplectic_form(mat.shape[0] // 2)
    return float(np.max(np.abs(mat @ omega @ mat.T - omega)))


def check_symplectic(op, tol: float = 1e-12) -> Check:
    """Test ``S Omega S^T = Omega`` in max-abs norm; accepts a transform or a raw array."""
    res = symplectic_residual(op)
    return Check(res < tol, res)


def cp_min_eigenvalue(channel: Map) -> float:
    """Smallest eigenvalue of ``Y + (i/2)(Omega - X Omega X^T)``."""
    ch = as_channel(channel)
    omega = symplectic_form(ch.register.n_modes)
    x = ch.x_matrix
    herm = ch.y_matrix + 0.5j * (omega - x @ omega @ x.T)
    return float(np.linalg.eigvalsh(herm).min())


def check_channel(channel: Map, tol: float = 1e-10) -> Check:
    """Complete-positivity test of a Gaussian channel.

    The returned residual is the most negative eigenvalue magnitude (0 when
    the matrix is positive semidefinite).
    """
    lam = cp_min_eigenvalue(channel)
    res = max(0.0, -lam)
    return Check(lam > -tol, res)
