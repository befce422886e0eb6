"""
Quadrature QND measurement topologies.

Four two-mode schemes are provided, each keyed by a stable name:

``ideal``
    The bilinear QND coupling ``a^c += G b^c``, ``b^s -= G a^s``.
``fig1_dopa``
    Two degenerate amplifiers with opposite gain between beamsplitters
    B1 and B2. The probe and signal leave through swapped ports.
``fig3_nopa``
    One non-degenerate amplifier between beamsplitters B1 and B2.
``fig4_amplified``
    Beamsplitter B2 followed by one non-degenerate amplifier. The measured
    signal quadrature leaves amplified by ``A = sqrt(cosh 2r)``.

Every builder returns its transform in probe-then-signal output order,
ready for :mod:`qndsim.metrics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParameterError, RegisterError
from .symplectic import (
    NORM_TOL,
    R_LIMIT,
    ModeRegister,
    SymplecticTransform,
    beamsplitter_block,
    embed_pair,
    nopa_block,
)

SCHEME_NAMES = ("ideal", "fig1_dopa", "fig3_nopa", "fig4_amplified")
SCHEME_ALIASES = {"fig1": "fig1_dopa", "fig3": "fig3_nopa", "fig4": "fig4_amplified"}

#: fig4 uses cosh(2r), so its admissible range is half the element range.
FIG4_R_LIMIT = R_LIMIT / 2

DEFAULT_REGISTER = ModeRegister.of("a", "b")


@dataclass(frozen=True)
class IdealQndParams:
    """Gain of the ideal QND coupling. ``G = kappa * tau``."""

    gain: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.gain):
            raise ParameterError(f"QND gain must be finite, got {self.gain}")

    @classmethod
    def from_interaction(cls, kappa: float, tau: float) -> "IdealQndParams":
        """Build from coupling strength ``kappa`` and interaction time ``tau``."""
        return cls(kappa * tau)


@dataclass(frozen=True)
class TunedParameters:
    R: float
    T: float
    A: float = 1.0

    def __post_init__(self) -> None:
        if abs(self.R**2 + self.T**2 - 1.0) > NORM_TOL:
            raise ParameterError(f"R^2 + T^2 != 1 for R={self.R}, T={self.T}")


@dataclass(frozen=True)
class SchemeDescriptor:
    """A scheme name, its squeezing factor and the probe/signal assignment.

    For ``ideal`` the ``r`` field carries the gain ``G``.
    """

    name: str
    r: float
    register: ModeRegister = DEFAULT_REGISTER
    probe: str | None = None
    signal: str | None = None

    def __post_init__(self) -> None:
        if self.name not in SCHEME_NAMES:
            raise ParameterError(
                f"unknown scheme {self.name!r}; valid schemes: {', '.join(SCHEME_NAMES)}"
            )
        if self.register.n_modes != 2:
            raise RegisterError("QND schemes act on exactly two modes")
        probe = self.probe if self.probe is not None else self.register.labels[0]
        signal = self.signal if self.signal is not None else self.register.labels[1]
        self.register.index(probe)
        self.register.index(signal)
        if probe == signal:
            raise RegisterError("probe and signal must be different modes")
        object.__setattr__(self, "probe", probe)
        object.__setattr__(self, "signal", signal)
        object.__setattr__(self, "r", float(self.r))

    def build(self) -> "BuiltScheme":
        return build_scheme(self.name, self.r, self.register, self.probe, self.signal)

    def uniform_order(self) -> list[int]:
        """Quadrature indices in (probe^c, signal^c, probe^s, signal^s) order."""
        p = self.register.index(self.probe)
        s = self.register.index(self.signal)
        return [p, s, 2 + p, 2 + s]


class BuiltScheme(NamedTuple):
    """Result of a scheme builder.

    ``transform`` is reported with the probe output on the probe mode and
    the signal output on the signal mode. ``port_map[k]`` is the register
    index of the raw output mode that is reported as mode ``k``; ``raw`` is
    the element product before that relabeling.
    """

    transform: SymplecticTransform
    tuned: TunedParameters
    port_map: tuple[int, ...]
    raw: SymplecticTransform


def _resolve(register, probe, signal):
    register = register or DEFAULT_REGISTER
    if register.n_modes != 2:
        raise RegisterError("QND schemes act on exactly two modes")
    probe = probe if probe is not None else register.labels[0]
    signal = signal if signal is not None else register.labels[1]
    if register.index(probe) == register.index(signal):
        raise RegisterError("probe and signal must be different modes")
    return register, probe, signal


def _check_r(r: float, limit: float) -> float:
    r = float(r)
    if not math.isfinite(r) or abs(r) > limit:
        raise ParameterError(f"r={r} outside the admissible range [-{limit}, {limit}]")
    return r


def ideal_qnd_transform(
    params: IdealQndParams,
    register: ModeRegister | None = None,
    probe: str | None = None,
    signal: str | None = None,
) -> SymplecticTransform:
    """Ideal QND coupling with gain ``params.gain``.

    Cosine block ``[[1, G], [0, 1]]`` and sine block ``[[1, 0], [-G, 1]]``
    in (probe, signal) order.
    """
    register, probe, signal = _resolve(register, probe, signal)
    g = params.gain
    p, s = register.index(probe), register.index(signal)
    mat = np.eye(4)
    mat[p, s] = g
    mat[2 + s, 2 + p] = -g
    return SymplecticTransform(mat, register)


# Scheme products are evaluated in extended precision and rounded once, so
# that cancelling entries such as fig4's -1/A keep full double accuracy.
_EXT = np.longdouble


def _fig1_coefficients(r):
    # T = e^r / sqrt(1 + e^2r), R = 1 / sqrt(1 + e^2r), written overflow-safe
    one = np.ones_like(r)
    return one / np.sqrt(one + np.exp(2 * r)), one / np.sqrt(one + np.exp(-2 * r))


def _fig3_coefficients(r):
    # R = sqrt((cosh r - 1) / (2 cosh r)), T = sqrt((cosh r + 1) / (2 cosh r)),
    # through cosh r -/+ 1 = 2 sinh^2(r/2), 2 cosh^2(r/2)
    norm = np.sqrt(np.cosh(r))
    return np.sinh(r / 2) / norm, np.cosh(r / 2) / norm


def _fig4_coefficients(r):
    A = np.sqrt(np.cosh(2 * r))
    return -np.cosh(r) / A, np.sinh(r) / A, A


def tuned_fig1(r: float) -> TunedParameters:
    R, T = _fig1_coefficients(_EXT(r))
    return TunedParameters(R=float(R), T=float(T))


def tuned_fig3(r: float) -> TunedParameters:
    """Beamsplitter coefficients that turn the fig3 circuit into a QND coupling.

    ``R`` takes the sign of ``r``; for ``r >= 0`` both roots are positive,
    as in ``R = sqrt((cosh r - 1) / (2 cosh r))``.
    """
    R, T = _fig3_coefficients(_EXT(r))
    return TunedParameters(R=float(R), T=float(T))


def tuned_fig4(r: float) -> TunedParameters:
    R, T, A = _fig4_coefficients(_EXT(r))
    return TunedParameters(R=float(R), T=float(T), A=float(A))


def _assemble(register, probe, signal, cos_block, sin_block) -> SymplecticTransform:
    return embed_pair(
        register,
        register.index(probe),
        register.index(signal),
        cos_block.astype(float),
        sin_block.astype(float),
    )


def build_fig1(
    r: float,
    register: ModeRegister | None = None,
    probe: str | None = None,
    signal: str | None = None,
) -> BuiltScheme:
    """Two opposite-gain DOPAs between beamsplitters B1 and B2.

    The probe arm is squeezed with ``+r`` and the signal arm with ``-r``.
    The circuit leaves the signal on the probe port and vice versa; the
    returned transform undoes that swap so that it reads
    ``a^c -> -a^c + 2 sinh(r) b^c``, ``b^c -> b^c``, ``a^s -> -a^s``,
    ``b^s -> b^s + 2 sinh(r) a^s``.
    """
    register, probe, signal = _resolve(register, probe, signal)
    r = _check_r(r, R_LIMIT)
    x = _EXT(r)
    R, T = _fig1_coefficients(x)
    b1 = beamsplitter_block("B1", R, T)
    b2 = beamsplitter_block("B2", R, T)
    arms_cos = np.diag([np.exp(x), np.exp(-x)])
    arms_sin = np.diag([np.exp(-x), np.exp(x)])
    cos_block, sin_block = b2 @ arms_cos @ b1, b2 @ arms_sin @ b1
    raw = _assemble(register, probe, signal, cos_block, sin_block)
    transform = _assemble(register, probe, signal, cos_block[::-1], sin_block[::-1])
    p, s = register.index(probe), register.index(signal)
    port_map = [0, 0]
    port_map[p], port_map[s] = s, p
    return BuiltScheme(transform, TunedParameters(float(R), float(T)), tuple(port_map), raw)


def build_fig3(
    r: float,
    register: ModeRegister | None = None,
    probe: str | None = None,
    signal: str | None = None,
) -> BuiltScheme:
    """B1, one NOPA, then B2, tuned so the result equals the ideal coupling with
    ``G = 2 sinh r``."""
    register, probe, signal = _resolve(register, probe, signal)
    r = _check_r(r, R_LIMIT)
    x = _EXT(r)
    R, T = _fig3_coefficients(x)
    b1 = beamsplitter_block("B1", R, T)
    b2 = beamsplitter_block("B2", R, T)
    raw = _assemble(register, probe, signal, b2 @ nopa_block(x) @ b1, b2 @ nopa_block(-x) @ b1)
    return BuiltScheme(raw, TunedParameters(float(R), float(T)), (0, 1), raw)


def build_fig4(
    r: float,
    register: ModeRegister | None = None,
    probe: str | None = None,
    signal: str | None = None,
) -> BuiltScheme:
    """B2 followed by one NOPA: the amplified QND scheme.

    With ``A = sqrt(cosh 2r)`` the tuned relations are
    ``a^c -> (-a^c + sinh(2r) b^c) / A``, ``b^c -> A b^c``,
    ``a^s -> -A a^s`` and ``b^s -> (sinh(2r) a^s + b^s) / A``.
    """
    register, probe, signal = _resolve(register, probe, signal)
    r = _check_r(r, FIG4_R_LIMIT)
    x = _EXT(r)
    R, T, A = _fig4_coefficients(x)
    b2 = beamsplitter_block("B2", R, T)
    raw = _assemble(register, probe, signal, nopa_block(x) @ b2, nopa_block(-x) @ b2)
    return BuiltScheme(raw, TunedParameters(float(R), float(T), float(A)), (0, 1), raw)


def build_scheme(
    name: str,
    r: float,
    register: ModeRegister | None = None,
    probe: str | None = None,
    signal: str | None = None,
) -> BuiltScheme:
    """Dispatch on the scheme name; for ``ideal``, ``r`` is the gain."""
    if name == "ideal":
        register, probe, signal = _resolve(register, probe, signal)
        t = ideal_qnd_transform(IdealQndParams(float(r)), register, probe, signal)
        return BuiltScheme(t, TunedParameters(0.0, 1.0), (0, 1), t)
    builders = {"fig1_dopa": build_fig1, "fig3_nopa": build_fig3, "fig4_amplified": build_fig4}
    try:
        builder = builders[name]
    except KeyError:
        raise ParameterError(
            f"unknown scheme {name!r}; valid schemes: {', '.join(SCHEME_NAMES)}"
        ) from None
    return builder(r, register, probe, signal)


def canonical_name(name: str) -> str:
    """Map a short alias such as ``fig4`` to its scheme name."""
    return SCHEME_ALIASES.get(name, name)


def r_limit(name: str) -> float:
    """Largest admissible ``|r|`` for a scheme (``inf`` for ``ideal``)."""
    if name == "fig4_amplified":
        return FIG4_R_LIMIT
    if name == "ideal":
        return math.inf
    return R_LIMIT


#: Signs that map fig1's probe convention onto the ideal one (acts on inputs).
FIG1_PROBE_SIGNS = np.diag([-1.0, 1.0, -1.0, 1.0])
