"""
QND figures of merit derived from a scheme's input-output relations.

All quantities are read off the coefficient matrix expressed in the uniform
order (probe^c, signal^c, probe^s, signal^s) for both rows (outputs) and
columns (inputs). The readout is homodyne detection of the probe cosine
quadrature, and the measured signal observable is the signal cosine
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ParameterError
from .gaussian import GaussianState, product_state, reorder, vacuum
from .schemes import SchemeDescriptor, r_limit
from .symplectic import V_VAC, GaussianChannel, ModeRegister, as_channel, chain, loss_channel

#: Vacuum (standard quantum limit) variance of a single quadrature.
SQL_VARIANCE = V_VAC

LOSS_PORTS = ("probe_in", "signal_in", "probe_out", "signal_out")

# below this |gain| the estimator variance is reported as infinite
_ZERO_GAIN = 1e-15

CSV_HEADER = "r,gain,signal_amplification,snr_ratio,estimator_variance_normalized"


@dataclass(frozen=True)
class SchemeReport:
    scheme: str
    r: float
    coefficient_matrix: list[list[float]]
    row_labels: list[str]
    column_labels: list[str]
    gain: float
    back_action_residual: float
    signal_amplification: float
    snr_coefficient_ratio: float
    estimator_variance_normalized: float
    zero_gain: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def scheme_channel(
    descriptor: SchemeDescriptor, losses: Sequence[tuple[str, float]] = ()
) -> GaussianChannel:
    """The scheme's transform wrapped by optional input/output pure losses."""
    transform = descriptor.build().transform
    reg = descriptor.register
    before, after = [], []
    for port, eta in losses:
        if port not in LOSS_PORTS:
            raise ParameterError(f"unknown loss port {port!r}; expected one of {LOSS_PORTS}")
        mode = descriptor.probe if port.startswith("probe") else descriptor.signal
        (before if port.endswith("_in") else after).append(loss_channel(reg, mode, eta))
    return as_channel(chain(*before, transform, *after))


def input_state(
    descriptor: SchemeDescriptor,
    probe_state: GaussianState | None = None,
    signal_state: GaussianState | None = None,
) -> GaussianState:
    """Joint input state on the descriptor's register; vacuum by default.

    Single-mode states are relabeled onto the probe and signal modes.
    """
    def one_mode(state, label):
        one = ModeRegister.of(label)
        if state is None:
            return vacuum(one)
        if state.register.n_modes != 1:
            raise ParameterError("probe/signal states must be single-mode")
        return GaussianState(state.mean, state.cov, one)

    joint = product_state(
        one_mode(probe_state, descriptor.probe), one_mode(signal_state, descriptor.signal)
    )
    return reorder(joint, descriptor.register)


def analyze(
    descriptor: SchemeDescriptor,
    probe_state: GaussianState | None = None,
    signal_state: GaussianState | None = None,
    losses: Sequence[tuple[str, float]] = (),
) -> SchemeReport:
    """Build the scheme and compute its QND diagnostics.

    ``gain`` is the coefficient of the signal cosine input in the probe
    cosine output; ``back_action_residual`` is the largest coefficient of any
    other input in the signal cosine output. The estimator variance is the
    variance of every non-signal term in the readout divided by ``gain**2``,
    normalized to the SQL variance. A vanishing gain yields
    ``estimator_variance_normalized = inf`` with ``zero_gain`` set.

    ``losses`` is a sequence of ``(port, eta)`` with ports from
    :data:`LOSS_PORTS`; input losses act before the scheme, output losses
    after it.
    """
    channel = scheme_channel(descriptor, losses)
    order = descriptor.uniform_order()
    m = channel.x_matrix[np.ix_(order, order)]
    y = channel.y_matrix[np.ix_(order, order)]

    state = input_state(descriptor, probe_state, signal_state)
    cov = state.cov[np.ix_(order, order)]

    gain = float(m[0, 1])
    back_action = float(np.max(np.abs(m[1, [0, 2, 3]])))
    noise_row = m[0].copy()
    noise_row[1] = 0.0
    noise_var = float(noise_row @ cov @ noise_row + y[0, 0])

    zero_gain = abs(gain) < _ZERO_GAIN
    if zero_gain:
        estimator = math.inf
    else:
        estimator = noise_var / gain**2 / SQL_VARIANCE
    probe_coef = abs(float(m[0, 0]))
    snr = abs(gain) / probe_coef if probe_coef > 0 else math.inf

    p, s = descriptor.probe, descriptor.signal
    quads = [f"{p}^c", f"{s}^c", f"{p}^s", f"{s}^s"]
    return SchemeReport(
        scheme=descriptor.name,
        r=descriptor.r,
        coefficient_matrix=m.tolist(),
        row_labels=[q + "_out" for q in quads],
        column_labels=[q + "_in" for q in quads],
        gain=gain,
        back_action_residual=back_action,
        signal_amplification=float(m[1, 1]),
        snr_coefficient_ratio=snr,
        estimator_variance_normalized=estimator,
        zero_gain=zero_gain,
    )


class SweepRow(NamedTuple):
    r: float
    gain: float
    signal_amplification: float
    snr_ratio: float
    estimator_variance_normalized: float


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip a double."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SweepTable:
    """Rows of a squeezing sweep plus the fitted log-slope of the SNR ratio.

    The slope is a least-squares fit of ``ln(snr_ratio)`` against ``r`` over
    the upper half of the swept range, where the asymptotic exponential
    scaling applies.
    """

    scheme: str
    rows: list[SweepRow]
    fitted_log_slope: float
    fit_window: tuple[float, float]
    header_comment: str = field(default="")

    def to_csv(self) -> str:
        lines = []
        if self.header_comment:
            lines.append(f"# {self.header_comment}")
        lines.append(CSV_HEADER)
        for row in self.rows:
            lines.append(",".join(fmt(v) for v in row))
        lo, hi = self.fit_window
        lines.append(
            f"# fitted_log_slope={fmt(self.fitted_log_slope)} window=[{fmt(lo)},{fmt(hi)}]"
        )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "rows": [row._asdict() for row in self.rows],
            "fitted_log_slope": self.fitted_log_slope,
            "fit_window": list(self.fit_window),
        }


def fit_log_slope(r: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``ln(values)`` vs ``r``, ignoring non-positive
    or infinite values. ``nan`` if fewer than two usable points."""
    pts = [(x, math.log(v)) for x, v in zip(r, values) if 0 < v < math.inf]
    if len(pts) < 2:
        return math.nan
    xs, ys = np.array(pts).T
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def sweep(
    scheme_name: str,
    r_min: float,
    r_max: float,
    steps: int,
    probe_state: GaussianState | None = None,
) -> SweepTable:
    """Analyze ``scheme_name`` on a uniform grid of ``steps`` squeezing values."""
    if not (math.isfinite(r_min) and math.isfinite(r_max)) or not r_min < r_max:
        raise ParameterError(f"sweep needs r_min < r_max, got [{r_min}, {r_max}]")
    if int(steps) != steps or steps < 2:
        raise ParameterError(f"sweep needs at least 2 steps, got {steps}")
    limit = r_limit(scheme_name)
    if max(abs(r_min), abs(r_max)) > limit:
        raise ParameterError(f"{scheme_name} admits |r| <= {limit}")

    rows = []
    for r in np.linspace(r_min, r_max, int(steps)):
        rep = analyze(SchemeDescriptor(scheme_name, float(r)), probe_state)
        rows.append(
            SweepRow(
                float(r),
                rep.gain,
                rep.signal_amplification,
                rep.snr_coefficient_ratio,
                rep.estimator_variance_normalized,
            )
        )

    mid = 0.5 * (r_min + r_max)
    upper = [row for row in rows if row.r >= mid]
    if len(upper) < 2:
        upper = rows[-2:]
    slope = fit_log_slope([row.r for row in upper], [row.snr_ratio for row in upper])
    return SweepTable(scheme_name, rows, slope, (upper[0].r, upper[-1].r))
