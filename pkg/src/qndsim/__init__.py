"""Gaussian quadrature simulator for chi(2) quantum non-demolition schemes."""

__version__ = "0.1.0"

from .errors import ConfigError, ParameterError, QndSimError, RegisterError
from .gaussian import (
    GaussianState,
    HomodyneResult,
    apply,
    coherent,
    homodyne_stats,
    squeezed,
    vacuum,
)
from .metrics import SQL_VARIANCE, SchemeReport, SweepTable, analyze, sweep
from .schemes import (
    SCHEME_NAMES,
    BuiltScheme,
    IdealQndParams,
    SchemeDescriptor,
    TunedParameters,
    build_fig1,
    build_fig3,
    build_fig4,
    build_scheme,
    ideal_qnd_transform,
)
from .symplectic import (
    V_VAC,
    GaussianChannel,
    ModeRegister,
    SymplecticTransform,
    beamsplitter,
    chain,
    check_channel,
    check_symplectic,
    compose,
    dopa,
    loss_channel,
    nopa,
    symplectic_form,
)
