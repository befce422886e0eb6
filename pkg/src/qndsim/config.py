"""
YAML scheme configuration.

Example document::

    scheme: fig3_nopa
    r: 1.0
    probe_state: vacuum
    signal_state: {kind: coherent, alpha_c: 3.0, alpha_s: 0.0}
    losses:
      - {port: probe_out, eta: 0.9}
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import yaml

from .errors import ConfigError
from .gaussian import GaussianState, coherent, vacuum
from .metrics import LOSS_PORTS
from .schemes import SCHEME_NAMES, r_limit
from .symplectic import ModeRegister

_KEYS = {"scheme", "r", "probe_state", "signal_state", "losses"}


@dataclass(frozen=True)
class StateSpec:
    kind: str = "vacuum"
    alpha_c: float = 0.0
    alpha_s: float = 0.0

    def to_state(self, label: str = "m") -> GaussianState:
        reg = ModeRegister.of(label)
        if self.kind == "vacuum":
            return vacuum(reg)
        return coherent(reg, label, self.alpha_c, self.alpha_s)

    def to_yaml(self):
        if self.kind == "vacuum":
            return "vacuum"
        return {"kind": self.kind, "alpha_c": self.alpha_c, "alpha_s": self.alpha_s}


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str
    r: float
    probe_state: StateSpec = StateSpec()
    signal_state: StateSpec = StateSpec()
    losses: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if self.scheme not in SCHEME_NAMES:
            raise ConfigError(
                f"field 'scheme': unknown scheme {self.scheme!r}; "
                f"valid schemes: {', '.join(SCHEME_NAMES)}"
            )
        limit = r_limit(self.scheme)
        if not math.isfinite(self.r) or abs(self.r) > limit:
            raise ConfigError(f"field 'r': {self.r} outside [-{limit}, {limit}] for {self.scheme}")
        for k, (port, eta) in enumerate(self.losses):
            if port not in LOSS_PORTS:
                raise ConfigError(
                    f"field 'losses[{k}].port': {port!r} not in {', '.join(LOSS_PORTS)}"
                )
            if not 0.0 <= eta <= 1.0:
                raise ConfigError(f"field 'losses[{k}].eta': {eta} outside [0, 1]")

    def to_mapping(self) -> dict:
        doc = {
            "scheme": self.scheme,
            "r": self.r,
            "probe_state": self.probe_state.to_yaml(),
            "signal_state": self.signal_state.to_yaml(),
        }
        if self.losses:
            doc["losses"] = [{"port": p, "eta": eta} for p, eta in self.losses]
        return doc

    def dump(self) -> str:
        return yaml.safe_dump(self.to_mapping(), sort_keys=False)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{where}': expected a number, got {value!r}")
    return float(value)


def _state(value, where: str) -> StateSpec:
    if value is None or value == "vacuum":
        return StateSpec()
    if isinstance(value, dict):
        kind = value.get("kind", "coherent")
        if kind == "vacuum":
            return StateSpec()
        if kind != "coherent":
            raise ConfigError(f"field '{where}.kind': expected vacuum or coherent, got {kind!r}")
        unknown = set(value) - {"kind", "alpha_c", "alpha_s"}
        if unknown:
            raise ConfigError(f"field '{where}': unknown keys {sorted(unknown)}")
        return StateSpec(
            "coherent",
            _number(value.get("alpha_c", 0.0), f"{where}.alpha_c"),
            _number(value.get("alpha_s", 0.0), f"{where}.alpha_s"),
        )
    raise ConfigError(f"field '{where}': expected 'vacuum' or a coherent mapping, got {value!r}")


def from_mapping(doc) -> SchemeConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)}; allowed: {sorted(_KEYS)}")
    for key in ("scheme", "r"):
        if key not in doc:
            raise ConfigError(f"field '{key}' is required")
    losses = []
    raw_losses = doc.get("losses") or []
    if not isinstance(raw_losses, list):
        raise ConfigError("field 'losses': expected a list")
    for k, item in enumerate(raw_losses):
        if not isinstance(item, dict) or set(item) != {"port", "eta"}:
            raise ConfigError(f"field 'losses[{k}]': expected {{port: ..., eta: ...}}")
        losses.append((str(item["port"]), _number(item["eta"], f"losses[{k}].eta")))
    return SchemeConfig(
        scheme=str(doc["scheme"]),
        r=_number(doc["r"], "r"),
        probe_state=_state(doc.get("probe_state"), "probe_state"),
        signal_state=_state(doc.get("signal_state"), "signal_state"),
        losses=tuple(losses),
    )


def loads(text: str) -> SchemeConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"YAML parse error{where}: {exc}") from None
    return from_mapping(doc)


def load(path: str) -> SchemeConfig:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
