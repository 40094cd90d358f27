"""Run configuration loaded from a flat ``key = value`` file."""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, get_type_hints

from .errors import InvalidParameter
from .model import ModelParams

MODEL_KEYS = ("mass", "charge", "field", "theta", "beta")


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunConfig:
    mass: float = 1.0
    charge: float = 1.0
    field: float = 1.0
    theta: float = 0.5
    beta: float = 1.0
    hbar: float = 1.0
    c: float = 1.0
    eps_crit: float = 1e-12
    # spectrum
    e_max: float = 5.0
    # distributions / wehrl
    n_radial: int = 64
    n_angular: int = 32
    eps_p: float = 1e-8
    tol_norm: float = 1e-6
    tol_wehrl: float = 1e-6
    # magnet sweep
    volume: float = 1.0
    particles: float = 1.0
    thermal_wavelength_beta: bool = False
    kappas: Tuple[float, ...] = ()
    fields: Tuple[float, ...] = ()
    betas: Tuple[float, ...] = ()
    tol_residual: float = 1e-5
    # kms check
    kms_cutoff: int = 40
    kms_omega_beta: float = math.log(2)
    kms_radius: float = 6.0
    kms_nodes: int = 64
    kms_pairs: int = 20
    kms_points: int = 100
    tol_resolution: float = 1e-3
    tol_isometry: float = 1e-6
    tol_unitarity: float = 1e-8
    tol_kms_norm: float = 1e-3
    # output
    format: str = "csv"
    out: Optional[str] = None
    seed: int = 0
    source: Optional[str] = dataclasses.field(default=None, compare=False)

    def model_params(self) -> ModelParams:
        return ModelParams(
            mass=self.mass, charge=self.charge, field=self.field, theta=self.theta,
            beta=self.beta, hbar=self.hbar, c=self.c,
        )

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


_CONVERTERS = {
    float: float, int: int, str: str, bool: _bool,
    Tuple[float, ...]: _floats, Optional[str]: str,
}
_TYPES = get_type_hints(RunConfig)


def parse_config(text: str, source: Optional[str] = None) -> RunConfig:
    """Parse ``key = value`` lines (``#`` comments allowed).

    Model keys mass, charge, field, theta and beta are mandatory; hbar and c
    default to 1. Unknown keys are rejected.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise InvalidParameter(f"malformed config: {exc}") from exc
    raw = dict(cp["run"])
    missing = [k for k in MODEL_KEYS if k not in raw]
    if missing:
        raise InvalidParameter(f"config is missing mandatory keys: {', '.join(missing)}")
    values = {}
    for key, text_value in raw.items():
        if key not in _TYPES or key == "source":
            raise InvalidParameter(f"unknown config key {key!r}")
        conv = _CONVERTERS[_TYPES[key]]
        try:
            values[key] = conv(text_value)
        except ValueError as exc:
            raise InvalidParameter(f"bad value for {key!r}: {exc}") from exc
    return RunConfig(source=source, **values)


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InvalidParameter(f"cannot read config {p}: {exc}") from exc
    return parse_config(text, source=str(p))
