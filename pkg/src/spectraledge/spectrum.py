"""Deterministic signal model: the diagonal of the signal matrix and its empirical measure."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidConfigError

_SPECTRUM_TYPES = ("constant", "explicit", "uniform_sq")


@dataclass(frozen=True, eq=False)
class SpectrumModel:
    """Signal singular values d_1 >= ... >= d_M >= 0 together with the matrix dimensions.

    Immutable after construction; safe to share across threads.
    """

    d: np.ndarray
    M: int
    N: int
    config: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 1 or d.size == 0:
            raise InvalidConfigError("signal spectrum must be a non-empty 1-d array")
        if d.size != self.M:
            raise InvalidConfigError(f"len(d)={d.size} does not match M={self.M}")
        if not np.all(np.isfinite(d)):
            raise InvalidConfigError("signal spectrum contains non-finite entries")
        if np.any(d < 0):
            raise InvalidConfigError("signal singular values must be nonnegative")
        if self.M <= 0 or self.N <= 0:
            raise InvalidConfigError("M and N must be positive")
        if self.M > self.N:
            raise InvalidConfigError(f"M={self.M} exceeds N={self.N}")
        d = np.sort(d)[::-1].copy()
        d.flags.writeable = False
        object.__setattr__(self, "d", d)

    @property
    def c_N(self) -> float:
        return self.M / self.N

    @cached_property
    def d_sq(self) -> np.ndarray:
        dsq = self.d ** 2
        dsq.flags.writeable = False
        return dsq

    def empirical_measure(self):
        """Atoms and uniform weights of the empirical measure of the squared spectrum."""
        return self.d_sq, np.full(self.M, 1.0 / self.M)

    def to_config(self) -> dict:
        """Serializable spectrum spec reproducing (d, M, N) on reload."""
        if self.config is not None:
            return dict(self.config)
        return {"type": "explicit", "d": [float(x) for x in self.d], "M": self.M, "N": self.N}


def _require_number(config, key):
    value = config.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise InvalidConfigError(f"spectrum config field {key!r} must be a number")
    return float(value)


def _require_int(config, key):
    value = config.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidConfigError(f"spectrum config field {key!r} must be an integer")
    return value


def load_spectrum(config: dict) -> SpectrumModel:
    """Build a validated SpectrumModel from a spectrum-spec dictionary.

    Recognized forms (all carry integer fields M and N):
      {"type": "constant",   "d": value}
      {"type": "explicit",   "d": [values]}
      {"type": "uniform_sq", "v_min": a, "v_max": b}   with d_i^2 on the
        endpoint-inclusive grid  b - (i-1)(b-a)/(M-1).
    """
    if not isinstance(config, dict):
        raise InvalidConfigError("spectrum config must be a JSON object")
    kind = config.get("type")
    if kind not in _SPECTRUM_TYPES:
        raise InvalidConfigError(f"unknown spectrum type {kind!r}; expected one of {_SPECTRUM_TYPES}")
    M = _require_int(config, "M")
    N = _require_int(config, "N")

    if kind == "constant":
        value = _require_number(config, "d")
        if M <= 0:
            raise InvalidConfigError("M must be positive")
        d = np.full(M, value)
    elif kind == "explicit":
        entries = config.get("d")
        if not isinstance(entries, (list, tuple)) or len(entries) == 0:
            raise InvalidConfigError("explicit spectrum requires a non-empty list 'd'")
        d = np.asarray(entries, dtype=float)
        if d.size != M:
            raise InvalidConfigError(f"explicit spectrum has {d.size} entries but M={M}")
    else:
        v_min = _require_number(config, "v_min")
        v_max = _require_number(config, "v_max")
        if v_min < 0 or v_max < v_min:
            raise InvalidConfigError("uniform_sq requires 0 <= v_min <= v_max")
        if M <= 0:
            raise InvalidConfigError("M must be positive")
        if M == 1:
            dsq = np.array([v_max])
        else:
            i = np.arange(M)
            dsq = v_max - i * (v_max - v_min) / (M - 1)
        d = np.sqrt(dsq)

    return SpectrumModel(d=d, M=M, N=N, config=dict(config))


def with_size(model: SpectrumModel, N: int) -> SpectrumModel:
    """Regenerate the model at a new noise dimension N, keeping c_N and the spectral shape.

    Only generated spectra (constant, uniform_sq) can be resized; an explicit
    list has no size-free description.
    """
    if N == model.N:
        return model
    config = model.config
    if config is None or config.get("type") == "explicit":
        raise InvalidConfigError("cannot resize an explicit spectrum")
    M = round(model.c_N * N)
    new_config = dict(config)
    new_config["M"] = M
    new_config["N"] = N
    return load_spectrum(new_config)


def check_assumption3(model: SpectrumModel, edge) -> float:
    """Margin xi_r - d_1^2; positive means the edge stays separated from the spectrum."""
    return float(edge.xi_r - model.d_sq[0])
