"""Scalar prescribed-time decay models.

Three model kinds over a regulator C(t):

    lemma2: dV/dt = -delta * V / C(t)
    power:  dV/dt = -delta * V**p / C(t)
    lemma3: dV/dt = delta1 * V**p - delta2 * V / C(t)

Each admits a closed-form solution (exact up to quadrature of the
regulator integral), a shrinking-step RK4 simulation, and - for power
regulators - an analytic classification of the limit of V(s)/C(s) as
s -> T, which decides whether the terminal slope of V is infinite, a
nonzero constant, or zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .errors import (
    BlowupError,
    InvalidParametersError,
    NonFiniteStateError,
    StepUnderflowError,
    TimeOutOfRangeError,
    UnsupportedRegulatorError,
)
from .regulator import Divergence, Regulator

__all__ = [
    "ScalarModel",
    "PhiValue",
    "PhiClass",
    "ScalarTrajectory",
    "closed_form",
    "simulate_scalar",
    "classify_phi",
]

_MODEL_KINDS = ("lemma2", "power", "lemma3")
_KIND_CODES = {
    "lemma2": _kernels.SCALAR_LEMMA2,
    "power": _kernels.SCALAR_POWER,
    "lemma3": _kernels.SCALAR_LEMMA3,
}
_REG_CODES = {"power": _kernels.REG_POWER, "exp_a": _kernels.REG_EXP_A, "exp_b": _kernels.REG_EXP_B}

BLOWUP_LIMIT = 1e12


class PhiValue(enum.Enum):
    INFINITE = "infinite"
    NONZERO_CONSTANT = "nonzero_constant"
    ZERO = "zero"


@dataclass(frozen=True)
class PhiClass:
    """Limit class of V(s)/C(s) as s -> T; equals the terminal slope class."""

    value: PhiValue
    constant: float | None = None

    def __post_init__(self):
        if self.value is PhiValue.NONZERO_CONSTANT and not self.constant:
            raise InvalidParametersError("nonzero-constant class needs a nonzero constant")


@dataclass(frozen=True)
class ScalarModel:
    kind: str
    regulator: Regulator
    v0: float
    delta: float = 1.0
    delta1: float = 0.0
    delta2: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        if self.kind not in _MODEL_KINDS:
            raise InvalidParametersError(f"unknown scalar model kind {self.kind!r}")
        if not (self.v0 >= 0 and math.isfinite(self.v0)):
            raise InvalidParametersError("v0 must be finite and nonnegative")
        if not (self.delta > 0 and self.delta2 > 0 and self.delta1 >= 0 and self.p > 0):
            raise InvalidParametersError("need delta > 0, delta2 > 0, delta1 >= 0, p > 0")
        if self.kind == "lemma3" and self.p == 1.0:
            # The p = 1 reduction folds delta1 into an effective regulator,
            # which stays positive only under this margin.
            if not self.delta2 > self.delta1 * self.regulator.c0:
                raise InvalidParametersError(
                    "lemma3 with p = 1 needs delta2 > delta1 * C(0)"
                )


@dataclass(frozen=True)
class ScalarTrajectory:
    times: np.ndarray
    values: np.ndarray


def closed_form(m: ScalarModel, s: float) -> float:
    """Exact V(s), using adaptive quadrature for the regulator integrals.

    Raises BlowupError for lemma3 with p > 1 when the solution escapes in
    finite time before s.
    """
    s = float(s)
    if not (0.0 <= s < m.regulator.T):
        raise TimeOutOfRangeError(f"s = {s} outside [0, {m.regulator.T})")
    if m.v0 == 0.0:
        return 0.0
    if s == 0.0:
        return float(m.v0)

    integral = m.regulator.integral_to(s)

    if m.kind == "lemma2" or (m.kind == "power" and m.p == 1.0):
        return float(m.v0 * math.exp(-m.delta * integral))

    if m.kind == "power":
        base = m.v0 ** (1.0 - m.p) + (m.p - 1.0) * m.delta * integral
        if m.p < 1.0:
            if base <= 0.0:
                return 0.0
            return float(base ** (1.0 / (1.0 - m.p)))
        return float(base ** (1.0 / (1.0 - m.p)))

    # lemma3
    if m.p == 1.0:
        return float(m.v0 * math.exp(m.delta1 * s - m.delta2 * integral))

    q = 1.0 - m.p

    def inner(t):
        return q * m.delta1 * math.exp(q * m.delta2 * m.regulator.integral_to(t))

    outer, _ = quad(inner, 0.0, s, epsabs=0.0, epsrel=1e-8, limit=400)
    bracket = outer + m.v0**q
    if m.p > 1.0 and bracket <= 0.0:
        raise BlowupError(f"finite-time escape before s = {s}")
    if m.p < 1.0 and bracket <= 0.0:
        return 0.0
    return float(math.exp(-m.delta2 * integral) * bracket ** (1.0 / q))


def _sample_times(T: float, stop_gap: float, samples: int) -> np.ndarray:
    """Sample instants accumulating geometrically toward T.

    Gaps T - t shrink geometrically from T (t = 0) to stop_gap."""
    if samples < 2:
        raise InvalidParametersError("samples must be >= 2")
    gaps = np.geomspace(T, stop_gap, samples)
    times = T - gaps
    times[0] = 0.0
    times[-1] = T - stop_gap
    return times


def simulate_scalar(
    m: ScalarModel,
    stop_gap: float,
    samples: int,
    *,
    step_cap: float | None = None,
    shrink_factor: float = 0.05,
    gain_cap: float = 0.025,
) -> ScalarTrajectory:
    """Shrinking-step RK4 solution on [0, T - stop_gap].

    gain_cap bounds h * (decay rate) / C(t); the default 0.025 keeps the
    accumulated relative error of the exponential decay below ~1e-5 even
    for strongly singular regulators.
    """
    T = m.regulator.T
    if not (0.0 < stop_gap < T):
        raise InvalidParametersError("need 0 < stop_gap < T")
    if not (0.0 < shrink_factor < 1.0):
        raise InvalidParametersError("shrink_factor must lie in (0, 1)")
    if step_cap is None:
        step_cap = 1e-3 * T

    if m.kind == "lemma2":
        rate = m.delta
    elif m.kind == "power":
        rate = m.delta * max(1.0, m.p)
    else:
        rate = m.delta2

    ts = _sample_times(T, stop_gap, samples)
    status, filled, values = _kernels.scalar_rk4(
        _KIND_CODES[m.kind], m.delta, m.delta1, m.delta2, m.p, float(m.v0),
        _REG_CODES[m.regulator.kind], T, m.regulator.ell, m.regulator.a,
        ts, float(step_cap), float(shrink_factor), float(gain_cap), float(rate),
        BLOWUP_LIMIT,
    )
    if status == _kernels.BLOWUP:
        raise BlowupError(
            "scalar state exceeded the blow-up threshold",
            partial=ScalarTrajectory(ts[:filled], values[:filled]),
        )
    if status == _kernels.STEP_UNDERFLOW:
        raise StepUnderflowError(
            "step size underflow",
            partial=ScalarTrajectory(ts[:filled], values[:filled]),
        )
    if status == _kernels.NONFINITE:
        raise NonFiniteStateError("non-finite scalar state")
    return ScalarTrajectory(ts, values)


def classify_phi(m: ScalarModel) -> PhiClass:
    """Analytic class of lim V(s)/C(s) as s -> T.

    Defined for lemma2 and lemma3 models over power regulators only; the
    exponential regulator kinds raise UnsupportedRegulatorError because no
    terminal-slope classification is available for them.
    """
    if m.regulator.kind != "power":
        raise UnsupportedRegulatorError(
            "terminal-slope classification is defined for power regulators only"
        )
    if m.kind == "power":
        raise InvalidParametersError("classification applies to lemma2 and lemma3 models")
    if m.v0 == 0.0:
        return PhiClass(PhiValue.ZERO)

    if m.kind == "lemma3":
        if m.regulator.classify_divergence() is not Divergence.DIVERGES:
            raise InvalidParametersError("lemma3 classification needs a divergent regulator")
        return PhiClass(PhiValue.ZERO)

    # lemma2
    ell, delta, T = m.regulator.ell, m.delta, m.regulator.T
    if ell > 1.0:
        return PhiClass(PhiValue.ZERO)
    if ell < 1.0:
        raise InvalidParametersError("lemma2 classification needs ell >= 1")
    if delta < 1.0:
        return PhiClass(PhiValue.INFINITE)
    if delta == 1.0:
        return PhiClass(PhiValue.NONZERO_CONSTANT, constant=float(m.v0 / T**delta))
    return PhiClass(PhiValue.ZERO)
