"""Exponential Carleman weight families theta = exp(lambda * alpha).

Given a spatial weight psi, parameters lambda, mu > 0 and a level constant
d > sup psi, the family on a time window (t_a, t_b) is

    varphi = e^{s mu psi} / ((t - t_a)(t_b - t)),
    alpha  = (e^{s mu psi} - e^{mu d}) / ((t - t_a)(t_b - t)),
    theta  = e^{lambda alpha},

with sign s = +1 (normal family) or s = -1 (hat family; it coincides with
the normal one wherever psi = 0, in particular on Gamma_1).  alpha < 0 on
the open window, so theta is in (0, 1) and vanishes to all orders at the
window endpoints; evaluation at the endpoints themselves is refused.

theta underflows for the lambda ladders used in the estimates, so users
needing magnitudes work with ``log_theta``; all time derivatives are
closed-form (the rational factor is differentiated analytically).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError, PreconditionError, SingularTimeError
from .fields import SpaceTimeField

Array = np.ndarray


@dataclass(frozen=True)
class CarlemanParams:
    """User-facing parameter bundle (lambda, mu, d, epsilon)."""

    lam: float
    mu: float
    d: float
    epsilon: float = 0.1

    def __post_init__(self):
        if self.lam <= 0 or self.mu <= 0:
            raise ConfigError("lambda and mu must be positive")
        if not 0.0 < self.epsilon <= 1.0:
            raise ConfigError("epsilon must lie in (0, 1]")


@dataclass(frozen=True)
class SlabPartition:
    """Uniform partition t_l = l T / L of (0, T)."""

    L: int
    T: float

    def __post_init__(self):
        if self.L < 1:
            raise ConfigError("slab count L must be >= 1")
        if self.T <= 0:
            raise ConfigError("T must be positive")

    @property
    def edges(self) -> Array:
        return np.linspace(0.0, self.T, self.L + 1)

    def window(self, ell: int) -> Tuple[float, float]:
        if not 0 <= ell < self.L:
            raise PreconditionError(f"slab index {ell} outside 0..{self.L - 1}")
        e = self.edges
        return float(e[ell]), float(e[ell + 1])


def default_level_constant(sup_phi: float, sup_phi_tilde: float) -> float:
    """d = |phi|_inf + |phi_tilde|_inf with a 1e-9 relative strictness margin."""
    s = float(sup_phi) + float(sup_phi_tilde)
    return s * (1.0 + 1e-9) + 1e-300


@dataclass(frozen=True)
class ThetaFamily:
    """One weight family (psi, lambda, mu, d) on a time window."""

    psi: SpaceTimeField
    lam: float
    mu: float
    d: float
    window: Tuple[float, float]
    sign: int = +1

    def __post_init__(self):
        if self.lam < 0 or self.mu < 0:
            raise ConfigError("lambda and mu must be nonnegative")
        ta, tb = self.window
        if not tb > ta:
            raise ConfigError("empty time window")
        if self.sign not in (+1, -1):
            raise ConfigError("sign must be +1 or -1")

    # -- time factor --------------------------------------------------------

    def _guard(self, t: float) -> None:
        ta, tb = self.window
        if not ta < t < tb:
            raise SingularTimeError(
                f"t={t} outside the open window ({ta}, {tb}); the weight is singular there"
            )

    def _s(self, t: float) -> float:
        ta, tb = self.window
        return 1.0 / ((t - ta) * (tb - t))

    def _s_logderivs(self, t: float) -> Tuple[float, float]:
        ta, tb = self.window
        u1 = -1.0 / (t - ta) + 1.0 / (tb - t)
        u2 = 1.0 / (t - ta) ** 2 + 1.0 / (tb - t) ** 2
        return u1, u2

    # -- fields --------------------------------------------------------------

    def _e(self, t: float, x) -> Array:
        return np.exp(self.sign * self.mu * self.psi.value(t, x))

    def varphi(self, t: float, x) -> Array:
        self._guard(t)
        return self._e(t, x) * self._s(t)

    def alpha(self, t: float, x) -> Array:
        self._guard(t)
        return (self._e(t, x) - np.exp(self.mu * self.d)) * self._s(t)

    def log_theta(self, t: float, x) -> Array:
        return self.lam * self.alpha(t, x)

    def theta(self, t: float, x) -> Array:
        # underflows to 0.0 for strongly negative lambda*alpha; callers that
        # need magnitudes use log_theta.
        with np.errstate(under="ignore"):
            return np.exp(self.log_theta(t, x))

    def varphi_t(self, t: float, x) -> Array:
        self._guard(t)
        s = self._s(t)
        u1, _ = self._s_logderivs(t)
        e = self._e(t, x)
        psi_t = self.psi.dt(t, x)
        return e * s * (self.sign * self.mu * psi_t + u1)

    def alpha_t(self, t: float, x) -> Array:
        self._guard(t)
        s = self._s(t)
        u1, _ = self._s_logderivs(t)
        e = self._e(t, x)
        psi_t = self.psi.dt(t, x)
        return self.sign * self.mu * psi_t * e * s + (
            e - np.exp(self.mu * self.d)
        ) * s * u1

    def alpha_tt(self, t: float, x) -> Array:
        # psi_tt is taken as zero (the identity catalog uses weights whose
        # time dependence, if any, does not enter second time derivatives).
        self._guard(t)
        s = self._s(t)
        u1, u2 = self._s_logderivs(t)
        e = self._e(t, x)
        psi_t = self.psi.dt(t, x)
        smu = self.sign * self.mu
        sp = s * u1
        spp = s * (u1 * u1 + u2)
        return (
            (smu * psi_t) ** 2 * e * s
            + 2.0 * smu * psi_t * e * sp
            + (e - np.exp(self.mu * self.d)) * spp
        )

    # -- diagnostics ---------------------------------------------------------

    def check_level_constant(self, times, x) -> None:
        """Verify d > sup psi on the given samples (precondition of the family)."""
        sup = -np.inf
        for t in np.atleast_1d(times):
            sup = max(sup, float(np.max(self.psi.value(float(t), x))))
        if not self.d > sup:
            raise PreconditionError(
                f"level constant d={self.d} is not strictly above sup psi={sup}"
            )


def theta_family(
    params: CarlemanParams,
    psi: SpaceTimeField,
    window: Tuple[float, float],
    sign: int = +1,
    check_points: Optional[Array] = None,
    check_times: Optional[Array] = None,
) -> ThetaFamily:
    """Build a family from user parameters, verifying d > sup psi when
    sample points are supplied."""
    fam = ThetaFamily(psi, params.lam, params.mu, params.d, window, sign)
    if check_points is not None:
        ta, tb = window
        if check_times is None:
            check_times = np.linspace(ta + 0.05 * (tb - ta), tb - 0.05 * (tb - ta), 7)
        fam.check_level_constant(check_times, check_points)
    return fam
