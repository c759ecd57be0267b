"""
Special functions behind the closed-form bound states.

Real-order modified Bessel functions and the gamma function come straight from
``scipy.special``. What scipy does not provide is built here:

* K of purely imaginary order, from the complex series of
  K_a = (pi/2) (I_{-a} - I_a) / sin(a pi) on moderate arguments and from the
  integral  K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt  elsewhere;
* Kummer's M as a vectorised series;
* the Whittaker functions M and W, the latter through the connection formula
  on small arguments and through the Laplace integral of Tricomi's U plus the
  downward recurrence in its first parameter everywhere else.

Everything accepts numpy arrays and returns a plain float for scalar input.
All functions are pure.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special
from scipy.integrate import trapezoid

from .constants import (
    INTEGER_ORDER_GAP,
    K_SERIES_MAX_ORDER,
    K_SERIES_MAX_X,
    K_SERIES_MIN_ORDER,
    K_SERIES_MIN_X,
    K_TRAPEZOID_MIN_NODES,
    K_TRAPEZOID_STEP,
    LAPLACE_STEP,
    SERIES_MAX_TERMS,
    SERIES_RTOL,
    SERIES_STREAK,
    TAIL_LOG_DROP,
    W_SERIES_MAX_AZ,
    W_SERIES_MAX_Z,
)
from .exceptions import DegenerateParameterError, PoleError, SpecialFunctionOverflow

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


class OrderKind(Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


@dataclass(frozen=True)
class BesselOrder:
    """Order of a modified Bessel function: a real a, or i*value."""

    kind: OrderKind
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"Bessel order must be finite, got {self.value!r}")
        if self.kind is OrderKind.IMAGINARY and self.value < 0:
            raise ValueError("imaginary order is stored as i*value with value >= 0")

    @classmethod
    def real(cls, value):
        return cls(OrderKind.REAL, float(value))

    @classmethod
    def imaginary(cls, value):
        return cls(OrderKind.IMAGINARY, abs(float(value)))

    @classmethod
    def from_depth(cls, u):
        """alpha = sqrt(1/4 - u); imaginary once the well is deeper than 1/4."""
        alpha_squared = 0.25 - float(u)
        if alpha_squared >= 0:
            return cls.real(math.sqrt(alpha_squared))
        return cls.imaginary(math.sqrt(-alpha_squared))

    def to_dict(self):
        return {"kind": self.kind.value, "value": self.value}


@dataclass(frozen=True)
class WhittakerParams:
    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise ValueError("Whittaker parameters must be finite")
        if self.nu < 0:
            raise ValueError(f"nu must be non-negative, got {self.nu}")

    def to_dict(self):
        return {"mu": self.mu, "nu": self.nu}


def _as_result(values):
    values = np.asarray(values)
    return values.item() if values.ndim == 0 else values


def _positive(x, name="x"):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError(f"{name} must be positive")
    return x


def _finite(values, what):
    if not np.all(np.isfinite(values)):
        raise SpecialFunctionOverflow(f"{what} left the representable range")
    return values


def _sum_series(first, ratio, weight=None):
    """Sum t_0 = first, t_{k+1} = t_k * ratio(k) elementwise.

    Optionally also sums weight(k) * t_k. Returns (total, weighted, converged).
    """
    term = np.array(first)
    total = term.copy()
    weighted = None if weight is None else weight(0) * term
    streak = np.zeros(term.shape, dtype=int)
    for k in range(SERIES_MAX_TERMS - 1):
        term = term * ratio(k)
        total = total + term
        if weight is not None:
            weighted = weighted + weight(k + 1) * term
        small = np.abs(term) <= SERIES_RTOL * np.abs(total)
        streak = np.where(small, streak + 1, 0)
        if np.all(streak >= SERIES_STREAK):
            return total, weighted, True
    return total, weighted, False


# --- gamma -------------------------------------------------------------------

def log_gamma(x):
    """ln|Gamma(x)| and the sign of Gamma(x)."""
    x = float(x)
    if x <= 0 and x.is_integer():
        raise PoleError(f"Gamma has a pole at {x:g}")
    return float(special.gammaln(x)), int(special.gammasgn(x))


# --- modified Bessel functions -----------------------------------------------

def bessel_I(order, x):
    """I_order(x) for real order."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    with np.errstate(over="ignore", invalid="ignore"):
        values = special.iv(float(order), x)
    return _as_result(_finite(values, f"I_{order}"))


def bessel_I_pair(order, x):
    """(I_order(x), dI/dx) for real order."""
    x = _positive(x)
    with np.errstate(over="ignore", invalid="ignore"):
        values = special.iv(float(order), x)
        slopes = special.ivp(float(order), x, 1)
    _finite(values, f"I_{order}")
    _finite(slopes, f"I'_{order}")
    return _as_result(values), _as_result(slopes)


def _bessel_i_series(alpha, x):
    """Complex-order I_alpha(x) and dI/dx by the ascending series."""
    half = 0.5 * x
    quarter_square = half * half
    first = np.exp(alpha * np.log(half) - special.loggamma(alpha + 1.0))
    total, weighted, converged = _sum_series(
        first.astype(complex),
        lambda m: quarter_square / ((m + 1) * (m + 1 + alpha)),
        weight=lambda m: 2 * m + alpha,
    )
    if not converged:
        logger.warning("I series of order %s did not converge in %d terms", alpha, SERIES_MAX_TERMS)
    return total, weighted / x


def bessel_k_series_complex(alpha, x):
    """The complex combination (pi/2)(I_{-a} - I_a)/sin(a pi) and its x-derivative.

    For purely imaginary alpha both are real up to rounding; callers keep the
    real parts.
    """
    x = _positive(x)
    i_plus, di_plus = _bessel_i_series(alpha, x)
    i_minus, di_minus = _bessel_i_series(-alpha, x)
    factor = 0.5 * np.pi / np.sin(alpha * np.pi)
    return factor * (i_minus - i_plus), factor * (di_minus - di_plus)


def _k_imaginary_integral(nu, x):
    """K_{i nu}(x) and dK/dx from the cosine integral, by the trapezoidal rule.

    The integrand is entire and decays double exponentially, so the rule
    converges geometrically in the step; the step shrinks like 1/sqrt(x) to
    follow the narrowing peak at large x.
    """
    extent = math.acosh(1.0 + TAIL_LOG_DROP / x)
    step = min(K_TRAPEZOID_STEP, 0.6 / math.sqrt(x), extent / K_TRAPEZOID_MIN_NODES)
    t = np.arange(0.0, extent + step, step)
    # cosh t - 1 = 2 sinh^2(t/2), exact near t = 0
    envelope = np.exp(-2.0 * x * np.sinh(0.5 * t) ** 2)
    weighted = envelope * np.cos(nu * t)
    scale = math.exp(-x)
    value = scale * trapezoid(weighted, dx=step)
    slope = -scale * trapezoid(np.cosh(t) * weighted, dx=step)
    return value, slope


def _k_imaginary(nu, x):
    values = np.empty(x.shape)
    slopes = np.empty(x.shape)
    series = (
        (x >= K_SERIES_MIN_X) & (x <= K_SERIES_MAX_X)
        & (K_SERIES_MIN_ORDER <= nu <= K_SERIES_MAX_ORDER)
    )
    if np.any(series):
        combo, slope = bessel_k_series_complex(complex(0.0, nu), x[series])
        values[series] = combo.real
        slopes[series] = slope.real
    for index in np.flatnonzero(~series):
        values.flat[index], slopes.flat[index] = _k_imaginary_integral(nu, float(x.flat[index]))
    return values, slopes


def bessel_K(order, x):
    """K_order(x), real for real and for purely imaginary order."""
    x = _positive(x)
    if order.kind is OrderKind.REAL or order.value == 0.0:
        with np.errstate(over="ignore"):
            values = special.kv(order.value, x)
    else:
        values, _ = _k_imaginary(order.value, x)
    return _as_result(_finite(values, "K"))


def bessel_K_pair(order, x):
    """(K_order(x), dK/dx)."""
    x = _positive(x)
    if order.kind is OrderKind.REAL or order.value == 0.0:
        with np.errstate(over="ignore"):
            values = special.kv(order.value, x)
            slopes = special.kvp(order.value, x, 1)
    else:
        values, slopes = _k_imaginary(order.value, x)
    _finite(values, "K")
    _finite(slopes, "K'")
    return _as_result(values), _as_result(slopes)


# --- confluent hypergeometric functions --------------------------------------

def _kummer_series(a, b, z):
    total, _, converged = _sum_series(
        np.ones(np.broadcast(a, b, z).shape),
        lambda k: (a + k) / (b + k) * z / (k + 1),
    )
    if not converged:
        logger.warning("Kummer series did not converge in %d terms", SERIES_MAX_TERMS)
    return total


def kummer_M(a, b, z):
    """Kummer's confluent hypergeometric function 1F1(a; b; z)."""
    a, b, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, z)))
    if np.any((b <= 0) & (b == np.round(b))):
        raise PoleError("1F1 has a pole when b is a non-positive integer")
    negative = z < 0
    # Kummer's transformation keeps the summed series free of alternation.
    a_eff = np.where(negative, b - a, a)
    z_eff = np.abs(z)
    values = _kummer_series(a_eff, b, z_eff)
    values = np.where(negative, np.exp(z) * values, values)
    return _as_result(_finite(values, "1F1"))


def whittaker_M(params, z):
    """M_{mu,nu}(z) = z^(nu+1/2) e^(-z/2) 1F1(1/2+nu-mu; 1+2nu; z)."""
    z = _positive(z, "z")
    mu, nu = params.mu, params.nu
    values = z ** (nu + 0.5) * np.exp(-0.5 * z) * kummer_M(0.5 + nu - mu, 1.0 + 2.0 * nu, z)
    return _as_result(values)


def _whittaker_connection(mu, nu, z):
    """W_{mu,nu}(z) from M_{mu,+-nu}; valid away from integer 2 nu."""
    a = 0.5 + nu - mu
    a_reflected = 0.5 - nu - mu
    growing = (
        special.gamma(-2.0 * nu) * special.rgamma(a_reflected)
        * z ** (nu + 0.5) * _kummer_series(a, 1.0 + 2.0 * nu, z)
    )
    decaying = (
        special.gamma(2.0 * nu) * special.rgamma(a)
        * z ** (0.5 - nu) * _kummer_series(a_reflected, 1.0 - 2.0 * nu, z)
    )
    return np.exp(-0.5 * z) * (growing + decaying)


def _log_u_integral(c, b, z):
    """ln U(c, b, z) for c >= 1 from U = (1/Gamma(c)) int_0^inf e^{-zt} t^{c-1} (1+t)^{b-c-1} dt.

    With t = e^s the integrand decays exponentially to the left and double
    exponentially to the right and is analytic in a strip, so the
    trapezoidal rule on s converges geometrically.
    """
    p = b - c - 1.0
    q = c + max(p, 0.0)
    anchor = min(math.log(c / z), 0.0)
    s_lo = anchor - (TAIL_LOG_DROP + c + 2.0 * abs(p) * LN2) / c
    s_hi = math.log((q + 60.0) / z) + 2.0
    s = np.arange(s_lo, s_hi + LAPLACE_STEP, LAPLACE_STEP)
    grow = np.exp(s)
    exponent = c * s - z * grow + p * np.log1p(grow)
    peak = exponent.max()
    integral = trapezoid(np.exp(exponent - peak), dx=LAPLACE_STEP)
    return peak + math.log(integral) - special.gammaln(c)


def _whittaker_laplace(mu, nu, z):
    """W_{mu,nu}(z) and W_{mu+1,nu}(z) through Tricomi's U.

    W_{mu,nu}(z) = e^{-z/2} z^{nu+1/2} U(a, b, z), a = 1/2+nu-mu, b = 1+2nu.
    U is evaluated by quadrature at first parameters a-1+n, a+n >= 1 and
    carried down with U(c-1) = -(b-2c-z) U(c) - c(c-b+1) U(c+1), the
    direction in which U is the dominant solution.
    """
    a = 0.5 + nu - mu
    b = 1.0 + 2.0 * nu
    shift = max(0, math.ceil(2.0 - a))
    c = a - 1.0 + shift
    log_scale = _log_u_integral(c, b, z)
    lower = 1.0
    upper = math.exp(_log_u_integral(c + 1.0, b, z) - log_scale)
    for _ in range(shift):
        lower, upper = -(b - 2.0 * c - z) * lower - c * (c - b + 1.0) * upper, lower
        c -= 1.0
        size = abs(lower)
        if size > 1e100 or 0.0 < size < 1e-100:
            lower /= size
            upper /= size
            log_scale += math.log(size)
    log_prefactor = -0.5 * z + (nu + 0.5) * math.log(z) + log_scale
    values = []
    for u_value in (upper, lower):
        if u_value == 0.0:
            values.append(0.0)
        else:
            values.append(math.copysign(math.exp(log_prefactor + math.log(abs(u_value))), u_value))
    if not all(math.isfinite(v) for v in values):
        raise DegenerateParameterError(
            f"Whittaker W failed at mu={mu:.6g}, nu={nu:.6g}, z={z:.6g}"
        )
    return values[0], values[1]


def _whittaker_values(mu, nu, z):
    """Arrays W_{mu,nu}(z), W_{mu+1,nu}(z) for array mu and z, scalar nu."""
    mu, z = np.broadcast_arrays(np.asarray(mu, dtype=float), _positive(z, "z"))
    nu = float(nu)
    near_integer = abs(2.0 * nu - round(2.0 * nu)) < INTEGER_ORDER_GAP
    if near_integer:
        series = np.zeros(mu.shape, dtype=bool)
    else:
        series = (z <= W_SERIES_MAX_Z) & (z * (np.abs(mu) + nu + 1.0) <= W_SERIES_MAX_AZ)
    values = np.empty(mu.shape)
    shifted = np.empty(mu.shape)
    if np.any(series):
        with np.errstate(over="ignore", invalid="ignore"):
            values[series] = _whittaker_connection(mu[series], nu, z[series])
            shifted[series] = _whittaker_connection(mu[series] + 1.0, nu, z[series])
    for index in np.flatnonzero(~series):
        values.flat[index], shifted.flat[index] = _whittaker_laplace(
            float(mu.flat[index]), nu, float(z.flat[index])
        )
    _finite(values, "Whittaker W")
    _finite(shifted, "Whittaker W")
    return values, shifted


def whittaker_w_pair(mu, nu, z):
    """W_{mu,nu}(z) and dW/dz, vectorised over mu and z.

    The derivative uses z W' = (z/2 - mu) W - W_{mu+1,nu}.
    """
    values, shifted = _whittaker_values(mu, nu, z)
    mu, z = np.broadcast_arrays(np.asarray(mu, dtype=float), np.asarray(z, dtype=float))
    slopes = ((0.5 * z - mu) * values - shifted) / z
    return _as_result(values), _as_result(slopes)


def whittaker_W(params, z):
    """Whittaker function of the second kind, decaying like e^{-z/2} z^mu."""
    values, _ = _whittaker_values(params.mu, params.nu, z)
    return _as_result(values)


def whittaker_W_dz(params, z):
    return whittaker_w_pair(params.mu, params.nu, z)[1]
