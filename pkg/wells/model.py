"""
The potential family and its reduction to Bessel or Whittaker equations.

Lengths are measured in units of the well width d and energies in units of
hbar^2/(2 m d^2), so the Schroedinger equation reads

    psi''(x) = (V(|x|) + kappa^2) psi(x),        E = -kappa^2.

With t = |x| the three classes are

    p = 0   V = -u / (1+t)^2                 steep well
    p = 1   V = -u t / (1+t)^2               double well
    p = 2   V = -u (1 - t^2/(1+t)^2)         shallow well, shifted so V(0) = -u

and the optional Loudon term adds -u1 t^q / (1+t), q in {0, 1}.

Writing every term as a combination of 1, 1/(1+t) and 1/(1+t)^2 and
substituting xi = 2 kappa' (1+t) turns the half-axis equation into
Whittaker's equation W'' + (-1/4 + mu/xi + (1/4 - nu^2)/xi^2) W = 0 with

    kappa'^2 = kappa^2 - u1 [q=1]
    mu       = (coefficient of 1/(1+t) in -V) / (2 kappa')
    nu^2     = 1/4 - (coefficient of 1/(1+t)^2 in -V)

The pure steep well has no 1/(1+t) term and is handled through Bessel
functions instead: psi = sqrt(xi) K_alpha(xi), xi = kappa (1+t),
alpha^2 = 1/4 - u.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import optimize

from .exceptions import DomainError
from .specfun import BesselOrder, WhittakerParams, bessel_K_pair, whittaker_w_pair

logger = logging.getLogger(__name__)

WELL_CLASSES = (0, 1, 2)
WELL_NAMES = {0: "steep", 1: "double", 2: "shallow"}


@dataclass(frozen=True)
class LoudonTerm:
    """The extra -u1 t^q / (1+t) term."""

    u1: float
    q: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.u1) and self.u1 >= 0):
            raise DomainError(f"u1 must be finite and non-negative, got {self.u1!r}")
        if self.q not in (0, 1):
            raise DomainError(f"q must be 0 or 1, got {self.q!r}")


@dataclass(frozen=True)
class WellSpec:
    class_p: int
    u: float
    extension: Optional[LoudonTerm] = None

    def __post_init__(self):
        if self.class_p not in WELL_CLASSES:
            raise DomainError(f"unsupported potential class {self.class_p!r}; expected 0, 1 or 2")
        if not (math.isfinite(self.u) and self.u > 0):
            raise DomainError(f"depth u must be finite and positive, got {self.u!r}")
        if self.extension is not None and self.class_p == 0 and self.extension.u1 > 0 and self.u > 0.25:
            # nu^2 = 1/4 - u turns negative: the combined problem has no real Whittaker order
            raise DomainError("the steep well with a Loudon term needs u <= 1/4")

    @property
    def has_extension(self):
        return self.extension is not None and self.extension.u1 > 0

    @property
    def threshold(self):
        """Continuum edge: the limit of V at infinity."""
        if self.has_extension and self.extension.q == 1:
            return -self.extension.u1
        return 0.0

    @property
    def depth_bound(self):
        """sqrt(-min V); no kappa can reach it."""
        if not self.has_extension:
            if self.class_p == 1:
                return math.sqrt(self.u) / 2.0
            return math.sqrt(self.u)
        return math.sqrt(-_potential_minimum(self))

    @property
    def decay_bound(self):
        """Upper limit of the decay constant kappa' = sqrt(kappa^2 + threshold)."""
        return math.sqrt(self.depth_bound ** 2 + self.threshold)

    @property
    def reference(self):
        return "shifted" if self.class_p == 2 else "asymptotic"

    def to_dict(self):
        record = {
            "class": self.class_p,
            "name": WELL_NAMES[self.class_p],
            "u": self.u,
            "reference": self.reference,
        }
        if self.extension is not None:
            record["u1"] = self.extension.u1
            record["q"] = self.extension.q
        return record


def potential_value(spec, t):
    """Dimensionless V at t = |x|/d. Accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t = |x|/d must be non-negative")
    inverse = 1.0 / (1.0 + t)
    if spec.class_p == 0:
        values = -spec.u * inverse ** 2
    elif spec.class_p == 1:
        values = -spec.u * t * inverse ** 2
    else:
        # 1 - t^2/(1+t)^2 = (1+2t)/(1+t)^2, which keeps full precision at large t
        values = -spec.u * (1.0 + 2.0 * t) * inverse ** 2
    if spec.extension is not None:
        values = values - spec.extension.u1 * t ** spec.extension.q * inverse
    values = np.asarray(values)
    return values.item() if values.ndim == 0 else values


def _potential_minimum(spec):
    """Minimum of V over t >= 0, including the limit at infinity."""
    s = np.linspace(0.0, 25.0, 5001)
    t = np.expm1(s)
    values = potential_value(spec, t)
    best = int(np.argmin(values))
    candidate = min(float(values[best]), spec.threshold)
    if 0 < best < len(s) - 1:
        found = optimize.minimize_scalar(
            lambda v: potential_value(spec, math.expm1(v)),
            bounds=(s[best - 1], s[best + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        candidate = min(candidate, float(found.fun))
    return candidate


class ProblemKind(Enum):
    BESSEL = "bessel"
    WHITTAKER = "whittaker"


@dataclass(frozen=True)
class ReducedProblem:
    """The named ODE the half-axis wavefunction satisfies.

    xi = scale * decay_kappa_d * (1 + t): scale 1 for Bessel, 2 for Whittaker.
    """

    kind: ProblemKind
    scale: float
    decay_kappa_d: float
    bessel_order: Optional[BesselOrder] = None
    whittaker: Optional[WhittakerParams] = None

    def __post_init__(self):
        if (self.kind is ProblemKind.BESSEL) != (self.bessel_order is not None):
            raise ValueError("a Bessel problem carries exactly a Bessel order")
        if (self.kind is ProblemKind.WHITTAKER) != (self.whittaker is not None):
            raise ValueError("a Whittaker problem carries exactly Whittaker parameters")

    def argument(self, t):
        return self.scale * self.decay_kappa_d * (1.0 + np.asarray(t, dtype=float))

    def solution(self, t):
        """Half-axis wavefunction and its t-derivative, unnormalised."""
        xi = self.argument(t)
        rate = self.scale * self.decay_kappa_d
        if self.kind is ProblemKind.BESSEL:
            k, dk = bessel_K_pair(self.bessel_order, xi)
            root = np.sqrt(xi)
            psi = root * k
            dpsi = rate * (0.5 * k / root + root * dk)
        else:
            psi, dw = whittaker_w_pair(self.whittaker.mu, self.whittaker.nu, xi)
            dpsi = rate * np.asarray(dw)
        psi = np.asarray(psi)
        dpsi = np.asarray(dpsi)
        if psi.ndim == 0:
            return psi.item(), dpsi.item()
        return psi, dpsi

    def to_dict(self):
        record = {"kind": self.kind.value, "scale": self.scale, "decay_kappa_d": self.decay_kappa_d}
        if self.bessel_order is not None:
            record["bessel_order"] = self.bessel_order.to_dict()
        if self.whittaker is not None:
            record["whittaker"] = self.whittaker.to_dict()
        return record


def uses_bessel(spec):
    return spec.class_p == 0 and not spec.has_extension


def whittaker_order(spec):
    """nu = sqrt(1/4 + u) for p = 1, 2 and sqrt(1/4 - u) for p = 0."""
    if spec.class_p == 0:
        nu_squared = 0.25 - spec.u
        if nu_squared < 0:
            raise DomainError(f"u = {spec.u:g} > 1/4 gives an imaginary Whittaker order")
        return math.sqrt(nu_squared)
    return math.sqrt(0.25 + spec.u)


def decay_constant(spec, kappa_d):
    """kappa' = sqrt(kappa^2 + threshold), the rate psi decays at."""
    kappa_d = np.asarray(kappa_d, dtype=float)
    decay_squared = kappa_d ** 2 + spec.threshold
    if np.any(decay_squared <= 0):
        raise DomainError("kappa_d lies at or above the continuum edge; no real decay constant")
    values = np.sqrt(decay_squared)
    return values.item() if values.ndim == 0 else values


def mu_from_decay(spec, decay):
    """Whittaker mu as a function of the decay constant kappa'. Vectorised."""
    decay = np.asarray(decay, dtype=float)
    if spec.class_p == 0:
        mu = np.zeros_like(decay)
    elif spec.class_p == 1:
        mu = spec.u / (2.0 * decay)
    else:
        mu = spec.u / decay
    if spec.extension is not None and spec.extension.u1 > 0:
        u1 = spec.extension.u1
        # t/(1+t) = 1 - 1/(1+t): the constant moved into kappa', the rest repels
        mu = mu + (u1 if spec.extension.q == 0 else -u1) / (2.0 * decay)
    return mu.item() if mu.ndim == 0 else mu


def whittaker_parameters(spec, kappa_d):
    """(mu, nu) of the Whittaker reduction; mu is vectorised over kappa_d."""
    if uses_bessel(spec):
        raise DomainError("the steep well without a Loudon term reduces to Bessel's equation")
    return mu_from_decay(spec, decay_constant(spec, kappa_d)), whittaker_order(spec)


def reduce(spec, kappa_d):
    """Reduced problem for the three base classes."""
    if spec.extension is not None:
        raise DomainError("spec carries a Loudon term; use reduce_extended")
    if not kappa_d > 0:
        raise DomainError(f"kappa_d must be positive, got {kappa_d!r}")
    if spec.class_p == 0:
        return ReducedProblem(
            kind=ProblemKind.BESSEL,
            scale=1.0,
            decay_kappa_d=float(kappa_d),
            bessel_order=BesselOrder.from_depth(spec.u),
        )
    mu, nu = whittaker_parameters(spec, kappa_d)
    return ReducedProblem(
        kind=ProblemKind.WHITTAKER,
        scale=2.0,
        decay_kappa_d=float(kappa_d),
        whittaker=WhittakerParams(mu=float(mu), nu=nu),
    )


def reduce_extended(spec, kappa_d):
    """Reduced problem for a well carrying the Loudon term.

    A vanishing u1 falls back to :func:`reduce` on the bare class.
    """
    if spec.extension is None:
        raise DomainError("spec carries no Loudon term; use reduce")
    if not kappa_d > 0:
        raise DomainError(f"kappa_d must be positive, got {kappa_d!r}")
    if spec.extension.u1 == 0:
        return reduce(WellSpec(spec.class_p, spec.u), kappa_d)
    decay = decay_constant(spec, kappa_d)
    mu, nu = whittaker_parameters(spec, kappa_d)
    logger.debug("extended reduction p=%d u=%g u1=%g q=%d: kappa'=%g mu=%g nu=%g",
                 spec.class_p, spec.u, spec.extension.u1, spec.extension.q, decay, mu, nu)
    return ReducedProblem(
        kind=ProblemKind.WHITTAKER,
        scale=2.0,
        decay_kappa_d=float(decay),
        whittaker=WhittakerParams(mu=float(mu), nu=nu),
    )


def reduction(spec, kappa_d):
    if spec.extension is None:
        return reduce(spec, kappa_d)
    return reduce_extended(spec, kappa_d)
