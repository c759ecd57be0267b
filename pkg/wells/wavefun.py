"""
Normalised eigenfunctions on a symmetric grid.

Each half axis is sampled uniformly in s = ln(1 + |x|/d). The spacing in x
then grows with distance, which resolves the log-periodic oscillations of
the shallow steep-well states near the origin and their long exponential
tails with the same number of samples.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.integrate import simpson

from .constants import EXTENT_DECAY_LENGTHS, GRID_SAMPLES, TAIL_FRACTION_LIMIT, TAIL_FRACTION_WARNING
from .exceptions import DomainError, ResolutionError, TailDominanceError
from .model import ProblemKind, reduction
from .spectrum import Parity

logger = logging.getLogger(__name__)

MIN_SAMPLES_BETWEEN_NODES = 3


@dataclass(frozen=True)
class WavefunctionGrid:
    state: object
    x_over_d: np.ndarray
    psi: np.ndarray
    norm_constant: float
    tail_fraction: float

    def __post_init__(self):
        for name in ("x_over_d", "psi"):
            values = np.array(getattr(self, name), dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def density(self):
        return self.psi ** 2


def _half_axis(spec, state, t):
    """Unnormalised psi on t >= 0 together with the reduced problem."""
    problem = reduction(spec, state.kappa_d)
    psi, _ = problem.solution(t)
    return np.asarray(psi, dtype=float), problem


def eval_unnormalized(spec, state, x_over_d):
    """psi at x/d before normalisation; odd states vanish exactly at the origin."""
    x = np.asarray(x_over_d, dtype=float)
    psi, _ = _half_axis(spec, state, np.abs(x))
    psi = np.where(x < 0, state.parity.value * psi, psi)
    if state.parity is Parity.ODD:
        psi = np.where(x == 0, 0.0, psi)
    return psi.item() if psi.ndim == 0 else psi


def default_extent(state):
    return EXTENT_DECAY_LENGTHS / state.decay_kappa_d


def _tail_integral(problem, t_max, psi_max):
    """Integral of psi^2 from t_max to infinity from the large-argument form of psi."""
    rate = problem.scale * problem.decay_kappa_d
    if problem.kind is ProblemKind.BESSEL:
        # xi K(xi)^2 ~ (pi/2) exp(-2 xi)
        return psi_max ** 2 / (2.0 * rate)
    # W^2 ~ exp(-z) z^(2 mu): the tail is an upper incomplete gamma function
    mu = problem.whittaker.mu
    z = float(problem.argument(t_max))
    order = 2.0 * mu + 1.0
    if order > 0:
        upper = special.gammaincc(order, z)
        if upper > 0:
            log_tail = math.log(upper) + special.gammaln(order) + z - 2.0 * mu * math.log(z)
            return psi_max ** 2 * math.exp(log_tail) / rate
    return psi_max ** 2 / (rate * (1.0 - 2.0 * mu / z))


def normalize(spec, state, x_max_over_d=None, samples=GRID_SAMPLES, enforce_extent=True):
    """
    Sample and normalise one bound state on [-x_max, x_max].

    Args:
        spec (WellSpec): The potential the state belongs to.
        state (BoundState): A root returned by the spectrum scan.
        x_max_over_d (float): Half width of the grid; defaults to 40 decay lengths.
        samples (int): Points per half axis, origin included.
        enforce_extent (bool): Reject half widths shorter than 40 decay lengths.

    Returns:
        WavefunctionGrid: 2 * samples - 1 points, unit norm including the tails.
    """
    minimum = default_extent(state)
    if x_max_over_d is None:
        x_max_over_d = minimum
    elif enforce_extent and x_max_over_d < minimum * (1.0 - 1e-12):
        raise DomainError(
            f"x_max = {x_max_over_d:g} d is shorter than {EXTENT_DECAY_LENGTHS:g} decay lengths "
            f"({minimum:.6g} d)"
        )
    if samples < 3 or samples % 2 == 0:
        raise DomainError(f"samples must be odd and at least 3, got {samples}")

    s = np.linspace(0.0, math.log1p(x_max_over_d), samples)
    t = np.expm1(s)
    t[-1] = x_max_over_d
    psi, problem = _half_axis(spec, state, t)
    if state.parity is Parity.ODD:
        psi[0] = 0.0

    # dt = (1+t) ds
    inner = simpson(psi ** 2 * (1.0 + t), x=s)
    tail = _tail_integral(problem, x_max_over_d, psi[-1])
    tail_fraction = tail / (inner + tail)
    if tail_fraction > TAIL_FRACTION_LIMIT:
        raise TailDominanceError(
            f"tail beyond x = {x_max_over_d:g} d holds {tail_fraction:.2%} of the norm"
        )
    if tail_fraction > TAIL_FRACTION_WARNING:
        logger.warning("state %d: analytic tail beyond x = %g d carries %.3g of the norm",
                       state.index, x_max_over_d, tail_fraction)
    norm_constant = 1.0 / math.sqrt(2.0 * (inner + tail))
    logger.debug("state %d: norm constant %.10g, tail fraction %.3g",
                 state.index, norm_constant, tail_fraction)

    half = norm_constant * psi
    x = np.concatenate((-t[:0:-1], t))
    values = np.concatenate((state.parity.value * half[:0:-1], half))
    return WavefunctionGrid(
        state=state,
        x_over_d=x,
        psi=values,
        norm_constant=norm_constant,
        tail_fraction=tail_fraction,
    )


def count_nodes(grid):
    """Sign changes of psi across the grid; a zero sample is not a node by itself."""
    psi = np.asarray(grid.psi)
    kept = np.flatnonzero(psi != 0.0)
    signs = np.sign(psi[kept])
    flips = np.flatnonzero(signs[1:] != signs[:-1])
    positions = kept[flips]
    if len(positions) > 1 and np.min(np.diff(positions)) < MIN_SAMPLES_BETWEEN_NODES:
        raise ResolutionError(
            "fewer than 3 samples between neighbouring sign changes; increase samples"
        )
    return int(len(flips))


def inner_product(spec, a, b):
    """Overlap of two normalised states of the same well on a shared grid."""
    if a.state.parity is not b.state.parity:
        return 0.0
    x_max = max(a.x_over_d[-1], b.x_over_d[-1])
    samples = max(len(a.x_over_d), len(b.x_over_d)) // 2 + 1
    if samples % 2 == 0:
        samples += 1
    s = np.linspace(0.0, math.log1p(x_max), samples)
    t = np.expm1(s)
    psi_a, _ = _half_axis(spec, a.state, t)
    psi_b, _ = _half_axis(spec, b.state, t)
    half = simpson(psi_a * psi_b * (1.0 + t), x=s)
    return float(2.0 * a.norm_constant * b.norm_constant * half)
