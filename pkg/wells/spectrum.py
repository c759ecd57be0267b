"""
Bound-state eigenvalues from the matching conditions at x = 0.

An even state needs psi'(0) = 0 and an odd one psi(0) = 0, where psi is the
decaying half-axis solution of :mod:`wells.model`. Both conditions are scanned
from the top of the allowed range of the decay constant downwards, so the
deepest states come first and the scan can stop as soon as enough roots are
bracketed.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from scipy import optimize

from .constants import (
    DEFAULT_STATES,
    KAPPA_MIN,
    LINEAR_SCAN_POINTS,
    LOG_POINTS_PER_DECADE,
    RESIDUAL_RTOL,
    ROOT_RTOL,
    SCAN_CHUNK,
)
from .exceptions import DomainError, ParityOrderingError, ScanResolutionError, WellsError
from .model import WellSpec, decay_constant, mu_from_decay, uses_bessel, whittaker_order
from .specfun import BesselOrder, bessel_K_pair, whittaker_w_pair

logger = logging.getLogger(__name__)

# The scan starts a hair below the depth bound, where the conditions are still finite.
TOP_MARGIN = 1e-9


class Parity(Enum):
    EVEN = 1
    ODD = -1

    @property
    def label(self):
        return self.name.lower()


@dataclass(frozen=True)
class BoundState:
    index: int
    parity: Parity
    kappa_d: float
    node_count: int
    decay_kappa_d: float

    @property
    def energy_dimless(self):
        return -self.kappa_d ** 2

    def to_dict(self):
        return {
            "index": self.index,
            "parity": self.parity.label,
            "kappa_d": self.kappa_d,
            "decay_kappa_d": self.decay_kappa_d,
            "energy_dimless": self.energy_dimless,
            "node_count": self.node_count,
        }


@dataclass(frozen=True)
class SpectrumScan:
    states: tuple
    possibly_incomplete: bool
    warnings: tuple = ()


@dataclass(frozen=True)
class SweepRow:
    u: float
    states: tuple = field(default_factory=tuple)
    error: Optional[str] = None
    possibly_incomplete: bool = False

    def kappa_values(self, n_states):
        """kappa_d per index, None where the row has no such state."""
        values = [None] * n_states
        for index, kappa_d in self.states:
            if index < n_states:
                values[index] = kappa_d
        return values


def _conditions(spec, decay):
    """(odd, even) matching residuals as functions of the decay constant."""
    decay = np.asarray(decay, dtype=float)
    if uses_bessel(spec):
        k, dk = bessel_K_pair(BesselOrder.from_depth(spec.u), decay)
        root = np.sqrt(decay)
        # d/dxi [sqrt(xi) K(xi)], which stays real for imaginary order
        return np.asarray(k), np.asarray(0.5 * k / root + root * dk)
    w, dw = whittaker_w_pair(mu_from_decay(spec, decay), whittaker_order(spec), 2.0 * decay)
    return np.asarray(w), np.asarray(dw)


def _as_result(values):
    return values.item() if values.ndim == 0 else values


def odd_condition(spec, kappa_d):
    """psi(0): K_alpha(kappa d) for the steep well, W(2 kappa' d) otherwise."""
    return _as_result(_conditions(spec, decay_constant(spec, kappa_d))[0])


def even_condition(spec, kappa_d):
    """psi'(0) up to a positive factor."""
    return _as_result(_conditions(spec, decay_constant(spec, kappa_d))[1])


def _scan_nodes(spec, kappa_min, log_points_per_decade, linear_points):
    """Descending decay-constant nodes with cell midpoints interleaved."""
    top = spec.decay_bound * (1.0 - TOP_MARGIN)
    if kappa_min >= top:
        # the whole allowed range sits below the scan floor
        return np.empty(0)
    if uses_bessel(spec):
        # steep-well levels accumulate geometrically at zero
        cells = max(1, math.ceil(math.log10(top / kappa_min) * log_points_per_decade))
        return np.geomspace(top, kappa_min, 2 * cells + 1)
    return np.linspace(top, kappa_min, 2 * linear_points + 1)


def _brackets(nodes, values, parity):
    """Yield (lo, hi) brackets of single sign changes in each cell."""
    positive = values >= 0
    for cell in range((len(nodes) - 1) // 2):
        left, middle, right = 2 * cell, 2 * cell + 1, 2 * cell + 2
        if positive[left] != positive[right]:
            if positive[left] != positive[middle]:
                yield nodes[middle], nodes[left]
            else:
                yield nodes[right], nodes[middle]
        elif positive[left] != positive[middle]:
            raise ScanResolutionError((nodes[right], nodes[left]), parity.label)


def _polish(spec, parity, lo, hi, warnings):
    column = 0 if parity is Parity.ODD else 1

    def residual(decay):
        return float(_conditions(spec, decay)[column])

    f_lo, f_hi = residual(lo), residual(hi)
    root = optimize.brentq(residual, lo, hi, xtol=ROOT_RTOL * lo, maxiter=200)
    scale = max(abs(f_lo), abs(f_hi))
    miss = abs(residual(root))
    if miss > RESIDUAL_RTOL * scale:
        message = (f"{parity.label} root at decay constant {root:.10g} leaves residual "
                   f"{miss:.3g} against bracket scale {scale:.3g}")
        logger.warning(message)
        warnings.append(message)
    return root


def scan_spectrum(spec, max_states=DEFAULT_STATES, kappa_min=KAPPA_MIN,
                  log_points_per_decade=LOG_POINTS_PER_DECADE, linear_points=LINEAR_SCAN_POINTS):
    """
    Bracket and polish the deepest bound states of a well.

    Args:
        spec (WellSpec): The potential.
        max_states (int): How many of the deepest states to return.
        kappa_min (float): Lower end of the scan in the decay constant; shallower
                           states are not searched for.
        log_points_per_decade (int): Cells per decade of the steep-well log grid.
        linear_points (int): Cells of the linear grid used for every other well.

    Returns:
        SpectrumScan: states sorted by decreasing kappa_d, with a flag set when
        fewer than max_states were found above kappa_min.
    """
    if max_states < 1:
        raise DomainError(f"max_states must be at least 1, got {max_states!r}")
    if not kappa_min > 0:
        raise DomainError(f"kappa_min must be positive, got {kappa_min!r}")
    nodes = _scan_nodes(spec, kappa_min, log_points_per_decade, linear_points)
    cells = (len(nodes) - 1) // 2
    warnings = []
    roots = []
    for start in range(0, cells, SCAN_CHUNK):
        stop = min(start + SCAN_CHUNK, cells)
        chunk = nodes[2 * start:2 * stop + 1]
        odd, even = _conditions(spec, chunk)
        for parity, values in ((Parity.EVEN, even), (Parity.ODD, odd)):
            for lo, hi in _brackets(chunk, values, parity):
                roots.append((_polish(spec, parity, lo, hi, warnings), parity))
        logger.debug("scanned decay constants down to %.6g: %d roots so far", chunk[-1], len(roots))
        if len(roots) >= max_states:
            break

    roots.sort(key=lambda root: root[0], reverse=True)
    for index, (decay, parity) in enumerate(roots):
        expected = Parity.EVEN if index % 2 == 0 else Parity.ODD
        if parity is not expected:
            raise ParityOrderingError(
                f"state {index} at decay constant {decay:.10g} is {parity.label}, "
                f"expected {expected.label}"
            )

    states = tuple(
        BoundState(
            index=index,
            parity=parity,
            kappa_d=math.sqrt(decay ** 2 - spec.threshold),
            node_count=index,
            decay_kappa_d=decay,
        )
        for index, (decay, parity) in enumerate(roots[:max_states])
    )
    possibly_incomplete = len(states) < max_states
    if possibly_incomplete:
        message = (f"found {len(states)} of {max_states} states above kappa_min = {kappa_min:g}; "
                   "shallower states, if any, were not searched")
        logger.info(message)
        warnings.append(message)
    return SpectrumScan(states=states, possibly_incomplete=possibly_incomplete, warnings=tuple(warnings))


def find_spectrum(spec, max_states=DEFAULT_STATES, kappa_min=KAPPA_MIN, **scan_options):
    """The deepest ``max_states`` bound states, sorted by decreasing kappa_d."""
    return list(scan_spectrum(spec, max_states, kappa_min, **scan_options).states)


def _sweep_row(class_p, u, extension, n_states, kappa_min, scan_options):
    try:
        scan = scan_spectrum(WellSpec(class_p, u, extension), n_states, kappa_min, **scan_options)
    except WellsError as error:
        logger.warning("sweep row u=%g failed: %s", u, error)
        return SweepRow(u=u, error=str(error), possibly_incomplete=True)
    return SweepRow(
        u=u,
        states=tuple((state.index, state.kappa_d) for state in scan.states),
        possibly_incomplete=scan.possibly_incomplete,
    )


def sweep(class_p, u_grid, n_states=DEFAULT_STATES, kappa_min=KAPPA_MIN, n_jobs=1,
          extension=None, **scan_options):
    """
    Solve one well class over a grid of depths.

    Args:
        class_p (int): Potential class, 0, 1 or 2.
        u_grid (list): Strictly increasing positive depths.
        n_states (int): States per row.
        kappa_min (float): Scan floor, as in :func:`scan_spectrum`.
        n_jobs (int): joblib workers; rows are independent.
        extension (LoudonTerm): Optional Loudon term shared by all rows.

    Returns:
        list: One SweepRow per depth. A failing row carries its error message
        instead of states.
    """
    u_grid = [float(u) for u in u_grid]
    if not u_grid:
        raise DomainError("u_grid is empty")
    if any(u <= 0 for u in u_grid) or any(b <= a for a, b in zip(u_grid, u_grid[1:])):
        raise DomainError("u_grid must be strictly increasing and positive")
    return Parallel(n_jobs=n_jobs)(
        delayed(_sweep_row)(class_p, u, extension, n_states, kappa_min, scan_options)
        for u in u_grid
    )
