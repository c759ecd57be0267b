"""
Finite-difference cross-check that uses no special functions.

The Schroedinger operator -psi'' + V psi is discretised with the three-point
Laplacian on a symmetric box [-L, L] with Dirichlet walls. The matrix is
symmetric tridiagonal, so its lowest eigenvalues come from Sturm-sequence
bisection (LAPACK stebz) and the eigenvectors from inverse iteration.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal

from .constants import CERTIFY_KAPPA_L, ORACLE_DECAY_LIMIT, ORACLE_HALF_WIDTH, ORACLE_POINTS
from .exceptions import DomainError, GridMismatchError
from .model import potential_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleConfig:
    half_width_over_d: float = ORACLE_HALF_WIDTH
    points: int = ORACLE_POINTS

    def __post_init__(self):
        if not (math.isfinite(self.half_width_over_d) and self.half_width_over_d > 0):
            raise DomainError(f"half width must be positive, got {self.half_width_over_d!r}")
        if self.points < 3 or self.points % 2 == 0:
            raise DomainError(f"points must be odd and at least 3, got {self.points!r}")

    @property
    def step(self):
        return 2.0 * self.half_width_over_d / (self.points + 1)

    def grid(self):
        """Interior nodes, symmetric about and including x = 0."""
        return self.step * (np.arange(self.points) - self.points // 2)

    def refined(self):
        """The same box at half the step."""
        return replace(self, points=2 * self.points + 1)

    def to_dict(self):
        return {"half_width_over_d": self.half_width_over_d, "points": self.points, "step": self.step}


@dataclass(frozen=True)
class OracleState:
    x_over_d: np.ndarray
    psi: np.ndarray
    kappa_d: float


@dataclass(frozen=True)
class OracleResult:
    config: OracleConfig
    threshold: float
    energies: tuple
    eigen_kappa_d: tuple
    decay_kappa_d: tuple
    x_over_d: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    extrapolated: bool = False

    @property
    def domain_limited(self):
        """Per state: the wall still feels the wavefunction."""
        width = self.config.half_width_over_d
        return tuple(math.exp(-2.0 * decay * width) >= ORACLE_DECAY_LIMIT for decay in self.decay_kappa_d)

    def certified(self, index):
        return self.decay_kappa_d[index] * self.config.half_width_over_d >= CERTIFY_KAPPA_L

    def state(self, index):
        if self.eigenvectors is None:
            raise DomainError("oracle was solved without eigenvectors")
        return OracleState(
            x_over_d=self.x_over_d,
            psi=self.eigenvectors[index],
            kappa_d=self.eigen_kappa_d[index],
        )

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "extrapolated": self.extrapolated,
            "kappa_d": list(self.eigen_kappa_d),
            "energies": list(self.energies),
            "domain_limited": list(self.domain_limited),
        }


def solve_fd(spec, config=None, n_states=4, eigenvectors=True):
    """
    Lowest bound states of the discretised problem.

    Only eigenvalues below the continuum edge are reported. An empty result
    is valid: the box may hold no bound state at all.
    """
    config = config or OracleConfig()
    x = config.grid()
    h = config.step
    diagonal = 2.0 / h ** 2 + potential_value(spec, np.abs(x))
    off_diagonal = np.full(config.points - 1, -1.0 / h ** 2)
    count = min(n_states, config.points)
    solved = eigh_tridiagonal(
        diagonal,
        off_diagonal,
        eigvals_only=not eigenvectors,
        select="i",
        select_range=(0, count - 1),
        lapack_driver="stebz",
    )
    energies, vectors = (solved if eigenvectors else (solved, None))
    bound = np.flatnonzero(energies < spec.threshold)
    energies = energies[bound]
    if vectors is not None:
        # unit 2-norm columns to unit L2 norm on the grid
        vectors = (vectors[:, bound] / math.sqrt(h)).T
    kappa = np.sqrt(-energies)
    decay = np.sqrt(spec.threshold - energies)
    result = OracleResult(
        config=config,
        threshold=spec.threshold,
        energies=tuple(float(e) for e in energies),
        eigen_kappa_d=tuple(float(k) for k in kappa),
        decay_kappa_d=tuple(float(k) for k in decay),
        x_over_d=x,
        eigenvectors=vectors,
    )
    if any(result.domain_limited):
        logger.info("oracle box L=%g d is small for %d state(s)",
                    config.half_width_over_d, sum(result.domain_limited))
    return result


def solve_fd_extrapolated(spec, config=None, n_states=4):
    """Richardson-combine steps h and h/2: E = (4 E_fine - E_coarse) / 3.

    The eigenvectors are those of the finer grid.
    """
    config = config or OracleConfig()
    coarse = solve_fd(spec, config, n_states, eigenvectors=False)
    fine = solve_fd(spec, config.refined(), n_states)
    count = min(len(coarse.energies), len(fine.energies))
    energies = [
        (4.0 * fine.energies[k] - coarse.energies[k]) / 3.0 for k in range(count)
    ]
    energies = [e for e in energies if e < spec.threshold]
    count = len(energies)
    return OracleResult(
        config=fine.config,
        threshold=spec.threshold,
        energies=tuple(energies),
        eigen_kappa_d=tuple(math.sqrt(-e) for e in energies),
        decay_kappa_d=tuple(math.sqrt(spec.threshold - e) for e in energies),
        x_over_d=fine.x_over_d,
        eigenvectors=fine.eigenvectors[:count] if fine.eigenvectors is not None else None,
        extrapolated=True,
    )


def overlap(oracle_state, grid):
    """|<psi_fd, psi_analytic>| after normalising both on the oracle grid."""
    x = np.asarray(oracle_state.x_over_d)
    if grid.x_over_d[0] > x[0] or grid.x_over_d[-1] < x[-1]:
        raise GridMismatchError(
            f"analytic grid [{grid.x_over_d[0]:g}, {grid.x_over_d[-1]:g}] does not cover "
            f"the oracle box [{x[0]:g}, {x[-1]:g}]"
        )
    analytic = np.interp(x, grid.x_over_d, grid.psi)
    numeric = np.asarray(oracle_state.psi)
    if analytic.shape != numeric.shape:
        raise GridMismatchError("oracle vector and grid differ in length")
    cross = trapezoid(analytic * numeric, x)
    norms = trapezoid(analytic ** 2, x) * trapezoid(numeric ** 2, x)
    if norms <= 0:
        raise GridMismatchError("a state vanishes on the common grid")
    return float(abs(cross) / math.sqrt(norms))
