"""System matrix, eigenvalue-based stability and the feedback stability bound."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eig import eigenvalues
from .errors import ConfigError
from .model import Cascade


@dataclass(frozen=True)
class PerturbationSpec:
    """Extra couplings added to the system matrix.

    ``entries`` holds (row, col, value) triples with 1-based indices into the
    (n+1)x(n+1) matrix.  Diagonal entries are not allowed.
    """

    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries",
                           tuple((int(i), int(j), float(v)) for i, j, v in self.entries))
        for i, j, _ in self.entries:
            if i == j:
                raise ConfigError(f"perturbation entry ({i},{j}) would overwrite a diagonal rate")

    def check(self, dim):
        for i, j, _ in self.entries:
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ConfigError(f"perturbation entry ({i},{j}) outside {dim}x{dim}")

    @property
    def strictly_lower(self):
        return all(i > j for i, j, _ in self.entries)


def build_system_matrix(c: Cascade, pert: PerturbationSpec | None = None) -> np.ndarray:
    n = c.n
    a = np.zeros((n + 1, n + 1))
    a[np.arange(n), np.arange(n)] = [-b for b in c.beta]
    a[n, n] = -c.leak
    for i in range(1, n):
        a[i, i - 1] = c.alpha[i]
    a[n, n - 1] = 1.0
    if c.feedback:
        a[0, n - 1] += c.feedback
    if pert is not None:
        pert.check(n + 1)
        for i, j, v in pert.entries:
            a[i - 1, j - 1] += v
    return a


def spectral_abscissa(c: Cascade, pert: PerturbationSpec | None = None) -> float:
    """Largest real part among the eigenvalues of the system matrix."""
    return float(np.max(eigenvalues(build_system_matrix(c, pert)).real))


def is_stable(c: Cascade, pert: PerturbationSpec | None = None) -> bool:
    return spectral_abscissa(c, pert) < 0


def feedback_stability_bound(c: Cascade) -> float:
    """Largest stable feedback strength, beta_1...beta_n / (alpha_2...alpha_n)."""
    return math.exp(math.fsum(math.log(b) for b in c.beta)
                    - math.fsum(math.log(a) for a in c.alpha[1:]))


def stability_crossing(c: Cascade, lo: float = 0.0, hi: float | None = None,
                       tol: float = 1e-9) -> float:
    """Bisect on the feedback strength for the sign change of the spectral abscissa.

    Uses eigenvalues only, so it checks :func:`feedback_stability_bound`
    independently.  ``hi`` defaults to growing brackets until instability.
    """
    if hi is None:
        hi = max(1.0, 2 * lo)
        while spectral_abscissa(c.replace(feedback=hi)) < 0:
            hi *= 2
            if hi > 1e300:
                raise ValueError("no instability found for any feedback strength")
    if spectral_abscissa(c.replace(feedback=lo)) >= 0:
        raise ValueError("lower bracket is already unstable")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if spectral_abscissa(c.replace(feedback=mid)) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
