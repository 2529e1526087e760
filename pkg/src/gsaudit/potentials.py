"""Pair interaction kernels and configuration energy/gradient evaluation.

Supported kernels: the 2-D Coulomb (logarithmic) interaction -ln r, the
power-law family -sign(s) * r^s for real s < 2 (s = 0 is represented by the
logarithmic kernel, its limit), D-dimensional Coulomb r^(2-D) for integer
D >= 3 (identical to the power-law family at exponent 2 - D), and the
Lennard-Jones interaction r^-12 - r^-6 (free 3-space only).

Total energies are sums over all unordered pairs of the kernel evaluated at
the chordal distance.  Summation uses exact compensated accumulation
(``math.fsum``) so that 12-significant-digit reference energies reproduce and
permuting the point list cannot change the result.  Evaluation is O(N^2) per
call, which is fine at the desk scales this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import FREE3, Configuration, DomainSpec, embed_points, tangent_project_points

LOG = "log"
RIESZ = "riesz"
COULOMB = "coulomb"
LENNARD_JONES = "lj"

_KINDS = (LOG, RIESZ, COULOMB, LENNARD_JONES)


class CoincidentPointsError(ValueError):
    """Two points coincide where the requested quantity is undefined."""


@dataclass(frozen=True)
class PotentialSpec:
    """A pair interaction kernel.

    ``exponent`` is the power-law exponent s; for the D-dimensional Coulomb
    kernel it is stored as 2 - D so that both spellings evaluate through the
    identical arithmetic path.  ``dimension`` is only set for that kernel.
    """

    kind: str
    exponent: float | None = None
    dimension: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == RIESZ:
            s = self.exponent
            if s is None or not s < 2.0 or s == 0.0:
                raise ValueError("power-law exponent must satisfy s < 2 and s != 0 "
                                 "(use the log kernel for the s = 0 limit)")
        elif self.kind == COULOMB:
            d = self.dimension
            if d is None or d != int(d) or d < 3:
                raise ValueError("Coulomb dimension must be an integer >= 3")
            if self.exponent != 2.0 - d:
                raise ValueError("Coulomb exponent must equal 2 - dimension")
        elif self.exponent is not None or self.dimension is not None:
            raise ValueError(f"{self.kind!r} takes no parameters")


def log_coulomb() -> PotentialSpec:
    """The 2-D Coulomb kernel -ln r."""
    return PotentialSpec(LOG)


def riesz(s: float) -> PotentialSpec:
    """The power-law kernel -sign(s) * r^s, s < 2, s != 0."""
    return PotentialSpec(RIESZ, exponent=float(s))


def coulomb(dimension: int) -> PotentialSpec:
    """The D-dimensional Coulomb kernel r^(2-D); D = 3 gives the classic 1/r."""
    d = int(dimension)
    return PotentialSpec(COULOMB, exponent=2.0 - d, dimension=d)


def lennard_jones() -> PotentialSpec:
    """The Lennard-Jones kernel r^-12 - r^-6 (free 3-space only)."""
    return PotentialSpec(LENNARD_JONES)


def validate_domain_potential(domain: DomainSpec, pot: PotentialSpec) -> None:
    """Reject kernel/domain combinations outside the supported setting."""
    if pot.kind == LENNARD_JONES and domain.kind != FREE3:
        raise ValueError("the Lennard-Jones kernel is only supported in free 3-space")


def pair_energy(pot: PotentialSpec, r: float) -> float:
    """Kernel value at separation r >= 0.

    At r = 0 the repulsive kernels diverge to +inf; the power-law kernel with
    0 < s < 2 tends to 0 there and returns 0 by continuity.
    """
    if r < 0.0:
        raise ValueError("separation must be nonnegative")
    if r == 0.0:
        if pot.kind == RIESZ and pot.exponent > 0.0:
            return 0.0
        return math.inf
    if pot.kind == LOG:
        return -math.log(r)
    if pot.kind == LENNARD_JONES:
        inv6 = r ** -6.0
        return inv6 * inv6 - inv6
    s = pot.exponent
    return -math.copysign(1.0, s) * r ** s


def radial_derivative(pot: PotentialSpec, r: float) -> float:
    """d/dr of the kernel at separation r > 0."""
    if r <= 0.0:
        raise ValueError("separation must be positive")
    if pot.kind == LOG:
        return -1.0 / r
    if pot.kind == LENNARD_JONES:
        return -12.0 * r ** -13.0 + 6.0 * r ** -7.0
    s = pot.exponent
    return -abs(s) * r ** (s - 1.0)


def _pair_energies(pot: PotentialSpec, r: np.ndarray) -> np.ndarray:
    """Vectorized kernel over an array of positive separations."""
    if pot.kind == LOG:
        return -np.log(r)
    if pot.kind == LENNARD_JONES:
        inv6 = r ** -6.0
        return inv6 * inv6 - inv6
    s = pot.exponent
    return -math.copysign(1.0, s) * r ** s


def _pair_separations(embedded: np.ndarray) -> np.ndarray:
    """Condensed vector of the N(N-1)/2 pairwise distances."""
    i, j = np.triu_indices(embedded.shape[0], 1)
    diff = embedded[i] - embedded[j]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def total_energy_of_points(points: np.ndarray, domain: DomainSpec, pot: PotentialSpec) -> float:
    """Total pair energy of an (N, k) intrinsic-coordinate array; may be +inf."""
    validate_domain_potential(domain, pot)
    if points.shape[0] < 2:
        raise ValueError("energy needs at least two points")
    r = _pair_separations(embed_points(points, domain))
    zero = r == 0.0
    if zero.any():
        if not (pot.kind == RIESZ and pot.exponent > 0.0):
            return math.inf
        r = r[~zero]
        if r.size == 0:
            return 0.0
    return math.fsum(_pair_energies(pot, r))


def total_energy(config: Configuration, pot: PotentialSpec) -> float:
    """Sum of the kernel over all unordered pairs at their chordal distances.

    Invariant under permutations of the point list (the compensated sum is
    exact) and, on the sphere, under global rotations up to roundoff.
    """
    return total_energy_of_points(config.points, config.domain, pot)


def energy_gradient_of_points(
    points: np.ndarray, domain: DomainSpec, pot: PotentialSpec
) -> np.ndarray:
    """Tangent gradient for an (N, k) intrinsic array; see :func:`energy_gradient`."""
    validate_domain_potential(domain, pot)
    n = points.shape[0]
    if n < 2:
        raise ValueError("gradient needs at least two points")
    x = embed_points(points, domain)
    diff = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    off = ~np.eye(n, dtype=bool)
    if np.any(r2[off] == 0.0):
        raise CoincidentPointsError("coincident points: gradient undefined")
    np.fill_diagonal(r2, 1.0)
    r = np.sqrt(r2)
    if pot.kind == LOG:
        weight = -1.0 / r2
    elif pot.kind == LENNARD_JONES:
        weight = -12.0 * r ** -14.0 + 6.0 * r ** -8.0
    else:
        s = pot.exponent
        weight = -abs(s) * r ** (s - 2.0)
    np.fill_diagonal(weight, 0.0)
    grad = np.einsum("ij,ijk->ik", weight, diff)
    return tangent_project_points(points, grad, domain)


def energy_gradient(config: Configuration, pot: PotentialSpec) -> np.ndarray:
    """Per-point ambient gradient of the total energy, projected to the tangent planes.

    Row i is the tangent projection of
    sum_{j != i} U'(r_ij) * (x_i - x_j) / r_ij in embedded coordinates.
    Raises CoincidentPointsError when two points coincide.
    """
    return energy_gradient_of_points(config.points, config.domain, pot)
