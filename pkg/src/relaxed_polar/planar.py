"""Closed-form solution of the planar minimization problem.

Everything in 2D reduces to a single rotation angle. The polar factor
corresponds to the angle alpha_p; for non-classical weights a pitchfork
bifurcation at tr U = rho opens two optimal branches alpha_p +/- beta
with cos(beta) = rho / tr U.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import CosseratWeights, DeformationGradient, nonclassical_pair_energy
from .errors import DimensionMismatch

# fixed planar generator; J @ v rotates v by +pi/2
J2 = np.array([[0.0, -1.0], [1.0, 0.0]])
J2.setflags(write=False)


def rotation_2d(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi], choosing +pi over -pi."""
    w = float(np.remainder(a + np.pi, 2.0 * np.pi) - np.pi)
    if w == -np.pi:
        return np.pi
    return w


@dataclass(frozen=True)
class PlanarSolution:
    """Optimal planar rotation angles for one (weights, F) instance.

    ``branch_angles`` are the absolute optimal angles, equal to
    ``polar_angle + beta`` for each beta in ``relative_angles`` (wrapped
    to (-pi, pi]). ``bifurcated`` is true exactly when two branches
    exist, i.e. tr U strictly exceeds the singular radius.
    """

    polar_angle: float
    branch_angles: tuple[float, ...]
    relative_angles: tuple[float, ...]
    reduced_energy: float
    bifurcated: bool


def _require_2d(F: DeformationGradient):
    if F.dim != 2:
        raise DimensionMismatch(f"planar routine requires dim 2, got {F.dim}")


def polar_angle(F: DeformationGradient) -> float:
    """Rotation angle alpha_p of the planar polar factor, in (-pi, pi].

    Satisfies (sin a, cos a) = (-tr JF, tr F) / tr U; computed with atan2
    so the compressive case tr F < 0, tr JF = 0 lands on +pi.
    """
    _require_2d(F)
    m = F.matrix
    tr_f = m[0, 0] + m[1, 1]
    tr_jf = m[0, 1] - m[1, 0]
    a = float(np.arctan2(-tr_jf, tr_f))
    return np.pi if a == -np.pi else a


def relative_angles_10(d) -> tuple[float, ...]:
    """Solutions beta of tr(R(beta) D) = 2 for a positive 2x2 diagonal D.

    Accepts the two diagonal entries or the 2x2 diagonal matrix. For
    tr D <= 2 there is no solution and the continuous extension beta = 0
    is returned; otherwise the pair +/- arccos(2 / tr D).
    """
    d = np.asarray(d, dtype=float)
    if d.ndim == 2:
        d = np.diagonal(d)
    if d.shape != (2,):
        raise DimensionMismatch("expected two diagonal entries")
    if np.any(d <= 0.0):
        raise ValueError("diagonal entries must be positive")
    t = float(d.sum())
    if t <= 2.0:
        return (0.0,)
    b = float(np.arccos(2.0 / t))
    return (b, -b)


def wred_2d_values(W: CosseratWeights, nu1: float, nu2: float) -> float:
    """Reduced planar energy as a function of the singular values.

    Independent of the ordering of the two values.
    """
    if W.is_classical:
        return W.mu * ((nu1 - 1.0) ** 2 + (nu2 - 1.0) ** 2)
    if nu1 + nu2 > W.singular_radius:
        return nonclassical_pair_energy(W, nu1, nu2)
    return W.mu * ((nu1 - 1.0) ** 2 + (nu2 - 1.0) ** 2)


def wred_2d(W: CosseratWeights, F: DeformationGradient) -> float:
    """Reduced planar shear-stretch energy min over all rotation angles."""
    _require_2d(F)
    nu = F.singular_values
    return wred_2d_values(W, float(nu[0]), float(nu[1]))


def optimal_angles(W: CosseratWeights, F: DeformationGradient) -> PlanarSolution:
    """All energy-minimizing rotation angles for the given weights.

    Classical weights yield the single polar angle. Non-classical weights
    yield alpha_p +/- arccos(rho / tr U) once tr U exceeds the singular
    radius rho; at or below the threshold the branches coincide with
    alpha_p and the solution is reported as un-bifurcated.
    """
    _require_2d(F)
    ap = polar_angle(F)
    wred = wred_2d(W, F)
    if W.is_classical:
        return PlanarSolution(ap, (ap,), (0.0,), wred, False)
    tr_u = float(F.singular_values.sum())
    rho = W.singular_radius
    if tr_u > rho:
        b = float(np.arccos(rho / tr_u))
        return PlanarSolution(
            ap, (wrap_angle(ap + b), wrap_angle(ap - b)), (b, -b), wred, True
        )
    return PlanarSolution(ap, (ap,), (0.0,), wred, False)


def simple_shear(gamma: float) -> DeformationGradient:
    """Simple shear [[1, gamma], [0, 1]]; volume preserving for any amount."""
    return DeformationGradient([[1.0, float(gamma)], [0.0, 1.0]])
