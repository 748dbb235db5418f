"""The weighted Cosserat shear-stretch energy and its parameter reduction.

The energy of a rotation R against a deformation gradient F is

    W(R; F) = mu * ||sym(R^T F - 1)||^2 + muc * ||skew(R^T F - 1)||^2

with shear weight mu > 0 and Cosserat couple modulus muc >= 0. Two weight
regimes exist: for muc >= mu ("classical") the polar factor is the unique
minimizer; for mu > muc ("non-classical") the whole family reduces to the
limit case (1, 0) evaluated on a rescaled deformation gradient, and the
minimizers can deviate from the polar factor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import DimensionMismatch, RegimeError
from .polar import PolarData


class Regime(enum.Enum):
    CLASSICAL = "classical"
    NON_CLASSICAL = "non-classical"


@dataclass(frozen=True)
class CosseratWeights:
    """Weight pair (mu, muc) with the derived non-classical constants.

    ``singular_radius`` rho = 2 mu / (mu - muc) is the bifurcation
    threshold on nu_1 + nu_2 (tr U in 2D), ``scaling`` lam = mu / (mu - muc)
    rescales F to the (1, 0) limit case, and ``zeta`` = rho - 2 enters the
    classical-neighborhood criterion. All three exist only for mu > muc;
    the boundary mu = muc belongs to the classical regime and must never
    evaluate them.
    """

    mu: float
    muc: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.muc)):
            raise ValueError("weights must be finite")
        if self.mu <= 0.0:
            raise ValueError("shear weight mu must be positive")
        if self.muc < 0.0:
            raise ValueError("couple modulus muc must be non-negative")

    @property
    def is_classical(self) -> bool:
        return self.muc >= self.mu

    @property
    def regime(self) -> Regime:
        return Regime.CLASSICAL if self.is_classical else Regime.NON_CLASSICAL

    def _require_non_classical(self):
        if self.is_classical:
            raise RegimeError(
                f"quantity undefined for classical weights (mu={self.mu}, muc={self.muc})"
            )

    @property
    def singular_radius(self) -> float:
        self._require_non_classical()
        return 2.0 * self.mu / (self.mu - self.muc)

    @property
    def scaling(self) -> float:
        self._require_non_classical()
        return self.mu / (self.mu - self.muc)

    @property
    def zeta(self) -> float:
        self._require_non_classical()
        return 2.0 * self.muc / (self.mu - self.muc)


class DeformationGradient:
    """An n x n matrix with positive determinant plus cached decompositions.

    The SVD and polar data are computed once at construction: every
    downstream formula consumes the singular values, and a fixed
    decomposition keeps branch labels and set comparisons reproducible.
    A determinant <= 0 is a hard constructor error rather than a silent
    NaN path.
    """

    __slots__ = ("_matrix", "_values", "_polar")

    def __init__(self, matrix):
        m = matcore.as_square(matrix).copy()
        det = float(np.linalg.det(m))
        if det <= 0.0:
            raise ValueError(f"deformation gradient must have det > 0, got det={det:g}")
        left, values, right = matcore.svd_ordered(m)
        rotation = left @ right.T
        stretch = right @ np.diag(values) @ right.T
        stretch = (stretch + stretch.T) / 2.0
        frame = right.copy()
        if np.linalg.det(frame) < 0.0:
            frame[:, -1] = -frame[:, -1]
        for a in (m, values, rotation, stretch, frame):
            a.setflags(write=False)
        self._matrix = m
        self._values = values
        self._polar = PolarData(
            rotation=rotation,
            stretch=stretch,
            spectral=matcore.SpectralData(values=values, frame=frame),
        )

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def singular_values(self) -> np.ndarray:
        """Singular values in descending order (all positive)."""
        return self._values

    @property
    def polar(self) -> PolarData:
        return self._polar

    def __repr__(self):
        return f"DeformationGradient(dim={self.dim}, nu={np.array2string(self._values, precision=4)})"


def energy(W: CosseratWeights, R, F: DeformationGradient) -> float:
    """Evaluate the shear-stretch energy of a rotation against F."""
    r = np.asarray(R, dtype=float)
    if r.shape != (F.dim, F.dim):
        raise DimensionMismatch(f"rotation shape {r.shape} does not match dim {F.dim}")
    x = r.T @ F.matrix - np.eye(F.dim)
    return W.mu * matcore.frobenius_sq(matcore.sym(x)) + W.muc * matcore.frobenius_sq(
        matcore.skew(x)
    )


def rescale(W: CosseratWeights, F: DeformationGradient) -> DeformationGradient:
    """Rescaled gradient F / lam reducing non-classical weights to (1, 0).

    For muc = 0 the rescaling is a no-op and F itself is returned.
    """
    W._require_non_classical()
    if W.muc == 0.0:
        return F
    return DeformationGradient(F.matrix / W.scaling)


def reduce_parameters(
    W: CosseratWeights, F: DeformationGradient
) -> tuple[Regime, CosseratWeights, DeformationGradient]:
    """Map (W, F) to the canonical limit case with the same minimizers.

    Classical weights reduce to (1, 1) on F unchanged; non-classical
    weights reduce to (1, 0) on the rescaled gradient.
    """
    if W.is_classical:
        return Regime.CLASSICAL, CosseratWeights(1.0, 1.0), F
    return Regime.NON_CLASSICAL, CosseratWeights(1.0, 0.0), rescale(W, F)


def relative_rotation(R, F: DeformationGradient) -> np.ndarray:
    """Rotation acting relative to the polar factor in the principal frame.

    Rhat = Q^T R^T polar(F) Q with Q the cached spectral frame of the
    stretch. The absolute rotation is recovered as
    R = polar(F) @ Q @ Rhat.T @ Q.T.
    """
    r = np.asarray(R, dtype=float)
    if r.shape != (F.dim, F.dim):
        raise DimensionMismatch(f"rotation shape {r.shape} does not match dim {F.dim}")
    q = F.polar.spectral.frame
    return q.T @ r.T @ F.polar.rotation @ q


def absolute_rotation(Rhat, F: DeformationGradient) -> np.ndarray:
    """Inverse of :func:`relative_rotation` for the same fixed frame."""
    rh = np.asarray(Rhat, dtype=float)
    if rh.shape != (F.dim, F.dim):
        raise DimensionMismatch(f"rotation shape {rh.shape} does not match dim {F.dim}")
    q = F.polar.spectral.frame
    return F.polar.rotation @ q @ rh.T @ q.T


def nonclassical_pair_energy(W: CosseratWeights, nu_i: float, nu_j: float) -> float:
    """Energy contribution of one bifurcated 2x2 block at its optimal angle.

    For mu > muc and nu_i + nu_j >= rho, the in-plane rotation with
    cos(beta) = rho / (nu_i + nu_j) contributes

        mu/2 (nu_i - nu_j)^2 + mu/2 (rho - 2)^2 + muc/2 ((nu_i + nu_j)^2 - rho^2).

    At nu_i + nu_j = rho this matches the classical per-pair value
    mu [(nu_i - 1)^2 + (nu_j - 1)^2], so the reduced energy is continuous
    across the bifurcation.
    """
    rho = W.singular_radius
    s = nu_i + nu_j
    return (
        0.5 * W.mu * (nu_i - nu_j) ** 2
        + 0.5 * W.mu * (rho - 2.0) ** 2
        + 0.5 * W.muc * (s * s - rho * rho)
    )


def _wred_general(W: CosseratWeights, nus: np.ndarray) -> float:
    """Reduced energy for non-classical weights in any dimension.

    Pairs consecutive descending singular values while the pair sum
    exceeds the singular radius; paired blocks contribute the bifurcated
    closed form, the rest contribute mu (nu - 1)^2 each.
    """
    rho = W.singular_radius
    n = len(nus)
    total = 0.0
    i = 0
    while i + 1 < n and nus[i] + nus[i + 1] > rho:
        total += nonclassical_pair_energy(W, float(nus[i]), float(nus[i + 1]))
        i += 2
    total += W.mu * float(np.sum((nus[i:] - 1.0) ** 2))
    return total


def reduced_energy(W: CosseratWeights, F: DeformationGradient) -> float:
    """Minimum of the shear-stretch energy over all rotations.

    Dispatches to the closed form of the appropriate dimension. For
    classical weights the minimum is mu ||U - 1||^2 (the skew part
    vanishes at the polar factor).
    """
    nus = F.singular_values
    if W.is_classical:
        return W.mu * float(np.sum((nus - 1.0) ** 2))
    if F.dim == 2:
        from .planar import wred_2d

        return wred_2d(W, F)
    if F.dim == 3:
        from .spatial import wred_3d

        return wred_3d(W, F)
    return _wred_general(W, nus)
