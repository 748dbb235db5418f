"""Classical polar decomposition and Euclidean distance to the rotation group.

The polar factor is computed from the SVD (rotation = left @ right.T),
which is unconditionally stable at the small sizes this package targets
and reuses the singular values every other formula needs anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DimensionMismatch
from .matcore import SpectralData

if TYPE_CHECKING:  # pragma: no cover
    from .energy import DeformationGradient


@dataclass(frozen=True)
class PolarData:
    """Factors of F = rotation @ stretch plus the spectral frame of the stretch.

    ``stretch`` is symmetric positive definite; ``spectral`` holds its
    eigenframe Q and descending eigenvalues (the singular values of F).
    """

    rotation: np.ndarray
    stretch: np.ndarray
    spectral: SpectralData


def polar_decompose(F: "DeformationGradient") -> PolarData:
    """Right polar decomposition of a deformation gradient."""
    return F.polar


def dist_sq_so_n(F: "DeformationGradient") -> float:
    """Squared Euclidean (Frobenius) distance of F to the rotation group.

    Equals sum_i (nu_i - 1)^2 in the singular values of F, the minimum of
    ||R^T F - 1||^2 over rotations, attained at the polar factor.
    """
    nu = F.singular_values
    return float(np.sum((nu - 1.0) ** 2))


def polar_2d_explicit(F: "DeformationGradient") -> np.ndarray:
    """Closed-form planar polar factor from the traces of F and JF.

    Uses tr(U) = sqrt(tr(F)^2 + tr(JF)^2), so no decomposition is needed.
    """
    if F.dim != 2:
        raise DimensionMismatch("explicit polar formula requires a 2x2 input")
    m = F.matrix
    tr_f = m[0, 0] + m[1, 1]
    tr_jf = m[0, 1] - m[1, 0]
    tr_u = np.hypot(tr_f, tr_jf)
    return np.array([[tr_f, tr_jf], [-tr_jf, tr_f]]) / tr_u


def tangent_bundle_dist_sq(F: "DeformationGradient") -> float:
    """Squared distance of F to the set SO(n)(1 + so(n)).

    This is the reduced shear-stretch energy at weights (1, 0): the
    infimum of ||R^T F - 1 - A||^2 over rotations R and skew-symmetric A
    collapses, after the inner minimization over A, to the closed form
    evaluated here. The numeric-infimum route lives in the oracle module
    as a verification tool only.
    """
    from .energy import CosseratWeights

    w10 = CosseratWeights(1.0, 0.0)
    if F.dim == 2:
        from .planar import wred_2d

        return wred_2d(w10, F)
    if F.dim == 3:
        from .spatial import wred_3d

        return wred_3d(w10, F)
    from .ndim import global_min_value_10

    return global_min_value_10(F.singular_values)[1]
