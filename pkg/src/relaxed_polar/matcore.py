"""Dense small-matrix kernels every other module builds on.

All routines operate on plain ``numpy`` arrays and are pure functions:
nothing here mutates its inputs or keeps state, so everything is safe to
call concurrently. Intended scale is n <= ~50; nothing is tuned beyond
that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotSkew, NotSymmetric

# Structural checks (orthogonality, skewness, ...) use an absolute
# tolerance; reconstruction residuals are judged relative to the input.
STRUCTURAL_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10


def as_square(x) -> np.ndarray:
    """Coerce to a finite, square, float matrix of dim >= 1."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def sym(x) -> np.ndarray:
    """Symmetric part (X + X^T) / 2."""
    a = as_square(x)
    return (a + a.T) / 2.0


def skew(x) -> np.ndarray:
    """Skew-symmetric part (X - X^T) / 2."""
    a = as_square(x)
    return (a - a.T) / 2.0


def frobenius_sq(x) -> float:
    """Squared Frobenius norm tr(X^T X)."""
    a = np.asarray(x, dtype=float)
    return float(np.sum(a * a))


def frobenius(x) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def is_rotation(r, tol: float = STRUCTURAL_TOL) -> bool:
    """True if R^T R = 1 and det R = 1 within ``tol`` (Frobenius / absolute)."""
    a = np.asarray(r, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    n = a.shape[0]
    if not np.all(np.isfinite(a)):
        return False
    ortho = np.linalg.norm(a.T @ a - np.eye(n)) <= tol * max(1.0, np.sqrt(n))
    return bool(ortho and abs(np.linalg.det(a) - 1.0) <= tol * max(1.0, np.sqrt(n)))


@dataclass(frozen=True)
class SpectralData:
    """Eigendata of a symmetric matrix: descending values, det-+1 frame.

    ``frame`` columns are the eigenvectors q_i matching ``values``;
    ``frame @ diag(values) @ frame.T`` reconstructs the input.
    """

    values: np.ndarray
    frame: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.frame @ np.diag(self.values) @ self.frame.T


def sym_eig(s) -> SpectralData:
    """Eigendecomposition of a symmetric matrix.

    Eigenvalues are returned in descending order (ties keep the order the
    underlying solver produced); the eigenvector frame is forced to
    det = +1 by negating its last column if needed. Raises
    ``NotSymmetric`` if the input's skew part exceeds the relative
    reconstruction tolerance.
    """
    a = as_square(s)
    scale = 1.0 + np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > RECONSTRUCTION_TOL * scale:
        raise NotSymmetric("input is not symmetric within tolerance")
    w, v = np.linalg.eigh((a + a.T) / 2.0)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order].copy()
    if np.linalg.det(v) < 0.0:
        v[:, -1] = -v[:, -1]
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralData(values=w, frame=v)


def svd_ordered(f) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD F = left @ diag(values) @ right.T with descending values.

    ``left`` and ``right`` are orthogonal (not necessarily det +1).
    """
    a = as_square(f)
    u, s, vh = np.linalg.svd(a)
    return u, s, vh.T


def skew_exp(a) -> np.ndarray:
    """Matrix exponential of a skew-symmetric matrix; the result is a rotation.

    Closed forms are used for n = 2 (planar rotation) and n = 3
    (angle-axis form); larger sizes fall back to a dense Pade
    exponential. Raises ``NotSkew`` when the symmetric part exceeds the
    structural tolerance.
    """
    m = as_square(a)
    n = m.shape[0]
    if np.linalg.norm(m + m.T) > STRUCTURAL_TOL * max(1.0, np.linalg.norm(m)) + STRUCTURAL_TOL:
        raise NotSkew("input is not skew-symmetric within tolerance")
    m = (m - m.T) / 2.0
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        t = m[1, 0]
        c, s = np.cos(t), np.sin(t)
        return np.array([[c, -s], [s, c]])
    if n == 3:
        w = np.array([m[2, 1], m[0, 2], m[1, 0]])
        theta = np.linalg.norm(w)
        if theta < 1e-8:
            # second-order series is exact to ~1e-24 here
            return np.eye(3) + m + (m @ m) / 2.0
        k = m / theta
        return np.eye(3) + np.sin(theta) * k + (1.0 - np.cos(theta)) * (k @ k)
    return scipy.linalg.expm(m)
