"""Energy-minimizing rotations for the weighted Cosserat shear-stretch energy.

Closed-form relaxed polar factors in dimensions 2, 3 and n, the reduced
energies in terms of singular values, and an independent stochastic
Riemannian-descent oracle that verifies every closed form.
"""

from .energy import (
    CosseratWeights,
    DeformationGradient,
    Regime,
    absolute_rotation,
    energy,
    reduce_parameters,
    reduced_energy,
    relative_rotation,
    rescale,
)
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    InadmissiblePartition,
    MatrixParseError,
    NotSkew,
    NotSymmetric,
    OrientationError,
    RegimeError,
    TooLarge,
)
from .matcore import (
    SpectralData,
    frobenius_sq,
    is_rotation,
    skew,
    skew_exp,
    svd_ordered,
    sym,
    sym_eig,
)
from .ndim import (
    CriticalPartition,
    GlobalMinimizers,
    critical_value,
    enumerate_critical_partitions,
    global_minimizers_nd,
    realize_rotation,
    traversal_minimize,
    traversal_path,
)
from .oracle import (
    OracleConfig,
    OracleResult,
    critical_scan,
    global_minimize,
    haar_sample,
    riemannian_descent,
)
from .planar import PlanarSolution, optimal_angles, polar_angle, simple_shear, wred_2d
from .polar import PolarData, dist_sq_so_n, polar_2d_explicit, polar_decompose, tangent_bundle_dist_sq
from .spatial import (
    Domain,
    SpatialSolution,
    classical_neighborhood_check,
    classify_domain,
    plane_of_max_stretch,
    relative_rotation_3d,
    rpolar_3d,
    sl3_criterion,
    wred_3d,
)

__version__ = "0.1.0"

__all__ = [
    "CosseratWeights",
    "CriticalPartition",
    "DeformationGradient",
    "DegenerateSpectrum",
    "DimensionMismatch",
    "Domain",
    "GlobalMinimizers",
    "InadmissiblePartition",
    "MatrixParseError",
    "NotSkew",
    "NotSymmetric",
    "OracleConfig",
    "OracleResult",
    "OrientationError",
    "PlanarSolution",
    "PolarData",
    "Regime",
    "RegimeError",
    "SpatialSolution",
    "SpectralData",
    "TooLarge",
    "absolute_rotation",
    "classical_neighborhood_check",
    "classify_domain",
    "critical_scan",
    "critical_value",
    "dist_sq_so_n",
    "energy",
    "enumerate_critical_partitions",
    "frobenius_sq",
    "global_minimize",
    "global_minimizers_nd",
    "haar_sample",
    "is_rotation",
    "optimal_angles",
    "plane_of_max_stretch",
    "polar_2d_explicit",
    "polar_angle",
    "polar_decompose",
    "realize_rotation",
    "reduce_parameters",
    "reduced_energy",
    "relative_rotation",
    "relative_rotation_3d",
    "rescale",
    "riemannian_descent",
    "rpolar_3d",
    "simple_shear",
    "skew",
    "skew_exp",
    "sl3_criterion",
    "svd_ordered",
    "sym",
    "sym_eig",
    "tangent_bundle_dist_sq",
    "traversal_minimize",
    "traversal_path",
    "wred_2d",
    "wred_3d",
]
