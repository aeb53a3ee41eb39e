"""Homogeneous 4x4 rotations about arbitrary axes, and their classification."""

from .eigen4 import EigenPair, EigenSystem, char_poly, eigen_decompose, eigenvalues, solve_quartic
from .projective_core import (
    HomPoint,
    Hyperplane,
    IndeterminatePointError,
    ProjectiveError,
    Tolerance,
    apply,
    canonical_scale,
    compose,
    conjugate,
    givens,
    mat_proj_equal,
    proj_equal,
    translation,
)
from .rotation_build import (
    AxisByPlanes,
    AxisByPointDir,
    RotationSpec,
    axis_to_plane_pair,
    bisector_planes,
    dihedral_angle,
    eigvec_complex_pair,
    rotation_eigen_reconstruct,
    rotation_from_reflections,
    rotation_matrix,
    rotation_rodrigues,
    two_points_to_axis,
)
from .rotation_classify import RotationReport, classify_rotation, round_trip
from .stereohomology import (
    StereoClass,
    StereoSpec,
    classify_stereo,
    make_projection,
    make_reflection,
    make_scaling,
    make_shear,
    orthographic_reflection,
)

__version__ = "0.1.0"
