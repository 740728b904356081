"""Exact optimal quantization of the standard triadic Cantor distribution."""
from fractions import Fraction

from .distortion import V2, V3, DistortionResult, codebook_distortion, vn_exact
from .measure import TRIADIC, CylinderUnion, MeasureSpec, map_apply
from .quantizers import alpha1, alpha2, alpha3, count_optimal_sets, optimal_quantizer, optimal_set

V = TRIADIC.variance

__all__ = [
    "Fraction",
    "V",
    "V2",
    "V3",
    "TRIADIC",
    "MeasureSpec",
    "CylinderUnion",
    "DistortionResult",
    "alpha1",
    "alpha2",
    "alpha3",
    "codebook_distortion",
    "count_optimal_sets",
    "map_apply",
    "optimal_quantizer",
    "optimal_set",
    "vn_exact",
]
