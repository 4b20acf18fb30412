from matterwave.models.core_model import (ExtremaReport, Extremum, ReducedParams, detection_ratio,
                                          detection_ratio_approx, find_extrema, monotonic_threshold, z0)
from matterwave.models.numerics import Bracket, QuadratureSpec, find_root, integrate, refine_extremum

__all__ = [
    'Bracket',
    'QuadratureSpec',
    'find_root',
    'integrate',
    'refine_extremum',
    'ReducedParams',
    'Extremum',
    'ExtremaReport',
    'z0',
    'detection_ratio',
    'detection_ratio_approx',
    'find_extrema',
    'monotonic_threshold'
]
