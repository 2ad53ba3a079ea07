"""Frames, Riesz bases and l1-boundedness diagnostics in finite dimensions."""

__version__ = "0.1.0"

from .errors import FrameforgeError
from .linalg import TolerancePolicy
from .frames import (
    Frame,
    canonical_dual,
    frame_bounds,
    frame_operator,
    naimark_dilate,
    parseval_normalize,
    reconstruct,
)
from .decompose import bessel_to_riesz_pair, casazza_decompose, unitary_split
from .ell1 import ell1_partial_sums, finite_dim_certificate, norm_bound_necessity
from .constructions import FrameFamilySpec, build_family

__all__ = [
    "__version__",
    "FrameforgeError",
    "TolerancePolicy",
    "Frame",
    "canonical_dual",
    "frame_bounds",
    "frame_operator",
    "naimark_dilate",
    "parseval_normalize",
    "reconstruct",
    "bessel_to_riesz_pair",
    "casazza_decompose",
    "unitary_split",
    "ell1_partial_sums",
    "finite_dim_certificate",
    "norm_bound_necessity",
    "FrameFamilySpec",
    "build_family",
]
