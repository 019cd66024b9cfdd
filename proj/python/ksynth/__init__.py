"""Image-domain CT reconstruction-kernel synthesis (smooth -> sharp),
DFOV-agnostic, with a frequency-domain forward model and an unrolled
model-based solver."""

from ._core import (
    DataError,
    DenoiserParams,
    ForwardOperator,
    FrequencyGrid,
    Image,
    KernelMtfProfile,
    MtfCurve,
    NumericError,
    ValidationError,
    curve_from_profile,
    denoise_forward,
    direct_ratio_synthesis,
    estimate_mtf,
    fft2_magnitude,
    image_metrics,
    load_ksim,
    make_forward_operator,
    make_training_pair,
    mtf_fidelity,
    ratio_filter,
    sample_on_grid,
    save_ksim,
    set_max_threads,
    shaped_noise,
    shepp_logan,
    ssim,
    synthesize,
    water_phantom,
    wire_phantom,
)

__all__ = [
    "DataError",
    "DenoiserParams",
    "ForwardOperator",
    "FrequencyGrid",
    "Image",
    "KernelMtfProfile",
    "MtfCurve",
    "NumericError",
    "ValidationError",
    "curve_from_profile",
    "denoise_forward",
    "direct_ratio_synthesis",
    "estimate_mtf",
    "fft2_magnitude",
    "image_metrics",
    "load_ksim",
    "make_forward_operator",
    "make_training_pair",
    "mtf_fidelity",
    "ratio_filter",
    "sample_on_grid",
    "save_ksim",
    "set_max_threads",
    "shaped_noise",
    "shepp_logan",
    "ssim",
    "synthesize",
    "water_phantom",
    "wire_phantom",
]
