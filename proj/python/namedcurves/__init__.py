"""Color-naming guided tone curves: decompose, fit, apply and evaluate."""
from ._namedcurves import (
    COLOR_GROUPS,
    COLOR_NAMES,
    ColorNamingModel,
    CurveSet,
    FitResult,
    NamedCurvesError,
    apply_fitted,
    bezier_eval,
    compute_maps,
    de_casteljau_eval,
    delta_e_00,
    delta_e_00_lab,
    delta_e_ab,
    evaluate,
    fit,
    load_png,
    mse,
    normalize_increments,
    psnr,
    read_curves,
    save_png,
    srgb_to_lab,
    ssim,
    write_curves,
)

__all__ = [
    "COLOR_GROUPS",
    "COLOR_NAMES",
    "ColorNamingModel",
    "CurveSet",
    "FitResult",
    "NamedCurvesError",
    "apply_fitted",
    "bezier_eval",
    "compute_maps",
    "de_casteljau_eval",
    "delta_e_00",
    "delta_e_00_lab",
    "delta_e_ab",
    "evaluate",
    "fit",
    "load_png",
    "mse",
    "normalize_increments",
    "psnr",
    "read_curves",
    "save_png",
    "srgb_to_lab",
    "ssim",
    "write_curves",
]
