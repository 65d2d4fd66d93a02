"""Combinatorial handlebody calculus for nuclei, log transforms, knot
surgery, W-modifications and Stein structures, with checkable certificates."""

from __future__ import annotations

from .checker import CheckResult, check_certificate
from .exotica import (
    DataSet,
    ExoticaCertificate,
    GenusBound,
    GenusLedger,
    build_data_set,
    certify_family,
    gen_knot_sequence,
    gen_p_sequence,
    nonstein_obstruction,
    stein_nonstein_pipeline,
    w_plus_exotica_pipeline,
)
from .handlebody import (
    Handlebody,
    LegendrianData,
    NucleusMarker,
    TwoHandle,
    boundary_sum,
    build,
    cusp_neighborhood,
    gompf_nucleus,
    homology,
    make_handle,
    verify_nucleus,
)
from .intlat import IntMatrix, classify_form, smith_normal_form
from .legendrian import stein_check, steinify, tb_rotation
from .manifest import from_manifest, to_manifest
from .surgery import cork_twist, knot_surgery, log_transform, slide, strip_corks, w_modify
from .swadj import BasicClassSet, KnotSpec, alexander, log_multiplier, sw_knot_surgery, sw_log_transform

__all__ = [
    "BasicClassSet", "CheckResult", "DataSet", "ExoticaCertificate", "GenusBound", "GenusLedger",
    "Handlebody", "IntMatrix", "KnotSpec", "LegendrianData", "NucleusMarker", "TwoHandle",
    "alexander", "boundary_sum", "build", "build_data_set", "certify_family", "check_certificate",
    "classify_form", "cork_twist", "cusp_neighborhood", "from_manifest", "gen_knot_sequence",
    "gen_p_sequence", "gompf_nucleus", "homology", "knot_surgery", "log_multiplier", "log_transform",
    "make_handle", "nonstein_obstruction", "slide", "smith_normal_form", "stein_check",
    "stein_nonstein_pipeline", "steinify", "strip_corks", "sw_knot_surgery", "sw_log_transform",
    "tb_rotation", "to_manifest", "verify_nucleus", "w_modify", "w_plus_exotica_pipeline",
]
