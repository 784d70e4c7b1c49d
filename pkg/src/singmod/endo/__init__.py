"""Matrix model of supersingular endomorphisms, embedding counts and bound reports."""
from .bounds import BoundReport, KatzResult, bound_report, katz_count, preset_report
from .count import (DegreeBounds, MnFilter, count_mn, count_mn_r3, degree_audit,
                    derive_degree_bounds, search_mn, search_mn_r3)
from .matrix import EndoMatrix, build_matrix, char_poly, mat_mul, skew_product

__all__ = [
    "BoundReport", "KatzResult", "bound_report", "katz_count", "preset_report",
    "DegreeBounds", "MnFilter", "count_mn", "count_mn_r3", "degree_audit",
    "derive_degree_bounds", "search_mn", "search_mn_r3",
    "EndoMatrix", "build_matrix", "char_poly", "mat_mul", "skew_product",
]
