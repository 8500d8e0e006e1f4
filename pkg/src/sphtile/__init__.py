"""Edge-to-edge tilings of the sphere by congruent squares and congruent rhombi."""

from __future__ import annotations

from .catalog import FamilyId, build, catalog_ids, timezone_strip
from .classifier import RunReport, angle_cases, classify, classify_all, identify
from .combinatorics import (
    Avc,
    TilingStats,
    VertexType,
    counting_lemma_filter,
    enumerate_degree3_seeds,
    enumerate_vertices,
    feasible_tile_counts,
    integer_feasibility,
    remainder,
    vt,
)
from .embedding import Embedding, embed, export_csv_cgamma, export_off, export_svg
from .errors import BudgetExceeded, ClosureFailure, DomainError, IllConditioned, SphtileError, StructuralError
from .geometry import (
    AngleSet,
    SolutionSet,
    angles_for_family,
    c_of_gamma,
    earth_map_angles,
    edge_length,
    eq5_residual,
    family_point,
    gamma_of_c,
    solve_vertex_system,
)
from .tiling import Tiling, VerificationReport, canonical_code, is_isomorphic, realized_avc, stats, verify

__version__ = "0.1.0"

__all__ = [
    "AngleSet", "Avc", "BudgetExceeded", "ClosureFailure", "DomainError", "Embedding", "FamilyId",
    "IllConditioned", "RunReport", "SolutionSet", "SphtileError", "StructuralError", "Tiling", "TilingStats",
    "VerificationReport", "VertexType", "angle_cases", "angles_for_family", "build", "c_of_gamma",
    "canonical_code", "catalog_ids", "classify", "classify_all", "counting_lemma_filter", "earth_map_angles",
    "edge_length", "embed", "enumerate_degree3_seeds", "enumerate_vertices", "eq5_residual",
    "export_csv_cgamma", "export_off", "export_svg", "family_point", "feasible_tile_counts", "gamma_of_c",
    "identify", "integer_feasibility", "is_isomorphic", "realized_avc", "remainder", "solve_vertex_system",
    "stats", "timezone_strip", "verify", "vt",
]
