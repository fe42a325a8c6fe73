"""Weighted-D² initial placement and Lloyd descent for mobile sensor coverage."""

from .coverage import CoverageReport, coverage_cost, sandwich_check, wkmeans_cost
from .density import (
    DensityField,
    GaussianTerm,
    PolygonMoments,
    batch_moments,
    evaluate,
    normalize,
    reference_density,
    polygon_moments,
)
from .discretization import CellPartition, build_cells
from .geometry import (
    ConvexPolygon,
    VoronoiPartition,
    clip_halfplane,
    max_neighbor_distance,
    polygon_area_centroid,
    voronoi_partition,
)
from .harness import Scenario, TrialRecord, reference_scenario, run_scenario, run_trial, summarize
from .lloyd import DescentSettings, DescentTrace, lloyd_step, run_descent
from .oracle import WeightedPointSet, brute_force_opt, lemma1_check, theorem3_check
from .sampling import RngStream, uniform_sample, weighted_d2_sample

__version__ = "0.1.0"
