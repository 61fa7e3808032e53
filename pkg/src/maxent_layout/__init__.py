"""Multilevel maxent-stress layouts for large undirected graphs."""

from .coarsening import Clustering, Hierarchy, build_hierarchy, contract, sclap_cluster, size_bound
from .dynamic import PerturbationParams, perturb, run_update, update_layout
from .engine import (LayoutResult, OptimizerParams, initial_layout, iterate_approx, iterate_exact,
                     layout_multilevel, level_context, optimize_level, prolong, relative_change,
                     run_multilevel)
from .graph import (Graph, GraphError, build_graph, graph_from_arrays, is_connected,
                    largest_connected_component)
from .io import ParseError, read_coords, read_edge_list, read_graph, read_metis, write_coords
from .metrics import (DistanceMatrix, MetricsError, Quality, apsp_unit, evaluate_layout,
                      full_stress, jitter_coincident, maxent_stress, optimal_scale)
from .report import RunReport, read_reports, write_reports
from .svg import SvgOptions, render_svg, write_svg

__version__ = "0.1.0"
