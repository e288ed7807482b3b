"""MCMC sampling of edge k-colorings of bipartite graphs."""
from .graph import BipartiteGraph, Coloring, InputError
from .coloring import ContractError, validate, initial_coloring, repair_deficiencies
from .twocolor import two_color_subgraph, subpath_menu, anchored_pair_menu
from .chain import (
    GeneralKernel,
    Proposal,
    Way,
    WayError,
    ReverseError,
    apply_way,
    enumerate_ways,
    propose,
    reverse_way,
    way_probability,
)
from .regular import RegularKernel, assert_regular
from .metropolis import BoundViolation, ChainStats, mh_step, run_chain
from .oracle import SolutionSet, enumerate_colorings, tvd
from .diameter import PlanError, TransformPlan, component_steps, transform_plan
from .latin import LatinRectangle, LatinSquare, rectangle_to_graph, sample_completion

__all__ = [
    "BipartiteGraph",
    "Coloring",
    "InputError",
    "ContractError",
    "validate",
    "initial_coloring",
    "repair_deficiencies",
    "two_color_subgraph",
    "subpath_menu",
    "anchored_pair_menu",
    "GeneralKernel",
    "RegularKernel",
    "Proposal",
    "Way",
    "WayError",
    "ReverseError",
    "apply_way",
    "enumerate_ways",
    "propose",
    "reverse_way",
    "way_probability",
    "assert_regular",
    "BoundViolation",
    "ChainStats",
    "mh_step",
    "run_chain",
    "SolutionSet",
    "enumerate_colorings",
    "tvd",
    "PlanError",
    "TransformPlan",
    "component_steps",
    "transform_plan",
    "LatinRectangle",
    "LatinSquare",
    "rectangle_to_graph",
    "sample_completion",
]
