import math

import pytest

from src.certifiers.growth_bounds import verify_growth_bound
from src.curvature.field import curvature
from src.curvature.orientation import sphere_orientation
from src.graph.families import FamilyKind, GraphFamily, MeasureConvention, generate, interior
from src.graph.weighted_graph import WeightedGraph
from src.growth.volume import DMAX_EDGE_PROXY, DMAX_MEASURE_PROXY, dmax_condition, volume_growth
from src.metrics.intrinsic import Recipe, build_metric
from src.utils.errors import ArgumentError


def test_growth_values_on_the_binary_tree():
    graph = generate(GraphFamily(FamilyKind.K_REGULAR_TREE, radius=5, k=2))
    estimate = volume_growth(graph, build_metric(graph, Recipe.CANONICAL), radii=[1.0, 2.0])
    # B_1 holds 3 vertices and B_2 holds 15
    assert estimate.per_radius[0] == (1.0, 0.0)
    assert estimate.mu_hat == pytest.approx(math.log(5.0) / 2.0)
    assert list(estimate.to_frame().columns) == ["r", "inf_value"]


def test_minimum_over_centers():
    graph = generate(GraphFamily(FamilyKind.PATH, radius=4))
    metric = build_metric(graph, Recipe.NATURAL)
    # endpoint 0: B_1 = {0, 1}, B_2 = {0, 1, 2}; middle 2: B_1 = {1, 2, 3}, B_2 = everything
    estimate = volume_growth(graph, metric, centers=[0, 2], radii=[1.0, 2.0])
    assert estimate.mu_hat == pytest.approx(math.log(1.5) / 2.0)
    assert estimate.to_dict()["centers"] == [0, 2]


def test_radii_must_increase():
    graph = generate(GraphFamily(FamilyKind.PATH, radius=4))
    metric = build_metric(graph, Recipe.NATURAL)
    with pytest.raises(ArgumentError):
        volume_growth(graph, metric, radii=[2.0, 1.0])
    with pytest.raises(ArgumentError):
        volume_growth(graph, metric, radii=[0.0, 1.0])


def test_dmax_condition_tags():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)])
    assert dmax_condition(graph, build_metric(graph, Recipe.NATURAL)) == DMAX_EDGE_PROXY
    zero = build_metric(graph, Recipe.CUSTOM, custom=[0.0, 0.0])
    assert dmax_condition(graph, zero) == DMAX_MEASURE_PROXY
    massless = WeightedGraph.from_edges(2, [(0, 1, 1.0)], m=[1.0, 0.0])
    assert dmax_condition(massless, build_metric(massless, Recipe.CUSTOM, custom=[0.0, 0.0])) == "unverified"


def test_edge_tag_only_reflects_the_truncation():
    # inverse-degree lengths on the antitree shrink with depth yet stay positive at every radius
    shallow = generate(GraphFamily(FamilyKind.ANTITREE, radius=3))
    deep = generate(GraphFamily(FamilyKind.ANTITREE, radius=6))
    shallow_metric = build_metric(shallow, Recipe.INVERSE_DEGREE)
    deep_metric = build_metric(deep, Recipe.INVERSE_DEGREE)
    assert 0 < deep_metric.min_edge_dist < shallow_metric.min_edge_dist
    assert dmax_condition(shallow, shallow_metric) == DMAX_EDGE_PROXY
    assert dmax_condition(deep, deep_metric) == DMAX_EDGE_PROXY


def test_growth_is_consistent_with_curvature_on_the_binary_tree():
    family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=12, k=2, measure=MeasureConvention.WEIGHTED_DEGREE)
    graph = generate(family)
    metric = build_metric(graph, Recipe.NATURAL)
    k_lower = curvature(graph, metric, sphere_orientation(graph), interior(graph, family)).k_lower
    record = verify_growth_bound(graph, metric, family, k_lower, list(range(1, 13)))
    assert record.passed
    assert record.context["mu_hat"] == pytest.approx(math.log(16380.0 / 8.0) / 12.0)
    assert record.context["reading"] == "consistency check, not a proof"
