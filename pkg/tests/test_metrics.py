import math

import numpy as np
import pytest
from scipy.sparse import csgraph

from src.graph.families import FamilyKind, GraphFamily, generate
from src.graph.weighted_graph import WeightedGraph
from src.metrics.intrinsic import Recipe, build_metric, certify_intrinsic, metric_from_dict
from src.orchestrator.samplers import instance_rng, random_graph
from src.utils.errors import MetricError


def edge_value(graph, values, x, y):
    src, dst, _ = graph.edges
    return float(values[np.flatnonzero((src == x) & (dst == y))[0]])


def test_natural_metric_is_one_on_edges():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    metric = build_metric(graph, Recipe.NATURAL)
    assert list(metric.edge_dist) == [1.0] * 4
    assert metric.neighbor_side() == "ge1"


def test_canonical_metric_on_the_binary_tree():
    graph = generate(GraphFamily(FamilyKind.K_REGULAR_TREE, radius=4, k=2))
    metric = build_metric(graph, Recipe.CANONICAL)
    assert np.allclose(metric.edge_dist, 1.0 / math.sqrt(3.0))
    assert metric.neighbor_side() == "le1"


def test_inverse_degree_uses_the_larger_degree():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    metric = build_metric(graph, Recipe.INVERSE_DEGREE)
    assert np.allclose(metric.edge_length, 2.0 ** -0.5)


def test_canonical_metric_is_intrinsic_on_random_graphs():
    for index in range(20):
        graph = random_graph(instance_rng(1, "metrics", index))
        assert certify_intrinsic(graph, build_metric(graph, Recipe.CANONICAL)).is_intrinsic


def test_inverse_degree_is_intrinsic_for_unit_measure():
    graph = generate(GraphFamily(FamilyKind.ANTITREE, radius=4))
    certificate = certify_intrinsic(graph, build_metric(graph, Recipe.INVERSE_DEGREE))
    assert certificate.is_intrinsic


def test_natural_metric_with_small_measure_is_not_intrinsic():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)], m=0.5)
    certificate = certify_intrinsic(graph, build_metric(graph, Recipe.NATURAL))
    assert not certificate.is_intrinsic
    assert list(certificate.slack) == pytest.approx([-0.5, -0.5])
    assert certificate.to_dict()["min_slack"] == pytest.approx(-0.5)


def test_long_edge_is_closed_by_the_shorter_path():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (2, 1, 1.0)])
    metric = build_metric(graph, Recipe.CUSTOM, custom={(0, 1): 3.0, (0, 2): 1.0, (1, 2): 1.0})
    assert edge_value(graph, metric.edge_length, 0, 1) == 3.0
    assert edge_value(graph, metric.edge_dist, 0, 1) == 2.0
    assert edge_value(graph, metric.edge_dist, 1, 0) == 2.0
    assert metric.dist[0, 1] == 2.0


def test_distances_from_matches_the_dense_matrix():
    graph = random_graph(instance_rng(2, "metrics", 0))
    metric = build_metric(graph, Recipe.CANONICAL)
    rows = metric.distances_from([0, 3])
    fresh = build_metric(graph, Recipe.CANONICAL)
    assert np.allclose(rows, fresh.dist[[0, 3]])


def test_custom_lengths_are_checked():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    with pytest.raises(MetricError):
        build_metric(graph, Recipe.CUSTOM, custom={(0, 1): -1.0, (1, 2): 1.0})
    with pytest.raises(MetricError):
        build_metric(graph, Recipe.CUSTOM, custom={(0, 1): 1.0})
    with pytest.raises(MetricError):
        build_metric(graph, Recipe.CUSTOM, custom={(0, 1): 1.0, (1, 0): 2.0, (1, 2): 1.0})
    with pytest.raises(MetricError):
        build_metric(graph, Recipe.CUSTOM, custom=[1.0, 2.0, 1.0, 1.0])
    with pytest.raises(MetricError):
        build_metric(graph, Recipe.CUSTOM)


def test_edge_aligned_array_is_accepted():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    # ordered edges: (0,1), (1,0), (1,2), (2,1)
    metric = build_metric(graph, Recipe.CUSTOM, custom=[0.5, 0.5, 2.0, 2.0])
    assert metric.min_edge_dist == 0.5
    assert metric.is_uniformly_discrete(0.5)
    assert not metric.is_uniformly_discrete(0.6)
    assert metric.neighbor_side() is None


def test_scaling():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)])
    metric = build_metric(graph, Recipe.NATURAL)
    assert list(metric.scaled(2.0).edge_dist) == [2.0, 2.0]
    with pytest.raises(MetricError):
        metric.scaled(0.0)


def test_metric_document_keeps_recipe_and_lengths():
    graph = generate(GraphFamily(FamilyKind.ANTITREE, radius=3))
    metric = build_metric(graph, Recipe.INVERSE_DEGREE)
    document = metric.to_dict()
    assert document["recipe"] == "inverse_degree"
    assert len(document["edge_lengths"]) == graph.edge_count
    restored = metric_from_dict(graph, document)
    assert restored.recipe == Recipe.INVERSE_DEGREE
    assert np.allclose(restored.edge_length, metric.edge_length)

    with pytest.raises(MetricError):
        metric_from_dict(graph, {"recipe": "custom"})


@pytest.mark.parametrize("recipe", [Recipe.NATURAL, Recipe.CANONICAL, Recipe.INVERSE_DEGREE, Recipe.POTENTIAL_ADAPTED])
def test_closure_is_idempotent(recipe):
    for index in range(4):
        graph = random_graph(instance_rng(9, "closure", index), potential_range=(0.0, 1.0))
        metric = build_metric(graph, recipe)
        reclosed = csgraph.shortest_path(np.array(metric.dist), directed=False)
        assert np.allclose(reclosed, metric.dist, rtol=1e-12, atol=0.0)

        src, dst, _ = graph.edges
        closed = {(int(x), int(y)): float(d) for x, y, d in zip(src, dst, metric.edge_dist) if x < y}
        again = build_metric(graph, Recipe.CUSTOM, custom=closed)
        assert np.allclose(again.edge_dist, metric.edge_dist, rtol=1e-12, atol=0.0)


def test_closure_shortens_a_long_custom_edge_once():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    # ordered edges: (0,1), (0,2), (1,0), (1,2), (2,0), (2,1)
    metric = build_metric(graph, Recipe.CUSTOM, custom=[1.0, 5.0, 1.0, 1.0, 5.0, 1.0])
    assert edge_value(graph, metric.edge_dist, 0, 2) == 2.0
    again = build_metric(graph, Recipe.CUSTOM, custom=np.array(metric.edge_dist))
    assert list(again.edge_dist) == list(metric.edge_dist)
