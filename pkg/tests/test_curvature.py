import math

import numpy as np
import pytest

from src.curvature.field import curvature
from src.curvature.orientation import Orientation, empty_orientation, random_orientation, sphere_orientation
from src.graph.families import FamilyKind, GraphFamily, MeasureConvention, generate, interior
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cuts import edge_flux
from src.metrics.intrinsic import Recipe, build_metric
from src.orchestrator.samplers import instance_rng, random_graph
from src.utils.errors import InputError, OrientationError


def regular_tree(k, radius):
    family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=radius, k=k, measure=MeasureConvention.WEIGHTED_DEGREE)
    return family, generate(family)


@pytest.mark.parametrize("k, radius", [(2, 3), (3, 3), (4, 2)])
def test_tree_interior_curvature_is_exact(k, radius):
    family, graph = regular_tree(k, radius)
    field = curvature(graph, build_metric(graph, Recipe.NATURAL), sphere_orientation(graph), interior(graph, family))
    assert field.k_lower == (k - 1) / (k + 1)
    # the root has only outward edges
    assert field.minus_K()[0] == 1.0


def test_antitree_root_curvature():
    family = GraphFamily(FamilyKind.ANTITREE, radius=4)
    graph = generate(family)
    metric = build_metric(graph, Recipe.INVERSE_DEGREE)
    field = curvature(graph, metric, sphere_orientation(graph), interior(graph, family))
    assert field.minus_K()[0] == pytest.approx(4.0 / math.sqrt(10.0))
    assert field.k_lower > 0


def test_sphere_orientation_leaves_sphere_cliques_unoriented():
    graph = generate(GraphFamily(FamilyKind.TREE_WITH_SPHERE_EDGES, radius=2, k=2))
    orientation = sphere_orientation(graph)
    assert orientation.oriented_count == 6
    assert int(np.count_nonzero(orientation.sign == 0)) == 2 * 7


def test_orientation_must_be_antisymmetric():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)])
    with pytest.raises(OrientationError):
        Orientation(graph, np.array([1, 1]))
    with pytest.raises(OrientationError):
        Orientation(graph, np.array([1]))


def test_unreachable_vertices_have_no_sphere():
    graph = WeightedGraph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(OrientationError):
        sphere_orientation(graph)


def test_reverse_flips_the_field():
    _, graph = regular_tree(2, 3)
    metric = build_metric(graph, Recipe.NATURAL)
    orientation = sphere_orientation(graph)
    forward = curvature(graph, metric, orientation)
    backward = curvature(graph, metric, orientation.reverse())
    assert np.allclose(backward.K, -forward.K)
    assert np.allclose(curvature(graph, metric, empty_orientation(graph)).K, 0.0)


def test_orientation_document_restores_the_signs():
    graph = generate(GraphFamily(FamilyKind.ANTITREE, radius=3))
    orientation = random_orientation(graph, np.random.default_rng(0))
    restored = Orientation.from_dict(graph, orientation.to_dict())
    assert np.array_equal(restored.sign, orientation.sign)
    with pytest.raises(OrientationError):
        Orientation.from_dict(graph, {"E_plus": [{"u": 1, "v": 2}]})
    with pytest.raises(InputError):
        Orientation.from_dict(graph, {"E_plus": [{"u": 0}]})


def test_field_table_has_one_row_per_vertex():
    family, graph = regular_tree(2, 3)
    field = curvature(graph, build_metric(graph, Recipe.NATURAL), sphere_orientation(graph), interior(graph, family))
    frame = field.to_frame(graph)
    assert list(frame.columns) == ["vertex", "sphere", "K", "minus_K"]
    assert len(frame) == 7
    assert list(frame["sphere"]) == [0, 1, 1, 2, 2, 2, 2]
    assert field.to_dict()["vertex_count"] == 7


def measure_weighted_total(graph, metric, orientation):
    field = curvature(graph, metric, orientation)
    scale = float(np.sum(np.abs(edge_flux(graph, metric))))
    return float(np.sum(graph.m * field.K)), scale


@pytest.mark.parametrize("family", [
    GraphFamily(FamilyKind.K_REGULAR_TREE, radius=4, k=3),
    GraphFamily(FamilyKind.ANTITREE, radius=4),
    GraphFamily(FamilyKind.TREE_WITH_SPHERE_EDGES, radius=3, k=2, measure=MeasureConvention.WEIGHTED_DEGREE),
])
def test_curvature_sums_to_zero_under_the_sphere_orientation(family):
    graph = generate(family)
    metric = build_metric(graph, Recipe.CANONICAL)
    total, scale = measure_weighted_total(graph, metric, sphere_orientation(graph))
    assert abs(total) <= 1e-12 * scale


@pytest.mark.parametrize("index", range(6))
def test_curvature_sums_to_zero_when_every_edge_is_oriented(index):
    rng = instance_rng(0, "curvature-sum", index)
    graph = random_graph(rng)
    metric = build_metric(graph, Recipe.CANONICAL)
    orientation = random_orientation(graph, rng, p=1.0)
    assert np.all(orientation.sign != 0)
    total, scale = measure_weighted_total(graph, metric, orientation)
    assert abs(total) <= 1e-12 * scale
