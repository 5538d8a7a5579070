import numpy as np
import pytest

from src.certifiers.potential_bounds import verify_potential_cheeger, verify_potential_form_identity
from src.graph.formatter import graph_from_dict
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cheeger import cheeger_exact
from src.metrics.intrinsic import Recipe, build_metric
from src.orchestrator.samplers import instance_rng, random_graph, random_subset
from src.potentials.doubling import BoundaryConvention, adapt_delta, alpha_dot, double, dotted_boundary
from src.utils.errors import PreconditionError


def test_adapted_delta_from_the_slack():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)], m=1.0, c=[3.0, 0.0])
    metric = build_metric(graph, Recipe.CUSTOM, custom=[0.5, 0.5])
    assert list(adapt_delta(graph, metric)) == pytest.approx([0.5, 0.0])


def test_adapt_delta_needs_an_intrinsic_metric():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)], m=0.5, c=[1.0, 1.0])
    with pytest.raises(PreconditionError):
        adapt_delta(graph, build_metric(graph, Recipe.NATURAL))


def test_doubled_graph_layout():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)], m=[3.0, 5.0, 3.0], c=[0.5, 0.0, 1.5],
                                     labels=["a", "b", None])
    doubled = double(graph, build_metric(graph, Recipe.POTENTIAL_ADAPTED))
    big = doubled.doubled
    assert big.size == 6
    assert big.b[0, 3] == 0.5
    assert big.b[2, 5] == 1.5
    assert big.b[1, 4] == 0.0
    assert big.b[4, 5] == 2.0
    assert list(big.m) == [3.0, 5.0, 3.0, 3.0, 5.0, 3.0]
    assert big.vertex_ids[3:] == (3, 4, 5)
    assert big.labels[3:] == ("a'", "b'", None)
    assert doubled.cross_count == 2
    assert not big.has_potential

    document = doubled.to_dict()
    assert [entry["x_prime"] for entry in document["pairing"]] == [3, 4, 5]
    assert graph_from_dict(document).size == 6


def test_too_large_delta_is_rejected():
    graph = WeightedGraph.from_edges(2, [(0, 1, 1.0)], m=1.0, c=[1.0, 1.0])
    metric = build_metric(graph, Recipe.CUSTOM, custom=[0.5, 0.5])
    with pytest.raises(PreconditionError) as excinfo:
        double(graph, metric, delta=np.array([1.0, 0.0]))
    assert "vertex 0" in str(excinfo.value)


def test_single_vertex_with_potential():
    graph = WeightedGraph.from_edges(1, [], m=1.0, c=[1.0])
    doubled = double(graph, build_metric(graph, Recipe.POTENTIAL_ADAPTED))
    assert list(doubled.delta) == [1.0]
    assert alpha_dot(doubled, [0]).alpha == pytest.approx(1.0)
    record = verify_potential_cheeger(doubled, [0])
    assert record.passed
    assert record.lhs == pytest.approx(1.0)
    assert record.rhs == pytest.approx(0.5)


def test_boundary_conventions_differ_per_boundary_pair():
    # vertex 1 has two outside neighbours and c(1) = 1, slack 2, so delta(1) = sqrt(2)
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], m=4.0, c=[0.0, 1.0, 0.0])
    doubled = double(graph, build_metric(graph, Recipe.NATURAL))
    once = dotted_boundary(doubled, [1], BoundaryConvention.DOUBLED)
    twice = dotted_boundary(doubled, [1], "literal")
    assert once.potential_term == pytest.approx(np.sqrt(2.0))
    assert twice.potential_term == pytest.approx(2.0 * np.sqrt(2.0))
    assert once.boundary_measure == pytest.approx(2.0 + np.sqrt(2.0))
    assert once.to_dict()["potential_term"] == pytest.approx(np.sqrt(2.0))


def test_alpha_dot_matches_the_dotted_boundary_for_both_conventions():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], m=4.0, c=[0.0, 1.0, 0.0])
    doubled = double(graph, build_metric(graph, Recipe.NATURAL))
    for convention in BoundaryConvention:
        best = alpha_dot(doubled, [0, 1, 2], convention=convention)
        candidates = [[0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]
        expected = min(dotted_boundary(doubled, W, convention).ratio for W in candidates)
        assert best.alpha == pytest.approx(expected)


def test_potential_certificates_on_random_graphs():
    for index in range(10):
        rng = instance_rng(0, "potential-test", index)
        graph = random_graph(rng, max_vertices=10, potential_range=(0.1, 3.0))
        doubled = double(graph, build_metric(graph, Recipe.POTENTIAL_ADAPTED))
        assert verify_potential_form_identity(doubled, 20, rng).passed
        U = random_subset(rng, graph.size, 10, proper=False)
        assert verify_potential_cheeger(doubled, U).passed


@pytest.mark.parametrize("convention", list(BoundaryConvention))
def test_potential_term_only_raises_the_cheeger_constant(convention):
    for index in range(6):
        rng = instance_rng(1, "alpha-dot", index)
        graph = random_graph(rng, max_vertices=10, potential_range=(0.1, 3.0))
        doubled = double(graph, build_metric(graph, Recipe.POTENTIAL_ADAPTED))
        U = random_subset(rng, graph.size, 10, proper=False)
        plain = cheeger_exact(doubled.base, doubled.metric, U).alpha
        assert alpha_dot(doubled, U, convention=convention).alpha >= plain * (1.0 - 1e-9) - 1e-12
