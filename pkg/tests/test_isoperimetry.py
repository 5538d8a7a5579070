import itertools
import math

import numpy as np
import pytest

from src.graph.families import FamilyKind, GraphFamily, MeasureConvention, generate, interior
from src.graph.weighted_graph import WeightedGraph
from src.isoperimetry.cheeger import (
    CheegerMode,
    cheeger_at_infinity,
    cheeger_by_components,
    cheeger_exact,
    cheeger_sweep,
    subset_flux,
)
from src.isoperimetry.coarea import coarea_check, superlevel_sets
from src.isoperimetry.cuts import boundary, cheeger_balls
from src.isoperimetry.enumeration import minimize_ratio
from src.metrics.intrinsic import Recipe, build_metric
from src.orchestrator.samplers import instance_rng, random_function, random_graph, random_metric, random_subset
from src.utils.errors import ArgumentError, CapacityError


def path3(m=1.0):
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], m=m)


# ─────────────────────────────────────────────────────────────
# Boundaries and balls
# ─────────────────────────────────────────────────────────────
def test_boundary_of_an_endpoint():
    graph = path3()
    metric = build_metric(graph, Recipe.NATURAL)
    cut = boundary(graph, metric, [0])
    assert (cut.boundary_measure, cut.volume, cut.ratio) == (1.0, 1.0, 1.0)
    assert boundary(graph, metric, [0, 1, 2]).boundary_measure == 0.0
    with pytest.raises(ArgumentError):
        boundary(graph, metric, [])


def test_metric_and_combinatorial_balls_on_the_binary_tree():
    graph = generate(GraphFamily(FamilyKind.K_REGULAR_TREE, radius=5, k=2))
    metric = build_metric(graph, Recipe.CANONICAL)
    metric_balls = cheeger_balls(graph, metric, 0, [1.0, 2.0])
    # edges have length 1/sqrt(3): radius 1 reaches one sphere, radius 2 three
    assert [ball.volume for ball in metric_balls] == [3.0, 15.0]
    assert metric_balls[0].radius == 1.0

    hop_balls = cheeger_balls(graph, metric, 0, [1, 2], combinatorial=True)
    assert [ball.W.size for ball in hop_balls] == [3, 7]
    # four edges leave B_1, each of length 1/sqrt(3)
    assert hop_balls[0].boundary_measure == pytest.approx(4.0 / math.sqrt(3.0))

    with pytest.raises(ArgumentError):
        cheeger_balls(graph, metric, 0, [0.0])


# ─────────────────────────────────────────────────────────────
# Exact enumeration
# ─────────────────────────────────────────────────────────────
def test_exact_alpha_of_the_path_prefix():
    graph = path3(m=2.0)
    result = cheeger_exact(graph, build_metric(graph, Recipe.NATURAL), [0, 1])
    assert result.alpha == pytest.approx(0.25)
    assert list(result.optimal_W) == [0, 1]
    assert result.enumeration_count == 3
    assert result.mode == CheegerMode.EXACT


def test_ties_go_to_the_lexicographically_smallest_subset():
    graph = path3()
    result = cheeger_exact(graph, build_metric(graph, Recipe.NATURAL), [0, 2])
    assert result.alpha == pytest.approx(1.0)
    assert list(result.optimal_W) == [0]


def test_exact_alpha_matches_brute_force():
    for index in range(10):
        rng = instance_rng(3, "brute", index)
        graph = random_graph(rng, max_vertices=9)
        metric = random_metric(rng, graph)
        U = list(range(graph.size - 1))
        expected = min(
            boundary(graph, metric, W).ratio
            for size in range(1, len(U) + 1)
            for W in itertools.combinations(U, size)
        )
        assert cheeger_exact(graph, metric, U).alpha == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_threads_do_not_change_the_optimum():
    graph = random_graph(instance_rng(4, "threads", 0), min_vertices=16, max_vertices=16)
    metric = build_metric(graph, Recipe.CANONICAL)
    subset = np.arange(15)
    outflow, inner = subset_flux(graph, metric, subset)
    single = minimize_ratio(outflow, inner, graph.m[subset], threads=1)
    pooled = minimize_ratio(outflow, inner, graph.m[subset], threads=3)
    assert single.ratio == pooled.ratio
    assert list(single.members) == list(pooled.members)
    assert single.count == 2 ** 15 - 1


def test_capacity_error_names_the_fallbacks():
    graph = generate(GraphFamily(FamilyKind.PATH, radius=40))
    with pytest.raises(CapacityError) as excinfo:
        cheeger_exact(graph, build_metric(graph, Recipe.CANONICAL), range(30))
    assert "sweep" in str(excinfo.value)
    assert str(excinfo.value).startswith("isoperimetry:")


def test_components_split_large_sets():
    family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=5, k=2, measure=MeasureConvention.WEIGHTED_DEGREE)
    graph = generate(family)
    metric = build_metric(graph, Recipe.NATURAL)
    hops = graph.hop_distances(0)
    U = np.flatnonzero((hops >= 2) & (hops <= 4))   # four subtrees of 7 vertices
    result = cheeger_by_components(graph, metric, U, max_size=10)
    direct = min(cheeger_exact(graph, metric, piece).alpha for piece in graph.components(U))
    assert result.alpha == pytest.approx(direct)
    assert result.U.size == 28
    with pytest.raises(CapacityError):
        cheeger_by_components(graph, metric, U, max_size=5)


def test_sweep_is_an_upper_bound():
    for index in range(10):
        rng = instance_rng(5, "sweep", index)
        graph = random_graph(rng, max_vertices=12)
        metric = build_metric(graph, Recipe.CANONICAL)
        U = np.arange(graph.size - 1)
        sweep = cheeger_sweep(graph, metric, U)
        assert sweep.mode == CheegerMode.SWEEP
        assert sweep.alpha >= cheeger_exact(graph, metric, U).alpha - 1e-12


def test_cheeger_at_infinity_records_skips_and_running_maximum():
    family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=4, k=2, measure=MeasureConvention.WEIGHTED_DEGREE)
    graph = generate(family)
    steps = cheeger_at_infinity(graph, build_metric(graph, Recipe.NATURAL), family, [1, 2, 3, 4])
    assert [step.size for step in steps] == [12, 8, 0, 0]
    assert [step.skipped for step in steps] == [False, False, True, True]
    assert steps[1].alpha_estimate >= steps[0].alpha_estimate
    assert steps[2].to_dict()["note"] == "empty exhausted set, skipped"


# ─────────────────────────────────────────────────────────────
# Co-area and area formulae
# ─────────────────────────────────────────────────────────────
def test_coarea_on_the_path():
    graph = path3()
    report = coarea_check(graph, build_metric(graph, Recipe.NATURAL), [0.0, 1.0, 3.0])
    assert report.lhs_edge_sum == pytest.approx(3.0)
    assert report.rhs_integral == pytest.approx(3.0)
    assert report.volume_lhs == pytest.approx(4.0)
    assert report.volume_rhs == pytest.approx(4.0)
    assert report.holds()


def test_superlevel_pieces():
    graph = path3()
    pieces = superlevel_sets(graph, [2.0, 0.0, 2.0])
    assert len(pieces) == 1
    assert (pieces[0].lower, pieces[0].upper) == (0.0, 2.0)
    assert list(pieces[0].omega) == [0, 2]
    assert superlevel_sets(graph, [0.0, 0.0, 0.0]) == []


def test_coarea_holds_on_random_instances():
    for index in range(50):
        rng = instance_rng(6, "coarea", index)
        graph = random_graph(rng, min_vertices=3, max_vertices=10)
        report = coarea_check(graph, random_metric(rng, graph), random_function(rng, graph.size))
        assert report.holds(1e-9)


def test_coarea_rejects_bad_functions():
    graph = path3()
    metric = build_metric(graph, Recipe.NATURAL)
    with pytest.raises(ArgumentError):
        coarea_check(graph, metric, [1.0, -1.0, 0.0])
    with pytest.raises(ArgumentError):
        coarea_check(graph, metric, [1.0, 1.0])
    with pytest.raises(ArgumentError):
        coarea_check(graph, metric, [1.0, np.inf, 0.0])


@pytest.mark.parametrize("index", range(8))
def test_alpha_shrinks_as_the_set_grows(index):
    rng = instance_rng(7, "exhaustion", index)
    graph = random_graph(rng, max_vertices=12)
    metric = random_metric(rng, graph)
    large = random_subset(rng, graph.size, 12, proper=False)
    small = large[rng.random(large.size) < 0.6]
    if small.size == 0:
        small = large[:1]
    alpha_small = cheeger_exact(graph, metric, small).alpha
    alpha_large = cheeger_exact(graph, metric, large).alpha
    assert alpha_small >= alpha_large * (1.0 - 1e-9) - 1e-12


@pytest.mark.parametrize("factor", [0.5, 2.0, 3.0])
def test_alpha_scales_with_the_metric(factor):
    for index in range(4):
        rng = instance_rng(8, "scaling", index)
        graph = random_graph(rng, max_vertices=10)
        metric = random_metric(rng, graph)
        U = np.arange(graph.size - 1)
        alpha = cheeger_exact(graph, metric, U).alpha
        assert cheeger_exact(graph, metric.scaled(factor), U).alpha == pytest.approx(factor * alpha, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("recipe", [Recipe.NATURAL, Recipe.CANONICAL])
def test_balls_never_beat_the_exact_alpha(recipe):
    family = GraphFamily(FamilyKind.K_REGULAR_TREE, radius=4, k=2)
    graph = generate(family)
    metric = build_metric(graph, recipe)
    U = interior(graph, family)
    assert U.size == 15
    alpha = cheeger_exact(graph, metric, U).alpha
    for ball in cheeger_balls(graph, metric, 0, [1, 2, 3], combinatorial=True):
        assert np.all(np.isin(ball.W, U))
        assert ball.ratio >= alpha - 1e-12
