"""Seeded random instances for the verification suites."""
from __future__ import annotations

from typing import Optional

import numpy as np

from src.graph.families import FamilyKind, GraphFamily, MeasureConvention, generate
from src.graph.weighted_graph import WeightedGraph
from src.metrics.intrinsic import MetricAssignment, Recipe, build_metric


def instance_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    """Independent stream per (seed, suite, index); suites never share draws."""
    salt = sum(ord(ch) * (31 ** i) for i, ch in enumerate(suite)) % (2 ** 31)
    return np.random.default_rng([seed, salt, index])


def random_family(
    rng: np.random.Generator,
    min_vertices: int = 4,
    max_vertices: int = 14,
    measure: MeasureConvention = MeasureConvention.CUSTOM,
    potential_range: Optional[tuple] = None,
) -> GraphFamily:
    return GraphFamily(
        kind=FamilyKind.RANDOM_WEIGHTED,
        vertices=int(rng.integers(min_vertices, max_vertices + 1)),
        edge_probability=float(rng.uniform(0.15, 0.6)),
        weight_range=(0.2, 3.0),
        measure=measure,
        measure_range=(0.3, 3.0),
        potential_range=potential_range,
        seed=int(rng.integers(0, 2 ** 31 - 1)),
    )


def random_graph(rng: np.random.Generator, **kwargs) -> WeightedGraph:
    return generate(random_family(rng, **kwargs))


def random_subset(rng: np.random.Generator, size: int, max_size: int, proper: bool = True) -> np.ndarray:
    """Nonempty subset of 0..size-1 with at most `max_size` members (and not everything when `proper`)."""
    upper = min(max_size, size - 1 if proper and size > 1 else size)
    count = int(rng.integers(1, upper + 1))
    return np.sort(rng.choice(size, count, replace=False))


def random_metric(rng: np.random.Generator, graph: WeightedGraph) -> MetricAssignment:
    """One of the recipes, or random custom lengths on the edges."""
    recipe = rng.choice([r.value for r in Recipe])
    if recipe == Recipe.CUSTOM.value:
        src, dst, _ = graph.edges
        forward = src < dst
        lengths = {
            (int(x), int(y)): float(d)
            for x, y, d in zip(src[forward], dst[forward], rng.uniform(0.1, 2.0, size=int(np.count_nonzero(forward))))
        }
        return build_metric(graph, Recipe.CUSTOM, custom=lengths)
    return build_metric(graph, recipe)


def random_function(rng: np.random.Generator, size: int) -> np.ndarray:
    """Nonnegative f with some zeros and some repeated values."""
    values = rng.uniform(0.0, 3.0, size=size)
    values[rng.random(size) < 0.25] = 0.0
    if size > 2:
        values[1] = values[0]
    return values
