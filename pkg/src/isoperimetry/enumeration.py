"""
Exhaustive minimization of |dW| / m(W) over the nonempty subsets of a small
vertex set U.

The boundary of a subset S of U is written as

    |dS| = sum_{i in S} outflow[i] - sum_{i, j in S} inner[i, j]

where outflow[i] is the full-graph boundary mass leaving U[i] and inner is
the same mass restricted to pairs inside U. Subsets are encoded as integers
(bit i <-> U[i]) and evaluated in blocks with one matrix product per block.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

BLOCK_BITS = 14
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class EnumerationOutcome:
    ratio: float
    members: np.ndarray     # positions into U, ascending
    boundary: float
    volume: float
    count: int


def _tie_width(value: float) -> float:
    return TIE_RTOL * max(abs(value), 1.0)


def _subset_key(code: int, width: int) -> tuple:
    return tuple(i for i in range(width) if (code >> i) & 1)


def _evaluate_block(start: int, stop: int, outflow: np.ndarray, inner: np.ndarray, volume: np.ndarray):
    width = outflow.size
    codes = np.arange(max(start, 1), stop, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(float)
    internal = np.einsum("ij,ij->i", bits @ inner, bits)
    cut = bits @ outflow - internal
    mass = bits @ volume
    ratio = cut / mass
    best = float(np.min(ratio))
    tied = ratio <= best + _tie_width(best)
    return best, codes[tied], ratio[tied], cut[tied], mass[tied]


def minimize_ratio(
    outflow: np.ndarray,
    inner: np.ndarray,
    volume: np.ndarray,
    threads: int = 1,
) -> EnumerationOutcome:
    """
    Minimum ratio over all 2^|U| - 1 nonempty subsets, including disconnected
    ones. Ties (within a 1e-12 relative band) go to the lexicographically
    smallest sorted subset. Blocks may be spread over `threads` workers; the
    reduction runs in block order, so the result does not depend on it.
    """
    width = outflow.size
    total = 1 << width
    block = 1 << min(BLOCK_BITS, width)
    bounds = [(start, min(start + block, total)) for start in range(0, total, block)]

    def run(bound):
        return _evaluate_block(bound[0], bound[1], outflow, inner, volume)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, bounds))
    else:
        results = [run(bound) for bound in bounds]

    best = min(result[0] for result in results)
    threshold = best + _tie_width(best)
    candidates = []
    for _, codes, ratios, cuts, masses in results:
        keep = ratios <= threshold
        candidates.extend(zip(codes[keep].tolist(), ratios[keep], cuts[keep], masses[keep]))

    code, ratio, cut, mass = min(candidates, key=lambda item: _subset_key(item[0], width))
    members = np.array(_subset_key(code, width), dtype=np.int64)
    return EnumerationOutcome(
        ratio=float(max(cut, 0.0) / mass),
        members=members,
        boundary=float(max(cut, 0.0)),
        volume=float(mass),
        count=total - 1,
    )


@dataclass(frozen=True)
class ChainOutcome:
    margin: float
    members: np.ndarray
    count: int


def _chain_block(start: int, stop: int, outflow, inner, volume, weights):
    width = outflow.size
    codes = np.arange(max(start, 1), stop, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(bool)
    numeric = bits.astype(float)
    cut = numeric @ outflow - np.einsum("ij,ij->i", numeric @ inner, numeric)
    lowest = np.where(bits, weights[None, :], np.inf).min(axis=1)
    margin = cut / (numeric @ volume) - lowest
    position = int(np.argmin(margin))
    return float(margin[position]), int(codes[position])


def min_chain_margin(
    outflow: np.ndarray,
    inner: np.ndarray,
    volume: np.ndarray,
    weights: np.ndarray,
    threads: int = 1,
) -> ChainOutcome:
    """
    min over nonempty S of |dS| / m(S) - min_{i in S} weights[i]; the
    per-set form of a curvature lower bound holds iff this is >= 0.
    """
    width = outflow.size
    total = 1 << width
    block = 1 << min(BLOCK_BITS, width)
    bounds = [(start, min(start + block, total)) for start in range(0, total, block)]

    def run(bound):
        return _chain_block(bound[0], bound[1], outflow, inner, volume, weights)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, bounds))
    else:
        results = [run(bound) for bound in bounds]
    margin, code = min(results, key=lambda item: item[0])
    return ChainOutcome(margin=margin, members=np.array(_subset_key(code, width), dtype=np.int64), count=total - 1)
