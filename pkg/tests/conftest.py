"""Shared fixtures and independent oracles.

The oracles evaluate the defining sums directly (focal-tuple enumeration,
naive subset/superset sums) so they share no code path with the lattice
implementations they check.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from masscomb.core import FrameOfDiscernment, MassFunction


@pytest.fixture
def frame2() -> FrameOfDiscernment:
    return FrameOfDiscernment.numbered(2)


@pytest.fixture
def frame3() -> FrameOfDiscernment:
    return FrameOfDiscernment.numbered(3)


def random_mass(
    rng: np.random.Generator,
    frame: FrameOfDiscernment,
    max_focals: int | None = None,
    allow_empty: bool = False,
    min_frame_mass: float | None = None,
) -> MassFunction:
    """Random assignment with a bounded focal count, built directly."""
    lo = 0 if allow_empty else 1
    pool = np.arange(lo, frame.powerset_size)
    cap = min(len(pool), max_focals or len(pool))
    count = int(rng.integers(1, cap + 1))
    focals = rng.choice(pool, size=count, replace=False)
    arr = np.zeros(frame.powerset_size)
    arr[focals] = rng.dirichlet(np.ones(count))
    if min_frame_mass is not None:
        arr *= 1.0 - min_frame_mass
        arr[frame.full_set] += min_frame_mass
    return MassFunction(frame, arr)


# ---------------------------------------------------------------------------
# Oracles: direct evaluation of the defining sums
# ---------------------------------------------------------------------------


def naive_commonality(m: MassFunction) -> np.ndarray:
    size = m.frame.powerset_size
    out = np.zeros(size)
    for a in range(size):
        out[a] = sum(m.values[b] for b in range(size) if b & a == a)
    return out


def naive_belief(m: MassFunction) -> np.ndarray:
    size = m.frame.powerset_size
    out = np.zeros(size)
    for a in range(size):
        out[a] = sum(m.values[b] for b in range(1, size) if b & a == b)
    return out


def naive_plausibility(m: MassFunction) -> np.ndarray:
    size = m.frame.powerset_size
    out = np.zeros(size)
    for a in range(size):
        out[a] = sum(m.values[b] for b in range(size) if b & a)
    return out


def brute_conjunctive(ms: list[MassFunction]) -> np.ndarray:
    """Focal-tuple enumeration of the conjunctive double sum."""
    frame = ms[0].frame
    out = np.zeros(frame.powerset_size)
    focal_lists = [[(int(a), float(m.values[a])) for a in m.focal_elements()] for m in ms]
    for combo in itertools.product(*focal_lists):
        inter = frame.full_set
        p = 1.0
        for subset, mass in combo:
            inter &= subset
            p *= mass
        out[inter] += p
    return out


def brute_disjunctive(ms: list[MassFunction]) -> np.ndarray:
    frame = ms[0].frame
    out = np.zeros(frame.powerset_size)
    focal_lists = [[(int(a), float(m.values[a])) for a in m.focal_elements()] for m in ms]
    for combo in itertools.product(*focal_lists):
        union = 0
        p = 1.0
        for subset, mass in combo:
            union |= subset
            p *= mass
        out[union] += p
    return out
