"""Evidential K-nearest-neighbour classification.

Each neighbour of a query point contributes one simple support focused on
its class singleton, with focal mass ``alpha * exp(-gamma_q d**2)`` decaying
in the squared distance.  The per-neighbour supports are pooled by any
combination rule and the decision takes the class with the highest
pignistic probability.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import FrameOfDiscernment, SimpleSupport, pignistic
from .errors import MassCombError, ParameterError, ParseError, UndefinedGammaError
from .rules import FusionResult, RuleConfig, combine


@dataclass(frozen=True)
class LabeledDataset:
    """Feature vectors with integer class labels over a frame of classes."""

    points: np.ndarray
    labels: np.ndarray
    frame: FrameOfDiscernment

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        labs = np.array(self.labels, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise ParameterError("need a 2-d array of at least two points")
        if labs.shape != (pts.shape[0],):
            raise ParameterError("one label per point required")
        if labs.min() < 0 or labs.max() >= self.frame.n:
            raise ParameterError("labels must index hypotheses of the class frame")
        pts.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labs)

    @property
    def n_samples(self) -> int:
        return self.points.shape[0]

    @property
    def n_features(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class EknnConfig:
    """Neighbour count, focal-mass ceiling ``alpha``, per-class scales
    ``gamma`` (or "auto" to derive them from the data), and the fusion rule.

    ``standardize`` rescales features to zero mean and unit variance
    before any distance is computed; off by default.
    """

    k: int = 5
    alpha: float = 0.95
    gamma: object = "auto"
    rule: RuleConfig = field(default_factory=lambda: RuleConfig(rule="dempster"))
    standardize: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError("k must be at least 1")
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError("alpha must lie in (0, 1]")


@dataclass(frozen=True)
class Classification:
    klass: int
    fused: FusionResult
    betp: np.ndarray


@dataclass(frozen=True)
class LooReport:
    """Leave-one-out evaluation: accuracy plus the conflict trace.

    ``kappa`` holds one global-conflict value per sample (NaN where
    classification failed); failures are listed in ``errors`` and count
    as misclassifications.
    """

    accuracy: float
    predictions: np.ndarray
    kappa: np.ndarray
    max_kappa: float
    errors: tuple[tuple[int, str], ...]


def gamma_auto(ds: LabeledDataset) -> np.ndarray:
    """Per-class scale: inverse mean distance over unordered same-class pairs.

    Every class needs at least two distinct members, otherwise the scale
    is undefined and the caller must supply gamma explicitly.
    """
    gammas = np.empty(ds.frame.n)
    for q in range(ds.frame.n):
        members = ds.points[ds.labels == q]
        if members.shape[0] < 2:
            raise UndefinedGammaError(
                f"class {ds.frame.labels[q]!r} has fewer than two members"
            )
        diffs = members[:, None, :] - members[None, :, :]
        dist = np.sqrt((diffs**2).sum(axis=2))
        iu = np.triu_indices(members.shape[0], k=1)
        mean = float(dist[iu].mean())
        if mean <= 0.0:
            raise UndefinedGammaError(
                f"class {ds.frame.labels[q]!r} is geometrically degenerate"
                " (all members coincide)"
            )
        gammas[q] = 1.0 / mean
    return gammas


def resolve_gamma(ds: LabeledDataset, cfg: EknnConfig) -> np.ndarray:
    if isinstance(cfg.gamma, str):
        if cfg.gamma != "auto":
            raise ParameterError(f"gamma must be 'auto' or per-class values, got {cfg.gamma!r}")
        return gamma_auto(ds)
    if isinstance(cfg.gamma, dict):
        arr = np.array([cfg.gamma[q] for q in range(ds.frame.n)], dtype=float)
    else:
        arr = np.array(cfg.gamma, dtype=float)
    if arr.shape != (ds.frame.n,) or (arr <= 0).any():
        raise ParameterError("gamma needs one positive value per class")
    return arr


def neighbor_bba(
    frame: FrameOfDiscernment, dist: float, klass: int, cfg: EknnConfig, gamma: np.ndarray
) -> SimpleSupport:
    """Simple support on the class singleton with focal mass ``alpha * exp(-gamma d^2)``."""
    if dist < 0:
        raise ParameterError("distance must be non-negative")
    phi = float(np.exp(-gamma[klass] * dist * dist))
    return SimpleSupport(frame, 1 << klass, 1.0 - cfg.alpha * phi)


def _standardized(points: np.ndarray) -> np.ndarray:
    std = points.std(axis=0)
    std[std == 0] = 1.0
    return (points - points.mean(axis=0)) / std


def classify(
    x,
    ds: LabeledDataset,
    cfg: EknnConfig,
    *,
    exclude: int | None = None,
    gamma: np.ndarray | None = None,
    points: np.ndarray | None = None,
) -> Classification:
    """Classify a feature vector from its K nearest training neighbours.

    Neighbour ties at equal distance break toward the lower dataset
    index, and decision ties toward the lower class index, so results are
    reproducible.  Total-conflict failures of the fusion rule propagate.
    """
    pts = points if points is not None else (_standardized(ds.points) if cfg.standardize else ds.points)
    x = np.asarray(x, dtype=float)
    if x.shape != (ds.n_features,):
        raise ParameterError(f"query must have {ds.n_features} features")
    available = ds.n_samples - (1 if exclude is not None else 0)
    if cfg.k > available:
        raise ParameterError(f"k={cfg.k} exceeds the {available} available neighbours")
    if gamma is None:
        gamma = resolve_gamma(ds, cfg)
    dist = np.sqrt(((pts - x) ** 2).sum(axis=1))
    if exclude is not None:
        dist[exclude] = np.inf
    order = np.argsort(dist, kind="stable")[: cfg.k]
    supports = [
        neighbor_bba(ds.frame, float(dist[i]), int(ds.labels[i]), cfg, gamma).to_mass()
        for i in order
    ]
    fused = combine(supports, cfg.rule)
    betp = pignistic(fused.mass).values
    return Classification(klass=int(np.argmax(betp)), fused=fused, betp=betp)


def evaluate_loo(ds: LabeledDataset, cfg: EknnConfig) -> LooReport:
    """Classify every point against the others and report accuracy and conflict.

    The per-class scales are derived once from the full dataset.  Samples
    whose classification fails (for example Dempster saturation) are
    recorded instead of aborting the run and score as wrong.
    """
    if cfg.k > ds.n_samples - 1:
        raise ParameterError("k must be at most the number of points minus one")
    gamma = resolve_gamma(ds, cfg)
    pts = _standardized(ds.points) if cfg.standardize else ds.points
    predictions = np.full(ds.n_samples, -1, dtype=np.int64)
    kappa = np.full(ds.n_samples, np.nan)
    errors: list[tuple[int, str]] = []
    hits = 0
    for i in range(ds.n_samples):
        try:
            result = classify(pts[i], ds, cfg, exclude=i, gamma=gamma, points=pts)
        except MassCombError as exc:
            errors.append((i, str(exc)))
            continue
        predictions[i] = result.klass
        kappa[i] = result.fused.conflict
        if result.klass == int(ds.labels[i]):
            hits += 1
    finite = kappa[np.isfinite(kappa)]
    return LooReport(
        accuracy=hits / ds.n_samples,
        predictions=predictions,
        kappa=kappa,
        max_kappa=float(finite.max()) if finite.size else float("nan"),
        errors=tuple(errors),
    )


def two_gaussian_dataset(
    n_per_class: int = 100,
    separation: float = 4.0,
    dim: int = 2,
    seed: int = 0,
    labels: Sequence[str] = ("theta1", "theta2"),
) -> LabeledDataset:
    """Two unit-variance Gaussian clouds with centres ``separation`` apart."""
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.normal(size=(n_per_class, dim))
    b = rng.normal(size=(n_per_class, dim))
    b[:, 0] += separation
    frame = FrameOfDiscernment(tuple(labels))
    return LabeledDataset(
        points=np.vstack([a, b]),
        labels=np.array([0] * n_per_class + [1] * n_per_class),
        frame=frame,
    )


def load_dataset_csv(path) -> LabeledDataset:
    """Load points from CSV, last column being the class label.

    A non-numeric first row is treated as a header.  Class labels are the
    sorted distinct values of the last column.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ParseError("empty dataset", line=1)
    start = 0
    try:
        [float(tok) for tok in rows[0][:-1]]
    except ValueError:
        start = 1
    feats = []
    raw_labels = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) < 2:
            raise ParseError("need at least one feature and a label", line=lineno)
        try:
            feats.append([float(tok) for tok in row[:-1]])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        raw_labels.append(row[-1].strip())
    classes = sorted(set(raw_labels))
    index = {c: i for i, c in enumerate(classes)}
    frame = FrameOfDiscernment(tuple(classes))
    return LabeledDataset(
        points=np.array(feats),
        labels=np.array([index[c] for c in raw_labels]),
        frame=frame,
    )
