"""Learning-based direction engine: embed scatterplots, classify with a forest.

A scatterplot is summarized by three kernel mean embeddings (marginal of
each coordinate plus the joint), each approximated with random Fourier
features, and a bagged forest of CART trees maps the 3m-vector to a
direction.  Training data is augmented with coordinate-swapped,
label-flipped copies so the learner always sees a balanced problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import Direction, LabeledScatterDataset, ScatterSample, SeedSpec, Verdict
from .independence import median_heuristic

__all__ = [
    "RFFSpec",
    "Forest",
    "RCCModel",
    "rff_embed",
    "featurize_scatter",
    "forest_train",
    "forest_predict",
    "rcc_train",
    "rcc_predict",
    "save_model",
    "load_model",
]

MODEL_FORMAT = "rcc-model"
MODEL_VERSION = 1


# ---------------------------------------------------------------------------
# Random Fourier feature embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RFFSpec:
    """Frequencies and phases for the three embedding blocks.

    Only (seed, num_features, bandwidth) are stored; the Gaussian
    frequencies and uniform phases are regenerated from them, which keeps
    serialized models small and exactly reproducible.  The two marginal
    blocks share one set of frequencies so that swapping a sample's
    coordinates exactly exchanges the marginal blocks.
    """

    seed: int
    num_features: int = 100
    bandwidth: float = 1.0

    def __post_init__(self):
        if self.num_features < 1:
            raise ValueError("num_features must be positive")
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValueError("bandwidth must be positive")

    def blocks(self):
        """(omega, phase) for the marginal block (d=1) and joint block (d=2)."""
        spec = SeedSpec(self.seed)
        m = self.num_features
        rng_m = spec.rng("rff.marginal")
        omega_m = rng_m.standard_normal((m, 1)) / self.bandwidth
        phase_m = rng_m.uniform(0.0, 2.0 * np.pi, m)
        rng_j = spec.rng("rff.joint")
        omega_j = rng_j.standard_normal((m, 2)) / self.bandwidth
        phase_j = rng_j.uniform(0.0, 2.0 * np.pi, m)
        return (omega_m, phase_m), (omega_j, phase_j)


def rff_embed(points, omega, phase) -> np.ndarray:
    """Mean over points of sqrt(2/m) * cos(<omega_k, p> + phase_k).

    Approximates the Gaussian-kernel mean embedding of the point set;
    invariant to point order up to float summation order.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] == 0:
        raise ValueError("empty input")
    m = omega.shape[0]
    feats = np.cos(pts @ omega.T + phase) * np.sqrt(2.0 / m)
    return feats.mean(axis=0)


def _canonical_standardized(sample: ScatterSample) -> np.ndarray:
    """Sort points lexicographically and standardize each coordinate.

    Sorting first makes every downstream reduction independent of input
    point order, bit for bit.
    """
    pts = sample.points
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    out = np.empty_like(pts)
    for j in range(2):
        sd = float(np.std(pts[:, j]))
        if sd == 0.0:
            raise ValueError("constant coordinate in scatter sample")
        out[:, j] = (pts[:, j] - float(np.mean(pts[:, j]))) / sd
    return out


def featurize_scatter(sample: ScatterSample, spec: RFFSpec) -> np.ndarray:
    """Concatenated [marginal-A, marginal-B, joint] embedding, length 3m."""
    pts = _canonical_standardized(sample)
    (omega_m, phase_m), (omega_j, phase_j) = spec.blocks()
    block_a = rff_embed(pts[:, 0], omega_m, phase_m)
    block_b = rff_embed(pts[:, 1], omega_m, phase_m)
    block_ab = rff_embed(pts, omega_j, phase_j)
    return np.concatenate([block_a, block_b, block_ab])


# ---------------------------------------------------------------------------
# Random forest (axis-aligned CART, Gini, bagging)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Forest:
    """Bagged CART trees in flat-array form.

    Each tree is a dict of parallel arrays (feature, threshold, left,
    right, vote); feature -1 marks a leaf and vote holds its class-1
    fraction.  Prediction is the majority vote across trees; the vote
    fraction doubles as a confidence score.
    """

    num_trees: int
    trees: tuple
    tree_seeds: tuple
    num_features: int

    def __post_init__(self):
        if self.num_trees != len(self.trees):
            raise ValueError("num_trees must match the tree list")


def _gini_best_split(X, y, feat_ids, min_leaf):
    """Best (score, feature, threshold) over candidate features, or None."""
    n = y.size
    total_ones = int(y.sum())
    best_score = np.inf
    best = None
    for f in feat_ids:
        xs = X[:, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        ones_prefix = np.cumsum(y[order])[:-1]
        n_left = np.arange(1, n)
        n_right = n - n_left
        valid = xs_sorted[1:] != xs_sorted[:-1]
        valid &= (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        left_ones = ones_prefix
        right_ones = total_ones - left_ones
        with np.errstate(invalid="ignore"):
            gini_left = 1.0 - (left_ones / n_left) ** 2 - ((n_left - left_ones) / n_left) ** 2
            gini_right = 1.0 - (right_ones / n_right) ** 2 - ((n_right - right_ones) / n_right) ** 2
        score = (n_left * gini_left + n_right * gini_right) / n
        score[~valid] = np.inf
        j = int(np.argmin(score))
        if score[j] < best_score:
            best_score = float(score[j])
            threshold = 0.5 * (xs_sorted[j] + xs_sorted[j + 1])
            # The midpoint of two adjacent floats rounds up to the larger
            # one, which would send every row left under the <= rule; fall
            # back to the left value, which still partitions correctly.
            if threshold >= xs_sorted[j + 1]:
                threshold = float(xs_sorted[j])
            best = (best_score, int(f), float(threshold))
    return best


def _grow_tree(X, y, rng, max_features, min_leaf):
    feature, threshold, left, right, vote = [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        vote.append(0.0)
        return len(feature) - 1

    def build(idx):
        node = new_node()
        ys = y[idx]
        ones = int(ys.sum())
        vote[node] = ones / idx.size
        if ones == 0 or ones == idx.size or idx.size < 2 * min_leaf:
            return node
        feat_ids = rng.choice(X.shape[1], size=max_features, replace=False)
        split = _gini_best_split(X[idx], ys, feat_ids, min_leaf)
        if split is None:
            return node
        _, f, thr = split
        mask = X[idx, f] <= thr
        if mask.all() or not mask.any():
            return node
        feature[node] = f
        threshold[node] = thr
        left[node] = build(idx[mask])
        right[node] = build(idx[~mask])
        return node

    build(np.arange(X.shape[0]))
    return {
        "feature": np.array(feature, dtype=np.int64),
        "threshold": np.array(threshold, dtype=np.float64),
        "left": np.array(left, dtype=np.int64),
        "right": np.array(right, dtype=np.int64),
        "vote": np.array(vote, dtype=np.float64),
    }


def _tree_votes(tree, X) -> np.ndarray:
    """Class-1 votes of one tree for each row of X, vectorized level-wise."""
    node = np.zeros(X.shape[0], dtype=np.int64)
    feature = tree["feature"]
    active = feature[node] >= 0
    while active.any():
        idx = np.flatnonzero(active)
        f = feature[node[idx]]
        go_left = X[idx, f] <= tree["threshold"][node[idx]]
        node[idx] = np.where(go_left, tree["left"][node[idx]], tree["right"][node[idx]])
        active = feature[node] >= 0
    return tree["vote"][node] >= 0.5


def forest_train(features, labels, num_trees: int = 500, seed: SeedSpec | int = 0, min_leaf: int = 2) -> Forest:
    """Train a bagged CART forest: sqrt(width) features per split, Gini,
    grown to purity or min-leaf, deterministic given the seed."""
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("features must be (n_examples, width) matching labels")
    if not set(np.unique(y)) <= {-1, 1}:
        raise ValueError("labels must be +1 or -1")
    if np.unique(y).size < 2:
        raise ValueError("training needs both classes present")
    if min(np.sum(y == 1), np.sum(y == -1)) < 2:
        raise ValueError("training needs at least 2 examples per class")
    y01 = (y == 1).astype(np.int64)
    spec = seed if isinstance(seed, SeedSpec) else SeedSpec(seed)
    max_features = max(1, int(round(np.sqrt(X.shape[1]))))
    trees = []
    tree_seeds = []
    for t in range(num_trees):
        tseed = spec.seed(f"forest.tree.{t}")
        tree_seeds.append(tseed)
        rng = np.random.default_rng(tseed)
        boot = rng.integers(0, X.shape[0], X.shape[0])
        trees.append(_grow_tree(X[boot], y01[boot], rng, max_features, min_leaf))
    return Forest(
        num_trees=num_trees,
        trees=tuple(trees),
        tree_seeds=tuple(tree_seeds),
        num_features=X.shape[1],
    )


def forest_predict(forest: Forest, features) -> np.ndarray:
    """Fraction of trees voting class +1 for each row of ``features``."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != forest.num_features:
        raise ValueError(f"expected {forest.num_features} features, got {X.shape[1]}")
    votes = np.zeros(X.shape[0])
    for tree in forest.trees:
        votes += _tree_votes(tree, X)
    return votes / forest.num_trees


# ---------------------------------------------------------------------------
# The trained engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RCCModel:
    rff: RFFSpec
    forest: Forest

    def __post_init__(self):
        if self.forest.num_features != 3 * self.rff.num_features:
            raise ValueError("forest width must be 3x the embedding block size")


def rcc_train(
    data: LabeledScatterDataset,
    num_features: int = 100,
    num_trees: int = 500,
    seed: SeedSpec | int = 0,
) -> RCCModel:
    """Train the direction classifier on labeled scatterplots.

    Each (sample, label) also contributes its coordinate-swapped copy with
    the flipped label; the embedding bandwidth is the median heuristic over
    the pooled standardized coordinates of the training samples.
    """
    spec = seed if isinstance(seed, SeedSpec) else SeedSpec(seed)
    labels = {label for _, label in data}
    if labels != {-1, 1}:
        raise ValueError("training data must contain both labels")

    augmented = []
    for sample, label in data:
        augmented.append((sample, label))
        augmented.append((sample.swapped(), -label))

    pooled = np.concatenate([_canonical_standardized(s).ravel() for s, _ in augmented])
    bandwidth = median_heuristic(pooled)
    rff = RFFSpec(seed=spec.seed("rcc.rff"), num_features=num_features, bandwidth=bandwidth)

    X = np.stack([featurize_scatter(s, rff) for s, _ in augmented])
    y = np.array([label for _, label in augmented], dtype=np.int64)
    forest = forest_train(X, y, num_trees=num_trees, seed=spec.child("rcc.forest"))
    return RCCModel(rff=rff, forest=forest)


def rcc_predict(model: RCCModel, sample: ScatterSample) -> Direction:
    """Direction of one scatterplot: forest vote on its embedding."""
    feats = featurize_scatter(sample, model.rff)
    frac = float(forest_predict(model.forest, feats)[0])
    score = abs(frac - 0.5) * 2.0
    if frac > 0.5:
        return Direction(Verdict.X_TO_Y, score)
    if frac < 0.5:
        return Direction(Verdict.Y_TO_X, score)
    return Direction(Verdict.X_TO_Y, 0.0)


# ---------------------------------------------------------------------------
# Model serialization: one self-describing JSON file, lossless round trip
# ---------------------------------------------------------------------------


def save_model(model: RCCModel, path) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "rff": {
            "seed": model.rff.seed,
            "num_features": model.rff.num_features,
            "bandwidth": model.rff.bandwidth,
        },
        "forest": {
            "num_trees": model.forest.num_trees,
            "num_features": model.forest.num_features,
            "tree_seeds": list(model.forest.tree_seeds),
            "trees": [
                {
                    "feature": t["feature"].tolist(),
                    "threshold": t["threshold"].tolist(),
                    "left": t["left"].tolist(),
                    "right": t["right"].tolist(),
                    "vote": t["vote"].tolist(),
                }
                for t in model.forest.trees
            ],
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path) -> RCCModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    rff = RFFSpec(
        seed=doc["rff"]["seed"],
        num_features=doc["rff"]["num_features"],
        bandwidth=doc["rff"]["bandwidth"],
    )
    trees = tuple(
        {
            "feature": np.array(t["feature"], dtype=np.int64),
            "threshold": np.array(t["threshold"], dtype=np.float64),
            "left": np.array(t["left"], dtype=np.int64),
            "right": np.array(t["right"], dtype=np.int64),
            "vote": np.array(t["vote"], dtype=np.float64),
        }
        for t in doc["forest"]["trees"]
    )
    forest = Forest(
        num_trees=doc["forest"]["num_trees"],
        trees=trees,
        tree_seeds=tuple(doc["forest"]["tree_seeds"]),
        num_features=doc["forest"]["num_features"],
    )
    return RCCModel(rff=rff, forest=forest)
