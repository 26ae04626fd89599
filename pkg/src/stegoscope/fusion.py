"""Feature fusion and the imbalance-aware classifier.

Fusion takes a user feature vector u (length m) and a content embedding c
(length d) and forms the scaled cross-attention matrix u c^T / sqrt(d); the
flattened matrix is concatenated with c, giving m*d + d inputs. The classifier
is a one-hidden-layer tanh network with a sigmoid output, trained with Adam on
a focal-style loss that up-weights the rare stego class:

    L = -a_t [ (1-p_t)^(g+1) log(1-p_t) + p_t (1-p_t)^g log(p_t) ]

where p_t is the probability assigned to the example's true class, g >= 0 the
focusing exponent, and a_t the stego class weight (1 - a_t for covers).
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .habit import HabitFeatures
from .psychology import PsychologyFeatures
from .focus import FocusFeatures
from .rng import generator

DEFAULT_GAMMA = 5.0
DEFAULT_HIDDEN = 64
DEFAULT_EPSILON = 1e-7
DEFAULT_LEARNING_RATE = 5e-5
STD_FLOOR = 1e-8

FUSION_MODES = ("literal", "softmax", "concat")


@dataclass(frozen=True)
class Normalization:
    """Per-feature z-score statistics fitted on the training split."""

    means: np.ndarray
    stds: np.ndarray  # floored at STD_FLOOR

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (values - self.means) / self.stds


def fit_normalization(rows: np.ndarray) -> Normalization:
    rows = np.asarray(rows, dtype=np.float64)
    means = rows.mean(axis=0)
    stds = rows.std(axis=0)
    return Normalization(means=means, stds=np.maximum(stds, STD_FLOOR))


def raw_user_vector(
    h: HabitFeatures, p: PsychologyFeatures, f: FocusFeatures
) -> np.ndarray:
    """Habit (12) then psychology (3) then focus (k+3), unnormalized."""
    return np.array(h.as_list() + p.as_list() + f.as_list(), dtype=np.float64)


def assemble_user_vector(
    h: HabitFeatures, p: PsychologyFeatures, f: FocusFeatures, norm: Normalization
) -> np.ndarray:
    return norm.apply(raw_user_vector(h, p, f))


def fuse(u: np.ndarray, c: np.ndarray, mode: str = "literal") -> np.ndarray:
    """Fused vector of length m*d + d ("literal"/"softmax") or m + d ("concat").

    literal: flatten(u c^T / sqrt(d)) then append c. softmax: each attention
    row is softmaxed over d and multiplied elementwise by c before flattening.
    concat: plain u then c, no interaction (the ablation baseline).
    """
    u = np.asarray(u, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    if u.size == 0 or c.size == 0:
        raise ValueError("fuse requires non-empty u and c")
    if mode == "concat":
        return np.concatenate([u, c])
    attn = np.outer(u, c) / math.sqrt(len(c))
    if mode == "softmax":
        shifted = attn - attn.max(axis=1, keepdims=True)
        ex = np.exp(shifted)
        attn = ex / ex.sum(axis=1, keepdims=True) * c
    elif mode != "literal":
        raise ValueError(f"unknown fusion mode {mode!r}")
    return np.concatenate([attn.ravel(), c])


def fused_dim(m: int, d: int, mode: str = "literal") -> int:
    return m + d if mode == "concat" else m * d + d


def focal_loss(
    p_t: float,
    is_stego: bool,
    gamma: float = DEFAULT_GAMMA,
    alpha_stego: float = 0.5,
    epsilon: float = DEFAULT_EPSILON,
) -> tuple[float, float]:
    """(loss, dloss/dp_t) at a single true-class probability p_t."""
    p = min(max(p_t, epsilon), 1.0 - epsilon)
    alpha = alpha_stego if is_stego else 1.0 - alpha_stego
    q = 1.0 - p
    loss = -alpha * (q ** (gamma + 1.0) * math.log(q) + p * q**gamma * math.log(p))
    grad = -alpha * (
        -(gamma + 1.0) * q**gamma * math.log(q)
        + q**gamma * math.log(p)
        - gamma * p * q ** (gamma - 1.0) * math.log(p)
    )
    return loss, grad


@dataclass
class ClassifierParams:
    w_hidden: np.ndarray  # (hidden, in_dim)
    b_hidden: np.ndarray  # (hidden,)
    w_out: np.ndarray     # (hidden,)
    b_out: float
    gamma: float = DEFAULT_GAMMA
    alpha_stego: float = 0.5
    epsilon: float = DEFAULT_EPSILON
    seed: int = 0

    @property
    def in_dim(self) -> int:
        return self.w_hidden.shape[1]

    @property
    def hidden(self) -> int:
        return self.w_hidden.shape[0]

    def flat(self) -> np.ndarray:
        return np.concatenate(
            [self.w_hidden.ravel(), self.b_hidden, self.w_out, [self.b_out]]
        )

    def with_flat(self, theta: np.ndarray) -> "ClassifierParams":
        h, n = self.w_hidden.shape
        w1 = theta[: h * n].reshape(h, n)
        b1 = theta[h * n : h * n + h]
        w2 = theta[h * n + h : h * n + 2 * h]
        b2 = float(theta[-1])
        return ClassifierParams(
            w_hidden=w1, b_hidden=b1, w_out=w2, b_out=b2,
            gamma=self.gamma, alpha_stego=self.alpha_stego,
            epsilon=self.epsilon, seed=self.seed,
        )


def init_params(
    in_dim: int,
    hidden: int = DEFAULT_HIDDEN,
    gamma: float = DEFAULT_GAMMA,
    alpha_stego: float = 0.5,
    seed: int = 0,
) -> ClassifierParams:
    rng = generator(seed, "classifier-init")
    scale = 1.0 / math.sqrt(in_dim)
    return ClassifierParams(
        w_hidden=rng.normal(0.0, scale, size=(hidden, in_dim)),
        b_hidden=np.zeros(hidden),
        w_out=rng.normal(0.0, 1.0 / math.sqrt(hidden), size=hidden),
        b_out=0.0,
        gamma=gamma, alpha_stego=alpha_stego, seed=seed,
    )


def forward(params: ClassifierParams, x: np.ndarray) -> float:
    """Stego probability in (0, 1) for one fused input."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (params.in_dim,):
        raise ValueError(f"input length {x.shape} does not match {params.in_dim}")
    h = np.tanh(params.w_hidden @ x + params.b_hidden)
    logit = params.w_out @ h + params.b_out
    return 1.0 / (1.0 + math.exp(-logit))


def forward_batch(params: ClassifierParams, xs: np.ndarray) -> np.ndarray:
    h = np.tanh(xs @ params.w_hidden.T + params.b_hidden)
    logits = h @ params.w_out + params.b_out
    return 1.0 / (1.0 + np.exp(-logits))


def predict(params: ClassifierParams, x: np.ndarray, threshold: float = 0.5) -> tuple[str, float]:
    p = forward(params, x)
    return ("stego" if p >= threshold else "cover"), p


def mean_loss_and_grad(
    params: ClassifierParams, xs: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray]:
    """Mean focal loss over a batch and its gradient wrt the flat parameters.

    labels hold 1 for stego and 0 for cover. The batch contribution is summed
    in example order, so the result is deterministic.
    """
    xs = np.asarray(xs, dtype=np.float64)
    labels = np.asarray(labels)
    n = len(labels)
    h = np.tanh(xs @ params.w_hidden.T + params.b_hidden)  # (n, hidden)
    logits = h @ params.w_out + params.b_out
    p = 1.0 / (1.0 + np.exp(-logits))

    losses = np.empty(n)
    dl_dlogit = np.empty(n)
    for i in range(n):
        stego = bool(labels[i])
        p_t = p[i] if stego else 1.0 - p[i]
        loss, dl_dpt = focal_loss(
            p_t, stego, params.gamma, params.alpha_stego, params.epsilon
        )
        losses[i] = loss
        dpt_dlogit = p[i] * (1.0 - p[i]) * (1.0 if stego else -1.0)
        dl_dlogit[i] = dl_dpt * dpt_dlogit

    g = dl_dlogit / n
    grad_w_out = h.T @ g
    grad_b_out = g.sum()
    dh = np.outer(g, params.w_out)
    dz = dh * (1.0 - h * h)
    grad_w_hidden = dz.T @ xs
    grad_b_hidden = dz.sum(axis=0)
    grad = np.concatenate(
        [grad_w_hidden.ravel(), grad_b_hidden, grad_w_out, [grad_b_out]]
    )
    return float(losses.mean()), grad


@dataclass
class TrainConfig:
    learning_rate: float = DEFAULT_LEARNING_RATE
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0
    fusion_mode: str = "literal"
    hidden: int = DEFAULT_HIDDEN
    gamma: float = DEFAULT_GAMMA
    alpha_stego: float | None = None  # None: cover fraction of the training split

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.fusion_mode not in FUSION_MODES:
            raise ValueError(f"unknown fusion mode {self.fusion_mode!r}")


def _f1_at_threshold(p: np.ndarray, labels: np.ndarray, threshold: float = 0.5) -> tuple[float, float]:
    pred = p >= threshold
    actual = labels.astype(bool)
    tp = int(np.sum(pred & actual))
    fp = int(np.sum(pred & ~actual))
    fn = int(np.sum(~pred & actual))
    tn = int(np.sum(~pred & ~actual))
    acc = (tp + tn) / len(labels)
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return acc, f1


def train(
    xs: np.ndarray,
    labels: np.ndarray,
    val_xs: np.ndarray,
    val_labels: np.ndarray,
    config: TrainConfig,
    log_path: str | Path | None = None,
) -> ClassifierParams:
    """Mini-batch Adam on the mean focal loss; returns the parameters of the
    epoch with the best validation F1. Deterministic given config.seed."""
    xs = np.asarray(xs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(xs) == 0:
        raise ValueError("training set is empty")
    n_stego = int(labels.sum())
    if n_stego == 0 or n_stego == len(labels):
        raise ValueError("training data must contain both classes")
    alpha = (
        config.alpha_stego
        if config.alpha_stego is not None
        else (len(labels) - n_stego) / len(labels)
    )
    params = init_params(
        xs.shape[1], hidden=config.hidden, gamma=config.gamma,
        alpha_stego=alpha, seed=config.seed,
    )
    theta = params.flat()
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    step = 0
    rng = generator(config.seed, "epoch-shuffle")
    best_theta = theta.copy()
    best_f1 = -1.0
    log_lines: list[str] = []

    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(xs))
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, len(xs), config.batch_size):
            batch = order[start : start + config.batch_size]
            current = params.with_flat(theta)
            loss, grad = mean_loss_and_grad(current, xs[batch], labels[batch])
            step += 1
            m = config.beta1 * m + (1.0 - config.beta1) * grad
            v = config.beta2 * v + (1.0 - config.beta2) * grad * grad
            m_hat = m / (1.0 - config.beta1**step)
            v_hat = v / (1.0 - config.beta2**step)
            theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_eps)
            epoch_loss += loss
            n_batches += 1

        current = params.with_flat(theta)
        if len(val_xs):
            val_p = forward_batch(current, np.asarray(val_xs, dtype=np.float64))
            val_acc, val_f1 = _f1_at_threshold(val_p, np.asarray(val_labels))
        else:
            val_acc, val_f1 = 0.0, 0.0
        if val_f1 > best_f1:
            best_f1 = val_f1
            best_theta = theta.copy()
        log_lines.append(json.dumps({
            "epoch": epoch,
            "train_loss": epoch_loss / n_batches,
            "val_acc": val_acc,
            "val_f1": val_f1,
        }, sort_keys=True))

    if log_path is not None:
        Path(log_path).write_text("\n".join(log_lines) + "\n", encoding="utf-8")
    if len(val_xs) == 0:
        best_theta = theta
    return params.with_flat(best_theta)


CHECKPOINT_MAGIC = b"UPM1"


def save_params(params: ClassifierParams, path: str | Path) -> None:
    """Binary checkpoint: magic "UPM1", dims, constants, then f64 weights."""
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<II", params.in_dim, params.hidden))
        fh.write(struct.pack("<ddd", params.gamma, params.alpha_stego, params.epsilon))
        fh.write(struct.pack("<q", params.seed))
        fh.write(params.flat().astype("<f8").tobytes())


def load_params(path: str | Path) -> ClassifierParams:
    with open(path, "rb") as fh:
        if fh.read(4) != CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: not a checkpoint file (bad magic)")
        in_dim, hidden = struct.unpack("<II", fh.read(8))
        gamma, alpha_stego, epsilon = struct.unpack("<ddd", fh.read(24))
        (seed,) = struct.unpack("<q", fh.read(8))
        count = in_dim * hidden + 2 * hidden + 1
        raw = fh.read(8 * count)
        if len(raw) != 8 * count:
            raise ValueError(f"{path}: truncated parameter block")
        theta = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    template = ClassifierParams(
        w_hidden=np.zeros((hidden, in_dim)), b_hidden=np.zeros(hidden),
        w_out=np.zeros(hidden), b_out=0.0,
        gamma=gamma, alpha_stego=alpha_stego, epsilon=epsilon, seed=seed,
    )
    return template.with_flat(theta)
