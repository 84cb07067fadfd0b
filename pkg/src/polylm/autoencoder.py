"""Autoencoder compressing morpheme tensors into morpheme vectors.

The network is deliberately shallow: one affine encoder (optionally
followed by tanh) down to the latent dimension, one affine decoder back
up.  Tensors are flattened with the filler axis varying fastest
(Fortran order); the encoder weights are only meaningful relative to
that layout, so it is fixed here and everywhere.

Training is full-batch gradient descent on the summed unbinding loss of
each reconstruction against its gold structure, with a halving
backtracking rule so the recorded loss trace never increases.  All
gradients are closed-form and checked against central finite differences
by :func:`gradient_check`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .tpr import FillerVocab, MorphemeStructure, RoleSpace, TprTensor, gold_leaf_paths

__all__ = [
    "AutoencoderParams",
    "MorphemeVector",
    "train_autoencoder",
    "encode",
    "decode",
    "gradient_check",
    "save_params",
    "load_params",
]


@dataclass(frozen=True)
class AutoencoderParams:
    w_enc: np.ndarray
    b_enc: np.ndarray
    w_dec: np.ndarray
    b_dec: np.ndarray
    activation: str
    tensor_shape: tuple[int, ...]
    seed: int

    def __post_init__(self):
        latent, flat = self.w_enc.shape
        assert self.w_dec.shape == (flat, latent)
        assert self.b_enc.shape == (latent,)
        assert self.b_dec.shape == (flat,)
        for a in (self.w_enc, self.b_enc, self.w_dec, self.b_dec):
            if not np.all(np.isfinite(a)):
                raise ValueError("non-finite parameter values")


@dataclass(frozen=True)
class MorphemeVector:
    morpheme_id: str
    values: np.ndarray


def _flatten(data: np.ndarray) -> np.ndarray:
    return data.reshape(-1, order="F")


def _unflatten(x: np.ndarray, shape) -> np.ndarray:
    return x.reshape(shape, order="F")


def init_params(tensor_shape, latent_dim: int, activation: str = "linear", seed: int = 0) -> AutoencoderParams:
    if latent_dim < 1:
        raise ValueError("latent_dim must be >= 1")
    if activation not in ("linear", "tanh"):
        raise ValueError(f"unknown activation {activation!r}")
    flat = int(np.prod(tensor_shape))
    rng = np.random.default_rng(seed)
    scale = 1.0 / math.sqrt(flat)
    return AutoencoderParams(
        w_enc=rng.normal(scale=scale, size=(latent_dim, flat)),
        b_enc=np.zeros(latent_dim),
        w_dec=rng.normal(scale=scale, size=(flat, latent_dim)),
        b_dec=np.zeros(flat),
        activation=activation,
        tensor_shape=tuple(tensor_shape),
        seed=seed,
    )


def encode(params: AutoencoderParams, t: TprTensor) -> np.ndarray:
    """Latent vector of a tensor (affine map plus optional tanh)."""
    x = _flatten(np.asarray(t.data, dtype=float))
    if x.shape[0] != params.w_enc.shape[1]:
        raise ValueError(
            f"tensor flattens to {x.shape[0]}, encoder expects {params.w_enc.shape[1]}"
        )
    pre = params.w_enc @ x + params.b_enc
    return np.tanh(pre) if params.activation == "tanh" else pre


def decode(params: AutoencoderParams, z: np.ndarray) -> TprTensor:
    """Reconstructed tensor from a latent vector (affine map)."""
    z = np.asarray(z, dtype=float)
    if z.shape[0] != params.w_dec.shape[1]:
        raise ValueError(f"latent has dim {z.shape[0]}, decoder expects {params.w_dec.shape[1]}")
    xhat = params.w_dec @ z + params.b_dec
    return TprTensor(_unflatten(xhat, params.tensor_shape))


class _LossContext:
    """Precomputed pieces shared by loss and gradient evaluation."""

    def __init__(self, fillers: FillerVocab, role_spaces, samples, loss_kind: str):
        self.spaces = [role_spaces] if isinstance(role_spaces, RoleSpace) else list(role_spaces)
        self.vhat = fillers.matrix / np.linalg.norm(fillers.matrix, axis=0, keepdims=True)
        self.loss_kind = loss_kind
        self.samples = []
        for gold, tensor in samples:
            x = _flatten(np.asarray(tensor.data, dtype=float))
            leaves = []
            for path, gold_filler in gold_leaf_paths(gold):
                role_vecs = [self.spaces[d].vector(r) for d, r in enumerate(path)]
                c = fillers.ids.index(gold_filler)
                leaves.append((role_vecs, c))
            self.samples.append((x, tensor.data.shape, leaves))

    def loss_and_grad(self, params: AutoencoderParams):
        gw1 = np.zeros_like(params.w_enc)
        gb1 = np.zeros_like(params.b_enc)
        gw2 = np.zeros_like(params.w_dec)
        gb2 = np.zeros_like(params.b_dec)
        total = 0.0
        for x, shape, leaves in self.samples:
            pre = params.w_enc @ x + params.b_enc
            z = np.tanh(pre) if params.activation == "tanh" else pre
            xhat = params.w_dec @ z + params.b_dec
            that = _unflatten(xhat, shape)
            dthat = np.zeros_like(that)
            if self.loss_kind == "mse":
                diff = xhat - x
                total += float(diff @ diff)
                dxhat = 2.0 * diff
            else:
                for role_vecs, c in leaves:
                    f = that
                    for depth, rv in enumerate(role_vecs):
                        f = np.tensordot(f, rv, axes=([f.ndim - 1], [0]))
                    nf = np.linalg.norm(f)
                    if nf == 0:
                        # Uniform over fillers; flat similarities carry no gradient.
                        total += math.log(self.vhat.shape[1])
                        continue
                    u = f / nf
                    s = self.vhat.T @ u
                    m = s.max()
                    lse = m + math.log(np.exp(s - m).sum())
                    total += float(-s[c] + lse)
                    p = np.exp(s - lse)
                    ds = p.copy()
                    ds[c] -= 1.0
                    df = (self.vhat @ ds - float(s @ ds) * u) / nf
                    contrib = df
                    for rv in role_vecs:
                        contrib = np.multiply.outer(contrib, rv)
                    dthat += contrib
                dxhat = _flatten(dthat)
            gw2 += np.outer(dxhat, z)
            gb2 += dxhat
            dz = params.w_dec.T @ dxhat
            dpre = dz * (1.0 - z**2) if params.activation == "tanh" else dz
            gw1 += np.outer(dpre, x)
            gb1 += dpre
        return total, (gw1, gb1, gw2, gb2)

    def loss(self, params: AutoencoderParams) -> float:
        total = 0.0
        for x, shape, leaves in self.samples:
            pre = params.w_enc @ x + params.b_enc
            z = np.tanh(pre) if params.activation == "tanh" else pre
            xhat = params.w_dec @ z + params.b_dec
            if self.loss_kind == "mse":
                diff = xhat - x
                total += float(diff @ diff)
                continue
            that = _unflatten(xhat, shape)
            for role_vecs, c in leaves:
                f = that
                for rv in role_vecs:
                    f = np.tensordot(f, rv, axes=([f.ndim - 1], [0]))
                nf = np.linalg.norm(f)
                if nf == 0:
                    total += math.log(self.vhat.shape[1])
                    continue
                s = self.vhat.T @ (f / nf)
                m = s.max()
                total += float(-s[c] + m + math.log(np.exp(s - m).sum()))
        return total


def train_autoencoder(
    samples,
    fillers: FillerVocab,
    role_spaces,
    latent_dim: int,
    epochs: int = 200,
    lr: float = 0.1,
    seed: int = 0,
    activation: str = "linear",
    loss: str = "unbinding",
) -> tuple[AutoencoderParams, list[float]]:
    """Fit encoder/decoder weights on (gold structure, tensor) pairs.

    Deterministic full-batch descent: one gradient step per epoch, with
    the step retried at half the learning rate whenever it would raise
    the loss.  Returns the final parameters and the per-epoch loss trace
    (entry 0 is the loss at initialization); the trace never increases.
    The ``mse`` loss is available as a comparison baseline only.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("empty training dictionary")
    if loss not in ("unbinding", "mse"):
        raise ValueError(f"unknown loss {loss!r}")
    shape = samples[0][1].data.shape
    params = init_params(shape, latent_dim, activation, seed)
    ctx = _LossContext(fillers, role_spaces, samples, loss)
    current, grads = ctx.loss_and_grad(params)
    if not math.isfinite(current):
        raise ArithmeticError("non-finite loss at epoch 0")
    trace = [current]
    for epoch in range(1, epochs + 1):
        for _ in range(60):
            candidate = replace(
                params,
                w_enc=params.w_enc - lr * grads[0],
                b_enc=params.b_enc - lr * grads[1],
                w_dec=params.w_dec - lr * grads[2],
                b_dec=params.b_dec - lr * grads[3],
            )
            new_loss = ctx.loss(candidate)
            if math.isfinite(new_loss) and new_loss <= current:
                break
            lr *= 0.5
        else:
            candidate, new_loss = params, current
        params = candidate
        current, grads = ctx.loss_and_grad(params)
        if not math.isfinite(current):
            raise ArithmeticError(f"non-finite loss at epoch {epoch}")
        trace.append(current)
    return params, trace


def reconstruction_loss(params: AutoencoderParams, samples, fillers, role_spaces) -> float:
    """Unbinding loss of decode(encode(T)) summed over a dictionary."""
    ctx = _LossContext(fillers, role_spaces, samples, "unbinding")
    return ctx.loss(params)


def gradient_check(
    params: AutoencoderParams,
    sample,
    fillers: FillerVocab,
    role_spaces,
    epsilon: float = 1e-5,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``sample`` is one (gold structure, tensor) pair or a list of them.
    """
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon must lie in [1e-7, 1e-3]")
    if isinstance(sample, tuple) and isinstance(sample[0], MorphemeStructure):
        sample = [sample]
    ctx = _LossContext(fillers, role_spaces, sample, "unbinding")
    _, grads = ctx.loss_and_grad(params)
    names = ("w_enc", "b_enc", "w_dec", "b_dec")
    worst = 0.0
    for name, analytic in zip(names, grads):
        base = getattr(params, name)
        flat = base.reshape(-1)
        for i in range(flat.shape[0]):
            bumped = base.copy().reshape(-1)
            bumped[i] += epsilon
            plus = ctx.loss(replace(params, **{name: bumped.reshape(base.shape)}))
            bumped[i] -= 2 * epsilon
            minus = ctx.loss(replace(params, **{name: bumped.reshape(base.shape)}))
            fd = (plus - minus) / (2 * epsilon)
            a = analytic.reshape(-1)[i]
            rel = abs(a - fd) / max(abs(a), abs(fd), 1e-8)
            worst = max(worst, rel)
    return worst


# --- persistence -----------------------------------------------------------

_FORMAT = "polylm-autoencoder"
_VERSION = 1


def save_params(params: AutoencoderParams, path) -> None:
    doc = {
        "format": _FORMAT,
        "version": _VERSION,
        "latent_dim": params.w_enc.shape[0],
        "tensor_shape": list(params.tensor_shape),
        "activation": params.activation,
        "seed": params.seed,
        "w_enc": params.w_enc.reshape(-1).tolist(),
        "b_enc": params.b_enc.tolist(),
        "w_dec": params.w_dec.reshape(-1).tolist(),
        "b_dec": params.b_dec.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_params(path) -> AutoencoderParams:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != _FORMAT or doc.get("version") != _VERSION:
        raise ValueError(f"{path}: not a recognized autoencoder file")
    latent = doc["latent_dim"]
    shape = tuple(doc["tensor_shape"])
    flat = int(np.prod(shape))
    return AutoencoderParams(
        w_enc=np.array(doc["w_enc"]).reshape(latent, flat),
        b_enc=np.array(doc["b_enc"]),
        w_dec=np.array(doc["w_dec"]).reshape(flat, latent),
        b_dec=np.array(doc["b_dec"]),
        activation=doc["activation"],
        tensor_shape=shape,
        seed=doc["seed"],
    )
