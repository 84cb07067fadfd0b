"""Tensor product representations of morpheme structure.

A symbolic structure is a set of bindings of fillers (values) to roles
(slots).  Embedding fillers as columns of a vocabulary matrix and roles
as linearly independent vectors, the structure becomes the dense tensor

    T = sum over bindings of  filler_vector (x) role_vector

Unbinding queries a role for its filler by contracting the tensor with
the role vector; the result is exact when roles are orthonormal and is
contaminated by the other fillers (in proportion to role inner products)
otherwise.  A tensor may itself serve as the filler of an outer role,
giving hierarchical structure: axis 0 is always the filler dimension and
each further axis is one nesting level, innermost first.

Decoding snaps an unbound vector to the vocabulary filler with the
highest cosine similarity.  The same similarity vector, pushed through a
log-softmax, turns reconstruction quality into a negative log-likelihood
(the unbinding loss used to train the autoencoder).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RoleSpace",
    "FillerVocab",
    "TprTensor",
    "MorphemeStructure",
    "MorphemeTprConfig",
    "make_role_space",
    "bind",
    "bind_hierarchical",
    "unbind",
    "nearest_filler",
    "similarity_vector",
    "unbinding_log_probs",
    "unbinding_loss",
    "gold_leaf_paths",
    "morpheme_tpr",
    "build_registry",
    "registry_to_json",
    "registry_from_json",
]

_MIN_SINGULAR = 1e-6


@dataclass(frozen=True)
class RoleSpace:
    """Unit-norm role vectors, one per role id, as columns of ``matrix``."""

    ids: tuple[str, ...]
    matrix: np.ndarray
    scheme: str
    seed: int | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def vector(self, role_id: str) -> np.ndarray:
        try:
            return self.matrix[:, self.ids.index(role_id)]
        except ValueError:
            raise KeyError(f"unknown role {role_id!r}") from None


@dataclass(frozen=True)
class FillerVocab:
    """Filler embeddings as columns of ``matrix``, ordered like ``ids``."""

    ids: tuple[str, ...]
    matrix: np.ndarray
    scheme: str = "onehot"
    seed: int | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def vector(self, filler_id: str) -> np.ndarray:
        try:
            return self.matrix[:, self.ids.index(filler_id)]
        except ValueError:
            raise KeyError(f"unknown filler {filler_id!r}") from None

    @classmethod
    def one_hot(cls, ids) -> "FillerVocab":
        ids = tuple(ids)
        return cls(ids, np.eye(len(ids)), scheme="onehot")

    @classmethod
    def dense(cls, ids, dim: int, seed: int) -> "FillerVocab":
        """Seeded unit Gaussian columns; unbinding becomes approximate."""
        ids = tuple(ids)
        rng = np.random.default_rng(seed)
        m = rng.normal(size=(dim, len(ids)))
        m /= np.linalg.norm(m, axis=0, keepdims=True)
        return cls(ids, m, scheme="dense", seed=seed)


def make_role_space(role_ids, dim: int, scheme: str = "orthonormal", seed: int | None = None) -> RoleSpace:
    """Embed roles as unit vectors.

    ``orthonormal`` uses the standard basis (or a seeded random rotation
    of it when ``seed`` is given) and requires ``len(role_ids) <= dim``.
    ``random`` draws seeded unit Gaussians, resampling until the Gram
    matrix is comfortably non-singular; linear independence still caps
    the role count at ``dim``.
    """
    ids = tuple(role_ids)
    n = len(ids)
    if n == 0:
        raise ValueError("need at least one role")
    if n > dim:
        raise ValueError(f"{n} roles cannot be linearly independent in dimension {dim}")
    if scheme == "orthonormal":
        if seed is None:
            m = np.eye(dim)[:, :n]
        else:
            rng = np.random.default_rng(seed)
            q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
            m = q[:, :n]
        return RoleSpace(ids, m, scheme, seed)
    if scheme == "random":
        rng = np.random.default_rng(seed)
        for _ in range(100):
            m = rng.normal(size=(dim, n))
            m /= np.linalg.norm(m, axis=0, keepdims=True)
            if np.linalg.svd(m, compute_uv=False).min() > _MIN_SINGULAR:
                return RoleSpace(ids, m, scheme, seed)
        raise ValueError("could not draw linearly independent role vectors")
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class TprTensor:
    """Dense bound structure: axis 0 fillers, axes 1.. role levels (inner first)."""

    data: np.ndarray
    bindings: tuple = ()

    @property
    def depth(self) -> int:
        return self.data.ndim - 1


def bind(b, fillers: FillerVocab, roles: RoleSpace) -> TprTensor:
    """Sum of filler (x) role outer products over a binding list.

    ``b`` is a list of (filler_id, role_id) pairs.  An empty list gives
    the zero tensor.  Binding one role twice is legal (the contributions
    add) but usually a modelling mistake, so it warns.
    """
    b = list(b)
    seen_roles = [r for _, r in b]
    if len(set(seen_roles)) != len(seen_roles):
        warnings.warn("binding list assigns the same role more than once", stacklevel=2)
    data = np.zeros((fillers.dim, roles.dim))
    for filler_id, role_id in b:
        data += np.outer(fillers.vector(filler_id), roles.vector(role_id))
    return TprTensor(data, tuple(b))


@dataclass(frozen=True)
class MorphemeStructure:
    """Role-to-value bindings; values are filler ids or nested structures.

    All values of one structure must sit at the same depth so the bound
    tensor is well-shaped, and no role may be bound twice.
    """

    bindings: tuple[tuple[str, object], ...]

    def __post_init__(self):
        roles = [r for r, _ in self.bindings]
        if len(set(roles)) != len(roles):
            raise ValueError("structure binds a role more than once")

    def depth(self) -> int:
        depths = set()
        for _, value in self.bindings:
            depths.add(value.depth() + 1 if isinstance(value, MorphemeStructure) else 1)
        if not depths:
            return 1
        if len(depths) > 1:
            raise ValueError("structure mixes leaf and nested values at one level")
        return depths.pop()


def bind_hierarchical(structure: MorphemeStructure, fillers: FillerVocab, role_spaces) -> TprTensor:
    """Bind a uniform-depth structure tree.

    ``role_spaces[0]`` embeds the roles at the root (outermost) level,
    ``role_spaces[1]`` the next level in, and so on.  Inner tensors act
    as fillers for outer roles via one more outer product, so the result
    has shape (filler_dim, inner roles, ..., outer roles).
    """
    spaces = [role_spaces] if isinstance(role_spaces, RoleSpace) else list(role_spaces)
    if structure.depth() != len(spaces):
        raise ValueError(
            f"structure depth {structure.depth()} != {len(spaces)} role spaces"
        )
    outer = spaces[0]
    inner_shape = _levels_shape(fillers, spaces[1:])
    data = np.zeros(inner_shape + (outer.dim,))
    for role_id, value in structure.bindings:
        if isinstance(value, MorphemeStructure):
            inner = bind_hierarchical(value, fillers, spaces[1:]).data
        else:
            inner = fillers.vector(value)
        data += np.multiply.outer(inner, outer.vector(role_id))
    return TprTensor(data, structure.bindings)


def _levels_shape(fillers: FillerVocab, inner_spaces) -> tuple[int, ...]:
    shape = (fillers.dim,)
    for space in reversed(inner_spaces):
        shape = shape + (space.dim,)
    return shape


def unbind(t: TprTensor, role_id: str, roles: RoleSpace, level: int | None = None):
    """Contract the tensor with a role vector along one level's axis.

    ``level`` counts nesting levels innermost-first; by default the
    outermost (last) axis is contracted.  The result is a plain vector
    once only the filler axis remains, else a lower-rank TprTensor.
    """
    if t.depth < 1:
        raise ValueError("tensor has no role axes left to unbind")
    if level is None:
        level = t.depth - 1
    if not 0 <= level < t.depth:
        raise ValueError(f"level {level} out of range for depth-{t.depth} tensor")
    axis = 1 + level
    vec = roles.vector(role_id)
    if t.data.shape[axis] != vec.shape[0]:
        raise ValueError(
            f"axis {axis} has size {t.data.shape[axis]}, role space has dim {vec.shape[0]}"
        )
    out = np.tensordot(t.data, vec, axes=([axis], [0]))
    if out.ndim == 1:
        return out
    return TprTensor(out)


def _cosines(v: np.ndarray, fillers: FillerVocab) -> np.ndarray:
    # Cosine of v against each column; zero rows for a zero v.
    col_norms = np.linalg.norm(fillers.matrix, axis=0)
    if np.any(col_norms == 0):
        raise ValueError("filler vocabulary contains a zero column")
    nv = np.linalg.norm(v)
    if nv == 0:
        return np.zeros(len(fillers.ids))
    return (fillers.matrix.T @ v) / (col_norms * nv)


def similarity_vector(v: np.ndarray, fillers: FillerVocab) -> np.ndarray:
    """Cosine similarity of ``v`` against every vocabulary filler."""
    v = np.asarray(v, dtype=float)
    if np.linalg.norm(v) == 0:
        raise ValueError("direction of the zero vector is undefined")
    return _cosines(v, fillers)


def nearest_filler(v: np.ndarray, fillers: FillerVocab) -> tuple[str, float]:
    """Snap a vector to the most cosine-similar filler (first id wins ties)."""
    sims = similarity_vector(v, fillers)
    idx = int(np.argmax(sims))
    return fillers.ids[idx], float(sims[idx])


def unbinding_log_probs(s: np.ndarray) -> np.ndarray:
    """Log-softmax of a similarity vector; exponentiates to a distribution."""
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("similarities must be finite")
    shifted = s - s.max()
    return shifted - np.log(np.exp(shifted).sum())


def gold_leaf_paths(structure: MorphemeStructure, prefix=()) -> list[tuple[tuple[str, ...], str]]:
    """(role path from root, gold filler id) for every bound leaf."""
    leaves = []
    for role_id, value in structure.bindings:
        if isinstance(value, MorphemeStructure):
            leaves.extend(gold_leaf_paths(value, prefix + (role_id,)))
        else:
            leaves.append((prefix + (role_id,), value))
    return leaves


def _unbind_path(data: np.ndarray, path, role_spaces) -> np.ndarray:
    # Contract the outermost axis with each role on the path, root first.
    out = data
    for depth, role_id in enumerate(path):
        out = np.tensordot(out, role_spaces[depth].vector(role_id), axes=([out.ndim - 1], [0]))
    return out


def unbinding_loss(
    t_pred: TprTensor,
    gold: MorphemeStructure,
    fillers: FillerVocab,
    role_spaces,
    unbound_mse: bool = False,
) -> float:
    """Negative log-likelihood of the gold fillers under a predicted tensor.

    Every gold-occupied role path is unbound down to a leaf vector, the
    leaf's cosine similarities against the vocabulary are softmaxed, and
    the gold filler's negative log-probability is accrued; the total is
    the sum over leaves.  A leaf unbinding to the zero vector scores as
    all-zero similarities (uniform over fillers).  Roles the gold never
    binds are ignored unless ``unbound_mse`` is set, which adds their
    unbound squared norm to push stray mass toward zero.
    """
    spaces = [role_spaces] if isinstance(role_spaces, RoleSpace) else list(role_spaces)
    if gold.depth() != len(spaces):
        raise ValueError(f"gold depth {gold.depth()} != {len(spaces)} role spaces")
    loss = 0.0
    for path, gold_filler in gold_leaf_paths(gold):
        leaf = _unbind_path(t_pred.data, path, spaces)
        s = _cosines(leaf, fillers)
        c = fillers.ids.index(gold_filler) if gold_filler in fillers.ids else -1
        if c < 0:
            raise KeyError(f"unknown filler {gold_filler!r}")
        shifted = s - s.max()
        loss += -s[c] + s.max() + np.log(np.exp(shifted).sum())
    if unbound_mse:
        bound_paths = {p for p, _ in gold_leaf_paths(gold)}
        loss += _unbound_penalty(t_pred.data, (), spaces, bound_paths)
    return float(loss)


def _unbound_penalty(data, prefix, spaces, bound_paths) -> float:
    depth = len(spaces) - len(prefix)
    total = 0.0
    for role_id in spaces[len(prefix)].ids:
        path = prefix + (role_id,)
        if depth > 1:
            total += _unbound_penalty(data, path, spaces, bound_paths)
        elif path not in bound_paths:
            leaf = _unbind_path(data, path, spaces)
            total += float(np.sum(leaf**2))
    return total


# --- morpheme tensors ------------------------------------------------------

_POSITION_PREFIX = "pos:"
_SLOT_PREFIX = "slot:"


@dataclass(frozen=True)
class MorphemeTprConfig:
    """Role/filler registries for turning analyses into tensors.

    Tags of the form ``feature:value`` bind the value filler at the
    feature's role.  Bare tags bind at enumerated slot roles.  With
    ``include_positions`` the surface characters are bound at position
    roles in the same tensor, so one orthonormal space answers both
    "what is the case?" and "what is the third character?".
    """

    roles: RoleSpace
    fillers: FillerVocab
    include_positions: bool = False


def morpheme_structure(morpheme, config: MorphemeTprConfig) -> MorphemeStructure:
    bindings: list[tuple[str, object]] = []
    slot = 0
    for tag in morpheme.tags:
        if ":" in tag:
            feature, _, value = tag.partition(":")
            bindings.append((feature, value))
        else:
            slot += 1
            bindings.append((f"{_SLOT_PREFIX}{slot}", tag))
    if config.include_positions:
        for i, ch in enumerate(morpheme.surface, start=1):
            bindings.append((f"{_POSITION_PREFIX}{i}", ch))
    return MorphemeStructure(tuple(bindings))


def morpheme_tpr(morpheme, config: MorphemeTprConfig) -> TprTensor:
    """Bind one morpheme's feature-value (and optional position) pairs.

    A morpheme with no registered features maps to the zero tensor.
    Unregistered features or values raise ``KeyError``.
    """
    structure = morpheme_structure(morpheme, config)
    return bind_hierarchical(structure, config.fillers, [config.roles])


def build_registry(morphemes, include_positions: bool = False, slack: int = 2) -> MorphemeTprConfig:
    """Collect roles and fillers for a morpheme inventory.

    Feature roles are orthonormal by construction; position roles cover
    the longest observed surface plus ``slack``.  Fillers are one-hot.
    """
    features: set[str] = set()
    values: set[str] = set()
    max_slots = 0
    max_len = 0
    for m in morphemes:
        slots = 0
        for tag in m.tags:
            if ":" in tag:
                feature, _, value = tag.partition(":")
                features.add(feature)
                values.add(value)
            else:
                slots += 1
                values.add(tag)
        max_slots = max(max_slots, slots)
        if include_positions:
            max_len = max(max_len, len(m.surface))
            values.update(m.surface)
    role_ids = sorted(features)
    role_ids += [f"{_SLOT_PREFIX}{i}" for i in range(1, max_slots + 1)]
    if include_positions:
        role_ids += [f"{_POSITION_PREFIX}{i}" for i in range(1, max_len + slack + 1)]
    if not role_ids:
        raise ValueError("no features, slots, or positions to register")
    roles = make_role_space(role_ids, dim=len(role_ids), scheme="orthonormal")
    fillers = FillerVocab.one_hot(sorted(values))
    return MorphemeTprConfig(roles=roles, fillers=fillers, include_positions=include_positions)


# --- persistence -----------------------------------------------------------

_REG_FORMAT = "polylm-tpr-registry"
_REG_VERSION = 1


def registry_to_json(config: MorphemeTprConfig) -> dict:
    """Registry document; vectors are rebuilt from ids/scheme/seed."""
    return {
        "format": _REG_FORMAT,
        "version": _REG_VERSION,
        "roles": {
            "ids": list(config.roles.ids),
            "dim": config.roles.dim,
            "scheme": config.roles.scheme,
            "seed": config.roles.seed,
        },
        "fillers": {
            "ids": list(config.fillers.ids),
            "dim": config.fillers.dim,
            "scheme": config.fillers.scheme,
            "seed": config.fillers.seed,
        },
        "include_positions": config.include_positions,
    }


def registry_from_json(doc: dict) -> MorphemeTprConfig:
    if doc.get("format") != _REG_FORMAT or doc.get("version") != _REG_VERSION:
        raise ValueError("not a recognized registry document")
    r = doc["roles"]
    roles = make_role_space(r["ids"], r["dim"], r["scheme"], r["seed"])
    f = doc["fillers"]
    if f["scheme"] == "onehot":
        fillers = FillerVocab.one_hot(f["ids"])
    else:
        fillers = FillerVocab.dense(f["ids"], f["dim"], f["seed"])
    return MorphemeTprConfig(roles=roles, fillers=fillers, include_positions=doc["include_positions"])


def save_registry(config: MorphemeTprConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(registry_to_json(config), fh, ensure_ascii=False)


def load_registry(path) -> MorphemeTprConfig:
    with open(path, encoding="utf-8") as fh:
        return registry_from_json(json.load(fh))
