"""Binding morphological structure into tensors and reading it back out.

A morpheme's feature-value pairs become filler-role outer products that
sum into one tensor.  With orthonormal roles, contracting the tensor
with a role vector returns that role's filler exactly; with merely
linearly independent roles, the other fillers leak in proportionally to
the role inner products, and snapping to the nearest vocabulary filler
absorbs the leak.
"""

import numpy as np

from polylm.analyses import Morpheme
from polylm.tpr import (
    FillerVocab,
    MorphemeStructure,
    TprTensor,
    bind,
    bind_hierarchical,
    build_registry,
    make_role_space,
    morpheme_tpr,
    nearest_filler,
    similarity_vector,
    unbind,
    unbinding_loss,
)

### One inflectional morpheme with two grammatical features.
morpheme = Morpheme("haak", "haak", ("case:ABS", "num:DU"))
config = build_registry([morpheme, Morpheme("mun", "mun", ("case:ALL", "num:SG"))])
tensor = morpheme_tpr(morpheme, config)
print(f"tensor shape {tensor.data.shape} from features {morpheme.tags}")
for role in ("case", "num"):
    filler, sim = nearest_filler(unbind(tensor, role, config.roles), config.fillers)
    print(f"  unbind({role!r}) snaps to {filler!r} with cosine {sim:.3f}")

### Non-orthogonal roles: quantify the intrusion.
print()
angles = make_role_space(["r1", "r2"], dim=2, scheme="random", seed=10)
overlap = float(angles.matrix[:, 0] @ angles.matrix[:, 1])
fillers = FillerVocab.one_hot(["A", "B"])
t = bind([("A", "r1"), ("B", "r2")], fillers, angles)
leaky = unbind(t, "r1", angles)
print(f"role overlap <r1,r2> = {overlap:.3f}")
print(f"unbinding r1 gives {np.round(leaky, 3)} (= A + overlap * B)")
print(f"nearest filler is still {nearest_filler(leaky, fillers)[0]!r}")
print(f"similarities against the vocabulary: {np.round(similarity_vector(leaky, fillers), 3)}")

### Hierarchy: characters inside a morpheme, morphemes inside a word.
print()
chars = FillerVocab.one_hot(list("aghnqu"))
positions = make_role_space([f"p{i}" for i in range(1, 6)], dim=5)
morph_slots = make_role_space(["m1", "m2"], dim=2)
word = MorphemeStructure(
    (
        ("m1", MorphemeStructure((("p1", "a"), ("p2", "g"), ("p3", "h")))),
        ("m2", MorphemeStructure((("p1", "u"), ("p2", "q")))),
    )
)
word_tensor = bind_hierarchical(word, chars, [morph_slots, positions])
second = unbind(word_tensor, "m2", morph_slots)
first_char = unbind(second, "p1", positions)
print(f"word tensor shape {word_tensor.data.shape}")
print(f"second morpheme, first character: {nearest_filler(first_char, chars)[0]!r}")

### The unbinding loss scores a reconstruction without comparing raw values.
print()
perfect = unbinding_loss(word_tensor, word, chars, [morph_slots, positions])
zero = unbinding_loss(
    TprTensor(np.zeros_like(word_tensor.data)), word, chars, [morph_slots, positions]
)
print(f"unbinding loss of the bound tensor itself: {perfect:.4f}")
print(f"unbinding loss of an all-zero tensor:      {zero:.4f}")
