"""Compressing morpheme tensors into small vectors an LM could consume.

Each morpheme's tensor is pushed through an affine encoder to a short
latent vector and decoded back; training minimizes the unbinding loss
of the reconstruction against the gold structure.  Squared error is
kept around only to show why it was abandoned for sparse tensors.
"""

from polylm.analyses import Morpheme
from polylm.autoencoder import (
    decode,
    encode,
    gradient_check,
    init_params,
    train_autoencoder,
)
from polylm.tpr import build_registry, morpheme_structure, morpheme_tpr, nearest_filler, unbind

### A small inventory of inflectional morphemes.
inventory = [
    Morpheme("haak", "haak", ("case:ABS", "num:DU")),
    Morpheme("mun", "mun", ("case:ALL", "num:SG")),
    Morpheme("et", "et", ("case:ABS", "num:PL")),
    Morpheme("mi", "mi", ("case:LOC", "num:SG")),
    Morpheme("nun", "nun", ("case:ALL", "num:PL")),
]
config = build_registry(inventory)
samples = [
    (morpheme_structure(m, config), morpheme_tpr(m, config)) for m in inventory
]
flat_dim = samples[0][1].data.size
print(f"{len(samples)} morpheme tensors of {flat_dim} values each")

### Before training: confirm the analytic gradients against finite
### differences (the same check the test suite runs).
probe = init_params(samples[0][1].data.shape, latent_dim=4, seed=0)
err = gradient_check(probe, samples[:2], config.fillers, [config.roles], epsilon=1e-5)
print(f"gradient check, max relative error: {err:.2e}")

### Train down to 4 latent dimensions.
params, trace = train_autoencoder(
    samples, config.fillers, [config.roles], latent_dim=4, epochs=300, lr=0.5, seed=1
)
print(f"unbinding loss: {trace[0]:.3f} at init -> {trace[-1]:.3f} after {len(trace) - 1} epochs")

### Decode a latent vector and read its features back out.
z = encode(params, samples[0][1])
rebuilt = decode(params, z)
print(f"morpheme 'haak' encodes to latent {[round(float(v), 2) for v in z]}")
for role in ("case", "num"):
    filler, sim = nearest_filler(unbind(rebuilt, role, config.roles), config.fillers)
    print(f"  reconstructed {role}: {filler} (cosine {sim:.3f})")

### The squared-error baseline on the same task, for contrast.
_, mse_trace = train_autoencoder(
    samples, config.fillers, [config.roles],
    latent_dim=4, epochs=300, lr=0.5, seed=1, loss="mse",
)
print(f"mse baseline trace: {mse_trace[0]:.4f} -> {mse_trace[-1]:.4f} (no quality claim)")
