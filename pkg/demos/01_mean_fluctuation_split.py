"""How an observable acts on a state: mean piece plus fluctuation piece.

For Hermitian A and a unit vector psi,

    A|psi> = <A>|psi> + dA |perp>

with <A> the expectation, dA the standard deviation and |perp> a unit
vector orthogonal to |psi>.  Everything downstream (bounds, saturation
conditions, overlap geometry) is built on this split, so the demo checks
it on a few hand-picked cases and a batch of random ones.
"""

import numpy as np

from bellvar import (
    SIGMA_X,
    SIGMA_Z,
    av_decompose,
    bell_state,
    correlator_split,
    haar_random_ket,
    pearson,
    random_hermitian,
    reconstruction_residual,
)

ID2 = np.eye(2)

print("=== single qubit, sharp case ===")
ket0 = np.array([1.0, 0.0], dtype=complex)
dec = av_decompose(SIGMA_Z, ket0)
print(f"sigma_z on |0>:  mean {dec.mean:+.3f}  spread {dec.spread:.3f}  "
      f"degenerate {dec.degenerate}")

print()
print("=== single qubit, maximally unsharp case ===")
dec = av_decompose(SIGMA_X, ket0)
print(f"sigma_x on |0>:  mean {dec.mean:+.3f}  spread {dec.spread:.3f}")
print(f"fluctuation direction: {np.round(dec.perp, 6)}   (this is |1>)")
print(f"reconstruction residual: {reconstruction_residual(SIGMA_X, ket0, dec):.2e}")

print()
print("=== entangled state: one-sided measurement fluctuates maximally ===")
phi = bell_state()
a = np.kron(SIGMA_Z, ID2)
dec = av_decompose(a, phi)
print(f"sigma_z (x) id on (|00>+|11>)/sqrt2:  mean {dec.mean:+.3f}  "
      f"spread {dec.spread:.3f}")
print(f"perp = {np.round(dec.perp.real, 6)}   ((|00>-|11>)/sqrt2)")

print()
print("=== correlator split for commuting pairs ===")
b = np.kron(ID2, SIGMA_Z)
split = correlator_split(a, b, phi)
print(f"<AB> = {split.joint:+.6f}")
print(f"     = <A><B> {split.local_product:+.6f} "
      f"+ dA dB {split.spread_product:.6f} * overlap {split.overlap.real:+.6f}")
print(f"Pearson correlation r = {pearson(a, b, phi):+.6f}  (perfectly correlated)")
bx = np.kron(ID2, SIGMA_X)
print(f"against sigma_x instead: r = {pearson(a, bx, phi):+.6f}  (uncorrelated)")

print()
print("=== batch check on random operators and states ===")
rng = np.random.default_rng(1)
worst_recon = worst_orth = 0.0
for i in range(2000):
    dim = (2, 4, 8, 16)[i % 4]
    op = random_hermitian(dim, rng)
    psi = haar_random_ket(dim, rng)
    d = av_decompose(op, psi)
    worst_recon = max(worst_recon, reconstruction_residual(op, psi, d))
    if not d.degenerate:
        worst_orth = max(worst_orth, abs(np.vdot(psi, d.perp)))
print(f"2000 draws, dims 2..16: worst reconstruction {worst_recon:.2e}, "
      f"worst <psi|perp| {worst_orth:.2e}")
