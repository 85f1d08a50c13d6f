"""Dense complex linear algebra for small multi-qubit systems.

Conventions used throughout the package:

* Kets are 1-d complex numpy arrays, normalized, with power-of-two length.
* The computational basis is |0>, |1> with sigma_z = diag(+1, -1).
* Multi-site kets are ordered big-endian: site 0 is the most significant
  bit, so ``tensor_product(a, b)`` puts ``a`` on site 0.  This matches the
  index convention of ``numpy.kron``.
* Everything is dense.  Dimensions above ``DIM_CAP`` (2**12) are rejected.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

__all__ = [
    "DIM_CAP",
    "ID2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "as_ket",
    "as_hermitian",
    "is_dichotomic",
    "tensor_product",
    "embed_local",
    "apply",
    "inner_product",
    "expectation",
    "top_eigenpair",
    "spectral_decompose",
    "fix_global_phase",
    "haar_random_ket",
    "random_hermitian",
]

DIM_CAP = 2**12

# Tolerances for input validation and internal consistency checks.
_NORM_ATOL = 1e-12
_HERM_ATOL = 1e-12
_IMAG_ATOL = 1e-10
_EIG_RESIDUAL_ATOL = 1e-10
_EIG_GROUP_RTOL = 1e-9

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def as_ket(amplitudes) -> np.ndarray:
    """Validate and return a state vector as a complex array.

    The vector must be 1-d, of power-of-two length up to ``DIM_CAP``, and
    normalized to unit norm within 1e-12.
    """
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.ndim != 1:
        raise ValueError(f"ket must be 1-d, got shape {vec.shape}")
    dim = vec.shape[0]
    if not _is_power_of_two(dim):
        raise ValueError(f"ket dimension {dim} is not a power of two")
    if dim > DIM_CAP:
        raise ValueError(f"ket dimension {dim} exceeds cap {DIM_CAP}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > _NORM_ATOL:
        raise ValueError(f"ket is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
    return vec


def as_hermitian(entries) -> np.ndarray:
    """Validate and return an operator as a complex Hermitian matrix."""
    op = np.asarray(entries, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got shape {op.shape}")
    dim = op.shape[0]
    if not _is_power_of_two(dim):
        raise ValueError(f"operator dimension {dim} is not a power of two")
    if dim > DIM_CAP:
        raise ValueError(f"operator dimension {dim} exceeds cap {DIM_CAP}")
    dev = np.max(np.abs(op - op.conj().T))
    if dev > _HERM_ATOL:
        raise ValueError(f"operator is not Hermitian: max deviation {dev:.3e}")
    return op


def is_dichotomic(op: np.ndarray, atol: float = 1e-10) -> bool:
    """True when ``op @ op`` is the identity within ``atol`` (entrywise)."""
    dim = op.shape[0]
    return bool(np.max(np.abs(op @ op - np.eye(dim))) <= atol)


def tensor_product(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices or kets, left to right.

    Accepts either several array arguments or a single sequence of arrays.
    The first factor acts on site 0 (most significant).
    """
    if len(ops) == 1 and isinstance(ops[0], (list, tuple)):
        ops = tuple(ops[0])
    if len(ops) == 0:
        raise ValueError("tensor_product requires at least one factor")
    out = np.asarray(ops[0], dtype=complex)
    for factor in ops[1:]:
        out = np.kron(out, np.asarray(factor, dtype=complex))
    if out.shape[0] > DIM_CAP:
        raise ValueError(f"tensor product dimension {out.shape[0]} exceeds cap {DIM_CAP}")
    return out


def embed_local(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Lift a single-qubit operator to ``n_sites`` qubits, acting on ``site``."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"embed_local expects a 2x2 operator, got shape {op.shape}")
    if n_sites < 1 or 2**n_sites > DIM_CAP:
        raise ValueError(f"site count {n_sites} out of supported range")
    if not 0 <= site < n_sites:
        raise ValueError(f"site index {site} out of range for {n_sites} sites")
    factors = [ID2] * n_sites
    factors[site] = op
    return tensor_product(factors)


def apply(op: np.ndarray, ket: np.ndarray) -> np.ndarray:
    """Matrix-vector product with a dimension check."""
    if op.shape[1] != ket.shape[0]:
        raise ValueError(f"dimension mismatch: operator {op.shape} on ket of length {ket.shape[0]}")
    return op @ ket


def inner_product(bra: np.ndarray, ket: np.ndarray) -> complex:
    """<bra|ket>, conjugate-linear in the first argument."""
    if bra.shape != ket.shape:
        raise ValueError(f"dimension mismatch: {bra.shape} vs {ket.shape}")
    return complex(np.vdot(bra, ket))


def expectation(op: np.ndarray, ket: np.ndarray) -> float:
    """<ket|op|ket> as a real number.

    The imaginary part of the raw expectation must vanish within 1e-10;
    anything larger signals a non-Hermitian operator slipping through and
    is treated as an internal error.
    """
    val = np.vdot(ket, apply(op, ket))
    if abs(val.imag) > _IMAG_ATOL:
        raise ArithmeticError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def fix_global_phase(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector's global phase so its first nonzero amplitude is real positive.

    The first amplitude with modulus above ``tol`` (in basis order) sets the
    phase.  Used wherever a vector is defined only up to phase, e.g.
    eigenvectors; the zero vector is returned unchanged.
    """
    for amp in vec:
        if abs(amp) > tol:
            return vec * (amp.conjugate() / abs(amp))
    return vec


def top_eigenpair(op: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a matching phase-fixed unit eigenvector.

    Raises when the input is not Hermitian or when the residual
    ``||op v - w v||`` exceeds 1e-10 (an internal solver failure).  In a
    degenerate top eigenspace the returned vector is the solver's last
    column, made deterministic by the global phase convention.
    """
    op = as_hermitian(op)
    vals, vecs = np.linalg.eigh(op)
    w = float(vals[-1])
    v = fix_global_phase(vecs[:, -1])
    residual = np.linalg.norm(op @ v - w * v)
    if residual > _EIG_RESIDUAL_ATOL * max(1.0, abs(w)):
        raise ArithmeticError(f"eigenpair residual {residual:.3e} above tolerance")
    return w, v


def spectral_decompose(op: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Eigenvalue/projector pairs of a Hermitian operator, eigenvalues descending.

    Nearly equal eigenvalues are grouped with tolerance 1e-9 relative to the
    spectral radius, and each group contributes one orthogonal projector.
    The projectors resolve the identity within numerical precision.
    """
    op = as_hermitian(op)
    vals, vecs = np.linalg.eigh(op)
    radius = float(np.max(np.abs(vals))) if vals.size else 0.0
    gap = _EIG_GROUP_RTOL * max(radius, 1.0)
    pairs: list[tuple[float, np.ndarray]] = []
    i = 0
    n = vals.shape[0]
    while i < n:
        j = i + 1
        while j < n and vals[j] - vals[j - 1] <= gap:
            j += 1
        block = vecs[:, i:j]
        projector = block @ block.conj().T
        pairs.append((float(np.mean(vals[i:j])), projector))
        i = j
    pairs.reverse()
    return pairs


def haar_random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state: normalized vector of iid complex Gaussians."""
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return as_ket(raw / np.linalg.norm(raw))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """GUE-style random Hermitian matrix, entries O(scale)."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return as_hermitian(scale * (raw + raw.conj().T) / 2.0)
