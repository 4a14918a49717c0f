"""Dense complex state vectors and operator algebra for small qubit registers.

Basis convention: qubit 0 is the most significant bit of the basis index,
and bit value 0 encodes the spin-up (plus) state, 1 the spin-down (minus)
state. All values are immutable after construction and every operation is a
pure function, so everything here is safe to call concurrently.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ShapeError, ValidationError

DEFAULT_MAX_QUBITS = 26

# Constructors renormalize below this squared-norm deviation and reject above
# it: rounding drift is tolerated, genuinely unnormalized input is a bug.
NORM_REPAIR_TOL = 1e-9
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False, repr=False)
class StateVector:
    """Normalized complex amplitude vector over the computational basis."""

    amplitudes: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.ndim != 1 or amps.shape[0] == 0:
            raise ShapeError(f"amplitudes must be a nonempty vector, got shape {amps.shape}")
        dim = amps.shape[0]
        if dim & (dim - 1):
            raise ShapeError(f"amplitude vector length must be a power of two, got {dim}")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) >= NORM_REPAIR_TOL:
            raise ValidationError(
                f"squared norm {norm_sq} deviates from 1 by {abs(norm_sq - 1.0):.3e}, "
                f"beyond the repairable tolerance {NORM_REPAIR_TOL}"
            )
        if norm_sq != 1.0:
            amps = amps / math.sqrt(norm_sq)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "num_qubits", dim.bit_length() - 1)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis(cls, num_qubits: int, index: int = 0) -> StateVector:
        """Computational basis state |index> on num_qubits qubits."""
        dim = 1 << num_qubits
        if not 0 <= index < dim:
            raise IndexError(f"basis index {index} out of range for {num_qubits} qubits")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    def to_pairs(self) -> list[list[float]]:
        """Amplitudes as [re, im] pairs in ascending basis-index order."""
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits}, dim={self.dim})"


@dataclass(frozen=True, eq=False, repr=False)
class HermitianOperator:
    """Hermitian matrix generating time evolution (energy units, hbar = 1)."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128, copy=True)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"operator must be square, got shape {mat.shape}")
        dev = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
        if dev > HERMITIAN_TOL:
            raise ValidationError(
                f"matrix deviates from Hermiticity by {dev:.3e} (tolerance {HERMITIAN_TOL})"
            )
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


@dataclass(frozen=True, eq=False, repr=False)
class UnitaryOperator:
    """Unitary matrix: U^dagger U = identity within max-entry deviation 1e-10."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128, copy=True)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"operator must be square, got shape {mat.shape}")
        dev = float(np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0]))))
        if dev > UNITARY_TOL:
            raise ValidationError(
                f"matrix deviates from unitarity by {dev:.3e} (tolerance {UNITARY_TOL})"
            )
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"UnitaryOperator(dim={self.dim})"


def tensor_product(
    factors: Sequence[StateVector], max_qubits: int = DEFAULT_MAX_QUBITS
) -> StateVector:
    """Tensor product of the given states, first factor most significant.

    The amplitude at the basis index formed by concatenating the factor
    indices is the product of the factor amplitudes.
    """
    if not factors:
        raise ValidationError("tensor_product needs at least one factor")
    total = sum(f.num_qubits for f in factors)
    if total > max_qubits:
        raise CapacityError(
            f"tensor product would span {total} qubits, above the cap of {max_qubits}"
        )
    if len(factors) == 1:
        return factors[0]
    amps = factors[0].amplitudes
    for f in factors[1:]:
        amps = np.kron(amps, f.amplitudes)
    return StateVector(amps)


def evolve(state: StateVector, h: HermitianOperator, t: float) -> StateVector:
    """Apply exp(-iHt) via eigendecomposition of H.

    Diagonalizing keeps the evolution unitary to rounding, so norms survive
    arbitrarily long times.
    """
    if h.dim != state.dim:
        raise ShapeError(f"operator dim {h.dim} does not match state dim {state.dim}")
    evals, evecs = np.linalg.eigh(h.matrix)
    phases = np.exp(-1j * evals * t)
    rotated = evecs @ (phases * (evecs.conj().T @ state.amplitudes))
    return StateVector(rotated)


def evolve_reverse(state: StateVector, h: HermitianOperator, t: float) -> StateVector:
    """Apply exp(+iHt), undoing evolve(state, h, t)."""
    return evolve(state, h, -t)


def apply_unitary(
    state: StateVector, u: UnitaryOperator, target_qubits: Sequence[int]
) -> StateVector:
    """Act with u on the designated qubits, identity on the rest."""
    targets = list(target_qubits)
    n = state.num_qubits
    if len(set(targets)) != len(targets):
        raise IndexError(f"target qubits must be distinct, got {targets}")
    for q in targets:
        if not 0 <= q < n:
            raise IndexError(f"target qubit {q} out of range for {n}-qubit state")
    k = len(targets)
    if u.dim != 1 << k:
        raise ShapeError(f"unitary dim {u.dim} does not match {k} target qubits")
    psi = state.amplitudes.reshape([2] * n)
    moved = np.moveaxis(psi, targets, range(k))
    out = u.matrix @ moved.reshape(1 << k, -1)
    out = np.moveaxis(out.reshape([2] * n), range(k), targets)
    return StateVector(out.reshape(-1))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Hilbert space inner product, conjugating the first argument."""
    if a.dim != b.dim:
        raise ShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared magnitude of the overlap, clipped to [0, 1]."""
    return min(abs(inner_product(a, b)) ** 2, 1.0)
