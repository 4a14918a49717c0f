"""Measurement as unitary premeasurement, with an explicit decohering environment.

A measurement here is never a projection: the apparatus qubit is flipped
conditionally on the spin (a controlled-NOT), superpositions entangle by
linearity, and records decohere because each environment qubit is kicked in
a branch-dependent direction. The per-qubit record overlap is cos(theta/2),
so the branch overlap falls exponentially in the environment size.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ShapeError, ValidationError
from .states import (
    DEFAULT_MAX_QUBITS,
    NORM_REPAIR_TOL,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    tensor_product,
)

DENSITY_TOL = 1e-12


@dataclass(frozen=True)
class SpinPreparation:
    """Single-spin amplitudes (c_plus, c_minus) with derived plus probability p.

    Constructors renormalize squared-norm drift below 1e-9 and reject larger
    deviations. p is fixed at construction from the magnitudes alone, so two
    preparations that differ only by phases report bit-identical statistics.
    """

    c_plus: complex
    c_minus: complex
    p: float = field(init=False)

    def __post_init__(self):
        cp = complex(self.c_plus)
        cm = complex(self.c_minus)
        sq_plus = cp.real * cp.real + cp.imag * cp.imag
        sq_minus = cm.real * cm.real + cm.imag * cm.imag
        norm_sq = sq_plus + sq_minus
        if abs(norm_sq - 1.0) >= NORM_REPAIR_TOL:
            raise ValidationError(
                f"|c_plus|^2 + |c_minus|^2 = {norm_sq} deviates from 1 beyond {NORM_REPAIR_TOL}"
            )
        if norm_sq != 1.0:
            scale = math.sqrt(norm_sq)
            cp /= scale
            cm /= scale
        object.__setattr__(self, "c_plus", cp)
        object.__setattr__(self, "c_minus", cm)
        object.__setattr__(self, "p", sq_plus / norm_sq)

    @classmethod
    def from_probability(cls, p: float) -> SpinPreparation:
        """Real nonnegative amplitudes (sqrt(p), sqrt(1-p)).

        The given p is stored verbatim rather than re-derived from sqrt(p)
        squared, which can land one ulp off and flip a typical-window edge
        that sits exactly on the deviation boundary.
        """
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"p must lie in [0, 1], got {p}")
        prep = cls(math.sqrt(p), math.sqrt(1.0 - p))
        object.__setattr__(prep, "p", float(p))
        return prep

    @classmethod
    def from_polar(
        cls,
        mag_plus: float,
        mag_minus: float,
        phase_plus: float = 0.0,
        phase_minus: float = 0.0,
    ) -> SpinPreparation:
        """Build from magnitudes and phases; p comes from the magnitudes only."""
        if mag_plus < 0.0 or mag_minus < 0.0:
            raise ValidationError("magnitudes must be nonnegative")
        prep = cls(
            cmath.rect(mag_plus, phase_plus) if phase_plus else complex(mag_plus),
            cmath.rect(mag_minus, phase_minus) if phase_minus else complex(mag_minus),
        )
        sq_plus = mag_plus * mag_plus
        object.__setattr__(prep, "p", sq_plus / (sq_plus + mag_minus * mag_minus))
        return prep

    def spin_state(self) -> StateVector:
        return StateVector(np.array([self.c_plus, self.c_minus]))


@dataclass(frozen=True)
class PointerModel:
    """Environment of independent qubits, each kicked by +-theta/2 per branch.

    kick_angle is the total angle separating the two conditional rotations,
    so a single environment qubit's records overlap by cos(theta/2).
    """

    env_qubits: int
    kick_angle: float

    def __post_init__(self):
        if self.env_qubits < 0:
            raise ValidationError(f"env_qubits must be nonnegative, got {self.env_qubits}")
        if not 0.0 <= self.kick_angle <= math.pi:
            raise ValidationError(f"kick_angle must lie in [0, pi], got {self.kick_angle}")


@dataclass(frozen=True, eq=False, repr=False)
class ReducedDensityMatrix:
    """2x2 reduced state: Hermitian, unit trace, positive within 1e-12."""

    entries: np.ndarray

    def __post_init__(self):
        mat = np.array(self.entries, dtype=np.complex128, copy=True)
        if mat.shape != (2, 2):
            raise ShapeError(f"reduced density matrix must be 2x2, got {mat.shape}")
        if float(np.max(np.abs(mat - mat.conj().T))) > DENSITY_TOL:
            raise ValidationError("reduced density matrix is not Hermitian within 1e-12")
        if abs(float(np.trace(mat).real) - 1.0) > DENSITY_TOL:
            raise ValidationError("reduced density matrix trace deviates from 1 beyond 1e-12")
        if float(np.min(np.linalg.eigvalsh(mat))) < -DENSITY_TOL:
            raise ValidationError("reduced density matrix has an eigenvalue below -1e-12")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def off_diagonal_magnitude(self) -> float:
        return float(abs(self.entries[0, 1]))

    def __repr__(self):
        return f"ReducedDensityMatrix({self.entries.tolist()})"


@dataclass(frozen=True)
class OverlapCurve:
    """Record overlap |<E+|E->| as a function of environment size."""

    kick_angle: float
    env_sizes: tuple[int, ...]
    overlaps: tuple[float, ...]

    def rows(self) -> list[dict]:
        out = []
        for n_env, ov in zip(self.env_sizes, self.overlaps):
            log10 = math.log10(ov) if ov > 0.0 else float("-inf")
            out.append({"n_env": n_env, "overlap": ov, "log10_overlap": log10})
        return out


_CNOT = UnitaryOperator(
    np.array(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ],
        dtype=np.complex128,
    )
)


def _rotation_y(angle: float) -> np.ndarray:
    half = angle / 2.0
    c, s = math.cos(half), math.sin(half)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def conditional_kick(kick_angle: float) -> UnitaryOperator:
    """Two-qubit coupling: rotate a record qubit by +-kick_angle/2 per branch.

    Control qubit first (most significant): the plus branch rotates the
    record by +theta/2 about y, the minus branch by -theta/2. This is the
    gate entangle_environment applies once per environment qubit.
    """
    gate = np.zeros((4, 4), dtype=np.complex128)
    gate[:2, :2] = _rotation_y(kick_angle / 2.0)
    gate[2:, 2:] = _rotation_y(-kick_angle / 2.0)
    return UnitaryOperator(gate)


def premeasure(prep: SpinPreparation) -> StateVector:
    """Entangle a ready apparatus qubit with the spin, without projection.

    The controlled flip sends the basis spins to perfectly correlated
    records; a superposition therefore becomes
    c_plus |+, M+> + c_minus |-, M->.
    """
    joint = tensor_product([prep.spin_state(), StateVector.basis(1, 0)])
    return apply_unitary(joint, _CNOT, [0, 1])


def premeasure_n(
    preps: Sequence[SpinPreparation], max_qubits: int = DEFAULT_MAX_QUBITS
) -> StateVector:
    """Measure N spins into an N-qubit observer register, one record per spin.

    The observer register duplicates the outcome register bit for bit, so the
    result is a sum over all 2**N outcome strings m of c_m |m, O_m> with the
    cross terms (m, m') exactly zero.
    """
    n = len(preps)
    if n == 0:
        raise ValidationError("premeasure_n needs at least one preparation")
    if 2 * n > max_qubits:
        raise CapacityError(
            f"premeasuring {n} spins needs {2 * n} qubits, above the cap of {max_qubits}"
        )
    factors = [prep.spin_state() for prep in preps]
    factors.append(StateVector.basis(n, 0))
    state = tensor_product(factors, max_qubits=max_qubits)
    for i in range(n):
        state = apply_unitary(state, _CNOT, [i, n + i])
    return state


def entangle_environment(
    joint: StateVector,
    model: PointerModel,
    control_qubit: int = 1,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> StateVector:
    """Append model.env_qubits record qubits, each kicked by the control branch.

    Every environment qubit starts in the fixed reference state |0> and is
    rotated about y by +theta/2 when the control qubit reads 0 and -theta/2
    when it reads 1. With the default control (the apparatus qubit of a
    premeasured pair) this produces c+|+,M+>|E+> + c-|-,M->|E-> with the
    record states E+- remaining product states.
    """
    if not 0 <= control_qubit < joint.num_qubits:
        raise IndexError(
            f"control qubit {control_qubit} out of range for {joint.num_qubits}-qubit state"
        )
    total = joint.num_qubits + model.env_qubits
    if total > max_qubits:
        raise CapacityError(
            f"entangling {model.env_qubits} environment qubits needs {total} qubits, "
            f"above the cap of {max_qubits}"
        )
    if model.env_qubits == 0:
        return joint
    state = tensor_product(
        [joint, StateVector.basis(model.env_qubits, 0)], max_qubits=max_qubits
    )
    kick = conditional_kick(model.kick_angle)
    for e in range(model.env_qubits):
        state = apply_unitary(state, kick, [control_qubit, joint.num_qubits + e])
    return state


def branch_overlap(model: PointerModel) -> float:
    """Record overlap |<E+|E->| = |cos(theta/2)|**env_qubits, in closed form."""
    return abs(math.cos(model.kick_angle / 2.0)) ** model.env_qubits


def overlap_curve(kick_angle: float, max_env_qubits: int) -> OverlapCurve:
    """Closed-form overlap for every environment size from 0 to max_env_qubits."""
    if max_env_qubits < 0:
        raise ValidationError(f"max_env_qubits must be nonnegative, got {max_env_qubits}")
    sizes = tuple(range(max_env_qubits + 1))
    overlaps = tuple(
        branch_overlap(PointerModel(env_qubits=s, kick_angle=kick_angle)) for s in sizes
    )
    return OverlapCurve(kick_angle=kick_angle, env_sizes=sizes, overlaps=overlaps)


def reduce_to_system(full: StateVector, keep_qubit: int) -> ReducedDensityMatrix:
    """Partial trace over every qubit except keep_qubit.

    Off-diagonals measure the coherence that survives between the kept
    qubit's branches. Note that tracing out any other qubit that also
    records the branch (the spin-apparatus pair of a premeasured state, for
    instance) already kills the off-diagonals exactly; the clean
    overlap-times-|c+||c-| law appears when the kept qubit is monitored by
    the environment alone.
    """
    n = full.num_qubits
    if not 0 <= keep_qubit < n:
        raise IndexError(f"keep_qubit {keep_qubit} out of range for {n}-qubit state")
    psi = full.amplitudes.reshape([2] * n)
    rows = np.moveaxis(psi, keep_qubit, 0).reshape(2, -1)
    return ReducedDensityMatrix(rows @ rows.conj().T)
