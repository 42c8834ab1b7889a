"""State families: Bell pairs, the classically correlated mixture, data-hiding
flags, the flagged Bell ensemble and twisted private states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .qmat import (
    SystemLayout,
    as_matrix,
    hermitian_eigenvalues,
    is_unitary,
    kron,
    kron_all,
    partial_trace,
)

STATE_TOL = 1e-10

AB = SystemLayout([("A", 2), ("B", 2)])

SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)


def flag_layout(d: int) -> SystemLayout:
    return SystemLayout([("A'", d), ("B'", d)])


def full_layout(d: int) -> SystemLayout:
    return SystemLayout([("A", 2), ("B", 2), ("A'", d), ("B'", d)])


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    layout: SystemLayout

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).ravel()
        if amps.size != self.layout.dim:
            raise ValueError(f"{amps.size} amplitudes do not match layout {self.layout}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_TOL:
            raise ValueError(f"state is not normalized (norm = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.layout)

    def inner(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix over a :class:`SystemLayout`.

    Construction validates the invariants at tolerance ``1e-10`` and stores
    the Hermitian part as a read-only array.
    """

    matrix: np.ndarray
    layout: SystemLayout

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.layout.dim, self.layout.dim):
            raise ValueError(f"matrix shape {m.shape} does not match layout {self.layout}")
        evals = hermitian_eigenvalues(m)
        tr = np.trace(m)
        if abs(tr - 1.0) > STATE_TOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        if evals[0] < -STATE_TOL:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {evals[0]:.3e})")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.layout.dim

    def marginal(self, keep: Iterable[str]) -> "DensityMatrix":
        reduced, layout = partial_trace(self.matrix, self.layout, keep)
        return DensityMatrix(reduced, layout)

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.matrix)

    def __repr__(self) -> str:
        return f"DensityMatrix(layout={self.layout})"


def basis_ket(index: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[index] = 1.0
    return v


def bell(phase: int) -> PureState:
    """``(|00> + (-1)^phase |11>)/sqrt(2)`` on ``A x B``."""
    if phase not in (0, 1):
        raise ValueError(f"phase must be 0 or 1, got {phase!r}")
    sign = 1.0 if phase == 0 else -1.0
    return PureState(np.array([1.0, 0.0, 0.0, sign]) / np.sqrt(2), AB)


def classically_correlated() -> DensityMatrix:
    return DensityMatrix(np.diag([0.5, 0.0, 0.0, 0.5]), AB)


def bell_mixture(weight0: float) -> DensityMatrix:
    """``w |psi0><psi0| + (1 - w) |psi1><psi1|``."""
    if not 0.0 <= weight0 <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {weight0!r}")
    return DensityMatrix(
        weight0 * bell(0).projector().matrix + (1 - weight0) * bell(1).projector().matrix, AB
    )


def swap_operator(d: int) -> np.ndarray:
    """The flip ``F |ij> = |ji>`` on ``C^d x C^d``."""
    f = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            f[j * d + i, i * d + j] = 1.0
    return f


def symmetric_projectors(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the symmetric and antisymmetric subspaces of ``C^d x C^d``."""
    if d < 2:
        raise ValueError(f"flag dimension must be >= 2, got {d}")
    f = swap_operator(d)
    eye = np.eye(d * d)
    return (eye + f) / 2, (eye - f) / 2


def hiding_flags(d: int) -> tuple[DensityMatrix, DensityMatrix]:
    """Werner-type data-hiding pair on ``A' x B'``.

    ``tau0`` is the normalized symmetric projector and ``tau1`` the
    normalized antisymmetric projector. They are orthogonal, yet any
    PPT measurement across ``A'|B'`` guesses the flag with probability at
    most ``1/2 + 1/d``.
    """
    p_sym, p_anti = symmetric_projectors(d)
    layout = flag_layout(d)
    tau0 = DensityMatrix(2 * p_sym / (d * (d + 1)), layout)
    tau1 = DensityMatrix(2 * p_anti / (d * (d - 1)), layout)
    return tau0, tau1


def flagged_bell(d: int) -> DensityMatrix:
    """``(|psi0><psi0| x tau0 + |psi1><psi1| x tau1)/2`` on ``A x B x A' x B'``."""
    tau0, tau1 = hiding_flags(d)
    m = 0.5 * (kron(bell(0).projector().matrix, tau0.matrix) + kron(bell(1).projector().matrix, tau1.matrix))
    return DensityMatrix(m, full_layout(d))


def twist_unitary(v, d: int) -> np.ndarray:
    """``U = I_A x (|0><0|_B x I + |1><1|_B x V)`` with ``V`` acting on the shield ``A'B'``."""
    v = as_matrix(v)
    if v.shape != (d * d, d * d):
        raise ValueError(f"twist must act on the {d * d}-dimensional shield, got shape {v.shape}")
    if not is_unitary(v):
        raise ValueError("twist operator is not unitary")
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    controlled = kron(p0, np.eye(d * d)) + kron(p1, v)
    return kron(np.eye(2), controlled)


def _shield_dim(shield: DensityMatrix) -> int:
    if len(shield.layout) != 2 or shield.layout.labels != ("A'", "B'"):
        raise ValueError(f"shield must live on A' x B', got {shield.layout}")
    d = shield.layout.dims[0]
    if shield.layout.dims[1] != d:
        raise ValueError(f"shield factors must have equal dimension, got {shield.layout}")
    return d


def twisted_private_state(shield: DensityMatrix, v) -> DensityMatrix:
    """``U (|psi0><psi0| x shield) U^dagger`` for the B-controlled twist ``U``."""
    d = _shield_dim(shield)
    u = twist_unitary(v, d)
    base = kron(bell(0).projector().matrix, shield.matrix)
    return DensityMatrix(u @ base @ u.conj().T, full_layout(d))


def fidelity_with_pure(rho: DensityMatrix, psi: PureState) -> float:
    """``<psi|rho|psi>`` clamped to ``[0, 1]``."""
    if rho.dim != psi.layout.dim:
        raise ValueError(f"dimension mismatch: state has dim {rho.dim}, target has dim {psi.layout.dim}")
    f = float(np.real(np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)))
    if f < -1e-12 or f > 1 + 1e-12:
        raise ValueError(f"fidelity {f!r} outside [0, 1]")
    return min(max(f, 0.0), 1.0)


def product(*states: DensityMatrix) -> DensityMatrix:
    layout = SystemLayout([f for s in states for f in s.layout.factors])
    return DensityMatrix(kron_all([s.matrix for s in states]), layout)
