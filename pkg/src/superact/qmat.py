"""Dense complex-matrix core.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Multipartite
operators carry a :class:`SystemLayout` describing their tensor factors.
The leftmost factor is the most significant index (big-endian), so the
row index of ``kron(a, b)`` decodes as ``r = r_a * rows(b) + r_b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class SystemLayout:
    """Ordered tensor factors as ``(label, dim)`` pairs."""

    factors: tuple[tuple[str, int], ...]

    def __init__(self, factors: Iterable[tuple[str, int]]):
        factors = tuple((str(label), int(dim)) for label, dim in factors)
        labels = [label for label, _ in factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in layout: {labels}")
        for label, dim in factors:
            if dim < 1:
                raise ValueError(f"factor {label!r} has dimension {dim} < 1")
        object.__setattr__(self, "factors", factors)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown label {label!r}; layout has {list(self.labels)}") from None

    def dim_of(self, label: str) -> int:
        return self.dims[self.index(label)]

    def replace_dim(self, label: str, dim: int) -> "SystemLayout":
        i = self.index(label)
        factors = list(self.factors)
        factors[i] = (label, dim)
        return SystemLayout(factors)

    def subset(self, labels: Iterable[str]) -> "SystemLayout":
        wanted = set(labels)
        return SystemLayout(f for f in self.factors if f[0] in wanted)

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        return " x ".join(f"{label}({dim})" for label, dim in self.factors)


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _check_labels(layout: SystemLayout, labels: Iterable[str]) -> list[int]:
    return sorted({layout.index(label) for label in labels})


def _check_square(m: np.ndarray, layout: SystemLayout) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] != layout.dim:
        raise ValueError(f"matrix dimension {m.shape[0]} does not match layout {layout} (dim {layout.dim})")


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Sequence) -> np.ndarray:
    return reduce(kron, mats)


def partial_trace(m, layout: SystemLayout, keep: Iterable[str]) -> tuple[np.ndarray, SystemLayout]:
    """Trace out every factor not in ``keep``.

    Kept factors retain their original relative order.

    Returns
    -------
    (reduced, reduced_layout)
    """
    m = as_matrix(m)
    _check_square(m, layout)
    kept = _check_labels(layout, keep)
    n = len(layout)
    traced = [i for i in range(n) if i not in kept]
    dims = layout.dims
    dk = int(np.prod([dims[i] for i in kept], dtype=np.int64))
    dt = int(np.prod([dims[i] for i in traced], dtype=np.int64))
    t = m.reshape(dims + dims)
    perm = kept + traced + [n + i for i in kept] + [n + i for i in traced]
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    reduced = np.einsum("ajbj->ab", t)
    return reduced, SystemLayout(layout.factors[i] for i in kept)


def partial_transpose(m, layout: SystemLayout, transpose_on: Iterable[str]) -> np.ndarray:
    """Transpose the indices of the named factors only."""
    m = as_matrix(m)
    _check_square(m, layout)
    targets = _check_labels(layout, transpose_on)
    n = len(layout)
    perm = list(range(2 * n))
    for i in targets:
        perm[i], perm[n + i] = perm[n + i], perm[i]
    return m.reshape(layout.dims + layout.dims).transpose(perm).reshape(m.shape)


def hermitian_part(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2``, rejecting inputs farther than ``tol`` from Hermitian."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |m - m^dagger| = {dev:.3e} > {tol:.0e})")
    return (m + m.conj().T) / 2


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order."""
    return np.linalg.eigvalsh(hermitian_part(m))


def hermitian_eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors as columns."""
    return np.linalg.eigh(hermitian_part(m))


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def embed_operator(op, layout: SystemLayout, label: str) -> np.ndarray:
    """Lift ``op`` acting on one factor to the full space (identity elsewhere).

    ``op`` may be rectangular; the result maps ``layout`` into the layout
    with that factor's dimension replaced by ``op.shape[0]``.
    """
    op = as_matrix(op)
    i = layout.index(label)
    if op.shape[1] != layout.dims[i]:
        raise ValueError(f"operator acts on dim {op.shape[1]} but factor {label!r} has dim {layout.dims[i]}")
    left = int(np.prod(layout.dims[:i], dtype=np.int64))
    right = int(np.prod(layout.dims[i + 1:], dtype=np.int64))
    return kron_all([np.eye(left), op, np.eye(right)])


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``A A^dagger / Tr`` with ``A`` a ``d x rank`` Ginibre matrix."""
    rank = d if rank is None else rank
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
