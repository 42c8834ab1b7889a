"""Kraus-operator channels, Choi matrices and PPT tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .qmat import SystemLayout, as_matrix, hermitian_eigenvalues, partial_transpose, trace_norm
from .states import DensityMatrix

TP_TOL = 1e-10
PPT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving channel ``rho -> sum_k K rho K^dagger``.

    Every operator has shape ``(out_dim, in_dim)``; ``sum_k K^dagger K = I``
    is checked at construction.
    """

    kraus_ops: tuple[np.ndarray, ...]
    in_dim: int
    out_dim: int

    def __init__(self, kraus_ops: Sequence):
        ops = tuple(as_matrix(k) for k in kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValueError(f"Kraus operators have mismatched shapes: {[k.shape for k in ops]}")
        gram = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(gram - np.eye(shape[1])))
        if dev > TP_TOL:
            raise ValueError(f"Kraus operators are not trace preserving (max deviation {dev:.3e})")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "out_dim", shape[0])
        object.__setattr__(self, "in_dim", shape[1])

    def __call__(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops)

    def __len__(self) -> int:
        return len(self.kraus_ops)


class ChoiMatrix(NamedTuple):
    matrix: np.ndarray
    layout: SystemLayout


class PPTResult(NamedTuple):
    is_ppt: bool
    min_eigenvalue: float


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d)])


def erasure_channel(p: float, d: int) -> KrausChannel:
    """Erase a ``d``-level input with probability ``p``.

    The output space is ``C^(d+1)``; the last basis vector is the erasure
    flag ``|e>``, orthogonal to every transmitted state.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {p!r}")
    if d < 1:
        raise ValueError(f"input dimension must be >= 1, got {d}")
    embed = np.zeros((d + 1, d))
    embed[:d, :d] = np.eye(d)
    ops = [np.sqrt(1 - p) * embed]
    for i in range(d):
        k = np.zeros((d + 1, d))
        k[d, i] = 1.0
        ops.append(np.sqrt(p) * k)
    return KrausChannel(ops)


def _apply_matrix(ch: KrausChannel, m: np.ndarray, layout: SystemLayout, target: str):
    i = layout.index(target)
    if layout.dims[i] != ch.in_dim:
        raise ValueError(
            f"channel expects input dim {ch.in_dim} but factor {target!r} has dim {layout.dims[i]}"
        )
    dims = layout.dims
    n = len(dims)
    new_layout = layout.replace_dim(target, ch.out_dim)
    t = m.reshape(dims + dims)
    out = np.zeros(new_layout.dims + new_layout.dims, dtype=np.complex128)
    for k in ch.kraus_ops:
        # K on the ket index i, conj(K) on the bra index n + i
        s = np.moveaxis(np.tensordot(k, t, axes=([1], [i])), 0, i)
        s = np.moveaxis(np.tensordot(k.conj(), s, axes=([1], [n + i])), 0, n + i)
        out += s
    d = new_layout.dim
    return out.reshape(d, d), new_layout


def apply(ch: KrausChannel, rho: DensityMatrix, target: str) -> DensityMatrix:
    """Apply ``ch`` to the single factor ``target`` of ``rho``.

    The factor keeps its label; its dimension becomes ``ch.out_dim``.
    """
    m, layout = _apply_matrix(ch, rho.matrix, rho.layout, target)
    return DensityMatrix(m, layout)


def choi(ch: KrausChannel) -> ChoiMatrix:
    """``(N x I)(sum_ij |ii><jj|)`` on layout ``out x in`` (trace ``in_dim``)."""
    d = ch.in_dim
    omega = np.zeros((d * d, d * d), dtype=np.complex128)
    idx = [i * d + i for i in range(d)]
    omega[np.ix_(idx, idx)] = 1.0
    layout = SystemLayout([("out", d), ("in", d)])
    m, layout = _apply_matrix(ch, omega, layout, "out")
    return ChoiMatrix(m, layout)


def _check_split(layout: SystemLayout, split: Iterable[str]) -> list[str]:
    split = list(split)
    for label in split:
        layout.index(label)
    if not split or set(split) == set(layout.labels):
        raise ValueError(f"split must be a proper nonempty subset of {list(layout.labels)}, got {split}")
    return split


def is_ppt(rho: DensityMatrix, split: Iterable[str], tol: float = PPT_TOL) -> PPTResult:
    """Peres-Horodecki test across ``split | rest``.

    Always reports the minimum eigenvalue of the partial transpose.
    """
    split = _check_split(rho.layout, split)
    pt = partial_transpose(rho.matrix, rho.layout, split)
    lam = float(hermitian_eigenvalues(pt)[0])
    return PPTResult(lam >= -tol, lam)


def ppt_distinguishability_bound(r0: DensityMatrix, r1: DensityMatrix, split: Iterable[str]) -> float:
    """Upper bound on the success probability of telling ``r0`` from ``r1``
    with PPT measurements across ``split``, equal priors.

    Evaluates ``1/2 + ||(r0 - r1)^Gamma||_1 / 4`` clamped to ``[1/2, 1]``.
    """
    if r0.layout != r1.layout:
        raise ValueError(f"layout mismatch: {r0.layout} vs {r1.layout}")
    split = _check_split(r0.layout, split)
    delta = partial_transpose(r0.matrix - r1.matrix, r0.layout, split)
    bound = 0.5 + 0.25 * trace_norm(delta)
    return min(max(bound, 0.5), 1.0)
