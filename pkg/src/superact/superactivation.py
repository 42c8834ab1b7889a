"""End-to-end activation protocol.

Alice and Bob share the flagged Bell ensemble. Alice sends her half of the
flag (``A'``) through an erasure channel. When it arrives Bob holds the
whole flag, measures symmetric vs antisymmetric and applies ``sigma_Z`` on
``B`` for the antisymmetric outcome. When it is erased the flags are
useless and the pair is left in the classically correlated mixture.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .capacity import coherent_information_state
from .channels import KrausChannel, apply, erasure_channel, ppt_distinguishability_bound
from .qmat import SystemLayout, kron, kron_all, partial_trace
from .states import (
    AB,
    SIGMA_Z,
    DensityMatrix,
    bell,
    fidelity_with_pure,
    flagged_bell,
    full_layout,
    hiding_flags,
    symmetric_projectors,
    twist_unitary,
)


@dataclass(frozen=True, eq=False)
class ProtocolReport:
    d: int
    p: float
    final_ab: DensityMatrix
    fidelity_psi0: float
    i_c: float
    branch_weights: tuple[float, float]
    ppt_bound_flags: float

    def as_dict(self) -> dict:
        """Flat record; ``final_ab`` is spelled out entrywise as real/imag parts."""
        out = {
            "d": self.d,
            "p": self.p,
            "fidelity_psi0": self.fidelity_psi0,
            "i_c": self.i_c,
            "branch_success": self.branch_weights[0],
            "branch_erased": self.branch_weights[1],
            "ppt_bound_flags": self.ppt_bound_flags,
        }
        m = self.final_ab.matrix
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                out[f"final_ab_re_{i}{j}"] = float(m[i, j].real)
                out[f"final_ab_im_{i}{j}"] = float(m[i, j].imag)
        return out


def _validate(d: int, p: float) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"flag dimension d must be an integer >= 2, got {d!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability p must lie in [0, 1], got {p!r}")


def _report(d: int, p: float, final: np.ndarray, weights: tuple[float, float]) -> ProtocolReport:
    final_ab = DensityMatrix(final, AB)
    tau0, tau1 = hiding_flags(d)
    return ProtocolReport(
        d=d,
        p=p,
        final_ab=final_ab,
        fidelity_psi0=fidelity_with_pure(final_ab, bell(0)),
        i_c=coherent_information_state(final_ab, ["B"]).i_c,
        branch_weights=weights,
        ppt_bound_flags=ppt_distinguishability_bound(tau0, tau1, ["B'"]),
    )


def _flag_correction_ops(d: int) -> list[np.ndarray]:
    """Bob's measure-and-correct Kraus operators on ``A x B x A' x B'``."""
    p_sym, p_anti = symmetric_projectors(d)
    return [
        kron_all([np.eye(2), np.eye(2), p_sym]),
        kron_all([np.eye(2), SIGMA_Z, p_anti]),
    ]


def run_protocol(d: int, p: float) -> ProtocolReport:
    """Branch-wise evaluation: mix the delivered and erased outcomes by weight."""
    _validate(d, p)
    rho = flagged_bell(d)
    corrected = KrausChannel(_flag_correction_ops(d))(rho.matrix)
    delivered, _ = partial_trace(corrected, rho.layout, ["A", "B"])
    erased = rho.marginal(["A", "B"]).matrix
    final = (1 - p) * delivered + p * erased
    return _report(d, p, final, (1 - p, p))


def run_protocol_full_simulation(d: int, p: float) -> ProtocolReport:
    """Whole-state evolution with no branch shortcut.

    The erasure channel acts on ``A'`` (which grows to ``d + 1`` levels).
    Bob's three-outcome instrument (symmetric, antisymmetric, erased) then
    writes the erasure outcome into a classical register ``F`` so branch
    weights are read off the final state.
    """
    _validate(d, p)
    rho = apply(erasure_channel(p, d), flagged_bell(d), "A'")
    layout = rho.layout
    p_sym, p_anti = symmetric_projectors(d)
    embed = np.zeros((d + 1, d))
    embed[:d, :d] = np.eye(d)
    lift = kron(embed, np.eye(d))
    e_proj = np.zeros((d + 1, d + 1))
    e_proj[d, d] = 1.0
    ket0, ket1 = np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]])
    # each operator maps A B A' B' -> A B A' B' F
    ops = [
        kron_all([np.eye(2), np.eye(2), lift @ p_sym @ lift.T, ket0]),
        kron_all([np.eye(2), SIGMA_Z, lift @ p_anti @ lift.T, ket0]),
        kron_all([np.eye(2), np.eye(2), kron(e_proj, np.eye(d)), ket1]),
    ]
    out = sum(k @ rho.matrix @ k.conj().T for k in ops)
    out_layout = SystemLayout(list(layout.factors) + [("F", 2)])
    flag, _ = partial_trace(out, out_layout, ["F"])
    weights = (float(flag[0, 0].real), float(flag[1, 1].real))
    final, _ = partial_trace(out, out_layout, ["A", "B"])
    return _report(d, p, final, weights)


def _check_shield_layout(rho: DensityMatrix) -> int:
    labels = rho.layout.labels
    if labels != ("A", "B", "A'", "B'") or rho.layout.dims[:2] != (2, 2):
        raise ValueError(f"expected layout A(2) x B(2) x A'(d) x B'(d), got {rho.layout}")
    d = rho.layout.dims[2]
    if rho.layout.dims[3] != d:
        raise ValueError(f"shield factors must have equal dimension, got {rho.layout}")
    return d


def untwist(rho: DensityMatrix, v) -> DensityMatrix:
    """Apply ``U^dagger`` for ``U = |0><0|_B x I + |1><1|_B x V``, ``V`` on ``A'B'``."""
    d = _check_shield_layout(rho)
    u = twist_unitary(v, d)
    return DensityMatrix(u.conj().T @ rho.matrix @ u, full_layout(d))


def sweep(d_values: Sequence[int], p_values: Sequence[float]) -> list[ProtocolReport]:
    """``run_protocol`` over the grid, ``d`` outer and ``p`` inner."""
    if len(d_values) == 0 or len(p_values) == 0:
        raise ValueError("empty sweep axis")
    reports = []
    for d in d_values:
        for p in p_values:
            try:
                reports.append(run_protocol(d, p))
            except ValueError as exc:
                raise ValueError(f"sweep cell (d={d!r}, p={p!r}): {exc}") from exc
    return reports
