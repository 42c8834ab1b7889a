"""Entropic functionals and a seeded search for single-letter coherent information."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .channels import KrausChannel, _apply_matrix
from .qmat import SystemLayout, hermitian_eigenvalues, hermitian_eigh, partial_trace
from .states import DensityMatrix

EIG_CUTOFF = 1e-12
NEG_TOL = 1e-10
CLIP_LIMIT = 1e-8


class EntropyReport(NamedTuple):
    entropy_bits: float
    spectrum: tuple[float, ...]
    clipped_mass: float


class CoherentInfoReport(NamedTuple):
    s_b: float
    s_ab: float
    i_c: float


def _entropy_from_matrix(m: np.ndarray) -> EntropyReport:
    evals = hermitian_eigenvalues(m)
    if evals[0] < -NEG_TOL:
        raise ValueError(f"not a density matrix: eigenvalue {evals[0]:.3e} < 0")
    clipped = float(-np.sum(evals[evals < 0]))
    if clipped > CLIP_LIMIT:
        raise ValueError(f"negative eigenvalue mass {clipped:.3e} exceeds {CLIP_LIMIT:.0e}")
    pos = evals[evals > EIG_CUTOFF]
    s = float(-np.sum(pos * np.log2(pos)))
    return EntropyReport(max(s, 0.0), tuple(float(x) for x in evals), clipped)


def von_neumann_entropy(rho: DensityMatrix) -> EntropyReport:
    """Entropy in bits, with ``0 log 0 = 0`` below the ``1e-12`` cutoff."""
    return _entropy_from_matrix(rho.matrix)


def _coherent_info(m: np.ndarray, layout: SystemLayout, b_labels: list[str]) -> CoherentInfoReport:
    rho_b, _ = partial_trace(m, layout, b_labels)
    s_b = _entropy_from_matrix(rho_b).entropy_bits
    s_ab = _entropy_from_matrix(m).entropy_bits
    return CoherentInfoReport(s_b, s_ab, s_b - s_ab)


def coherent_information_state(rho: DensityMatrix, b_labels: Iterable[str]) -> CoherentInfoReport:
    """``I_c(A>B) = S(B) - S(AB)`` where A is every factor outside ``b_labels``."""
    b_labels = list(b_labels)
    for label in b_labels:
        rho.layout.index(label)
    if not b_labels or set(b_labels) == set(rho.layout.labels):
        raise ValueError(
            f"b_labels must be a proper nonempty subset of {list(rho.layout.labels)}, got {b_labels}"
        )
    return _coherent_info(rho.matrix, rho.layout, b_labels)


def _channel_ic(ch: KrausChannel, rho: np.ndarray) -> CoherentInfoReport:
    evals, vecs = hermitian_eigh(rho)
    support = evals > EIG_CUTOFF
    lam, vecs = evals[support], vecs[:, support]
    r = lam.size
    # |phi> = sum_k sqrt(lam_k) |v_k>_S |k>_R, system factor first
    phi = (vecs * np.sqrt(lam)).reshape(-1)
    joint = np.outer(phi, phi.conj())
    layout = SystemLayout([("S", ch.in_dim), ("R", r)])
    out, out_layout = _apply_matrix(ch, joint, layout, "S")
    return _coherent_info(out, out_layout, ["S"])


def channel_coherent_information(ch: KrausChannel, input: DensityMatrix) -> CoherentInfoReport:
    """Coherent information of ``ch`` at ``input``.

    The input is purified onto a reference of dimension ``rank(input)`` and
    the channel acts on the system half; B is the channel output and A the
    reference.
    """
    if input.dim != ch.in_dim:
        raise ValueError(f"input has dim {input.dim} but channel expects {ch.in_dim}")
    return _channel_ic(ch, input.matrix)


def _params_to_density(x: np.ndarray, d: int) -> np.ndarray:
    a = (x[: d * d] + 1j * x[d * d:]).reshape(d, d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


class Q1Result(NamedTuple):
    best_ic: float
    best_input: np.ndarray
    trace: list[tuple[int, int, float, float]]


def _local_search(f, x: np.ndarray, max_iters: int, restart: int, trace: list):
    step = 0.1
    fx = f(x)
    for it in range(max_iters):
        if step < 1e-6:
            break
        improved = False
        for j in range(x.size):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[j] += sign * step
                fy = f(y)
                if fy > fx:
                    x, fx = y, fy
                    improved = True
                    break
        if not improved:
            step *= 0.5
        trace.append((restart, it, step, fx))
    return x, fx


def q1_search(
    ch: KrausChannel,
    restarts: int = 8,
    max_iters: int = 200,
    seed: int = 42,
) -> Q1Result:
    """Multi-start coordinate search maximizing channel coherent information.

    Inputs are parameterized as ``A A^dagger / Tr(A A^dagger)`` with ``A`` a
    general complex ``d x d`` matrix. Each restart draws its start point from
    a generator seeded by ``(seed, restart)`` and refines it by coordinate
    perturbation (step 0.1, halved after a sweep without improvement, stop
    below ``1e-6`` or after ``max_iters`` sweeps).

    The returned value is the best found, a lower bound on Q1.

    Returns
    -------
    Q1Result
        ``best_ic``, ``best_input`` and the iterate trace as
        ``(restart, iteration, step, value)`` tuples.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    d = ch.in_dim

    def objective(x):
        return _channel_ic(ch, _params_to_density(x, d)).i_c

    trace: list = []
    best_x, best_val = None, -np.inf
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        x0 = rng.standard_normal(2 * d * d)
        x, fx = _local_search(objective, x0, max_iters, r, trace)
        if fx > best_val:
            best_x, best_val = x, fx
    return Q1Result(float(best_val), _params_to_density(best_x, d), trace)


@dataclass
class Q1Search:
    """Estimator-style wrapper around :func:`q1_search`.

    ``fit(channel)`` sets ``best_ic_``, ``best_input_`` and ``trace_``.
    """

    restarts: int = 8
    max_iters: int = 200
    seed: int = 42
    best_ic_: float = field(init=False, repr=False, default=None)
    best_input_: np.ndarray = field(init=False, repr=False, default=None)
    trace_: list = field(init=False, repr=False, default=None)

    def get_params(self, deep: bool = True) -> dict:
        return {"restarts": self.restarts, "max_iters": self.max_iters, "seed": self.seed}

    def set_params(self, **params) -> "Q1Search":
        valid = self.get_params()
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self

    def fit(self, channel: KrausChannel, y=None) -> "Q1Search":
        result = q1_search(channel, self.restarts, self.max_iters, self.seed)
        self.best_ic_, self.best_input_, self.trace_ = result
        return self

    def score(self, channel: KrausChannel, input: DensityMatrix | None = None) -> float:
        if self.best_input_ is None:
            raise RuntimeError("Q1Search instance is not fitted yet; call fit() first")
        if input is None:
            return _channel_ic(channel, self.best_input_).i_c
        return channel_coherent_information(channel, input).i_c
