"""Exit criteria for the package; each test prints one PASS/FAIL line in the
terminal summary."""

import time

import numpy as np

from oracles import binary_entropy, brute_partial_transpose
from superact.capacity import (
    channel_coherent_information,
    coherent_information_state,
    q1_search,
    von_neumann_entropy,
)
from superact.channels import apply, erasure_channel, is_ppt, ppt_distinguishability_bound
from superact.qmat import SystemLayout, partial_trace, random_density, random_unitary
from superact.states import (
    DensityMatrix,
    bell,
    classically_correlated,
    flag_layout,
    flagged_bell,
    hiding_flags,
    product,
    twisted_private_state,
)
from superact.superactivation import run_protocol, run_protocol_full_simulation, untwist

CLASSICAL = np.diag([0.5, 0.0, 0.0, 0.5])


def qudit(m):
    return DensityMatrix(m, SystemLayout([("X", len(m))]))


def test_1_superactivation_headline(criterion):
    t0 = time.perf_counter()
    r = run_protocol(2, 0.5)
    elapsed = time.perf_counter() - t0
    target = 1 - binary_entropy(0.25)
    criterion("1 superactivation headline", f"F={r.fidelity_psi0:.12f} I_c={r.i_c:.12f} t={elapsed:.3f}s")
    assert abs(r.fidelity_psi0 - 0.75) <= 1e-10
    assert abs(r.i_c - target) <= 1e-9
    assert abs(target - 0.188722) <= 1e-6
    assert elapsed < 1.0


def test_2_erasure_zero_ingredient(criterion):
    t0 = time.perf_counter()
    best = q1_search(erasure_channel(0.5, 2), restarts=8, seed=42).best_ic
    worst = 0.0
    rng = np.random.default_rng(2)
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        ch = erasure_channel(p, 2)
        for _ in range(50):
            rho = random_density(2, rng)
            s = von_neumann_entropy(qudit(rho)).entropy_bits
            # analytic oracle recomputed from the raw spectrum
            lam = np.linalg.eigvalsh(rho)
            s_ref = float(-np.sum(lam * np.log2(lam)))
            got = channel_coherent_information(ch, qudit(rho)).i_c
            worst = max(worst, abs(got - (1 - 2 * p) * s_ref), abs(s - s_ref))
    elapsed = time.perf_counter() - t0
    criterion("2 erasure ingredient zero-ness", f"Q1_search={best:.3e} max|law err|={worst:.2e} t={elapsed:.1f}s")
    assert best <= 1e-6
    assert worst <= 1e-8
    assert elapsed < 30.0


def test_3_flag_hiding(criterion):
    bounds = {}
    for d in (2, 3, 4):
        tau0, tau1 = hiding_flags(d)
        bounds[d] = ppt_distinguishability_bound(tau0, tau1, ["B'"])
        pt = brute_partial_transpose(tau0.matrix - tau1.matrix, [d, d], [1])
        assert abs(np.sum(np.abs(np.linalg.eigvals(pt))) - 4 / d) <= 1e-9
    detail = " ".join(f"d={d}:{b:.6f}" for d, b in bounds.items())
    criterion("3 flag hiding (PPT bound 1/2+1/d)", detail)
    for d, b in bounds.items():
        assert abs(b - (0.5 + 1 / d)) <= 1e-9
    assert bounds[2] > bounds[3] > bounds[4]


def test_4_classical_marginal(criterion):
    errs, ics = [], []
    for d in (2, 3, 4):
        rho = flagged_bell(d)
        m, _ = partial_trace(rho.matrix, rho.layout, ["A", "B"])
        errs.append(float(np.max(np.abs(m - CLASSICAL))))
        ics.append(coherent_information_state(rho.marginal(["A", "B"]), ["B"]).i_c)
    criterion("4 flagged-Bell marginal = classical mixture", f"max err={max(errs):.1e} max|I_c|={max(map(abs, ics)):.1e}")
    assert max(errs) <= 1e-12
    assert max(abs(x) for x in ics) <= 1e-9


def test_5_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for d in (2, 3):
        for p in (0.0, 0.25, 0.5, 1.0):
            a = run_protocol(d, p).final_ab.matrix
            b = run_protocol_full_simulation(d, p).final_ab.matrix
            worst = max(worst, float(np.max(np.abs(a - b))))
    elapsed = time.perf_counter() - t0
    criterion("5 branch vs full simulation", f"max err={worst:.1e} t={elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 10.0


def test_6_untwisting(criterion):
    rng = np.random.default_rng(6)
    worst = 0.0
    psi0 = bell(0).projector().matrix
    for _ in range(20):
        shield = DensityMatrix(random_density(4, rng), flag_layout(2))
        v = random_unitary(4, rng)
        back = untwist(twisted_private_state(shield, v), v)
        worst = max(worst, float(np.max(np.abs(back.matrix - np.kron(psi0, shield.matrix)))))
    criterion("6 untwisting recovers |psi0><psi0| x shield", f"max err={worst:.1e}")
    assert worst <= 1e-10


def test_7_npt_witness(criterion):
    bell_res = is_ppt(bell(0).projector(), ["B"])
    classical_res = is_ppt(classically_correlated(), ["B"])
    criterion("7 NPT witness", f"bell min eig={bell_res.min_eigenvalue:.12f} classical ppt={classical_res.is_ppt}")
    assert abs(bell_res.min_eigenvalue + 0.5) <= 1e-10
    assert not bell_res.is_ppt
    assert classical_res.is_ppt


def test_8_property_suites(criterion):
    rng = np.random.default_rng(8)
    n = 20
    worst = {"unitary": 0.0, "additive": 0.0, "ptrace": 0.0, "tp": 0.0}
    for _ in range(n):
        rho = random_density(4, rng)
        u = random_unitary(4, rng)
        worst["unitary"] = max(worst["unitary"], abs(
            von_neumann_entropy(qudit(rho)).entropy_bits
            - von_neumann_entropy(qudit(u @ rho @ u.conj().T)).entropy_bits))

        x = DensityMatrix(random_density(2, rng), SystemLayout([("X", 2)]))
        y = DensityMatrix(random_density(3, rng), SystemLayout([("Y", 3)]))
        worst["additive"] = max(worst["additive"], abs(
            von_neumann_entropy(product(x, y)).entropy_bits
            - von_neumann_entropy(x).entropy_bits - von_neumann_entropy(y).entropy_bits))

        layout = SystemLayout([("W", 2), ("X", 3), ("Y", 2)])
        m = random_density(12, rng)
        step, l1 = partial_trace(m, layout, ["X", "Y"])
        twice, _ = partial_trace(step, l1, ["Y"])
        once, _ = partial_trace(m, layout, ["Y"])
        worst["ptrace"] = max(worst["ptrace"], float(np.max(np.abs(twice - once))))

        state = DensityMatrix(m, layout)
        out = apply(erasure_channel(float(rng.uniform()), 3), state, "X")
        worst["tp"] = max(worst["tp"], abs(np.trace(out.matrix).real - 1))

    ch = erasure_channel(0.3, 2)
    same = all(
        q1_search(ch, restarts=1, max_iters=10, seed=s).trace == q1_search(ch, restarts=1, max_iters=10, seed=s).trace
        for s in range(n)
    )
    detail = " ".join(f"{k}={v:.1e}" for k, v in worst.items()) + f" seeded-determinism={same}"
    criterion("8 property suites (n=20 each)", detail)
    assert worst["unitary"] <= 1e-8
    assert worst["additive"] <= 1e-8
    assert worst["ptrace"] <= 1e-12
    assert worst["tp"] <= 1e-10
    assert same
