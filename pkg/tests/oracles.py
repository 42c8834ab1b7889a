"""Brute-force reference computations used as independent test oracles."""

import itertools

import numpy as np


def brute_partial_trace(m, dims, keep):
    """Index-by-index partial trace; independent of the reshape/einsum path."""
    n = len(dims)
    kept = sorted(keep)
    traced = [i for i in range(n) if i not in kept]
    kdims = [dims[i] for i in kept]
    dk = int(np.prod(kdims)) if kdims else 1
    out = np.zeros((dk, dk), dtype=complex)

    def flat(idx):
        r = 0
        for i, d in zip(idx, dims):
            r = r * d + i
        return r

    def kflat(idx):
        r = 0
        for i, d in zip(idx, kdims):
            r = r * d + i
        return r

    for ka in itertools.product(*[range(dims[i]) for i in kept]):
        for kb in itertools.product(*[range(dims[i]) for i in kept]):
            acc = 0j
            for t in itertools.product(*[range(dims[i]) for i in traced]):
                ia, ib = [0] * n, [0] * n
                for pos, i in enumerate(kept):
                    ia[i], ib[i] = ka[pos], kb[pos]
                for pos, i in enumerate(traced):
                    ia[i] = ib[i] = t[pos]
                acc += m[flat(ia), flat(ib)]
            out[kflat(ka), kflat(kb)] = acc
    return out


def brute_partial_transpose(m, dims, on):
    n = len(dims)
    out = np.zeros_like(m)
    ranges = [range(d) for d in dims]

    def flat(idx):
        r = 0
        for i, d in zip(idx, dims):
            r = r * d + i
        return r

    for a in itertools.product(*ranges):
        for b in itertools.product(*ranges):
            a2, b2 = list(a), list(b)
            for i in on:
                a2[i], b2[i] = b[i], a[i]
            out[flat(a2), flat(b2)] = m[flat(a), flat(b)]
    return out


def binary_entropy(x):
    return float(-sum(t * np.log2(t) for t in (x, 1 - x) if t > 0))
