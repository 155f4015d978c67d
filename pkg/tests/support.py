"""Shared helpers for the test suite: random SPD generators and oracles."""

import numpy as np

from spdid import SpdMatrix, validate_spd


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def random_spd(rng, n, lo=1e-2, hi=1e2) -> SpdMatrix:
    """Q diag(lambda) Q^T with log-uniform eigenvalues in [lo, hi]."""
    q = random_orthogonal(rng, n)
    lam = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    return validate_spd((q * lam) @ q.T)


def spd_pool(rng, n, count, lo=1e-2, hi=1e2):
    return [random_spd(rng, n, lo, hi) for _ in range(count)]
