"""Distance and divergence kernels on SPD matrices.

Seven kernels selectable through :func:`dispatch`:

==========  ============================================================
name        formula
==========  ============================================================
euclid      ||A - B||_F
pearson     1 - Pearson correlation of the strict upper triangles
log         ||log A - log B||_F                    (log-Euclidean)
ai          ||log(A^{-1/2} B A^{-1/2})||_F         (affine-invariant)
bw          sqrt(tr A + tr B - 2 tr (A^{1/2} B A^{1/2})^{1/2})
alpha_pro   (1/alpha) * bw(A^{2 alpha}, B^{2 alpha})
alpha_z     tr((1-a) A + a B) - tr (B^{a/2z} A^{(1-a)/z} B^{a/2z})^z
==========  ============================================================

The affine-invariant and log-Euclidean distances follow the standard
Riemannian-geometry formulations; bw is the 2-Wasserstein distance between
centered Gaussians; alpha_pro and alpha_z are the alpha-Procrustes and
alpha-z Bures-Wasserstein families. alpha_z is a divergence, not a metric:
it is generally asymmetric in (A, B).
"""

from __future__ import annotations

import warnings

import numpy as np

from .core import (
    DegenerateVariance,
    DimensionMismatch,
    InvalidParameter,
    MetricSpec,
    NumericalError,
    SpdMatrix,
    UnknownMetric,
)
from .matfun import sym_inv_sqrt, sym_log, sym_pow, sym_sqrt


def _same_order(a: SpdMatrix, b: SpdMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"matrix orders differ: {a.n} vs {b.n}")


def _clamp_negative(value: float, scale: float) -> float:
    """Clamp round-off negatives to 0; larger negatives are a real failure."""
    if value >= 0.0:
        return value
    if value < -1e-12 * (1.0 + scale):
        raise NumericalError(f"distance value {value:.6g} is negative beyond round-off")
    return 0.0


def euclid(a: SpdMatrix, b: SpdMatrix) -> float:
    """Frobenius (entrywise Euclidean) distance."""
    _same_order(a, b)
    return float(np.linalg.norm(a.entries - b.entries))


def pearson_dist(a: SpdMatrix, b: SpdMatrix) -> float:
    """One minus the Pearson correlation of the strict upper triangles.

    The diagonal is excluded (self-connections carry no information). Range
    [0, 2]; requires order >= 3 so the triangles have at least two entries.
    """
    _same_order(a, b)
    if a.n < 3:
        raise DegenerateVariance(f"pearson needs order >= 3, got {a.n}")
    iu = np.triu_indices(a.n, k=1)
    x = a.entries[iu]
    y = b.entries[iu]
    xc = x - x.mean()
    yc = y - y.mean()
    nx = float(np.sqrt(xc @ xc))
    ny = float(np.sqrt(yc @ yc))
    if nx == 0.0 or ny == 0.0:
        raise DegenerateVariance("strict upper triangle is constant; correlation undefined")
    r = float(xc @ yc) / (nx * ny)
    r = min(1.0, max(-1.0, r))
    return 1.0 - r


def log_euclid(a: SpdMatrix, b: SpdMatrix) -> float:
    """Frobenius distance between matrix logarithms."""
    _same_order(a, b)
    return float(np.linalg.norm(sym_log(a) - sym_log(b)))


def _inner_eigenvalues(m: np.ndarray, scale: float) -> np.ndarray:
    """Eigenvalues of a symmetrized product that is PSD up to round-off."""
    sym = (m + m.T) / 2.0
    lam = np.linalg.eigvalsh(sym)
    if lam[0] < -1e-8 * (1.0 + scale):
        raise NumericalError(
            f"inner product has eigenvalue {lam[0]:.6g}, far below zero"
        )
    return np.clip(lam, 0.0, None)


def _inner_eigenpairs(inner: np.ndarray, a: SpdMatrix, b: SpdMatrix):
    """Eigen-pairs of sqrt(A) B sqrt(A), floored at the analytic lower bound.

    By congruence, lambda_min(sqrt(A) B sqrt(A)) >= lambda_min(A) *
    lambda_min(B) > 0 for validated SPD inputs, so flooring only repairs
    eigensolver round-off and keeps lambda^(-1/2) finite.
    """
    sym = (inner + inner.T) / 2.0
    try:
        lam, vec = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigh failed on inner product: {exc}") from exc
    return np.maximum(lam, a.min_eigenvalue * b.min_eigenvalue), vec


def affine_invariant(a: SpdMatrix, b: SpdMatrix) -> float:
    """Geodesic distance under the affine-invariant Riemannian metric."""
    _same_order(a, b)
    isq = sym_inv_sqrt(a).entries
    inner = isq @ b.entries @ isq
    sym = (inner + inner.T) / 2.0
    lam = np.linalg.eigvalsh(sym)
    if lam[0] <= 0.0:
        raise NumericalError(
            f"whitened product lost positive definiteness (eigenvalue {lam[0]:.6g})"
        )
    return float(np.sqrt(np.sum(np.log(lam) ** 2)))


def bures_wasserstein(a: SpdMatrix, b: SpdMatrix) -> float:
    """Bures-Wasserstein distance (optimal transport between Gaussians).

    Defined as sqrt(tr A + tr B - 2 tr (A^{1/2} B A^{1/2})^{1/2}), but
    evaluated in the equivalent Procrustes form ||A^{1/2} - B^{1/2} U||_F
    with U the polar factor of B^{1/2} A^{1/2}: the trace subtraction
    cancels catastrophically near A = B, the norm of a difference does not.
    """
    _same_order(a, b)
    sq_a = sym_sqrt(a).entries
    sq_b = sym_sqrt(b).entries
    lam, vec = _inner_eigenpairs(sq_a @ b.entries @ sq_a, a, b)
    # polar factor U of M = sqrt(B) sqrt(A), via M (M^T M)^{-1/2}
    u = ((sq_b @ sq_a) @ (vec * lam**-0.5)) @ vec.T
    return float(np.linalg.norm(sq_a - sq_b @ u))


def alpha_procrustes(a: SpdMatrix, b: SpdMatrix, alpha: float) -> float:
    """Alpha-Procrustes distance: (1/alpha) * bw(A^{2a}, B^{2a}).

    Interpolates between twice the Bures-Wasserstein distance (alpha = 1/2)
    and the log-Euclidean distance (alpha -> 0).
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"alpha must be in (0, 1), got {alpha}")
    _same_order(a, b)
    return bures_wasserstein(sym_pow(a, 2.0 * alpha), sym_pow(b, 2.0 * alpha)) / alpha


def _alpha_z_raw(a: SpdMatrix, b: SpdMatrix, alpha: float, z: float) -> float:
    bp = sym_pow(b, alpha / (2.0 * z)).entries
    ap = sym_pow(a, (1.0 - alpha) / z).entries
    lam = _inner_eigenvalues(bp @ ap @ bp, a.trace + b.trace)
    q = float(np.sum(lam ** z))
    return (1.0 - alpha) * a.trace + alpha * b.trace - q


def alpha_z_bw(a: SpdMatrix, b: SpdMatrix, alpha: float, z: float) -> float:
    """Alpha-z Bures-Wasserstein divergence. Asymmetric in (A, B).

    tr((1-a) A + a B) - tr Q with Q = (B^{a/2z} A^{(1-a)/z} B^{a/2z})^z.
    Nonnegativity is guaranteed for z >= max(alpha, 1-alpha); outside that
    region a warning is emitted.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"alpha must be in (0, 1), got {alpha}")
    if not 0.0 < z <= 1.0:
        raise InvalidParameter(f"z must be in (0, 1], got {z}")
    if z < max(alpha, 1.0 - alpha):
        warnings.warn(
            f"alpha_z with z={z} < max(alpha, 1-alpha)={max(alpha, 1.0 - alpha)}: "
            "nonnegativity is not guaranteed in this parameter region",
            stacklevel=2,
        )
    _same_order(a, b)
    return _clamp_negative(_alpha_z_raw(a, b, alpha, z), a.trace + b.trace)


def dispatch(spec: MetricSpec, a: SpdMatrix, b: SpdMatrix) -> float:
    """Evaluate the kernel selected by ``spec`` on the pair (a, b)."""
    if spec.kind == "alpha_z":
        return alpha_z_bw(a, b, spec.alpha, spec.z)
    if spec.kind == "alpha_pro":
        return alpha_procrustes(a, b, spec.alpha)
    kernel = _PLAIN_KERNELS.get(spec.kind)
    if kernel is None:
        raise UnknownMetric(f"no kernel registered for metric {spec.kind!r}")
    return kernel(a, b)


_PLAIN_KERNELS = {
    "euclid": euclid,
    "pearson": pearson_dist,
    "log": log_euclid,
    "ai": affine_invariant,
    "bw": bures_wasserstein,
}
