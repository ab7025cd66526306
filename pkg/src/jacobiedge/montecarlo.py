"""Ground-truth generators and statistical validation tools.

Sampling is reproducible by construction: draw i consumes its own window
of a counter-based bit stream (Philox keyed by the config seed, with the
draw index in the counter), so results are bit-identical for any worker
count or chunking.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, NumericalQualityError, OracleScaleError,
                     StatisticalPowerError)
from .exact import EnsembleParams
from .hardedge import limit_pdf

_CHUNK = 256  # draws per linear-algebra batch; fixed, so independent of workers
_MAX_CHOLESKY_RETRIES = 64
_FAILURE_BUDGET = 1e-4  # more than 0.01% resampled draws means something is wrong
_EIG_SLACK = 1e-10
_BOOTSTRAP_RESAMPLES = 200
_MIN_CORRECTION_SAMPLES = 10_000


@dataclass(frozen=True)
class MCConfig:
    """Sampling configuration; identical configs give identical samples."""

    params: EnsembleParams
    samples: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class CovarianceSpec:
    """Common column covariance of the two Gaussian factors.

    The eigenvalue law is invariant to it; the random option exists to
    test exactly that.
    """

    kind: str = "identity"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("identity", "random"):
            raise DomainError("kind must be 'identity' or 'random'")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def random_positive_definite(cls, seed):
        return cls("random", seed)

    def sqrt_matrix(self, n):
        """Hermitian square root of the covariance (None for identity)."""
        if self.kind == "identity":
            return None
        rng = np.random.Generator(np.random.Philox(key=[self.seed % 2 ** 64, 2]))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        sigma = a @ a.conj().T / n + np.eye(n)
        w, v = np.linalg.eigh(sigma)
        return (v * np.sqrt(w)) @ v.conj().T


class EmpiricalCDF:
    """Sorted samples with rank queries."""

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=np.float64))
        if arr.size == 0:
            raise DomainError("need at least one sample")
        self.samples = arr
        self.count = int(arr.size)

    def evaluate(self, t):
        return np.searchsorted(self.samples, t, side="right") / self.count


def dkw_epsilon(delta, count):
    """Half-width of the DKW confidence band: sqrt(ln(2/delta) / (2 count))."""
    if not 0.0 < delta < 1.0 or count < 1:
        raise DomainError("need 0 < delta < 1 and count >= 1")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * count))


def ks_distance(ecdf, cdf):
    """sup_t |ECDF(t) - cdf(t)| over the sample points, both one-sided gaps."""
    theo = np.asarray([cdf(t) for t in ecdf.samples], dtype=np.float64)
    n = ecdf.count
    upper = np.arange(1, n + 1) / n - theo
    lower = theo - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def two_sample_ks_threshold(delta, n1, n2):
    """Asymptotic two-sample KS rejection threshold at level delta."""
    return math.sqrt(math.log(2.0 / delta) / 2.0) * math.sqrt((n1 + n2) / (n1 * n2))


def _draw_rng(seed, index):
    return np.random.Generator(np.random.Philox(key=[seed, 0], counter=[0, 0, index, 0]))


def _gaussian_pair(rng, m1, m2, n, sqrt_cov):
    z = rng.standard_normal(2 * (m1 + m2) * n).view(np.complex128)
    x1 = z[:m1 * n].reshape(m1, n)
    x2 = z[m1 * n:].reshape(m2, n)
    if sqrt_cov is not None:
        x1 = x1 @ sqrt_cov
        x2 = x2 @ sqrt_cov
    return x1, x2


def _eigs_of_block(w1, total):
    """Eigenvalues of (W1+W2)^{-1} W1 for stacked Hermitian blocks.

    Cholesky-reduces the definite pencil to a standard Hermitian problem:
    L from W1+W2, then eigenvalues of L^{-1} W1 L^{-dagger}.
    """
    low = np.linalg.cholesky(total)
    half = np.linalg.solve(low, w1)
    reduced = np.linalg.solve(low, half.conj().transpose(0, 2, 1))
    return np.linalg.eigvalsh(reduced)


def _sample_block(seed, start, stop, m1, m2, n, sqrt_cov):
    count = stop - start
    x1 = np.empty((count, m1, n), dtype=np.complex128)
    x2 = np.empty((count, m2, n), dtype=np.complex128)
    rngs = [_draw_rng(seed, i) for i in range(start, stop)]
    for k, rng in enumerate(rngs):
        x1[k], x2[k] = _gaussian_pair(rng, m1, m2, n, sqrt_cov)
    w1 = np.matmul(x1.conj().transpose(0, 2, 1), x1)
    total = w1 + np.matmul(x2.conj().transpose(0, 2, 1), x2)
    failures = 0
    try:
        eig = _eigs_of_block(w1, total)
    except np.linalg.LinAlgError:
        # Rare: some draw produced a numerically singular W1+W2.  Redo the
        # chunk draw by draw, resampling offenders from their own streams.
        eig = np.empty((count, n))
        for k, rng in enumerate(rngs):
            for _ in range(_MAX_CHOLESKY_RETRIES):
                try:
                    eig[k] = _eigs_of_block(w1[k:k + 1], total[k:k + 1])[0]
                    break
                except np.linalg.LinAlgError:
                    failures += 1
                    a, b = _gaussian_pair(rng, m1, m2, n, sqrt_cov)
                    w1[k] = a.conj().T @ a
                    total[k] = w1[k] + b.conj().T @ b
            else:
                raise NumericalQualityError("persistent Cholesky failure")
    if eig.min() < -_EIG_SLACK or eig.max() > 1.0 + _EIG_SLACK:
        raise NumericalQualityError("eigenvalue escaped [0, 1] tolerance window")
    return eig[:, 0], eig[:, -1], failures


def sample_extremes(cfg, cov=CovarianceSpec.identity()):
    """Smallest and largest eigenvalue samples of the double-Wishart model.

    Each draw builds two complex Gaussian factors, forms the Wisharts and
    solves the Hermitian definite pencil by Cholesky reduction.

    Returns
    -------
    (smallest, largest) : two float arrays of length cfg.samples.
    """
    p = cfg.params
    sqrt_cov = cov.sqrt_matrix(p.n)
    blocks = [(s, min(s + _CHUNK, cfg.samples)) for s in range(0, cfg.samples, _CHUNK)]
    args = [(cfg.seed, a, b, p.m1, p.m2, p.n, sqrt_cov) for a, b in blocks]
    if cfg.workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_sample_block_star, args, chunksize=1))
    else:
        parts = [_sample_block(*a) for a in args]
    smallest = np.concatenate([p_[0] for p_ in parts])
    largest = np.concatenate([p_[1] for p_ in parts])
    failures = sum(p_[2] for p_ in parts)
    if failures > _FAILURE_BUDGET * cfg.samples:
        raise NumericalQualityError(
            f"{failures} resampled draws out of {cfg.samples} exceeds budget")
    return smallest, largest


def _sample_block_star(args):
    return _sample_block(*args)


def quadrature_cdf(params, xi):
    """Smallest-eigenvalue CDF for n <= 3 by tensor Gauss-Legendre quadrature.

    Integrates the squared-Vandermonde eigenvalue density over [xi, 1]^n and
    normalizes by the same integral over [0, 1]^n, which cancels the
    unknown normalization constant.  The integrand is polynomial, so the
    node count is chosen to make the rule exact; a refined rule guards the
    stated 1e-8 absolute tolerance.
    """
    n, a1, a2 = params.n, params.alpha1, params.alpha2
    if n > 3:
        raise OracleScaleError("quadrature oracle limited to n <= 3")
    if not 0.0 <= xi < 1.0:
        raise DomainError("xi must lie in [0, 1)")
    if xi == 0.0:
        return 0.0

    def integral(lo, nodes):
        x, w = np.polynomial.legendre.leggauss(nodes)
        x = (x + 1.0) * (1.0 - lo) / 2.0 + lo
        w = w * (1.0 - lo) / 2.0
        grids = np.meshgrid(*([x] * n), indexing="ij")
        weight = np.ones_like(grids[0])
        for g in grids:
            weight = weight * g ** a1 * (1.0 - g) ** a2
        for i in range(n):
            for j in range(i + 1, n):
                weight = weight * (grids[i] - grids[j]) ** 2
        wprod = np.ones_like(grids[0])
        for i, g in enumerate(grids):
            shape = [1] * n
            shape[i] = len(w)
            wprod = wprod * w.reshape(shape)
        return float((weight * wprod).sum())

    base = a1 + a2 + 2 * n + 2
    tail = integral(xi, base) / integral(0.0, base)
    refined = integral(xi, base + 6) / integral(0.0, base + 6)
    if abs(tail - refined) > 1e-8:
        raise NumericalQualityError("quadrature rule failed to stabilize")
    return 1.0 - refined


def _silverman_bandwidth(samples):
    sd = float(np.std(samples))
    q75, q25 = np.percentile(samples, [75.0, 25.0])
    spread = min(sd, (q75 - q25) / 1.34)
    return 0.9 * spread * len(samples) ** (-0.2)


def empirical_scaled_correction(cfg, grid, cov=CovarianceSpec.identity()):
    """Estimated scaled first-order correction on a grid of x values.

    The density of n^2 * (smallest eigenvalue) is estimated by a Gaussian
    kernel with Silverman bandwidth, the limiting density is subtracted and
    the result multiplied by n*e^x.  Standard errors come from 200
    bootstrap resamples of the binned sample counts.

    Returns
    -------
    (values, stderr) : arrays matching the grid; a grid point with no
    samples within three bandwidths is returned as NaN (missing), not 0.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0 or grid.min() <= 0.0:
        raise DomainError("grid must contain positive x values")
    if cfg.samples < _MIN_CORRECTION_SAMPLES:
        raise StatisticalPowerError(
            f"need at least {_MIN_CORRECTION_SAMPLES} samples for the correction")
    p = cfg.params
    smallest, _ = sample_extremes(cfg, cov)
    scaled = np.sort(p.n * p.n * smallest)
    bw = _silverman_bandwidth(scaled)
    n_total = scaled.size

    delta = bw / 8.0
    top = grid.max() + 8.0 * bw
    nbins = int(math.ceil(top / delta)) + 1
    edges = np.linspace(0.0, top, nbins + 1)
    counts, _ = np.histogram(scaled, bins=edges)
    centers = (edges[:-1] + edges[1:]) / 2.0
    half = int(math.ceil(6.0 * bw / delta))
    offs = np.arange(-half, half + 1) * delta
    kern = np.exp(-0.5 * (offs / bw) ** 2) / (math.sqrt(2.0 * math.pi) * bw)

    theory = np.array([limit_pdf(p.alpha1, x) for x in grid])
    scale = p.n * np.exp(grid)

    def corrected(cts):
        dens = np.convolve(cts, kern, mode="same") / n_total
        return (np.interp(grid, centers, dens) - theory) * scale

    values = corrected(counts)
    lo = np.searchsorted(scaled, grid - 3.0 * bw)
    hi = np.searchsorted(scaled, grid + 3.0 * bw)
    values[hi == lo] = np.nan

    overflow = n_total - counts.sum()
    pvals = np.append(counts, overflow) / n_total
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed, 1]))
    boot = np.empty((_BOOTSTRAP_RESAMPLES, grid.size))
    for b in range(_BOOTSTRAP_RESAMPLES):
        res = rng.multinomial(n_total, pvals)[:-1]
        boot[b] = corrected(res)
    stderr = boot.std(axis=0, ddof=1)
    stderr[hi == lo] = np.nan
    return values, stderr
