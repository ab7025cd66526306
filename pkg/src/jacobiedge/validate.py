"""Invariant suites behind the `validate` CLI command.

Each suite returns CheckResult rows; the CLI renders them as a PASS/FAIL
table.  The heavier computations are plain functions so tests can reuse
them directly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from . import exact, hardedge, montecarlo, orthopoly
from .exact import EnsembleParams


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _check(name, passed, detail=""):
    return CheckResult(name, bool(passed), detail)


# ---------------------------------------------------------------------------
# identity suite

def lemma1_holds(n, m):
    """Exact recurrence between Rodrigues derivatives at orders n, n+1."""
    lhs = orthopoly.exact_rodrigues_derivative(n + 1, n + m + 1).scalar_mul(n - m + 1)
    rhs = orthopoly.exact_rodrigues_derivative(n + 1, n + m + 2).mul_x() \
        - orthopoly.exact_rodrigues_derivative(n, n + m + 1).scalar_mul(2 * (n + 1))
    return lhs == rhs


def corollary2_max_error(max_n=50, max_m=6, points=4, seed=7):
    """(n-m+1) d^m P_{n+1} = y d^{m+1} P_{n+1} - d^{m+1} P_n, numerically."""
    rng = np.random.Generator(np.random.Philox(key=[seed, 11]))
    worst = 0.0
    for n in (2, 5, 10, 25, max_n):
        for m in range(0, max_m + 1):
            for y in rng.uniform(-5.0, 5.0, points):
                lhs = (n - m + 1) * orthopoly.legendre_deriv(n + 1, m, y).to_float()
                rhs = y * orthopoly.legendre_deriv(n + 1, m + 1, y).to_float() \
                    - orthopoly.legendre_deriv(n, m + 1, y).to_float()
                scale = max(abs(lhs), abs(rhs), 1.0)
                worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def lemma2_max_error(max_n=10):
    """Rodrigues derivative vs associated-polynomial form on |y| < 1."""
    worst = 0.0
    ys = [Fraction(-7, 8), Fraction(-1, 3), Fraction(1, 5), Fraction(4, 7)]
    for n in range(0, max_n + 1):
        for m in range(-n, n + 1):
            poly = orthopoly.exact_rodrigues_derivative(n, n + m)
            den = math.factorial(n) * 2 ** n
            for y in ys:
                lhs = float(poly.eval(y)) / den
                yf = float(y)
                rhs = (math.factorial(n + m) / math.factorial(n - m)) \
                    * (1.0 - yf * yf) ** (-m / 2.0) \
                    * orthopoly.assoc_legendre(n, -m, yf)
                scale = max(abs(lhs), abs(rhs), 1.0)
                worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _orthogonality_error(max_n=12):
    nodes, weights = np.polynomial.legendre.leggauss(max_n + 2)
    worst = 0.0
    for n in range(max_n + 1):
        pn = np.array([orthopoly.legendre(n, x).to_float() for x in nodes])
        for k in range(n + 1):
            pk = np.array([orthopoly.legendre(k, x).to_float() for x in nodes])
            val = float(np.sum(weights * pn * pk))
            expected = 2.0 / (2 * n + 1) if k == n else 0.0
            worst = max(worst, abs(val - expected))
    return worst


def _closed_form_entry_error(max_n=200, max_m=8):
    worst = 0.0
    for n in (1, 2, 5, 17, 60, max_n):
        for m in range(0, max_m + 1):
            closed = exact._entry_at_one(n, 1, m + 1).to_float()
            direct = orthopoly.legendre_deriv(n, m, 1.0).to_float()
            scale = max(abs(closed), 1e-300)
            worst = max(worst, abs(closed - direct) / scale)
    return worst


def suite_identities(fast=False):
    checks = []
    max_n = 6 if fast else 10
    bad = [(n, m) for n in range(0, max_n + 1) for m in range(-(n + 1), n + 1)
           if not lemma1_holds(n, m)]
    checks.append(_check("lemma1-exact-recurrence", not bad,
                         f"n<= {max_n}, all orders; failures: {bad}"))
    err = corollary2_max_error(max_n=20 if fast else 50)
    checks.append(_check("corollary2-derivative-recurrence", err <= 1e-10,
                         f"max rel err {err:.2e} (tol 1e-10)"))
    err = lemma2_max_error(max_n=6 if fast else 10)
    checks.append(_check("lemma2-associated-form", err <= 1e-12,
                         f"max err {err:.2e} (tol 1e-12)"))
    ns = (3, 8, 15) if fast else (3, 8, 15, 40, 101)
    perr = max(abs(orthopoly.legendre(n, -y).to_float()
                   - (-1) ** n * orthopoly.legendre(n, y).to_float())
               / max(abs(orthopoly.legendre(n, y).to_float()), 1e-300)
               for n in ns for y in (0.3, 0.9, 2.5, 1e4))
    checks.append(_check("legendre-parity", perr <= 1e-13, f"max rel err {perr:.2e}"))
    err = _orthogonality_error(8 if fast else 12)
    checks.append(_check("legendre-orthogonality", err <= 1e-9,
                         f"max abs err {err:.2e} (tol 1e-9)"))
    err = _closed_form_entry_error(100 if fast else 200)
    checks.append(_check("unit-argument-closed-form", err <= 1e-12,
                         f"max rel err {err:.2e} (tol 1e-12)"))
    return checks


# ---------------------------------------------------------------------------
# cross-method suite

def cross_method_max_error(ns=(2, 5, 10, 25, 50), alphas=range(4), betas=range(4),
                           grid_points=20):
    worst = 0.0
    where = None
    for n in ns:
        for a in alphas:
            for b in betas:
                for xi in np.linspace(0.0, 0.98, grid_points):
                    g = exact.legendre_route_cdf(a, b, n, float(xi))
                    h = exact.jacobi_route_cdf(a, b, n, float(xi))
                    rel = abs(g - h) / max(abs(h), 1e-15)
                    if rel > worst:
                        worst, where = rel, (n, a, b, float(xi))
    return worst, where


def suite_cross_method(fast=False):
    checks = []
    ns = (2, 5, 25) if fast else (2, 5, 10, 25, 50)
    err, where = cross_method_max_error(ns=ns, grid_points=8 if fast else 20)
    checks.append(_check("legendre-vs-jacobi-route", err <= 1e-9,
                         f"max rel gap {err:.2e} at {where} (tol 1e-9)"))

    worst = 0.0
    for n in (3, 7):
        for a in range(4):
            for xi in (0.02, 0.1, 0.4):
                p1 = EnsembleParams(n, a, 0)
                d1 = abs(exact.closed_form_cdf(p1, xi, "smallest")
                         - exact.smallest_cdf(p1, xi))
                p2 = EnsembleParams(n, 0, a)
                d2 = abs(exact.closed_form_cdf(p2, xi, "largest")
                         - exact.largest_cdf(p2, xi))
                worst = max(worst, d1 / max(exact.smallest_cdf(p1, xi), 1e-15),
                            d2 / max(exact.largest_cdf(p2, xi), 1e-15))
    checks.append(_check("one-sided-closed-forms", worst <= 1e-10,
                         f"max rel gap {worst:.2e} (tol 1e-10)"))

    worst = 0.0
    for n in (2, 9):
        for (a1, a2) in ((0, 0), (1, 2), (3, 1)):
            p = EnsembleParams(n, a1, a2)
            q = EnsembleParams(n, a2, a1)
            for xi in np.linspace(0.02, 0.98, 9):
                lhs = exact.largest_cdf(p, float(xi))
                rhs = 1.0 - exact.smallest_cdf(q, 1.0 - float(xi))
                worst = max(worst, abs(lhs - rhs))
    checks.append(_check("edge-duality", worst <= 1e-12, f"max gap {worst:.2e}"))

    mono_ok = True
    for (n, a1, a2) in ((4, 2, 1), (12, 0, 3)):
        p = EnsembleParams(n, a1, a2)
        vals = [exact.smallest_cdf(p, xi) for xi in np.linspace(0.0, 1.0, 60 if fast else 200)]
        diffs = np.diff(vals)
        mono_ok &= bool((diffs >= -1e-12).all()) and min(vals) >= 0.0 and max(vals) <= 1.0
    checks.append(_check("cdf-monotone-in-range", mono_ok, "200-point grids"))

    bd = max(abs(exact.smallest_cdf(EnsembleParams(5, 2, 2), 0.0)),
             abs(1.0 - exact.largest_cdf(EnsembleParams(5, 2, 2), 1.0)))
    checks.append(_check("boundary-values", bd <= 1e-12, f"gap {bd:.1e}"))

    worst = 0.0
    for n in (2, 7, 20):
        for a2 in (0, 2):
            p = EnsembleParams(n, 0, a2)
            mean, std = exact.smallest_moments(p)
            nodes, weights = np.polynomial.legendre.leggauss(
                max(64, (n * (n + a2) + 5) // 2 + 2))
            x = (nodes + 1.0) / 2.0
            w = weights / 2.0
            surv = np.array([1.0 - exact.smallest_cdf(p, float(t)) for t in x])
            mean_q = float(np.sum(w * surv))
            second_q = float(np.sum(w * 2.0 * x * surv))
            std_q = math.sqrt(second_q - mean_q ** 2)
            worst = max(worst, abs(mean_q - mean), abs(std_q - std))
    checks.append(_check("moment-closed-forms", worst <= 1e-8,
                         f"max abs gap {worst:.2e} (tol 1e-8)"))
    return checks


# ---------------------------------------------------------------------------
# convergence suite

_DEFAULT_NS = (25, 50, 100, 200)


def theorem2_sup_errors(alpha1, alpha2, ns=_DEFAULT_NS, grid=None):
    """sup_x |F(x/n^2) - limit| per n, on a 30-point hard-edge grid."""
    if grid is None:
        grid = np.linspace(0.5, 20.0, 30)
    out = {}
    for n in ns:
        p = EnsembleParams(n, alpha1, alpha2)
        sup = 0.0
        for x in grid:
            gap = abs(exact.smallest_cdf(p, float(x) / n ** 2)
                      - hardedge.limit_cdf(alpha1, float(x)))
            sup = max(sup, gap)
        out[n] = sup
    return out


def prop2_sup_residuals(alpha1, alpha2, ns=_DEFAULT_NS, grid=None):
    """sup_x of the residual after removing the first-order correction."""
    if grid is None:
        grid = np.linspace(0.5, 20.0, 30)
    out = {}
    for n in ns:
        p = EnsembleParams(n, alpha1, alpha2)
        sup = 0.0
        for x in grid:
            x = float(x)
            corrected = hardedge.corrected_cdf(p, x, "smallest").value
            sup = max(sup, abs(exact.smallest_cdf(p, x / n ** 2) - corrected))
        out[n] = sup
    return out


def doubling_ratios(by_n):
    ns = sorted(by_n)
    return [by_n[b] / by_n[a] for a, b in zip(ns, ns[1:])]


def lemma3_ratio_pairs(ms=(0, 1, 2, 3), cs=(-1, 0, 2), xs=(0.5, 2.0), n=64):
    """Residual ratios |r(2n)|/|r(n)| for both expansion forms."""
    rows = []
    for m in ms:
        for c in cs:
            for x in xs:
                r1 = hardedge.bessel_expansion_residuals(m, c, n, x)
                r2 = hardedge.bessel_expansion_residuals(m, c, 2 * n, x)
                rows.append((m, c, x,
                             abs(r2[0]) / abs(r1[0]),
                             abs(r2[1]) / abs(r1[1])))
    return rows


def suite_convergence(fast=False):
    checks = []
    pairs = [(a1, a2) for a1 in range(4) for a2 in range(4)]
    if fast:
        pairs = [(0, 0), (0, 2), (1, 1), (2, 0), (3, 3)]
    ns = (25, 50, 100) if fast else _DEFAULT_NS
    ratio_rows = []
    ok = True
    for a1, a2 in pairs:
        ratios = doubling_ratios(theorem2_sup_errors(a1, a2, ns=ns))
        # (0,0) has a vanishing first-order coefficient, so it contracts at
        # the second-order rate instead of halving.
        band = (0.15, 0.4) if (a1, a2) == (0, 0) else (0.3, 0.7)
        good = all(band[0] <= r <= band[1] for r in ratios)
        ok &= good
        ratio_rows.append(f"({a1},{a2}): " + ", ".join(f"{r:.3f}" for r in ratios))
    checks.append(_check("limit-law-convergence-rate", ok, " | ".join(ratio_rows)))

    proven = [(a1, a2) for a1 in range(4) for a2 in range(4)
              if hardedge.correction_is_proven(a1, a2, "smallest")]
    evidence = [(3, 0), (3, 2)]
    if fast:
        proven = [(0, 1), (1, 2), (2, 2)]
    rows = []
    ok = True
    for a1, a2 in proven + evidence:
        ratios = doubling_ratios(prop2_sup_residuals(a1, a2, ns=ns))
        good = all(0.15 <= r <= 0.4 for r in ratios)
        ok &= good
        tag = "conjecture-evidence " if (a1, a2) in evidence else ""
        rows.append(f"{tag}({a1},{a2}): " + ", ".join(f"{r:.3f}" for r in ratios))
    checks.append(_check("first-order-correction-rate", ok, " | ".join(rows)))

    rows = lemma3_ratio_pairs(ms=(0, 1) if fast else (0, 1, 2, 3), n=32 if fast else 64)
    bad = [r for r in rows if not (0.15 <= r[3] <= 0.4 and 0.15 <= r[4] <= 0.4)]
    detail = "; ".join(f"m={m} c={c} x={x}: {r1:.3f}/{r2:.3f}"
                       for m, c, x, r1, r2 in rows[:6])
    checks.append(_check("two-term-expansion-rate", not bad,
                         detail + (f" ... failures: {bad}" if bad else "")))
    return checks


# ---------------------------------------------------------------------------
# Monte Carlo suite

_MC_TUPLES = ((2, 0, 0), (2, 1, 1), (5, 2, 1), (5, 0, 3))


def suite_mc(fast=False):
    checks = []
    n_samples = 20_000 if fast else 100_000
    eps = montecarlo.dkw_epsilon(0.01, n_samples)

    cfg = montecarlo.MCConfig(EnsembleParams(1, 0, 0), n_samples, seed=101)
    small, _ = montecarlo.sample_extremes(cfg)
    d = montecarlo.ks_distance(montecarlo.EmpiricalCDF(small), lambda t: min(max(t, 0.0), 1.0))
    checks.append(_check("uniform-base-case", d < eps, f"KS {d:.4f} < DKW {eps:.4f}"))

    ok = True
    details = []
    for n, a1, a2 in _MC_TUPLES:
        p = EnsembleParams(n, a1, a2)
        cfg = montecarlo.MCConfig(p, n_samples, seed=202 + n + 10 * a1 + 100 * a2, workers=2)
        for cov_name, cov in (("identity", montecarlo.CovarianceSpec.identity()),
                              ("random", montecarlo.CovarianceSpec.random_positive_definite(5))):
            small, large = montecarlo.sample_extremes(cfg, cov)
            ds = montecarlo.ks_distance(montecarlo.EmpiricalCDF(small),
                                        lambda t: exact.smallest_cdf(p, min(max(t, 0.0), 1.0)))
            dl = montecarlo.ks_distance(montecarlo.EmpiricalCDF(large),
                                        lambda t: exact.largest_cdf(p, min(max(t, 0.0), 1.0)))
            good = ds < eps and dl < eps
            ok &= good
            details.append(f"({n},{a1},{a2},{cov_name}): {ds:.4f}/{dl:.4f}")
    checks.append(_check("extreme-vs-exact-ks", ok,
                         f"DKW {eps:.4f}; " + " ".join(details)))

    p = EnsembleParams(3, 1, 2)
    cfg = montecarlo.MCConfig(p, n_samples, seed=77)
    s_id, _ = montecarlo.sample_extremes(cfg)
    s_rand, _ = montecarlo.sample_extremes(cfg, montecarlo.CovarianceSpec.random_positive_definite(9))
    both = np.sort(np.concatenate([s_id, s_rand]))
    e1 = montecarlo.EmpiricalCDF(s_id)
    e2 = montecarlo.EmpiricalCDF(s_rand)
    gap = float(np.max(np.abs(e1.evaluate(both) - e2.evaluate(both))))
    thr = montecarlo.two_sample_ks_threshold(0.01, len(s_id), len(s_rand))
    checks.append(_check("covariance-invariance", gap < thr,
                         f"two-sample KS {gap:.4f} < {thr:.4f}"))

    p = EnsembleParams(4, 0, 2)
    cfg = montecarlo.MCConfig(p, n_samples, seed=31)
    small, _ = montecarlo.sample_extremes(cfg)
    mean, std = exact.smallest_moments(p)
    gap = abs(float(np.mean(small)) - mean)
    budget = 4.0 * std / math.sqrt(n_samples)
    checks.append(_check("mean-closed-form", gap < budget,
                         f"|mean gap| {gap:.2e} < 4 se {budget:.2e}"))
    return checks


SUITES: dict[str, Callable[[bool], list[CheckResult]]] = {
    "identities": suite_identities,
    "cross-method": suite_cross_method,
    "convergence": suite_convergence,
    "mc": suite_mc,
}
