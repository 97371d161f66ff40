"""Independent reference engines.

Adaptive Gauss-Kronrod quadrature of the defining integrals (the Laplace
transform and the Marcum Q integral) and a Monte-Carlo sampler of kappa-mu
power variates. Nothing here imports :mod:`humbertq.laplace`; the Bessel
factors come from scipy so the quadrature does not share code with the
series kernels it is used to check.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, ive

from .errors import ConvergenceError, DomainError
from .marcum import marcum_q_array
from .specfun import DEFAULT_CONFIG, EvalConfig

# Kronrod 15 / Gauss 7 nodes and weights on [-1, 1]
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
_WG = np.zeros(15)
_WG[1::2] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]

QUAD_REL_TOL = 1e-11
MAX_PANELS = 4000


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_err_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


def _panel(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = f(mid + half * _XK)
    k = half * float(np.dot(_WK, fx))
    g = half * float(np.dot(_WG, fx))
    return k, abs(k - g)


def adaptive_gk15(f, a: float, b: float, abs_tol: float = 1e-12, rel_tol: float = QUAD_REL_TOL,
                  breakpoints=(), max_panels: int = MAX_PANELS) -> QuadResult:
    """Globally adaptive 15-point Gauss-Kronrod quadrature of a vectorized ``f``.

    The panel with the largest error estimate is bisected until the summed
    estimate meets ``max(abs_tol, rel_tol * |value|)``.
    """
    edges = sorted({a, b, *[x for x in breakpoints if a < x < b]})
    heap = []
    total = 0.0
    err = 0.0
    evals = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _panel(f, lo, hi)
        evals += 15
        total += v
        err += e
        heapq.heappush(heap, (-e, lo, hi, v))
    while err > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= max_panels:
            raise ConvergenceError(
                f"quadrature tolerance not reached: value={total!r}, error estimate={err!r}",
                best=QuadResult(total, err, evals),
            )
        neg_e, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _panel(f, lo, mid)
        v2, e2 = _panel(f, mid, hi)
        evals += 30
        total += v1 + v2 - v
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    # re-add to shed accumulated rounding from the running updates
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return QuadResult(total, err, evals)


def _gaussian_cutoff(p: float, c: float, power: float, log_scale: float) -> float:
    """U with exp(-p U^2 + c U) U^power below 1e-18 relative to exp(log_scale)."""
    peak = max(c, 0.0) / (2.0 * p)
    target = log_scale - math.log(1e18) - 10.0
    u = peak + 1.0
    for _ in range(200):
        lhs = -p * u * u + c * u + power * math.log(u)
        if lhs < target:
            return u
        u = u * 1.25 + 0.5
    return u


def quad_in(params, cfg: EvalConfig = DEFAULT_CONFIG) -> QuadResult:
    """Quadrature of 2 int_0^inf exp(-p t^2) t^mu2 Q_mu1(alpha t, beta) I_{mu2-1}(c t) dt.

    Real arguments only. The Marcum factor is evaluated by the vectorized
    series of :mod:`humbertq.marcum`.
    """
    a2, b2, c, p = float(params.a2), float(params.b2), float(params.c), float(params.p)
    mu1, mu2 = float(params.mu1), float(params.mu2)
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if a2 < 0 or b2 < 0:
        raise DomainError("quad_in handles real arguments only")
    if c < 0:
        raise DomainError("quad_in needs c >= 0")
    nu = mu2 - 1.0

    def integrand(t):
        q = marcum_q_array(mu1, a2 * t * t, b2)
        with np.errstate(over="ignore", invalid="ignore"):
            val = 2.0 * np.exp(-p * t * t + c * t + mu2 * np.log(t)) * ive(nu, c * t) * q
        return np.where(np.isfinite(val), val, 0.0)

    # rough magnitude from the beta = 0 transform, used to place the cutoff
    if c > 0:
        log_scale = (mu2 - 1.0) * math.log(0.5 * c) - mu2 * math.log(p) + c * c / (4.0 * p)
    else:
        log_scale = -mu2 * math.log(p)
    upper = _gaussian_cutoff(p, c, mu2 + 0.5, log_scale)
    peak = c / (2.0 * p)
    width = 1.0 / math.sqrt(2.0 * p)
    breaks = [x for x in (peak - 3 * width, peak - width, peak, peak + width, peak + 3 * width) if 0 < x < upper]
    return adaptive_gk15(integrand, 0.0, upper, abs_tol=cfg.quad_abs_tol, breakpoints=breaks)


def quad_marcum(M: float, a2: float, b2: float, cfg: EvalConfig = DEFAULT_CONFIG) -> QuadResult:
    """Quadrature of alpha^(1-M) int_beta^inf x^M exp(-(alpha^2+x^2)/2) I_{M-1}(alpha x) dx."""
    if not M > 0:
        raise DomainError(f"quad_marcum needs M > 0, got {M}")
    if a2 < 0 or b2 < 0:
        raise DomainError("quad_marcum handles real arguments only")
    alpha = math.sqrt(a2)
    beta = math.sqrt(b2)
    nu = M - 1.0

    if alpha == 0.0:
        lg = gammaln(M)

        def integrand(x):
            with np.errstate(divide="ignore"):
                return np.exp((2 * M - 1) * np.log(x) - 0.5 * x * x - nu * math.log(2.0) - lg)
    else:
        def integrand(x):
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.exp(M * np.log(x) - nu * math.log(alpha) - 0.5 * (x - alpha) ** 2) * ive(nu, alpha * x)
            return np.where(np.isfinite(val), val, 0.0)

    upper = max(alpha, beta, math.sqrt(2.0 * M)) + 14.0
    if beta >= upper:
        return QuadResult(0.0, 0.0, 0)
    breaks = [x for x in (alpha - 2, alpha, alpha + 2) if beta < x < upper]
    return adaptive_gk15(integrand, beta, upper, abs_tol=cfg.quad_abs_tol, breakpoints=breaks)


def sample_kappa_mu(params, n_samples: int, seed: int, chunk: int = 250_000) -> np.ndarray:
    """Draw kappa-mu power variates from 2 mu Gaussian components.

    Each variate is Omega / (2 mu (1 + kappa)) * sum_i (g_i + m_i)^2 with g_i
    standard normal and sum_i m_i^2 = 2 kappa mu; the whole mean is placed on
    the first component. Integer mu only.
    """
    kappa, mu, omega = float(params.kappa), float(params.mu), float(params.omega)
    if not float(mu).is_integer() or mu < 1:
        raise DomainError(f"Monte-Carlo sampling needs a positive integer mu, got {mu}")
    if kappa < 0 or omega <= 0:
        raise DomainError("need kappa >= 0 and omega > 0")
    dims = 2 * int(mu)
    shift = math.sqrt(2.0 * kappa * mu)
    scale = omega / (2.0 * mu * (1.0 + kappa))
    rng = np.random.default_rng(seed)
    out = np.empty(n_samples)
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        g = rng.standard_normal((m, dims))
        g[:, 0] += shift
        out[done:done + m] = scale * np.einsum("ij,ij->i", g, g)
        done += m
    return out
