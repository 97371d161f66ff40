"""Scalar special-function kernels.

Gamma family, Pochhammer symbols, modified Bessel I of real order, 0F1, 1F1,
generalized Laguerre polynomials and the regularized incomplete gamma pair.
Everything above this layer is built from these routines.

Series here stop once two consecutive terms fall below ``rel_tol`` times the
magnitude of the partial sum. A single small term is not trusted because the
two-variable series built on top of these can have small interior terms.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "EvalConfig",
    "DEFAULT_CONFIG",
    "ln_gamma",
    "rgamma",
    "gamma_ratio",
    "pochhammer",
    "bessel_i",
    "hyp0f1",
    "hyp0f1_reg",
    "hyp1f1",
    "laguerre",
    "upper_gamma_reg",
    "gamma_pq",
    "gamma_pq_array",
    "is_nonpositive_integer",
]

_FPMIN = 1e-300


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances and caps shared by every series and quadrature."""

    rel_tol: float = 1e-13
    max_terms: int = 10_000
    quad_abs_tol: float = 1e-12
    # cross-validate the Marcum route of the Laplace transform against the
    # proper-integral route whenever both apply
    paranoid: bool = False

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-3:
            raise ValueError(f"rel_tol must lie in (0, 1e-3), got {self.rel_tol}")
        if self.max_terms < 64:
            raise ValueError(f"max_terms must be >= 64, got {self.max_terms}")
        if not self.quad_abs_tol > 0.0:
            raise ValueError(f"quad_abs_tol must be positive, got {self.quad_abs_tol}")

    @classmethod
    def from_env(cls, **overrides) -> "EvalConfig":
        """Default config with ``HUMBERTQ_MAX_TERMS`` applied if set."""
        raw = os.environ.get("HUMBERTQ_MAX_TERMS")
        if raw is not None and "max_terms" not in overrides:
            overrides["max_terms"] = int(raw)
        return cls(**overrides)

    def with_(self, **changes) -> "EvalConfig":
        return replace(self, **changes)


DEFAULT_CONFIG = EvalConfig()


def is_nonpositive_integer(x: float, tol: float = 0.0) -> bool:
    r = round(x)
    return r <= 0 and abs(x - r) <= tol


def ln_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Negative arguments go through the reflection formula
    Gamma(x) Gamma(1-x) = pi / sin(pi x).
    """
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    if x > 0:
        return math.lgamma(x), 1
    s = math.sin(math.pi * x)
    val = math.log(math.pi / abs(s)) - math.lgamma(1.0 - x)
    # Gamma(1-x) > 0 here, so the sign is that of sin(pi x)
    return val, (1 if s > 0 else -1)


def rgamma(x: float) -> float:
    """Reciprocal gamma 1/Gamma(x); zero at the poles."""
    if is_nonpositive_integer(x):
        return 0.0
    val, sign = ln_gamma(x)
    return sign * math.exp(-val)


def gamma_ratio(num: float, den: float) -> float:
    """Gamma(num) / Gamma(den) computed in log space."""
    ln_n, s_n = ln_gamma(num)
    if is_nonpositive_integer(den):
        return 0.0
    ln_d, s_d = ln_gamma(den)
    return s_n * s_d * math.exp(ln_n - ln_d)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1."""
    if k < 0:
        raise DomainError(f"Pochhammer index must be >= 0, got {k}")
    out = 1.0
    for i in range(k):
        out *= a + i
        if out == 0.0:
            break
    return out


def _log_power_term(nu: float, half_x: float) -> tuple[float, int]:
    """log|(x/2)^nu / Gamma(nu+1)| and its sign (0 when the term vanishes)."""
    if is_nonpositive_integer(nu + 1.0):
        return -math.inf, 0
    lg, sg = ln_gamma(nu + 1.0)
    return nu * math.log(half_x) - lg, sg


def bessel_i(nu: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Modified Bessel function of the first kind of real order, x >= 0.

    Plain power series sum_k (x/2)^(2k+nu) / (Gamma(nu+k+1) k!). Integer
    negative orders are mapped through I_{-n} = I_n.
    """
    if x < 0:
        raise DomainError(f"bessel_i needs x >= 0, got {x}")
    if nu < 0 and float(nu).is_integer():
        nu = -nu
    if x == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0:
            return 0.0
        raise DomainError(f"I_nu(0) is infinite for negative non-integer nu={nu}")

    half = 0.5 * x
    q = half * half
    # leading term in log space, the rest as ratios to it
    ln_t, sign = _log_power_term(nu, half)
    term = 1.0
    total = 1.0
    small = 0
    for k in range(1, cfg.max_terms):
        term *= q / (k * (nu + k))
        total += term
        if abs(term) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                break
        else:
            small = 0
    else:
        raise ConvergenceError(f"bessel_i({nu}, {x}) did not converge")
    if total == 0.0:
        return 0.0
    return sign * math.copysign(math.exp(ln_t + math.log(abs(total))), total)


def hyp0f1(q: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Confluent limit function 0F1(;q;z).

    For z > 0 this is Gamma(q) z^((1-q)/2) I_{q-1}(2 sqrt z). Negative z is
    summed directly from the power series.
    """
    if is_nonpositive_integer(q):
        raise PoleError(f"0F1 has a pole at q={q}")
    if z == 0.0:
        return 1.0
    if z > 0:
        lg, sg = ln_gamma(q)
        half_order = 0.5 * (1.0 - q)
        return sg * math.exp(lg + half_order * math.log(z)) * bessel_i(q - 1.0, 2.0 * math.sqrt(z), cfg)
    term = 1.0
    total = 1.0
    small = 0
    for k in range(1, cfg.max_terms):
        term *= z / ((q + k - 1) * k)
        total += term
        if abs(term) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"hyp0f1({q}, {z}) did not converge", best=total)


def _hyp1f1_series(s: float, q: float, w: float, cfg: EvalConfig) -> float:
    term = 1.0
    total = 1.0
    small = 0
    for k in range(1, cfg.max_terms):
        term *= (s + k - 1) * w / ((q + k - 1) * k)
        total += term
        if term == 0.0:
            return total
        if abs(term) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"hyp1f1({s}, {q}, {w}) did not converge", best=total)


def hyp1f1(s: float, q: float, w: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Kummer confluent hypergeometric function 1F1(s;q;w).

    Negative arguments use the Kummer transformation
    1F1(s;q;w) = e^w 1F1(q-s;q;-w); the direct series there alternates with
    terms of size e^|w| and loses that much relative accuracy. Polynomial
    cases (s a nonpositive integer) keep the terminating sum.
    """
    if is_nonpositive_integer(q):
        raise PoleError(f"1F1 has a pole at q={q}")
    if w < 0 and not is_nonpositive_integer(s):
        return math.exp(w) * _hyp1f1_series(q - s, q, -w, cfg)
    return _hyp1f1_series(s, q, w, cfg)


def laguerre(k: int, a: float, x: float) -> float:
    """Generalized Laguerre polynomial L_k^(a)(x) by three-term recurrence."""
    if k < 0:
        raise DomainError(f"Laguerre degree must be >= 0, got {k}")
    prev, cur = 1.0, 1.0 + a - x
    if k == 0:
        return prev
    for n in range(1, k):
        prev, cur = cur, ((2 * n + 1 + a - x) * cur - (n + a) * prev) / (n + 1)
    return cur


def gamma_pq(a: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Regularized incomplete gamma pair (P(a,x), Q(a,x)) for a > 0, x >= 0.

    The series is used below x = a+1 and the Lentz continued fraction above;
    the function computed directly keeps full relative accuracy.
    """
    if not a > 0:
        raise DomainError(f"incomplete gamma needs a > 0, got {a}")
    if x < 0:
        raise DomainError(f"incomplete gamma needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0, 1.0
    if x < a + 1.0:
        term = 1.0 / a
        total = term
        small = 0
        for n in range(1, cfg.max_terms):
            term *= x / (a + n)
            total += term
            if term <= cfg.rel_tol * total:
                small += 1
                if small == 2:
                    break
            else:
                small = 0
        else:
            raise ConvergenceError(f"gamma series ({a}, {x}) did not converge", best=total)
        p = math.exp(-x + a * math.log(x) - math.lgamma(a)) * total
        return p, 1.0 - p
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, cfg.max_terms):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= cfg.rel_tol:
            break
    else:
        raise ConvergenceError(f"gamma continued fraction ({a}, {x}) did not converge")
    q = math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    return 1.0 - q, q


def upper_gamma_reg(a: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Q(a,x) = Gamma(a,x)/Gamma(a)."""
    return gamma_pq(a, x, cfg)[1]


def gamma_pq_array(a, x, rel_tol: float = 1e-15, max_iter: int = 2000):
    """Vectorized (P, Q) over broadcast arrays ``a > 0``, ``x >= 0``.

    Same split as :func:`gamma_pq`; every element iterates until its own
    increment is negligible.
    """
    a, x = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(x, dtype=float))
    p = np.zeros(a.shape)
    q = np.ones(a.shape)
    pos = x > 0
    ser = pos & (x < a + 1.0)
    cf = pos & ~ser

    if ser.any():
        aa, xx = a[ser], x[ser]
        term = 1.0 / aa
        total = term.copy()
        active = np.ones(aa.shape, dtype=bool)
        for n in range(1, max_iter):
            term = np.where(active, term * xx / (aa + n), 0.0)
            total += term
            active &= term > rel_tol * total
            if not active.any():
                break
        pv = np.exp(-xx + aa * np.log(xx) - gammaln(aa)) * total
        p[ser] = pv
        q[ser] = 1.0 - pv

    if cf.any():
        aa, xx = a[cf], x[cf]
        b = xx + 1.0 - aa
        c = np.full(aa.shape, 1.0 / _FPMIN)
        d = 1.0 / b
        h = d.copy()
        active = np.ones(aa.shape, dtype=bool)
        for i in range(1, max_iter):
            an = -i * (i - aa)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
            c = b + an / c
            c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
            d = 1.0 / d
            delta = np.where(active, d * c, 1.0)
            h *= delta
            active &= np.abs(delta - 1.0) > rel_tol
            if not active.any():
                break
        qv = np.exp(-xx + aa * np.log(xx) - gammaln(aa)) * h
        q[cf] = qv
        p[cf] = 1.0 - qv
    return p, q


def hyp0f1_reg(q: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Regularized 0F1(;q;z)/Gamma(q), entire in q."""
    if z == 0.0:
        return rgamma(q)
    if z > 0:
        return math.exp(0.5 * (1.0 - q) * math.log(z)) * bessel_i(q - 1.0, 2.0 * math.sqrt(z), cfg)
    # negative z: sum_m z^m / (m! Gamma(q+m))
    total = 0.0
    small = 0
    fact = 1.0
    for m in range(cfg.max_terms):
        if m:
            fact *= z / m
        term = fact * rgamma(q + m)
        total += term
        if m > 0 and abs(term) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"hyp0f1_reg({q}, {z}) did not converge", best=total)
