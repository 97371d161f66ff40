"""Closed-form Laplace transform of a Marcum Q / Bessel I / power product.

    In(alpha, beta, c, p, mu1, mu2)
        = int_0^inf exp(-p t) Q_mu1(alpha sqrt t, beta) t^((mu2-1)/2) I_{mu2-1}(c sqrt t) dt

Three cases cover every integer offset n = mu1 - mu2:

* n = 0: a single Marcum Q function;
* n >= 1: the n = 0 value plus a double sum of modified Marcum functions, or
  equivalently a sum of proper integrals over [0, 1] when mu2 > 0;
* n <= -1: the n = 0 value at order mu2 minus a finite double Bessel sum.

alpha and beta enter only through their squares, so both may be real or
purely imaginary (negative signed squares); p_tilde = 2p + alpha^2 must stay
positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedOrderError
from .hyp2var import delta_coeff
from .marcum import SignedSquareArg, marcum_q, marcum_reduced_complement
from .specfun import (
    DEFAULT_CONFIG,
    EvalConfig,
    hyp0f1,
    hyp0f1_reg,
    hyp1f1,
    ln_gamma,
    rgamma,
)

OFFSET_TOL = 1e-9

EQUAL_ORDERS = "equal-orders"
MARCUM = "marcum"
PROPER_INTEGRAL = "proper-integral"
BESSEL_SUM = "bessel-sum"
QUADRATURE = "quadrature-fallback"


@dataclass(frozen=True)
class LaplaceParams:
    """Arguments of the transform; ``a2`` and ``b2`` are signed squares."""

    a2: float
    b2: float
    c: float
    p: float
    mu1: float
    mu2: float

    def __post_init__(self):
        for name in ("a2", "b2"):
            v = getattr(self, name)
            if isinstance(v, SignedSquareArg):
                object.__setattr__(self, name, float(v.s))

    @property
    def p_tilde(self) -> float:
        return 2.0 * self.p + self.a2

    @property
    def offset(self) -> int | None:
        """Integer mu1 - mu2, or None when it is not within OFFSET_TOL of one."""
        d = self.mu1 - self.mu2
        r = round(d)
        return int(r) if abs(d - r) <= OFFSET_TOL else None

    def replace(self, **kw) -> "LaplaceParams":
        fields = dict(a2=self.a2, b2=self.b2, c=self.c, p=self.p, mu1=self.mu1, mu2=self.mu2)
        fields.update(kw)
        return LaplaceParams(**fields)


@dataclass(frozen=True)
class InResult:
    value: float
    path: str
    check: float | None = None


def _validate(params: LaplaceParams) -> None:
    if not params.p > 0:
        raise DomainError(f"p must be positive, got {params.p}")
    if not params.p_tilde > 0:
        raise DomainError(f"p_tilde = 2p + alpha^2 must be positive, got {params.p_tilde}")
    if params.c < 0:
        raise DomainError("c must be non-negative (odd Bessel symmetry is handled by in_dispatch)")
    if params.mu2 <= 0:
        # non-integer: divergent at t = 0; integer: I_{mu2-1} = I_{1-mu2} leaves the closed forms' branch
        raise DomainError(f"closed forms need mu2 > 0, got {params.mu2}")
    if params.c == 0.0 and params.mu2 < 1:
        raise DomainError("I_{mu2-1}(0) diverges for c = 0 and mu2 < 1")


def _vanishes(params: LaplaceParams) -> bool:
    # I_{mu2-1}(0) = 0 unless mu2 = 1
    return params.c == 0.0 and params.mu2 != 1.0


def laplace_bessel_power(mu: float, c: float, p: float) -> float:
    """int_0^inf exp(-p t) t^((mu-1)/2) I_{mu-1}(c sqrt t) dt = (c/2)^(mu-1) p^(-mu) exp(c^2/4p)."""
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if c == 0.0:
        if mu == 1.0:
            return 1.0 / p
        if mu > 1.0:
            return 0.0
        raise DomainError("transform diverges at c = 0 for mu < 1")
    if c < 0:
        raise DomainError("c must be non-negative")
    return math.exp((mu - 1.0) * math.log(0.5 * c) - mu * math.log(p) + c * c / (4.0 * p))


def in_equal_orders(params: LaplaceParams, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """mu1 = mu2 = mu: (1/p) (c/2p)^(mu-1) exp(c^2/4p) Q_mu(alpha c / sqrt(2 p pt), beta sqrt(2p/pt))."""
    _validate(params)
    if _vanishes(params):
        return 0.0
    p, c, mu = params.p, params.c, params.mu2
    pt = params.p_tilde
    if c == 0.0:
        scale = 1.0 / p if mu == 1.0 else 0.0
        if scale == 0.0:
            return 0.0
    else:
        scale = math.exp((mu - 1.0) * math.log(c / (2.0 * p)) + c * c / (4.0 * p) - math.log(p))
    q = marcum_q(mu, params.a2 * c * c / (2.0 * p * pt), 2.0 * p * params.b2 / pt, cfg)
    return scale * q


def _psi2_reduced(mu2: float, k: int, a2: float, b2: float, c: float, pt: float, cfg: EvalConfig) -> float:
    """Inner j-sum of the n >= 1 case for one k (the regularized Psi2 value).

    Each modified Marcum complement [1 - Q_{mu2+k-j}(i c/sqrt pt, i alpha beta/sqrt pt)]
    carries (-alpha^2 beta^2 / 2pt)^(mu2+k-j); together with
    (-alpha^2/pt)^(j-k) (-alpha^2/c)^(-mu2) in front it leaves only real
    factors, which the caller applies.
    """
    w = a2 * b2 / (2.0 * pt)
    z = c * c / (2.0 * pt)
    d = mu2 + k + 1.0
    if w == 0.0:
        # alpha = 0: Psi2(mu2; d, mu2; 0, z) = e^z
        return math.exp(z) * rgamma(d)
    if z == 0.0:
        return rgamma(d) * hyp1f1(mu2, d, w, cfg)
    terms = []
    for j in range(2 * k + 1):
        order = mu2 + k - j
        dj = delta_coeff(j, k + 1, d, -w, w * z)
        terms.append(dj * marcum_reduced_complement(order, -c * c / pt, -a2 * b2 / pt, cfg))
    return math.fsum(terms)


def in_plus_n_marcum(params: LaplaceParams, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """mu1 = mu2 + n, n >= 1, mu2 > 0, through modified Marcum Q functions."""
    _validate(params)
    if _vanishes(params):
        return 0.0
    n = params.offset
    if n is None or n < 1:
        raise DomainError(f"in_plus_n_marcum needs mu1 - mu2 = n >= 1, got {params.mu1 - params.mu2}")
    mu2 = params.mu2
    a2, b2, c = params.a2, params.b2, params.c
    if b2 < 0 and not float(mu2).is_integer():
        raise DomainError("imaginary beta needs an integer mu2 in this case")
    base = in_equal_orders(params.replace(mu1=mu2), cfg)
    if b2 == 0.0:
        return base
    pt = params.p_tilde
    y = 0.5 * b2
    # 2 c^(mu2-1) exp(-b2/2) (b2/2pt)^mu2 sum_k (b2/2)^k Psi2~_k
    inner = math.fsum(y**k * _psi2_reduced(mu2, k, a2, b2, c, pt, cfg) for k in range(n))
    log_front = -y + mu2 * math.log(b2 / (2.0 * pt)) if b2 > 0 else -y
    front = 2.0 * (c ** (mu2 - 1.0)) * math.exp(log_front)
    if b2 < 0:
        front *= (b2 / (2.0 * pt)) ** int(mu2)
    return base + front * inner


def _gauss_legendre_adaptive(f, a: float, b: float, abs_tol: float, order: int = 20, depth: int = 0) -> float:
    x, w = np.polynomial.legendre.leggauss(order)
    x2, w2 = np.polynomial.legendre.leggauss(2 * order)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    coarse = half * float(np.dot(w, f(mid + half * x)))
    fine = half * float(np.dot(w2, f(mid + half * x2)))
    if abs(fine - coarse) <= max(abs_tol, 1e-15 * abs(fine)) or depth >= 30:
        return fine
    return (_gauss_legendre_adaptive(f, a, mid, 0.5 * abs_tol, order, depth + 1)
            + _gauss_legendre_adaptive(f, mid, b, 0.5 * abs_tol, order, depth + 1))


def in_plus_n_quadrature(params: LaplaceParams, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """mu1 = mu2 + n, n >= 1, mu2 > 0, through proper integrals on [0, 1].

    Each integral int_0^1 t^(mu2-1) (1-t)^(j-1) exp(w t) 0F1(;mu2; w z t) dt uses
    adaptive Gauss-Legendre; for mu2 < 1 the substitution t = u^(1/mu2)
    removes the endpoint singularity.
    """
    _validate(params)
    if _vanishes(params):
        return 0.0
    n = params.offset
    if n is None or n < 1:
        raise DomainError(f"in_plus_n_quadrature needs mu1 - mu2 = n >= 1, got {params.mu1 - params.mu2}")
    mu2 = params.mu2
    if not mu2 > 0:
        raise DomainError(f"requires mu2 > 0, got {mu2}")
    a2, b2, c = params.a2, params.b2, params.c
    if b2 < 0:
        raise DomainError("proper-integral route needs real beta")
    base = in_equal_orders(params.replace(mu1=mu2), cfg)
    if b2 == 0.0:
        return base
    pt = params.p_tilde
    w = a2 * b2 / (2.0 * pt)
    wz = a2 * b2 * c * c / (4.0 * pt * pt)
    hyp = np.vectorize(lambda x: hyp0f1(mu2, x, cfg))

    total = []
    for j in range(1, n + 1):
        if mu2 < 1.0:
            def f(u, j=j):
                t = u ** (1.0 / mu2)
                return (1.0 - t) ** (j - 1) * np.exp(w * t) * hyp(wz * t) / mu2
        else:
            def f(t, j=j):
                return t ** (mu2 - 1.0) * (1.0 - t) ** (j - 1) * np.exp(w * t) * hyp(wz * t)
        integral = _gauss_legendre_adaptive(f, 0.0, 1.0, cfg.quad_abs_tol)
        total.append((0.5 * b2) ** j / math.factorial(j - 1) * integral)

    lg, sg = ln_gamma(mu2)
    # (2/pt) (b2 c / 2pt)^(mu2-1) exp(-b2/2 + c^2/2pt) / Gamma(mu2)
    if c == 0.0:
        if mu2 != 1.0:
            return base
        log_front = math.log(2.0 / pt) - 0.5 * b2 - lg
    else:
        log_front = math.log(2.0 / pt) + (mu2 - 1.0) * math.log(b2 * c / (2.0 * pt)) - 0.5 * b2 + c * c / (2.0 * pt) - lg
    return base + sg * math.exp(log_front) * math.fsum(total)


def _bessel_pair(nu: float, y: float, kk: float) -> float:
    """(b2/2)^nu 0F1~(;nu+1; kk b2) with y = b2/2, finite as b2 -> 0 for integer nu < 0."""
    if float(nu).is_integer() and nu < 0:
        m = int(-nu)
        # 0F1~(1-m; x) = x^m 0F1~(1+m; x)
        return (2.0 * kk) ** m * hyp0f1_reg(1.0 + m, 2.0 * kk * y)
    if y == 0.0:
        if nu > 0:
            return 0.0
        if nu == 0:
            return 1.0
        raise DomainError(f"term diverges at beta = 0 for order {nu}")
    return y**nu * hyp0f1_reg(nu + 1.0, 2.0 * kk * y)


def in_minus_n(params: LaplaceParams, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """mu1 = mu2 - m, m >= 1: the equal-order value at mu2 minus a finite Bessel sum.

    The Bessel terms (beta/c)^(j+k) (pt/alpha)^k (-alpha)^j (beta/alpha)^mu1 I_{mu1+k+j}(c alpha beta/pt)
    are rewritten through the regularized 0F1 so that only alpha^2 and
    beta^2 appear; alpha = 0 is then an ordinary point.
    """
    _validate(params)
    if _vanishes(params):
        return 0.0
    n = params.offset
    if n is None or n > -1:
        raise DomainError(f"in_minus_n needs mu1 - mu2 = -m <= -1, got {params.mu1 - params.mu2}")
    m = -n
    mu1, mu2 = params.mu1, params.mu2
    a2, b2, c, p = params.a2, params.b2, params.c, params.p
    if b2 < 0 and not float(mu1).is_integer():
        raise DomainError("imaginary beta needs an integer mu1 in this case")
    pt = params.p_tilde
    base = in_equal_orders(params.replace(mu1=mu2), cfg)
    y = 0.5 * b2
    kk = c * c * a2 / (4.0 * pt * pt)  # 0F1~ argument is kk * b2 = 2 kk y
    terms = []
    for k in range(m):
        coef = 1.0
        for j in range(m - k):
            if j:
                coef *= (-m + k + j) / j
            nu = mu1 + k + j
            terms.append(coef * (-a2 / pt) ** j * _bessel_pair(nu, y, kk))
    front_log = math.log(2.0) - mu2 * math.log(pt) + (0.5 * c * c - p * b2) / pt
    if c != 0.0:
        front_log += (mu2 - 1.0) * math.log(c)
    front = math.exp(front_log)
    return base - front * math.fsum(terms)


def in_dispatch_result(params: LaplaceParams, cfg: EvalConfig = DEFAULT_CONFIG) -> InResult:
    """Route to the applicable closed form and report which one produced the value."""
    if params.c < 0:
        nu = params.mu2 - 1.0
        if not float(nu).is_integer():
            raise DomainError("negative c needs an integer Bessel order mu2 - 1")
        res = in_dispatch_result(params.replace(c=-params.c), cfg)
        sign = -1.0 if int(nu) % 2 else 1.0
        return InResult(sign * res.value, res.path, None if res.check is None else sign * res.check)
    n = params.offset
    if n is None:
        raise UnsupportedOrderError(
            f"non-integer order offset mu1 - mu2 = {params.mu1 - params.mu2:.12g}; closed forms exist only "
            "for integer offsets (the integer neighbours bound the value)"
        )
    if n == 0:
        return InResult(in_equal_orders(params, cfg), EQUAL_ORDERS)
    if n < 0:
        return InResult(in_minus_n(params, cfg), BESSEL_SUM)
    value = in_plus_n_marcum(params, cfg)
    check = None
    if cfg.paranoid and params.b2 >= 0:
        check = in_plus_n_quadrature(params, cfg)
    return InResult(value, MARCUM, check)


def in_dispatch(params: LaplaceParams, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    return in_dispatch_result(params, cfg).value


def in_swapped_corollary3(a2: float, b2: float, c: float, p: float, mu1: int, mu2: int,
                          cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Transform of Q_mu1(alpha, beta sqrt t) t^((mu2-1)/2) I_{mu2-1}(c sqrt t) for integer orders.

    Reflection turns Q_mu1(alpha, beta sqrt t) into 1 - Q_{1-mu1}(beta sqrt t, alpha).
    """
    if not (float(mu1).is_integer() and float(mu2).is_integer()):
        raise DomainError("swapped-argument form needs integer mu1 and mu2")
    swapped = LaplaceParams(a2=b2, b2=a2, c=c, p=p, mu1=1.0 - mu1, mu2=float(mu2))
    return laplace_bessel_power(mu2, c, p) - in_dispatch(swapped, cfg)
