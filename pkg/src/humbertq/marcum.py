"""Generalized Marcum Q function of real order.

Arguments are passed as signed squares: ``a2 = alpha**2`` and ``b2 = beta**2``,
where a negative value stands for a purely imaginary argument. All formulas
below depend on the arguments only through alpha^2/2 and beta^2/2, so no
complex arithmetic is ever needed.

Evaluation routes:

* real arguments, M > 0: Poisson-weighted incomplete gamma series
  Q_M = sum_k e^{-x} x^k / k! Q(M+k, y), x = a2/2, y = b2/2, with the
  complement summed separately so both Q and 1-Q keep relative accuracy;
* integer M <= 0: reflection Q_M(a, b) = 1 - Q_{1-M}(b, a);
* imaginary arguments: the Laguerre series
  1 - Q_M = (y)^M e^{-x} sum_k (-1)^k L_k^{(M-1)}(x) y^k / Gamma(M+k+1).

The factor y^M is complex when beta is imaginary and M is not an integer. The
closed forms elsewhere in the package always multiply it by a matching
power, so they use the *reduced complement* (1 - Q_M) / y^M directly
(:func:`marcum_reduced_complement`), which is real for every real M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError
from .hyp2var import delta_coeff, phi3, phi3_reg_series
from .specfun import (
    DEFAULT_CONFIG,
    EvalConfig,
    gamma_pq_array,
    hyp0f1_reg,
    hyp1f1,
    rgamma,
)

MODIFIED_MAX_TERMS = 20_000


@dataclass(frozen=True)
class SignedSquareArg:
    """Argument alpha encoded by its signed square ``s = alpha**2``.

    ``s >= 0`` means real alpha = sqrt(s); ``s < 0`` means alpha = i sqrt(-s).
    """

    s: float

    @classmethod
    def real(cls, x: float) -> "SignedSquareArg":
        return cls(x * x)

    @classmethod
    def imaginary(cls, y: float) -> "SignedSquareArg":
        return cls(-y * y)

    @property
    def is_real(self) -> bool:
        return self.s >= 0

    def __float__(self) -> float:
        return float(self.s)


def _sq(v) -> float:
    return float(v.s) if isinstance(v, SignedSquareArg) else float(v)


def _is_int(m: float) -> bool:
    return float(m).is_integer()


# ---------------------------------------------------------------------------
# real arguments


def _poisson_window(x: np.ndarray) -> tuple[int, int]:
    xmin = float(np.min(x))
    xmax = float(np.max(x))
    lo = max(0, int(math.floor(xmin - 12.0 * math.sqrt(xmin) - 5.0)))
    hi = int(math.ceil(xmax + 12.0 * math.sqrt(xmax) + 40.0))
    return lo, hi


def _marcum_pq_real(M: float, x, y):
    """(1 - Q_M, Q_M) for M > 0 and half-squares x = a2/2, y = b2/2 >= 0 (arrays)."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    x = x.ravel()
    y = y.ravel()
    lo, hi = _poisson_window(x)
    k = np.arange(lo, hi + 1, dtype=float)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = -x[None, :] + k * np.log(x[None, :]) - gammaln(k + 1.0)
    logw = np.where(x[None, :] == 0.0, np.where(k == 0.0, 0.0, -np.inf), logw)
    w = np.exp(logw)
    p_k, q_k = gamma_pq_array(M + k, y[None, :])
    q_sum = np.sum(w * q_k, axis=0)
    p_sum = np.sum(w * p_k, axis=0)
    q = np.where(q_sum < 0.5, q_sum, 1.0 - p_sum)
    p = np.where(p_sum < 0.5, p_sum, 1.0 - q_sum)
    return np.clip(p, 0.0, 1.0).reshape(shape), np.clip(q, 0.0, 1.0).reshape(shape)


def marcum_q_array(M: float, a2, b2, complement: bool = False):
    """Vectorized Q_M (or 1 - Q_M) for real arguments given as squares.

    M > 0, or an integer M <= 0 (through reflection).
    """
    a2 = np.asarray(a2, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    if np.any(a2 < 0) or np.any(b2 < 0):
        raise DomainError("marcum_q_array handles real arguments only")
    if M > 0:
        p, q = _marcum_pq_real(M, 0.5 * a2, 0.5 * b2)
    elif _is_int(M):
        # Q_M(a, b) = 1 - Q_{1-M}(b, a)
        q, p = _marcum_pq_real(1.0 - M, 0.5 * b2, 0.5 * a2)
    else:
        raise DomainError(f"non-integer order M={M} <= 0 is not supported for real arguments")
    return p if complement else q


# ---------------------------------------------------------------------------
# reduced complement (1 - Q_M) / (b2/2)^M, real for every real M


def _reduced_laguerre(M: float, a2: float, b2: float, cfg: EvalConfig) -> float:
    x = 0.5 * a2
    y = 0.5 * b2
    alpha = M - 1.0
    l_prev, l_cur = 0.0, 1.0  # L_{-1} (unused), L_0
    ypow = 1.0
    total = 0.0
    small = 0
    cap = max(cfg.max_terms, MODIFIED_MAX_TERMS)
    # at integer M <= -1 the first -M terms sit on 1/Gamma poles
    first_live = int(round(-M)) if _is_int(M) and M < 0 else 0
    for k in range(cap):
        if k == 1:
            l_prev, l_cur = l_cur, 1.0 + alpha - x
        elif k > 1:
            l_prev, l_cur = l_cur, ((2 * k - 1 + alpha - x) * l_cur - (k - 1 + alpha) * l_prev) / k
        if k:
            ypow *= -y
        term = l_cur * ypow * rgamma(M + k + 1.0)
        total += term
        if not math.isfinite(total):
            raise ConvergenceError(f"Laguerre series overflowed at M={M}, a2={a2}, b2={b2}")
        if k > first_live and abs(term) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                return math.exp(-x) * total
        elif k > 0:
            small = 0
    raise ConvergenceError(f"Laguerre series for Marcum Q did not converge (M={M})", best=math.exp(-x) * total)


def _reduced_phi3(M: float, a2: float, b2: float, cfg: EvalConfig) -> float:
    x = 0.5 * a2
    y = 0.5 * b2
    return math.exp(-x - y) * phi3_reg_series(1.0, M + 1.0, y, x * y, cfg)


def marcum_reduced_complement(M: float, a2, b2, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """(1 - Q_M(alpha, beta)) / (beta^2/2)^M for any real M and signed squares.

    Real non-negative squares use the positive-term form
    e^{-(x+y)} Phi3(1; M+1; y, xy) / Gamma(M+1); any imaginary argument goes
    through the Laguerre series.
    """
    a2 = _sq(a2)
    b2 = _sq(b2)
    if a2 >= 0 and b2 >= 0:
        return _reduced_phi3(M, a2, b2, cfg)
    return _reduced_laguerre(M, a2, b2, cfg)


def _half_power(b2: float, M: float) -> float:
    """(b2/2)^M for signed b2; real only when b2 >= 0 or M is an integer."""
    y = 0.5 * b2
    if y >= 0:
        return y**M if y > 0 else (1.0 if M == 0 else 0.0)
    if not _is_int(M):
        raise DomainError(
            f"Q_M with imaginary beta and non-integer M={M} is complex-valued; "
            "use marcum_reduced_complement for the real reduced form"
        )
    return y ** int(M)


# ---------------------------------------------------------------------------
# public scalar API


def marcum_q(M: float, a2, b2, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Generalized Marcum Q_M(alpha, beta) from signed squares of the arguments."""
    a2 = _sq(a2)
    b2 = _sq(b2)
    if M <= 0:
        if _is_int(M):
            return 1.0 - marcum_q(1.0 - M, b2, a2, cfg)
        raise DomainError(f"non-integer order M={M} <= 0 is not supported")
    if a2 >= 0 and b2 >= 0:
        return float(_marcum_pq_real(M, 0.5 * a2, 0.5 * b2)[1])
    return 1.0 - _half_power(b2, M) * _reduced_laguerre(M, a2, b2, cfg)


def marcum_p(M: float, a2, b2, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """1 - Q_M(alpha, beta) with full relative accuracy when it is small."""
    a2 = _sq(a2)
    b2 = _sq(b2)
    if M <= 0:
        if _is_int(M):
            return marcum_q(1.0 - M, b2, a2, cfg)
        raise DomainError(f"non-integer order M={M} <= 0 is not supported")
    if a2 >= 0 and b2 >= 0:
        return float(_marcum_pq_real(M, 0.5 * a2, 0.5 * b2)[0])
    return _half_power(b2, M) * _reduced_laguerre(M, a2, b2, cfg)


def marcum_recurrence_rhs(M: float, n: int, a2, b2, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Q_{M+n} from Q_M plus the finite Bessel correction.

    (beta/alpha)^(M+k) I_{M+k}(alpha beta) is rewritten as
    (beta^2/2)^(M+k) 0F1(;M+k+1; alpha^2 beta^2/4) / Gamma(M+k+1), so the sum
    is evaluated from the signed squares alone and alpha = 0 needs no special
    case.
    """
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    a2 = _sq(a2)
    b2 = _sq(b2)
    base = marcum_q(M, a2, b2, cfg)
    if b2 == 0.0:
        return base
    prod = 0.25 * a2 * b2
    terms = [_half_power(b2, M + k) * hyp0f1_reg(M + k + 1.0, prod, cfg) for k in range(n)]
    return base + math.exp(-0.5 * (a2 + b2)) * math.fsum(terms)


def marcum_phi3_M_lt_2(M: float, a2: float, b2: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """(a2/2)^(1-M) e^{-(a2+b2)/2} Phi3(1; 2-M; a2/2, a2 b2/4) / Gamma(2-M), M < 2.

    Equals Q_M(alpha, beta) for integer M. For non-integer M it equals
    1 - Q_{1-M}(beta, alpha) instead.
    """
    if not M < 2:
        raise DomainError(f"requires M < 2, got {M}")
    if a2 <= 0 or b2 < 0:
        raise DomainError("requires a2 > 0 and b2 >= 0")
    x = 0.5 * a2
    return math.exp((1.0 - M) * math.log(x) - x - 0.5 * b2) * phi3(1.0, 2.0 - M, x, x * 0.5 * b2, cfg) * rgamma(2.0 - M)


def one_minus_q_lemma2(M: float, a2: float, b2: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """1 - Q_M = (b2/2)^M e^{-(a2+b2)/2} Phi3(1; M+1; b2/2, a2 b2/4) / Gamma(M+1), M > -1."""
    if not M > -1:
        raise DomainError(f"requires M > -1, got {M}")
    if a2 < 0 or b2 < 0:
        raise DomainError("requires real arguments")
    if b2 == 0.0:
        return 0.0 if M > 0 else (1.0 if M == 0 else math.inf)
    y = 0.5 * b2
    return math.exp(M * math.log(y) - 0.5 * (a2 + b2)) * phi3(1.0, M + 1.0, y, 0.25 * a2 * b2, cfg) * rgamma(M + 1.0)


def phi3_via_marcum(b: int, g: float, t: float, v: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Phi3(b; g; t, v) for integer b >= 1 as a finite sum of Marcum complements.

    Gamma(g) e^{v/t + t} sum_{j=0}^{2(b-1)} delta_j(b, g, t, v) t^{1-g+j} [1 - Q_{g-1-j}(sqrt(2v/t), sqrt(2t))]

    Orders g-1-j <= 0 use the reduced complement; t^{1-g+j} cancels its
    (beta^2/2)^{g-1-j} factor exactly.
    """
    if b < 1 or not float(b).is_integer():
        raise DomainError(f"b must be a positive integer, got {b}")
    if not (g > 0 and t > 0 and v >= 0):
        raise DomainError("requires g > 0, t > 0, v >= 0")
    if v == 0.0:
        return hyp1f1(b, g, t, cfg)
    a2 = 2.0 * v / t
    b2 = 2.0 * t
    terms = []
    for j in range(2 * (b - 1) + 1):
        order = g - 1.0 - j
        if order > 0:
            reduced = marcum_p(order, a2, b2, cfg) * t ** (-order)
        else:
            reduced = marcum_reduced_complement(order, a2, b2, cfg)
        terms.append(delta_coeff(j, b, g, t, v) * reduced)
    lg = math.lgamma(g)
    return math.exp(lg + v / t + t) * math.fsum(terms)
