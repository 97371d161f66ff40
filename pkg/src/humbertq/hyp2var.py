"""Humbert confluent hypergeometric functions of two variables.

    Phi3(b; g; w, z)      = sum_{k,l} (b)_k / ((g)_{k+l} k! l!) w^k z^l
    Psi2(a; d, d2; w, z)  = sum_{k,l} (a)_{k+l} / ((d)_k (d2)_l k! l!) w^k z^l

Both series converge absolutely, so they are summed along anti-diagonals
k + l = s; each diagonal contributes one scalar to the stop rule. The
regularized variants divide by Gamma(g) (resp. Gamma(d)) and stay finite when
that parameter is a nonpositive integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, PoleError
from .specfun import (
    DEFAULT_CONFIG,
    EvalConfig,
    bessel_i,
    is_nonpositive_integer,
    ln_gamma,
    pochhammer,
    rgamma,
)

# parameters closer than this to a pole use the finite-sum limit forms
POLE_TOL = 1e-8


@dataclass(frozen=True)
class Phi3Args:
    b: float
    g: float
    w: float
    z: float


@dataclass(frozen=True)
class Psi2Args:
    a: float
    d: float
    d2: float
    w: float
    z: float


def _sum_diagonals(diagonal, cfg: EvalConfig, what: str, first_live: int = 0) -> float:
    """Sum ``diagonal(s)`` for s = 0, 1, ... with the two-small-diagonals rule.

    Diagonals before ``first_live`` may vanish identically (1/Gamma at a
    pole), so the stop rule is not applied to them.
    """
    total = diagonal(0)
    small = 0
    for s in range(1, cfg.max_terms):
        d = diagonal(s)
        total += d
        if s <= first_live:
            continue
        if abs(d) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"{what} did not converge in {cfg.max_terms} diagonals", best=total)


def _first_live(g: float) -> int:
    """Index of the first s with 1/Gamma(g + s) not forced to zero."""
    return max(0, 1 - math.floor(g + POLE_TOL)) if g < 1 else 0


class _Powers:
    """Lazily extended sequence c_k = coef(k) * x^k / k! built by ratios."""

    def __init__(self, x, ratio):
        self.x = x
        self.ratio = ratio
        self.vals = [1.0]

    def __getitem__(self, k):
        vals = self.vals
        while len(vals) <= k:
            n = len(vals)
            vals.append(vals[-1] * self.ratio(n - 1) * self.x / n)
        return vals[k]


def _phi3_diagonal_sum(b, w, z):
    """Diagonal s of Phi3 without the 1/(g)_s (or 1/Gamma(g+s)) factor."""
    left = _Powers(w, lambda k: b + k)
    right = _Powers(z, lambda k: 1.0)

    def inner(s):
        return math.fsum(left[k] * right[s - k] for k in range(s + 1))

    return inner


def phi3(b: float, g: float, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Humbert Phi3(b; g; w, z) by anti-diagonal summation."""
    if is_nonpositive_integer(g):
        raise PoleError(f"Phi3 has a pole at g={g}")
    inner = _phi3_diagonal_sum(b, w, z)
    # 1/(g)_s accumulated alongside the diagonals
    inv_poch = [1.0]

    def diagonal(s):
        if s >= len(inv_poch):
            inv_poch.append(inv_poch[-1] / (g + s - 1))
        return inv_poch[s] * inner(s)

    return _sum_diagonals(diagonal, cfg, f"phi3({b}, {g}, {w}, {z})")


def phi3_reg_series(b: float, g: float, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Phi3/Gamma(g) from the double series with 1/Gamma(g+s) weights.

    Entire in g, so it is also the limit at nonpositive integer g.
    """
    inner = _phi3_diagonal_sum(b, w, z)

    def diagonal(s):
        return rgamma(g + s) * inner(s)

    return _sum_diagonals(diagonal, cfg, f"phi3_reg({b}, {g}, {w}, {z})", _first_live(g))


def phi3_reg(b: float, g: float, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Regularized Phi3(b; g; w, z) / Gamma(g).

    Near a pole in g with b a negative integer and z > 0 the finite Bessel sum
    is used; otherwise the regularized double series.
    """
    near_pole = is_nonpositive_integer(g, POLE_TOL)
    if near_pole and b < 0 and float(b).is_integer() and z > 0:
        return phi3_reg_negint_b(int(-b), g, w, z, cfg)
    if near_pole:
        return phi3_reg_series(b, g, w, z, cfg)
    lg, sg = ln_gamma(g)
    return sg * math.exp(-lg) * phi3(b, g, w, z, cfg)


def phi3_bessel_expansion(b: float, g: float, z: float, w: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Phi3(b; g; z, w) as Gamma(g) w^((1-g)/2) sum_j (b)_j/j! (z/sqrt w)^j I_{g+j-1}(2 sqrt w).

    Note the argument order: ``z`` carries the (b)_j weights. Needs w > 0.
    """
    if not w > 0:
        raise DomainError(f"Bessel expansion of Phi3 needs w > 0, got {w}")
    lg, sg = ln_gamma(g)
    sw = math.sqrt(w)
    ratio = z / sw
    total = 0.0
    coef = 1.0
    small = 0
    for j in range(cfg.max_terms):
        if j:
            coef *= (b + j - 1) * ratio / j
        term = coef * bessel_i(g + j - 1.0, 2.0 * sw, cfg)
        total += term
        if coef == 0.0:
            break
        if abs(term) <= cfg.rel_tol * abs(total):
            small += 1
            if small == 2:
                break
        else:
            small = 0
    else:
        raise ConvergenceError("Bessel expansion of Phi3 did not converge", best=total)
    return sg * math.exp(lg + 0.5 * (1.0 - g) * math.log(w)) * total


def phi3_reg_negint_b(k: int, g: float, varsigma_x: float, w_x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Regularized Phi3(-k; g; S, W)/Gamma(g) as a finite sum of Bessel I.

    W^((1-g)/2) sum_{j=0}^k (-k)_j / j! (S / sqrt W)^j I_{g+j-1}(2 sqrt W),
    defined for every real g, including the poles of the plain function.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    if not w_x > 0:
        raise DomainError(f"w_x must be positive, got {w_x}")
    sw = math.sqrt(w_x)
    ratio = varsigma_x / sw
    terms = []
    coef = 1.0
    for j in range(k + 1):
        if j:
            coef *= (-k + j - 1) * ratio / j
        terms.append(coef * bessel_i(g + j - 1.0, 2.0 * sw, cfg))
    return math.exp(0.5 * (1.0 - g) * math.log(w_x)) * math.fsum(terms)


def psi2(a: float, d: float, d2: float, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Humbert Psi2(a; d, d2; w, z) by anti-diagonal summation."""
    if is_nonpositive_integer(d):
        raise PoleError(f"Psi2 has a pole at d={d}")
    if is_nonpositive_integer(d2):
        raise PoleError(f"Psi2 has a pole at d2={d2}")
    left = _Powers(w, lambda k: 1.0 / (d + k))
    right = _Powers(z, lambda k: 1.0 / (d2 + k))
    poch = [1.0]

    def diagonal(s):
        if s >= len(poch):
            poch.append(poch[-1] * (a + s - 1))
        return poch[s] * math.fsum(left[k] * right[s - k] for k in range(s + 1))

    return _sum_diagonals(diagonal, cfg, f"psi2({a}, {d}, {d2}, {w}, {z})")


def psi2_reg(a: float, d: float, d2: float, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Psi2(a; d, d2; w, z)/Gamma(d) from the double series, entire in d."""
    if is_nonpositive_integer(d2):
        raise PoleError(f"Psi2 has a pole at d2={d2}")
    right = _Powers(z, lambda k: 1.0 / (d2 + k))
    wpow = [1.0]

    def left(k):
        while len(wpow) <= k:
            n = len(wpow)
            wpow.append(wpow[-1] * w / n)
        return wpow[k] * rgamma(d + k)

    poch = [1.0]

    def diagonal(s):
        if s >= len(poch):
            poch.append(poch[-1] * (a + s - 1))
        return poch[s] * math.fsum(left(k) * right[s - k] for k in range(s + 1))

    return _sum_diagonals(diagonal, cfg, f"psi2_reg({a}, {d}, {d2}, {w}, {z})", _first_live(d))


def delta_coeff(j: int, b: int, g: float, w: float, z: float) -> float:
    """Finite-sum weight of the Phi3-to-Marcum expansion.

    (-1)^(b-1) z^(b-1-j) / (w^(b-1) Gamma(b))
        * sum_{k=0}^{floor(j/2)} (-1)^k (b-j+k)_{j-k} (g-j-1+k)_{j-2k} z^k / ((j-2k)! k!)
    """
    if b < 1:
        raise DomainError(f"b must be a positive integer, got {b}")
    if not 0 <= j <= 2 * (b - 1):
        raise DomainError(f"j must lie in [0, {2 * (b - 1)}], got {j}")
    if w == 0.0:
        raise DomainError("delta_coeff needs w != 0")
    terms = []
    for k in range(j // 2 + 1):
        num = pochhammer(b - j + k, j - k) * pochhammer(g - j - 1 + k, j - 2 * k)
        if num == 0.0:
            continue
        terms.append((-1) ** k * num / (math.factorial(j - 2 * k) * math.factorial(k)) * _int_power(z, b - 1 - j + k))
    sign = -1.0 if (b - 1) % 2 else 1.0
    return sign * math.fsum(terms) / (_int_power(w, b - 1) * math.factorial(b - 1))


def _int_power(x: float, n: int) -> float:
    if n == 0:
        return 1.0
    return x**n


def psi2_reg_corollary2(a: float, n: int, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Psi2(a+n; a, a+n; w, z)/Gamma(a) as a finite Bessel-I sum.

    e^(w+z) (wz)^((1-a)/2) sum_{j=0}^n (-1)^j (-n)_j / j! (w/z)^(j/2) I_{a+j-1}(2 sqrt(wz)),
    valid for every real a (the limit at the poles of the plain function).
    """
    if n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    if not (w > 0 and z > 0):
        raise DomainError(f"need w > 0 and z > 0, got w={w}, z={z}")
    wz = w * z
    x = 2.0 * math.sqrt(wz)
    r = math.sqrt(w / z)
    terms = []
    coef = 1.0
    for j in range(n + 1):
        if j:
            coef *= -(-n + j - 1) * r / j
        terms.append(coef * bessel_i(a + j - 1.0, x, cfg))
    return math.exp(w + z + 0.5 * (1.0 - a) * math.log(wz)) * math.fsum(terms)


def psi2_reg_corollary1(a: float, n: int, w: float, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Psi2(a; a+n, a; w, z)/Gamma(a+n) through modified Marcum Q functions.

    sum_{j=0}^{2(n-1)} (-w)^(1-a-n+j) delta_j(n, a+n, -w, wz) [1 - Q_{a+n-j-1}(i sqrt(2z), i sqrt(2w))]

    The complement of the modified Marcum function carries the factor
    (-w)^(a+n-j-1), which cancels the power in front exactly, so each term is
    delta_j times the reduced complement of :func:`humbertq.marcum.marcum_reduced_complement`
    evaluated at signed squares (-2z, -2w). No complex arithmetic is needed and
    the expression stays finite when a or a+n is a nonpositive integer.
    """
    from .marcum import marcum_reduced_complement

    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not w > 0 or z < 0:
        raise DomainError(f"need w > 0 and z >= 0, got w={w}, z={z}")
    if z == 0.0:
        # only the l = 0 column of the double series survives
        if is_nonpositive_integer(a + n, POLE_TOL):
            # regularized 1F1(a; a+n; w)
            return phi3_reg_series(a, a + n, w, 0.0, cfg)
        from .specfun import hyp1f1

        return rgamma(a + n) * hyp1f1(a, a + n, w, cfg)
    terms = [
        delta_coeff(j, n, a + n, -w, w * z) * marcum_reduced_complement(a + n - j - 1.0, -2.0 * z, -2.0 * w, cfg)
        for j in range(2 * (n - 1) + 1)
    ]
    return math.fsum(terms)
