"""Verification suites shared by ``humbertq selftest`` and the test-suite.

Every check returns a :class:`CheckResult` holding the largest deviation
seen over its lattice and the tolerance it is held to.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import hyp1f1 as scipy_hyp1f1

from . import hyp2var as hv
from . import marcum as mq
from .fading import (
    DetectionParams,
    InterferenceScenario,
    KappaMuParams,
    detection_probability_average,
    detection_probability_kappa_mu_result,
    kappa_mu_cdf,
    outage_monte_carlo,
    outage_probability,
    pdf_integral,
    threshold_from_pf,
)
from .laplace import LaplaceParams, in_dispatch, in_plus_n_marcum, in_plus_n_quadrature
from .oracle import adaptive_gk15, quad_in, quad_marcum
from .specfun import DEFAULT_CONFIG, _hyp1f1_series, bessel_i, gamma_pq, hyp1f1, laguerre

LATTICE = (0.25, 1.0, 4.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_dev: float
    tol: float
    points: int
    kind: str = "rel"
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_dev <= self.tol) and self.points > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.note}" if self.note else ""
        return f"{status}  {self.name:<44s} max {self.kind} dev {self.max_dev:.3e}  tol {self.tol:.0e}  n={self.points}{extra}"


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(b), 1e-300)


class _Tracker:
    def __init__(self):
        self.worst = 0.0
        self.n = 0

    def add(self, dev: float):
        if not math.isfinite(dev):
            dev = math.inf
        self.worst = max(self.worst, dev)
        self.n += 1


# ---- special functions ----------------------------------------------------


def _laguerre_exact(k: int, a: Fraction, x: Fraction) -> Fraction:
    """sum_j C(k+a, k-j) (-x)^j / j! in exact rational arithmetic."""
    total = Fraction(0)
    for j in range(k + 1):
        binom = Fraction(1)
        for i in range(1, k - j + 1):
            binom *= (a + j + i) / i
        total += binom * (-x) ** j / math.factorial(j)
    return total


def check_specfun() -> list[CheckResult]:
    out = []
    t = _Tracker()
    for n, x in itertools.product(range(0, 5), (0.1, 1.0, 5.0, 20.0)):
        t.add(_rel(bessel_i(-n, x), bessel_i(n, x)))
    out.append(CheckResult("bessel_i integer order symmetry", t.worst, 1e-12, t.n))

    t = _Tracker()
    for k, a, x in itertools.product(range(11), (0.0, 0.5, 1.5, 3.2), (0.3, 1.7, 6.0)):
        explicit = float(_laguerre_exact(k, Fraction(a), Fraction(x)))
        t.add(abs(laguerre(k, a, x) - explicit) / max(1.0, abs(explicit)))
    out.append(CheckResult("laguerre recurrence vs explicit sum", t.worst, 1e-11, t.n))

    t = _Tracker()
    for s, q, w in itertools.product((0.7, 1.3, 2.5), (0.6, 2.1, 4.0), (-20.0, -8.0, -1.5, 3.0, 12.0, 20.0)):
        t.add(_rel(hyp1f1(s, q, w), float(scipy_hyp1f1(s, q, w))))
    out.append(CheckResult("1F1 vs scipy on |w| <= 20", t.worst, 1e-10, t.n))

    # the direct series at w < 0 loses about e^|w| relative accuracy, so the
    # two-sided comparison stays at |w| <= 5
    t = _Tracker()
    for s, q, w in itertools.product((0.7, 1.3, 2.5), (0.6, 2.1, 4.0), (-5.0, -3.0, -1.5, 1.5, 3.0, 5.0)):
        direct = _hyp1f1_series(s, q, w, DEFAULT_CONFIG)
        kummer = math.exp(w) * _hyp1f1_series(q - s, q, -w, DEFAULT_CONFIG)
        t.add(_rel(direct, kummer))
    out.append(CheckResult("1F1 direct series vs Kummer transform", t.worst, 1e-10, t.n))
    return out


# ---- Marcum Q ---------------------------------------------------------------


def check_marcum() -> list[CheckResult]:
    out = []
    t = _Tracker()
    for M, a2, b2 in itertools.product(range(-2, 4), LATTICE, LATTICE):
        t.add(abs(mq.marcum_q(M, a2, b2) + mq.marcum_q(1 - M, b2, a2) - 1.0))
    out.append(CheckResult("Marcum reflection (integer orders)", t.worst, 1e-10, t.n, "abs"))

    t = _Tracker()
    for M, n, a2, b2 in itertools.product((0.5, 1.0, 2.3), (1, 2, 4), LATTICE, LATTICE):
        t.add(_rel(mq.marcum_recurrence_rhs(M, n, a2, b2), mq.marcum_q(M + n, a2, b2)))
    out.append(CheckResult("Marcum order recurrence", t.worst, 1e-10, t.n))

    t = _Tracker()
    for M, a2, b2 in itertools.product((-2.0, -1.0, 0.0, 1.0, 0.3, 0.5, 0.8), LATTICE, LATTICE):
        lhs = mq.marcum_phi3_M_lt_2(M, a2, b2)
        if float(M).is_integer():
            ref = mq.marcum_q(M, a2, b2)
        else:
            # for non-integer M the Phi3 form is 1 - Q_{1-M}(beta, alpha)
            ref = mq.marcum_p(1.0 - M, b2, a2)
        t.add(abs(lhs - ref))
    out.append(CheckResult("Phi3 form of Q for M < 2", t.worst, 1e-9, t.n, "abs"))

    t = _Tracker()
    for M, a2, b2 in itertools.product((-0.5, 0.3, 1.0, 1.7, 3.2), LATTICE, LATTICE):
        lhs = mq.one_minus_q_lemma2(M, a2, b2)
        if M > 0:
            ref = 1.0 - quad_marcum(M, a2, b2).value
            t.add(abs(lhs - ref))
        t.add(abs(lhs - mq.marcum_reduced_complement(M, a2, b2) * (0.5 * b2) ** M))
    out.append(CheckResult("Phi3 form of 1 - Q for M > -1", t.worst, 1e-9, t.n, "abs"))

    t = _Tracker()
    for M, a2, b2 in itertools.product((0.5, 1.0, 2.7, 5.5), (0.0, 0.25, 1.0, 4.0, 9.0), (0.25, 1.0, 4.0, 9.0)):
        q = mq.marcum_q(M, a2, b2)
        ref = quad_marcum(M, a2, b2).value
        if ref > 1e-250:
            t.add(_rel(q, ref))
    out.append(CheckResult("marcum_q vs quadrature of the integral", t.worst, 1e-8, t.n))
    return out


def check_modified_marcum() -> list[CheckResult]:
    """Imaginary-argument lattice: finiteness and agreement with an independent series."""
    grid = np.linspace(-4.0, -0.25, 6)
    out = []
    t = _Tracker()
    bad = 0
    for M, a2, b2 in itertools.product((-0.5, 0.5, 1.0, 1.5, 2.5, 4.0), grid, grid):
        r = mq.marcum_reduced_complement(M, float(a2), float(b2))
        if not (isinstance(r, float) and math.isfinite(r)):
            bad += 1
            continue
        x, y = 0.5 * a2, 0.5 * b2
        ref = math.exp(-(x + y)) * hv.phi3_reg_series(1.0, M + 1.0, y, x * y)
        t.add(_rel(r, ref))
    note = f"non-finite={bad}"
    out.append(CheckResult("modified Marcum real and finite", float(bad), 0.0, t.n, "count", note))
    out.append(CheckResult("modified Marcum vs Phi3 series", t.worst, 1e-10, t.n))

    t = _Tracker()
    for a, n, sa, sb in itertools.product((0.5, 1.3, 2.7), (1, 2, 3), grid, grid):
        z, w = -0.5 * float(sa), -0.5 * float(sb)
        t.add(_rel(hv.psi2_reg_corollary1(a, n, w, z), hv.psi2_reg(a, a + n, a, w, z)))
    out.append(CheckResult("Psi2 via modified Marcum vs double series", t.worst, 1e-8, t.n))
    return out


# ---- two-variable hypergeometric functions ----------------------------------


def check_hyp2var() -> list[CheckResult]:
    out = []
    pts = (0.2, 0.8, 1.5)
    t = _Tracker()
    for a, d, w, z in itertools.product((0.5, 1.3, 2.7), (0.5, 1.3, 2.7), pts, pts):
        t.add(_rel(hv.psi2(a, d, a, w, z), math.exp(w + z) * hv.phi3(d - a, d, -w, w * z)))
    out.append(CheckResult("Psi2 to Phi3 reduction", t.worst, 1e-9, t.n))

    t = _Tracker()
    for b, g, zz, w in itertools.product((-1.5, 0.7, 1.0, 2.4), (0.6, 1.8, 3.5), (-0.6, 0.4, 1.2), pts):
        t.add(_rel(hv.phi3_bessel_expansion(b, g, zz, w), hv.phi3(b, g, zz, w)))
    out.append(CheckResult("Phi3 Bessel-sum expansion", t.worst, 1e-9, t.n))

    t = _Tracker()
    for k, g, sx, wx in itertools.product((1, 2, 4), (0.6, 1.5, 3.2), (-0.5, 0.7, 1.4), pts):
        t.add(_rel(hv.phi3_reg_negint_b(k, g, sx, wx), hv.phi3(-k, g, sx, wx) / math.gamma(g)))
    out.append(CheckResult("Phi3 negative-integer b as Bessel sum", t.worst, 1e-10, t.n))

    t = _Tracker()
    for a, n, w, z in itertools.product((0.5, 1.3, 2.7, -0.4), (1, 2, 3), pts, (0.0, *pts)):
        t.add(_rel(hv.psi2_reg_corollary1(a, n, w, z), hv.psi2_reg(a, a + n, a, w, z)))
    out.append(CheckResult("Psi2(a; a+n, a) via Marcum vs series", t.worst, 1e-8, t.n))

    t = _Tracker()
    for a, n, w, z in itertools.product((0.5, 1.3, 2.7, -0.4), (1, 2, 3), pts, pts):
        t.add(_rel(hv.psi2_reg_corollary2(a, n, w, z), hv.psi2_reg(a + n, a, a + n, w, z)))
    out.append(CheckResult("Psi2(a+n; a, a+n) via Bessel vs series", t.worst, 1e-8, t.n))

    t = _Tracker()
    for b, g, t_, v in itertools.product((1, 2, 3), (1.5, 2.2, 3.1), (0.5, 1.1), (0.0, 0.3, 0.9)):
        t.add(_rel(mq.phi3_via_marcum(b, g, t_, v), hv.phi3(b, g, t_, v)))
    out.append(CheckResult("Phi3 integer b via Marcum vs series", t.worst, 1e-8, t.n))

    # Laplace transform of t^(g-1) Phi3(b; g; s t, w t)
    p, s, w, b, g = 2.0, 0.5, 0.3, 1.2, 1.8
    phi = np.vectorize(lambda x: hv.phi3(b, g, s * x, w * x))
    val = adaptive_gk15(lambda x: np.exp(-p * x) * x ** (g - 1.0) * phi(x), 0.0, 60.0,
                        abs_tol=1e-14, rel_tol=1e-11, breakpoints=(0.5, 2.0, 8.0)).value
    ref = math.gamma(g) * p ** (b - g) * (p - s) ** (-b) * math.exp(w / p)
    out.append(CheckResult("Phi3 Laplace transform", _rel(val, ref), 1e-7, 1))
    return out


# ---- transform -------------------------------------------------------------


def transform_lattice():
    """Valid points of the (alpha^2, beta^2, c, p, mu2, n) grid."""
    for a2, b2, c, p, mu2, n in itertools.product(LATTICE, LATTICE, (0.5, 1.5, 3.0), (0.5, 1.0, 2.0),
                                                  (0.5, 1.0, 2.0), (-2, -1, 0, 1, 2, 3)):
        mu1 = mu2 + n
        if mu1 <= 0 and not float(mu1).is_integer():
            continue
        yield LaplaceParams(a2, b2, c, p, mu1, mu2)


def check_transform_grid() -> list[CheckResult]:
    t = _Tracker()
    positive = True
    for prm in transform_lattice():
        v = in_dispatch(prm)
        positive &= v > 0
        t.add(_rel(v, quad_in(prm).value))
    return [CheckResult("closed forms vs quadrature (full grid)", t.worst, 1e-6, t.n,
                        note="" if positive else "non-positive value seen")]


def check_route_agreement() -> list[CheckResult]:
    t = _Tracker()
    for prm in transform_lattice():
        if prm.offset in (1, 2, 3):
            t.add(_rel(in_plus_n_marcum(prm), in_plus_n_quadrature(prm)))
    return [CheckResult("Marcum route vs proper-integral route", t.worst, 1e-8, t.n)]


# ---- kappa-mu applications -------------------------------------------------


def check_distribution() -> list[CheckResult]:
    out = []
    t_cdf, t_norm = _Tracker(), _Tracker()
    for k, mu, z in itertools.product((0.5, 1.5, 4.0), (0.5, 1.0, 2.5), (0.3, 1.0, 2.5)):
        ch = KappaMuParams(k, mu, 1.0)
        t_cdf.add(_rel(kappa_mu_cdf(ch, z), pdf_integral(ch, 0.0, z)))
    for k, mu in itertools.product((0.5, 1.5, 4.0), (0.5, 1.0, 2.5, 3.3)):
        ch = KappaMuParams(k, mu, 1.0)
        t_norm.add(abs(pdf_integral(ch, 0.0, 400.0) - 1.0))
    out.append(CheckResult("CDF vs integrated density", t_cdf.worst, 1e-8, t_cdf.n))
    out.append(CheckResult("density normalization", t_norm.worst, 1e-8, t_norm.n, "abs"))

    t = _Tracker()
    for m, z in itertools.product((1, 2, 3, 5), (0.2, 1.0, 3.0)):
        p, _ = gamma_pq(m, m * z)
        t.add(abs(kappa_mu_cdf(KappaMuParams(1e-9, m, 1.0), z) - p))
    out.append(CheckResult("Nakagami limit (kappa -> 0)", t.worst, 1e-6, t.n, "abs"))

    t = _Tracker()
    for k, z in itertools.product((0.5, 2.0, 6.0), (0.2, 1.0, 3.0)):
        ch = KappaMuParams(k, 1.0, 1.0)
        rice = 1.0 - quad_marcum(1.0, 2.0 * k, 2.0 * (1.0 + k) * z).value
        t.add(abs(kappa_mu_cdf(ch, z) - rice))
    out.append(CheckResult("Rice case (mu = 1)", t.worst, 1e-6, t.n, "abs"))
    return out


SIR_DB = (0.0, 5.0, 10.0, 15.0, 20.0)
KAPPA_S = (0.5, 2.5)


def outage_table(n_samples: int = 1_000_000, seed: int = 20240601) -> list[tuple]:
    """(kappa_S, sir_db, closed form, Monte-Carlo estimate, stderr) on the reference interference set."""
    rows = []
    for i, ks in enumerate(KAPPA_S):
        sc = InterferenceScenario(KappaMuParams(ks, 2.0), KappaMuParams(0.5, 2.0))
        for j, sir in enumerate(SIR_DB):
            closed = outage_probability(sc, sir, 1.0)
            est, err = outage_monte_carlo(sc, sir, 1.0, n_samples, seed + 100 * i + j)
            rows.append((ks, sir, closed, est, err))
    return rows


def check_outage(n_samples: int = 1_000_000) -> list[CheckResult]:
    rows = outage_table(n_samples)
    worst = 0.0
    for _, _, closed, est, _ in rows:
        # binomial standard error of the closed-form probability
        se = math.sqrt(closed * (1.0 - closed) / n_samples)
        worst = max(worst, abs(closed - est) / se)
    curves = {ks: [r[2] for r in rows if r[0] == ks] for ks in KAPPA_S}
    mc = {ks: [r[3] for r in rows if r[0] == ks] for ks in KAPPA_S}
    decreasing = sum(int(b >= a) for ks in KAPPA_S for a, b in zip(curves[ks], curves[ks][1:]))
    below = sum(int(x >= y) for x, y in zip(curves[2.5], curves[0.5]))
    below_mc = sum(int(x >= y) for x, y in zip(mc[2.5], mc[0.5]))
    return [
        CheckResult("outage closed form vs Monte Carlo", worst, 3.0, len(rows), "sigma"),
        CheckResult("outage decreasing in SIR", float(decreasing), 0.0, len(rows), "count"),
        CheckResult("stronger LOS lowers outage", float(below + below_mc), 0.0, len(SIR_DB), "count"),
    ]


def check_detection() -> list[CheckResult]:
    lam = threshold_from_pf(2.5, 0.1)
    t = _Tracker()
    closed_paths = True
    for kappa, om_db in itertools.product((0.5, 4.2), np.linspace(-10.0, 20.0, 7)):
        d = DetectionParams(2.5, lam, KappaMuParams(kappa, 0.5, 10.0 ** (om_db / 10.0)))
        res = detection_probability_kappa_mu_result(d)
        closed_paths &= res.method.startswith("closed-form")
        t.add(_rel(res.value, detection_probability_average(d)))
    # a numeric-path fallback would make the comparison vacuous
    out = [CheckResult("detection closed form vs averaging", t.worst if closed_paths else math.inf, 1e-6, t.n,
                       note="" if closed_paths else "closed form not used")]
    t = _Tracker()
    for kappa in (0.5, 4.2):
        d = DetectionParams(2.5, lam, KappaMuParams(kappa, 0.5, 1e-8))
        t.add(abs(detection_probability_kappa_mu_result(d).value - 0.1))
    out.append(CheckResult("detection at vanishing SNR equals P_f", t.worst, 1e-4, t.n, "abs"))
    # Gamma(1, x) = e^-x gives lambda = -2 ln 0.1 = 4.6051702...
    out.append(CheckResult("threshold for u = 1, P_f = 0.1", abs(threshold_from_pf(1.0, 0.1) + 2.0 * math.log(0.1)),
                           1e-9, 1, "abs"))
    return out


SUITES = {
    "identities": (check_specfun, check_marcum, check_modified_marcum, check_hyp2var),
    "oracle": (check_transform_grid, check_route_agreement),
    "montecarlo": (check_distribution, check_outage, check_detection),
}


def run_suite(name: str) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        for fn in SUITES[n]:
            results.extend(fn())
    return results
