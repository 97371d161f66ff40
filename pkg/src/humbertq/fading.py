"""kappa-mu fading: distribution functions, outage under co-channel
interference and energy-detection probability."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import ive

from .errors import DomainError
from .laplace import LaplaceParams, in_dispatch_result
from .marcum import marcum_q, marcum_q_array
from .oracle import adaptive_gk15, sample_kappa_mu
from .specfun import DEFAULT_CONFIG, EvalConfig, bessel_i, upper_gamma_reg

NUMERIC_PATH = "numeric path"


@dataclass(frozen=True)
class KappaMuParams:
    kappa: float
    mu: float
    omega: float = 1.0

    def __post_init__(self):
        if not (self.kappa > 0 and self.mu > 0 and self.omega > 0):
            raise DomainError(f"kappa, mu and omega must be positive, got {self}")

    @property
    def p_hat(self) -> float:
        return self.mu * (1.0 + self.kappa) / self.omega

    @property
    def c_hat(self) -> float:
        return 2.0 * self.mu * math.sqrt(self.kappa * (1.0 + self.kappa) / self.omega)

    @property
    def log_prefactor(self) -> float:
        """log of mu (1+k)^((mu+1)/2) / (k^((mu-1)/2) e^(mu k) Omega^((mu+1)/2))."""
        k, mu, om = self.kappa, self.mu, self.omega
        return (math.log(mu) + 0.5 * (mu + 1.0) * math.log1p(k) - 0.5 * (mu - 1.0) * math.log(k)
                - mu * k - 0.5 * (mu + 1.0) * math.log(om))


@dataclass(frozen=True)
class InterferenceScenario:
    soi: KappaMuParams
    cci: KappaMuParams

    def __post_init__(self):
        for name, ch in (("SoI", self.soi), ("CCI", self.cci)):
            if not float(ch.mu).is_integer():
                raise DomainError(f"{name} mu must be an integer for the closed-form outage, got {ch.mu}")


@dataclass(frozen=True)
class DetectionParams:
    u: float
    lam: float
    channel: KappaMuParams

    def __post_init__(self):
        if not (self.u > 0 and self.lam > 0):
            raise DomainError(f"need u > 0 and lambda > 0, got u={self.u}, lambda={self.lam}")


@dataclass(frozen=True)
class Evaluation:
    value: float
    method: str


def kappa_mu_pdf(params: KappaMuParams, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Power density at x >= 0."""
    if x < 0:
        raise DomainError(f"power must be non-negative, got {x}")
    k, mu = params.kappa, params.mu
    p = params.p_hat
    if x == 0.0:
        if mu > 1:
            return 0.0
        if mu == 1:
            # I_0(0) = 1
            return (1.0 + k) * math.exp(-k) / params.omega
        raise DomainError("density diverges at x = 0 for mu < 1")
    arg = params.c_hat * math.sqrt(x)
    return math.exp(params.log_prefactor + 0.5 * (mu - 1.0) * math.log(x) - p * x) * bessel_i(mu - 1.0, arg, cfg)


def _pdf_array(params: KappaMuParams, x: np.ndarray) -> np.ndarray:
    # scaled Bessel keeps large arguments finite
    arg = params.c_hat * np.sqrt(x)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = np.exp(params.log_prefactor + 0.5 * (params.mu - 1.0) * np.log(x) - params.p_hat * x + arg) \
            * ive(params.mu - 1.0, arg)
    return np.where(np.isfinite(val), val, 0.0)


def kappa_mu_cdf(params: KappaMuParams, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """1 - Q_mu(sqrt(2 k mu), sqrt(2 (1+k) mu z / Omega))."""
    if z < 0:
        raise DomainError(f"power must be non-negative, got {z}")
    if z == 0.0:
        return 0.0
    return 1.0 - marcum_q(params.mu, 2.0 * params.kappa * params.mu, 2.0 * params.p_hat * z, cfg)


def _upper_power(params: KappaMuParams, log_drop: float = 80.0) -> float:
    """Power beyond which exp(-p x + c sqrt x) has dropped by exp(-log_drop) from its peak."""
    p, c = params.p_hat, params.c_hat
    peak = c * c / (4.0 * p)
    root = (c + math.sqrt(c * c + 4.0 * p * (peak + log_drop))) / (2.0 * p)
    return root * root + 10.0 * params.omega


def pdf_integral(params: KappaMuParams, lo: float, hi: float, weight=None) -> float:
    """int_lo^hi w(x) f(x) dx with x = t^(1/mu), which flattens the endpoint behaviour at 0."""
    mu = params.mu

    def integrand(t):
        # Kronrod nodes never touch t = 0
        x = t ** (1.0 / mu)
        val = _pdf_array(params, x) * x / (mu * t)
        if weight is not None:
            val = val * weight(x)
        return val

    scales = params.omega * np.array([1e-3, 1e-2, 0.1, 0.3, 0.6, 1.0, 1.5, 2.5, 4.0, 8.0, 16.0, 32.0])
    breaks = [float(x) ** mu for x in scales if lo < x < hi]
    return adaptive_gk15(integrand, lo**mu, hi**mu, abs_tol=1e-15, rel_tol=1e-12, breakpoints=breaks).value


def outage_probability_result(scenario: InterferenceScenario, sir_db: float, z: float,
                              cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Pr{SoI power / CCI power < z} with Omega_I = 1 and Omega_S = 10^(sir_db/10)."""
    if z < 0:
        raise DomainError(f"threshold must be non-negative, got {z}")
    soi = KappaMuParams(scenario.soi.kappa, scenario.soi.mu, 10.0 ** (sir_db / 10.0))
    cci = KappaMuParams(scenario.cci.kappa, scenario.cci.mu, 1.0)
    if z == 0.0:
        return Evaluation(0.0, "closed-form")
    mu_s, mu_i = soi.mu, cci.mu
    params = LaplaceParams(
        a2=2.0 * soi.p_hat * z,
        b2=2.0 * soi.kappa * mu_s,
        c=cci.c_hat,
        p=cci.p_hat,
        mu1=1.0 - mu_s,
        mu2=mu_i,
    )
    res = in_dispatch_result(params, cfg)
    value = math.exp(cci.log_prefactor) * res.value
    return Evaluation(min(max(value, 0.0), 1.0), f"closed-form/{res.path}")


def outage_probability(scenario: InterferenceScenario, sir_db: float, z: float,
                       cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    return outage_probability_result(scenario, sir_db, z, cfg).value


def outage_monte_carlo(scenario: InterferenceScenario, sir_db: float, z: float,
                       n_samples: int, seed: int) -> tuple[float, float]:
    """Empirical outage from independent SoI and CCI power streams; returns (estimate, stderr)."""
    seq = np.random.SeedSequence(seed)
    s_seed, i_seed = seq.spawn(2)
    soi = KappaMuParams(scenario.soi.kappa, scenario.soi.mu, 10.0 ** (sir_db / 10.0))
    cci = KappaMuParams(scenario.cci.kappa, scenario.cci.mu, 1.0)
    s = sample_kappa_mu(soi, n_samples, s_seed.generate_state(1)[0])
    i = sample_kappa_mu(cci, n_samples, i_seed.generate_state(1)[0])
    est = float(np.mean(s < z * i))
    return est, math.sqrt(max(est * (1.0 - est), 0.0) / n_samples)


def threshold_from_pf(u: float, pf: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Detector threshold lambda with Gamma(u, lambda/2) / Gamma(u) = pf."""
    if not u > 0:
        raise DomainError(f"u must be positive, got {u}")
    if not 0 < pf < 1:
        raise DomainError(f"false-alarm probability must lie in (0, 1), got {pf}")
    hi = 2.0 * (u + 1.0)
    while upper_gamma_reg(u, 0.5 * hi, cfg) > pf:
        hi *= 2.0
    return brentq(lambda lam: upper_gamma_reg(u, 0.5 * lam, cfg) - pf, 0.0, hi, xtol=1e-300, rtol=1e-14, maxiter=500)


def detection_probability_awgn(u: float, snr: float, lam: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Q_u(sqrt(2 snr), sqrt(lambda)).

    The threshold enters as sqrt(lambda) so that snr = 0 reproduces the
    false-alarm probability Gamma(u, lambda/2) / Gamma(u).
    """
    if snr < 0:
        raise DomainError(f"SNR must be non-negative, got {snr}")
    return marcum_q(u, 2.0 * snr, lam, cfg)


def detection_probability_average(d: DetectionParams) -> float:
    """Average of the AWGN detection probability over the fading density, by quadrature."""
    ch = d.channel
    upper = _upper_power(ch)
    return pdf_integral(ch, 0.0, upper, weight=lambda x: marcum_q_array(d.u, 2.0 * x, d.lam))


def detection_probability_kappa_mu_result(d: DetectionParams, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    ch = d.channel
    params = LaplaceParams(a2=2.0, b2=d.lam, c=ch.c_hat, p=ch.p_hat, mu1=d.u, mu2=ch.mu)
    if params.offset is None:
        return Evaluation(detection_probability_average(d), NUMERIC_PATH)
    res = in_dispatch_result(params, cfg)
    return Evaluation(math.exp(ch.log_prefactor) * res.value, f"closed-form/{res.path}")


def detection_probability_kappa_mu(d: DetectionParams, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    return detection_probability_kappa_mu_result(d, cfg).value


__all__ = [
    "KappaMuParams", "InterferenceScenario", "DetectionParams", "Evaluation", "NUMERIC_PATH",
    "kappa_mu_pdf", "kappa_mu_cdf", "pdf_integral", "outage_probability", "outage_probability_result",
    "outage_monte_carlo", "threshold_from_pf", "detection_probability_awgn", "detection_probability_average",
    "detection_probability_kappa_mu", "detection_probability_kappa_mu_result",
]
