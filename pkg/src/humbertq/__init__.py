"""Closed-form Laplace transforms of Marcum Q x Bessel I x power products,
with kappa-mu fading applications."""

from .errors import (
    ConvergenceError,
    DomainError,
    HumbertQError,
    PoleError,
    UnsupportedOrderError,
)
from .fading import (
    DetectionParams,
    InterferenceScenario,
    KappaMuParams,
    detection_probability_awgn,
    detection_probability_kappa_mu,
    kappa_mu_cdf,
    kappa_mu_pdf,
    outage_probability,
    threshold_from_pf,
)
from .laplace import (
    LaplaceParams,
    in_dispatch,
    in_equal_orders,
    in_minus_n,
    in_plus_n_marcum,
    in_plus_n_quadrature,
    in_swapped_corollary3,
    laplace_bessel_power,
)
from .marcum import SignedSquareArg, marcum_q
from .specfun import DEFAULT_CONFIG, EvalConfig

__version__ = "0.1.0"
