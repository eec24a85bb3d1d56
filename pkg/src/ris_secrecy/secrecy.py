"""Analytic secrecy metrics for the two RIS system models.

Model 1 (V2vRisAp): the source drives an N-cell RIS access point and each
receiver link gain is double-Rayleigh. Model 2 (VanetRisRelay): a static
source reaches mobile receivers via an N-cell RIS relay, so each link is a
triple cascade (Rayleigh source leg times a double-Rayleigh receiver leg).

Average capacities come from the MGF integral identity
C = (1/ln 2) * int_0^inf (1 - M(z)) exp(-z)/z dz; the average secrecy
capacity is the difference of per-link capacities, with a closed-form
upper-bound approximation and an erf-form outage probability obtained from
a Gaussian approximation of the summed gains.
"""
import math
from dataclasses import dataclass
from enum import Enum

from . import channels
from .channels import FadingKind
from .specfun import QuadratureSpec, erf, integrate_semi_infinite


class Model(Enum):
    V2V_RIS_AP = "v2v_ris_ap"
    VANET_RIS_RELAY = "vanet_ris_relay"


class Link(Enum):
    DESTINATION = "destination"
    EAVESDROPPER = "eavesdropper"


class SopMode(Enum):
    CORRECTED = "corrected"
    PAPER_LITERAL = "paper_literal"


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of one scenario.

    Distances are in metres, p_s in watts, n_0 in the same normalized units
    as p_s; r_s is the source-to-RIS distance and exists only for the relay
    model.
    """

    model: Model
    p_s: float = 10.0
    n_0: float = 1.0
    beta: float = 2.7
    n_cells: int = 16
    r_d: float = 4.0
    r_e: float = 8.0
    r_s: float | None = None

    def __post_init__(self):
        if not self.p_s > 0.0:
            raise ValueError("p_s must be > 0")
        if not self.n_0 > 0.0:
            raise ValueError("n_0 must be > 0")
        if not self.beta > 0.0:
            raise ValueError("beta must be > 0")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ValueError("n_cells must be an integer >= 1")
        if not (self.r_d > 0.0 and self.r_e > 0.0):
            raise ValueError("distances must be > 0")
        if self.model is Model.V2V_RIS_AP:
            if self.r_s is not None:
                raise ValueError("r_s applies only to the relay model")
        else:
            if self.r_s is None or not self.r_s > 0.0:
                raise ValueError("the relay model requires r_s > 0")

    @property
    def fading_kind(self) -> FadingKind:
        if self.model is Model.V2V_RIS_AP:
            return FadingKind.DOUBLE_RAYLEIGH
        return FadingKind.TRIPLE_CASCADE


@dataclass(frozen=True)
class SecrecyReport:
    """All analytic metrics at one parameter point (capacities in bits/s/Hz)."""

    c_d: float
    c_e: float
    asc_exact: float
    asc_approx: float
    sop_corrected: float
    sop_paper_literal: float

    def __post_init__(self):
        if self.c_d < 0.0 or self.c_e < 0.0:
            raise ValueError("average capacities must be nonnegative")
        for p in (self.sop_corrected, self.sop_paper_literal):
            if not 0.0 <= p <= 1.0:
                raise ValueError("outage probabilities must lie in [0, 1]")


def _link_distance(params: SystemParams, link: Link) -> float:
    return params.r_d if link is Link.DESTINATION else params.r_e


def snr_scale(params: SystemParams, link: Link) -> float:
    """SNR scale multiplying the summed gains: p_s r_i^-beta / n_0, with an
    extra r_s^-beta hop loss for the relay model."""
    scale = params.p_s * _link_distance(params, link) ** -params.beta / params.n_0
    if params.model is Model.VANET_RIS_RELAY:
        scale *= params.r_s ** -params.beta
    return scale


def link_mgf(params: SystemParams, link: Link, z: float) -> float:
    """MGF of the link SNR at z: the per-element MGF at z*scale raised to the
    N-th power (cells fade independently)."""
    if z < 0.0:
        raise ValueError("link_mgf requires z >= 0")
    if z == 0.0:
        return 1.0
    s = z * snr_scale(params, link)
    if params.model is Model.V2V_RIS_AP:
        per = channels.mgf_double_rayleigh(s)
    else:
        per = channels.mgf_triple_cascade(s)
    return per ** params.n_cells


def avg_capacity(params: SystemParams, link: Link, spec: QuadratureSpec | None = None) -> float:
    """Average link capacity in bits/s/Hz via the MGF integral identity."""
    scale = snr_scale(params, link)
    mean_gain = channels.moments(params.fading_kind).mean
    limit0 = params.n_cells * scale * mean_gain  # (1 - M(z))/z -> E[gamma] as z -> 0

    def integrand(z):
        if z < 1e-12:
            return limit0
        return (1.0 - link_mgf(params, link, z)) * math.exp(-z) / z

    return integrate_semi_infinite(integrand, spec) / math.log(2.0)


def capacity_upper_bound(params: SystemParams, link: Link) -> float:
    """Jensen bound log2(1 + E[gamma]) on the average link capacity."""
    mean_gain = channels.moments(params.fading_kind).mean
    return math.log2(1.0 + params.n_cells * mean_gain * snr_scale(params, link))


def asc_exact(params: SystemParams, spec: QuadratureSpec | None = None) -> float:
    """Average secrecy capacity as the signed difference of link capacities.

    Negative when the eavesdropper link is the stronger one; see
    asc_exact_clamped for the nonnegative variant.
    """
    return avg_capacity(params, Link.DESTINATION, spec) - avg_capacity(params, Link.EAVESDROPPER, spec)


def asc_exact_clamped(params: SystemParams, spec: QuadratureSpec | None = None) -> float:
    """max(0, asc_exact): comparable to the positive-part Monte-Carlo estimator."""
    return max(0.0, asc_exact(params, spec))


def asc_approx(params: SystemParams) -> float:
    """Closed-form secrecy-capacity approximation from the per-link Jensen bounds."""
    rd = params.r_d ** -params.beta
    re_ = params.r_e ** -params.beta
    if params.model is Model.V2V_RIS_AP:
        num = 2.0 * params.n_0 + params.n_cells * math.pi * params.p_s * rd
        den = 2.0 * params.n_0 + params.n_cells * math.pi * params.p_s * re_
    else:
        rs = params.r_s ** -params.beta
        coeff = params.n_cells * params.p_s * math.pi ** 1.5 * rs
        num = 2.0 * math.sqrt(2.0) * params.n_0 + coeff * rd
        den = 2.0 * math.sqrt(2.0) * params.n_0 + coeff * re_
    return math.log2(num / den)


def sop(params: SystemParams, c_th: float, mode: SopMode = SopMode.CORRECTED) -> float:
    """Secrecy outage probability from the Gaussian (CLT) gain-sum approximation.

    The random eavesdropper term is replaced by its mean, reproducing the
    closed erf form; the Monte-Carlo module quantifies the resulting bias.
    For the relay model, ``mode`` selects the corrected per-element constants
    (mean coefficient (pi/2)^1.5, variance 8-(pi/2)^3) or the paper_literal
    variant (pi^3/(2 sqrt 2) and 8-(pi/2)^1.5). Both modes coincide for the
    access-point model.
    """
    if not c_th > 0.0:
        raise ValueError("c_th must be > 0")
    nu = 2.0 ** c_th
    ratio = (params.r_e / params.r_d) ** -params.beta  # r_e^-beta / r_d^-beta
    n = params.n_cells
    rd = params.r_d ** -params.beta
    if params.model is Model.V2V_RIS_AP:
        noise_term = params.n_0 * (nu - 1.0) / (params.p_s * rd)
        mean_coeff = n * math.pi / 2.0
        variance = n * channels.moments(FadingKind.DOUBLE_RAYLEIGH).variance
    else:
        rs = params.r_s ** -params.beta
        noise_term = params.n_0 * (nu - 1.0) / (params.p_s * rs * rd)
        if mode is SopMode.CORRECTED:
            mean_coeff = n * channels.moments(FadingKind.TRIPLE_CASCADE).mean
            variance = n * channels.moments(FadingKind.TRIPLE_CASCADE).variance
        else:
            mean_coeff = n * channels.PAPER_LITERAL_TRIPLE_MEAN_SUM_COEFF
            variance = n * channels.PAPER_LITERAL_TRIPLE_VARIANCE
    numer = noise_term + mean_coeff * (nu * ratio - 1.0)
    return 0.5 * (1.0 + erf(numer / math.sqrt(2.0 * variance)))


def secrecy_report(params: SystemParams, c_th: float = 1.0,
                   spec: QuadratureSpec | None = None) -> SecrecyReport:
    """Evaluate every analytic metric at one parameter point."""
    c_d = avg_capacity(params, Link.DESTINATION, spec)
    c_e = avg_capacity(params, Link.EAVESDROPPER, spec)
    return SecrecyReport(
        c_d=c_d,
        c_e=c_e,
        asc_exact=c_d - c_e,
        asc_approx=asc_approx(params),
        sop_corrected=sop(params, c_th, SopMode.CORRECTED),
        sop_paper_literal=sop(params, c_th, SopMode.PAPER_LITERAL),
    )
