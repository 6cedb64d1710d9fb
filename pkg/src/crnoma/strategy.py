"""Per-realization transmission logic for all schemes.

The secondary user U1 may share the block with the primary U0 only while U0
keeps its orthogonal-access outage behavior. The base station grants U1 an
interference budget

    tau = max(0, p0*g0/eps0 - 1),

the largest post-SIC interference power under which U0 still meets its target
rate. The rate-splitting (RS) scheme splits U1's signal into two streams
(x11 decoded before x0, x12 after) and picks the power split per realization:

    case I   (tau > 0, p1*g1 <= tau): all power on x12, rate log2(1 + p1*g1)
    case II  (tau > 0, p1*g1 >  tau): x12 pinned to SINR tau via
             alpha = 1 - tau/(p1*g1); rate
             log2(1 + (p1*g1 - tau)/(p0*g0 + tau + 1)) + log2(1 + tau);
             U1 stays silent when that rate misses its target (counted as outage)
    case III (tau = 0): all power on x11, rate log2(1 + p1*g1/(p0*g0 + 1))

The QoS-SIC and NH-SIC baselines share cases I and III and differ only in
case II; CSI-SIC ignores the admission budget and orders SIC by received
power. Outage tests compare SINRs against eps thresholds in the linear
domain, which is the same condition as rate < target without the log2 noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ChannelRealization, SystemParams, derive_constants
from .errors import UnknownSchemeError


class SchemeId(Enum):
    RS = "rs"
    NH_SIC = "nh-sic"
    QOS_SIC = "qos-sic"
    CSI_SIC = "csi-sic"
    OMA_PRIMARY = "oma"


class CaseLabel(Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class RsDecision:
    """Chosen power split and the rates it supports on one realization."""

    case_label: CaseLabel
    alpha: float
    tau: float
    r11: float
    r12: float
    r1_total: float
    transmits: bool


@dataclass(frozen=True)
class TransmissionOutcome:
    """Per-realization result of one scheme.

    secondary_rate/secondary_outage are None for OMA_PRIMARY, which carries
    no secondary transmission.
    """

    scheme: SchemeId
    primary_outage: bool
    secondary_rate: float | None = None
    secondary_outage: bool | None = None
    case_label: CaseLabel | None = None


def interference_threshold(params: SystemParams, g0: float) -> float:
    """Largest secondary interference power U0 tolerates; 0 iff U0 is in outage."""
    c = derive_constants(params)
    return max(0.0, params.p0 * g0 / c.eps0 - 1.0)


def received_sinrs(params: SystemParams, chan: ChannelRealization, alpha: float) -> tuple[float, float, float]:
    """SINRs for decoding x11, x0, x12 under the order x11 -> x0 -> x12.

    gamma11 = alpha*p1*g1 / (p0*g0 + (1-alpha)*p1*g1 + 1)
    gamma0  = p0*g0 / ((1-alpha)*p1*g1 + 1)
    gamma12 = (1-alpha)*p1*g1
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    p0g0 = params.p0 * chan.g0
    p1g1 = params.p1 * chan.g1
    residual = (1.0 - alpha) * p1g1
    gamma11 = alpha * p1g1 / (p0g0 + residual + 1.0)
    gamma0 = p0g0 / (residual + 1.0)
    return gamma11, gamma0, residual


def case_of(params: SystemParams, chan: ChannelRealization) -> CaseLabel:
    """Which of the three mutually exclusive operating cases holds."""
    tau = interference_threshold(params, chan.g0)
    if tau == 0.0:
        return CaseLabel.III
    if params.p1 * chan.g1 <= tau:
        return CaseLabel.I
    return CaseLabel.II


def rs_decide(params: SystemParams, chan: ChannelRealization) -> RsDecision:
    """Power split, stream rates, and the silence decision of the RS scheme.

    In case II the x12 SINR equals tau by construction, so the post-SIC
    primary SINR is exactly eps0; the case-II rates below use that identity
    instead of round-tripping through alpha.
    """
    c = derive_constants(params)
    tau = interference_threshold(params, chan.g0)
    p0g0 = params.p0 * chan.g0
    p1g1 = params.p1 * chan.g1

    if tau == 0.0:
        rate = math.log2(1.0 + p1g1 / (p0g0 + 1.0))
        return RsDecision(CaseLabel.III, 1.0, tau, r11=rate, r12=0.0, r1_total=rate, transmits=True)
    if p1g1 <= tau:
        rate = math.log2(1.0 + p1g1)
        return RsDecision(CaseLabel.I, 0.0, tau, r11=0.0, r12=rate, r1_total=rate, transmits=True)

    alpha = 1.0 - tau / p1g1
    r11 = math.log2(1.0 + (p1g1 - tau) / (p0g0 + tau + 1.0))
    r12 = math.log2(1.0 + tau)
    total = r11 + r12
    # silence rule: equivalent to total < r1_hat, tested in the linear domain
    achievable = p1g1 >= (1.0 + c.eps0) * (1.0 + c.eps1) - (1.0 + p0g0)
    return RsDecision(CaseLabel.II, alpha, tau, r11=r11, r12=r12, r1_total=total, transmits=achievable)


def benchmark_rate_qos_sic(params: SystemParams, chan: ChannelRealization) -> float:
    """Case-II rate of the QoS-ordered baseline: U1 decoded first, U0's signal as noise."""
    return math.log2(1.0 + params.p1 * chan.g1 / (params.p0 * chan.g0 + 1.0))


def benchmark_rate_nh_sic(params: SystemParams, chan: ChannelRealization) -> float:
    """Case-II rate of the hybrid baseline: better of decode-first and power-backoff."""
    tau = interference_threshold(params, chan.g0)
    return max(benchmark_rate_qos_sic(params, chan), math.log2(1.0 + tau))


def _secondary_outage_linear(scheme: SchemeId, params: SystemParams, chan: ChannelRealization,
                             tau: float, case: CaseLabel) -> bool:
    """Outage indicator via eps-threshold comparisons (exact, log-free)."""
    c = derive_constants(params)
    p0g0 = params.p0 * chan.g0
    p1g1 = params.p1 * chan.g1
    if case is CaseLabel.I:
        return p1g1 < c.eps1
    if case is CaseLabel.III:
        return p1g1 < c.eps1 * (p0g0 + 1.0)
    # case II
    if scheme is SchemeId.RS:
        return p1g1 < (1.0 + c.eps0) * (1.0 + c.eps1) - (1.0 + p0g0)
    tilde_fail = p1g1 < c.eps1 * (p0g0 + 1.0)
    if scheme is SchemeId.QOS_SIC:
        return tilde_fail
    if scheme is SchemeId.NH_SIC:
        return tilde_fail and tau < c.eps1
    raise UnknownSchemeError(f"no case-II rule for {scheme}")


def evaluate_outcome(scheme: SchemeId, params: SystemParams, chan: ChannelRealization) -> TransmissionOutcome:
    """Decode one realization under the given scheme and report rates and outages.

    Primary outage is the orthogonal-access condition g0 < eta0 for every
    scheme; that is the admission contract the secondary schemes preserve.
    """
    c = derive_constants(params)
    primary_out = params.p0 * chan.g0 < c.eps0

    if scheme is SchemeId.OMA_PRIMARY:
        return TransmissionOutcome(scheme=scheme, primary_outage=primary_out)

    tau = interference_threshold(params, chan.g0)
    case = case_of(params, chan)
    p0g0 = params.p0 * chan.g0
    p1g1 = params.p1 * chan.g1

    if scheme is SchemeId.CSI_SIC:
        # dynamic ordering by received power, no admission rule
        if p1g1 >= p0g0:
            rate = math.log2(1.0 + p1g1 / (p0g0 + 1.0))
            outage = p1g1 < c.eps1 * (p0g0 + 1.0)
        else:
            x0_decoded = p0g0 >= c.eps0 * (p1g1 + 1.0)
            if x0_decoded:
                rate = math.log2(1.0 + p1g1)
                outage = p1g1 < c.eps1
            else:
                rate = 0.0
                outage = True
        return TransmissionOutcome(scheme=scheme, primary_outage=primary_out,
                                   secondary_rate=rate, secondary_outage=outage, case_label=case)

    if scheme is SchemeId.RS:
        decision = rs_decide(params, chan)
        rate = decision.r1_total if decision.transmits else 0.0
    elif scheme is SchemeId.QOS_SIC:
        rate = benchmark_rate_qos_sic(params, chan) if case is CaseLabel.II else rs_decide(params, chan).r1_total
    elif scheme is SchemeId.NH_SIC:
        rate = benchmark_rate_nh_sic(params, chan) if case is CaseLabel.II else rs_decide(params, chan).r1_total
    else:
        raise UnknownSchemeError(f"unknown scheme {scheme!r}")

    outage = _secondary_outage_linear(scheme, params, chan, tau, case)
    return TransmissionOutcome(scheme=scheme, primary_outage=primary_out,
                               secondary_rate=rate, secondary_outage=outage, case_label=case)
