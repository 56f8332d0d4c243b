"""Closed-form mean queueing delays and service-time models.

Generic formulas are unit-agnostic. The multiplexing formulas
(:func:`fdm_wait`, :func:`tdm_wait`) work in slot units with the
dimensionless load ``lam`` (total arrivals per slot).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "ServiceMoments",
    "HyperExp2",
    "VacationSpec",
    "PageProfile",
    "pk_wait",
    "md1_wait",
    "vacation_residual",
    "mg1_vacation_wait",
    "fdm_wait",
    "tdm_wait",
    "h2_branches",
    "h2_from_page",
    "h2_moments",
    "h2_wait",
]


def _check_moments(kind: str, mean: float, second_moment: float) -> None:
    if not (mean > 0 and second_moment > 0):
        raise DomainError(f"{kind}: moments must be positive, got {mean}, {second_moment}")
    # relative slack so float-built deterministic moments (m, m*m) pass
    if second_moment < mean * mean * (1 - 1e-12):
        raise DomainError(
            f"{kind}: second moment {second_moment} below mean^2 = {mean * mean}"
        )


@dataclass(frozen=True)
class ServiceMoments:
    """First and second moments E(S), E(S^2) of a service time."""

    mean: float
    second_moment: float

    def __post_init__(self):
        _check_moments("ServiceMoments", self.mean, self.second_moment)

    @classmethod
    def deterministic(cls, value: float) -> "ServiceMoments":
        return cls(value, value * value)

    @classmethod
    def exponential(cls, rate: float) -> "ServiceMoments":
        return cls(1.0 / rate, 2.0 / (rate * rate))


@dataclass(frozen=True)
class VacationSpec:
    """First and second moments E(V), E(V^2) of a server vacation."""

    mean: float
    second_moment: float

    def __post_init__(self):
        _check_moments("VacationSpec", self.mean, self.second_moment)

    @classmethod
    def deterministic(cls, value: float) -> "VacationSpec":
        return cls(value, value * value)

    @classmethod
    def exponential(cls, rate: float) -> "VacationSpec":
        return cls(1.0 / rate, 2.0 / (rate * rate))


@dataclass(frozen=True)
class HyperExp2:
    """Two-branch hyper-exponential: branch i w.p. ``p_i``, then Exp(``rate_i``)."""

    p1: float
    rate1: float
    p2: float
    rate2: float

    def __post_init__(self):
        for p in (self.p1, self.p2):
            if not 0 < p <= 1:
                raise DomainError(f"HyperExp2: branch probability {p} not in (0, 1]")
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise DomainError(f"HyperExp2: p1 + p2 = {self.p1 + self.p2} != 1")
        if not (self.rate1 > 0 and self.rate2 > 0):
            raise DomainError("HyperExp2: rates must be positive")

    def pdf(self, s):
        """Density sum_i p_i rate_i exp(-rate_i s) for s >= 0 (zero below)."""
        s = float(s)
        if s < 0:
            return 0.0
        return (self.p1 * self.rate1 * math.exp(-self.rate1 * s)
                + self.p2 * self.rate2 * math.exp(-self.rate2 * s))

    def moment(self, j: int) -> float:
        """Raw moment E(S^j) = j! sum_i p_i / rate_i^j."""
        return math.factorial(j) * (self.p1 / self.rate1 ** j + self.p2 / self.rate2 ** j)


@dataclass(frozen=True)
class PageProfile:
    """A page request stream: request rate and number of embedded objects."""

    request_rate: float
    embedded_count: int

    def __post_init__(self):
        if not self.request_rate > 0:
            raise DomainError(f"request rate must be positive, got {self.request_rate}")
        if int(self.embedded_count) != self.embedded_count or self.embedded_count < 2:
            raise DomainError(
                f"embedded object count N must be an integer >= 2, got {self.embedded_count}"
            )


def _load(arrival_rate: float, mean: float) -> float:
    if arrival_rate < 0:
        raise DomainError(f"arrival rate must be nonnegative, got {arrival_rate}")
    rho = arrival_rate * mean
    if rho >= 1:
        raise DomainError(f"unstable queue: utilization {rho:.6g} >= 1")
    return rho


def pk_wait(arrival_rate: float, s: ServiceMoments) -> float:
    """Pollaczek-Khinchin mean wait in queue for M/G/1."""
    rho = _load(arrival_rate, s.mean)
    return arrival_rate * s.second_moment / (2.0 * (1.0 - rho))


def md1_wait(arrival_rate: float, service_rate: float) -> float:
    """M/D/1 mean wait: rho / (2 mu (1 - rho))."""
    if not service_rate > 0:
        raise DomainError(f"service rate must be positive, got {service_rate}")
    rho = _load(arrival_rate, 1.0 / service_rate)
    return rho / (2.0 * service_rate * (1.0 - rho))


def vacation_residual(arrival_rate: float, s: ServiceMoments, v: VacationSpec) -> float:
    """Mean residual time R seen by an arrival in M/G/1 with multiple vacations."""
    rho = _load(arrival_rate, s.mean)
    return (arrival_rate * s.second_moment / 2.0
            + (1.0 - rho) * v.second_moment / (2.0 * v.mean))


def mg1_vacation_wait(arrival_rate: float, s: ServiceMoments, v: VacationSpec) -> float:
    # R / (1 - rho), written as the P-K term plus the vacation residual term
    return pk_wait(arrival_rate, s) + v.second_moment / (2.0 * v.mean)


def _check_mux(lam: float, streams: int) -> None:
    if not 0 < lam < 1:
        raise DomainError(f"load lambda must lie in (0, 1), got {lam}")
    if not streams > 0:
        raise DomainError(f"stream count m must be positive, got {streams}")


def fdm_wait(lam: float, streams: float) -> float:
    """Per-packet queueing delay (slots) with ``streams`` FDM channels at total load ``lam``."""
    _check_mux(lam, streams)
    return lam * streams / (2.0 * (1.0 - lam))


def tdm_wait(lam: float, streams: float) -> float:
    """TDM queueing delay in slots: the FDM delay plus half a frame, m / (2(1 - lam)).

    ``streams`` may be fractional when it comes straight from the users solver.
    """
    _check_mux(lam, streams)
    return streams / (2.0 * (1.0 - lam))


def h2_branches(request_rate: float, embedded_count: float) -> HyperExp2:
    """Branch parameters whose moments give E(S) = 2/((N+1)lam), E(S^2) = 2/(N lam^2).

    The static page is served at the request rate, each of the N embedded
    objects at N times that rate. N = 1 collapses to Exp(request_rate).
    """
    n = embedded_count
    if not (request_rate > 0 and n >= 1):
        raise DomainError(f"need request_rate > 0 and N >= 1, got {request_rate}, {n}")
    return HyperExp2(1.0 / (n + 1), request_rate, n / (n + 1), n * request_rate)


def h2_from_page(page: PageProfile) -> HyperExp2:
    return h2_branches(page.request_rate, page.embedded_count)


def h2_moments(h: HyperExp2) -> ServiceMoments:
    return ServiceMoments(h.moment(1), h.moment(2))


def h2_wait(page: PageProfile) -> float:
    """M/H2/1 mean queueing delay (N+1) / (lam (N-1) N)."""
    lam, n = page.request_rate, page.embedded_count
    if n < 2:
        raise DomainError(f"M/H2/1 delay needs N >= 2, got {n}")
    return (n + 1) / (lam * (n - 1) * n)
