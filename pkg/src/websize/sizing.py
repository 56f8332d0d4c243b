"""Users, packet counts and web object size from the delay-equality constraints.

Two constraints are supported, selected by :class:`DelayModel`:

* ``TDM_VACATION`` -- round-robin mean wait equals the TDM (M/D/1 with
  vacations) delay, one packet per slot.
* ``H2`` -- round-robin mean wait equals the M/H2/1 delay, with the packet
  slot set to E(S)/n.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleSizing

__all__ = [
    "DelayModel",
    "WorkloadParams",
    "SizingResult",
    "solve_users_raw",
    "integerize_users",
    "packets_for_size",
    "rr_wait",
    "n_for_tdm",
    "n_for_h2",
    "h2_feasibility_bound",
    "h2_slot",
    "round_half_up",
    "object_size",
    "size_ratio",
]


class DelayModel(enum.Enum):
    TDM_VACATION = "tdm"
    H2 = "h2"

    @classmethod
    def parse(cls, text: str) -> "DelayModel":
        key = text.strip().lower()
        for model in cls:
            if key in (model.value, model.name.lower()):
                return model
        raise DomainError(f"unknown delay model {text!r}; expected 'tdm' or 'h2'")


@dataclass(frozen=True)
class WorkloadParams:
    load: float
    embedded_count: int
    mss: int

    def __post_init__(self):
        if not 0 < self.load < 1:
            raise DomainError(f"load must lie in (0, 1), got {self.load}")
        if int(self.embedded_count) != self.embedded_count or self.embedded_count < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.embedded_count}")
        if int(self.mss) != self.mss or self.mss < 1:
            raise DomainError(f"mss must be a positive integer, got {self.mss}")


@dataclass(frozen=True)
class SizingResult:
    m_raw: float
    m: int
    n: float
    theta_raw: float
    theta: int


def _check_load(lam: float) -> None:
    if not 0 < lam < 1:
        raise DomainError(f"load lambda must lie in (0, 1), got {lam}")


def _check_n(embedded_count: int) -> None:
    if embedded_count < 2:
        raise DomainError(f"N must be >= 2, got {embedded_count}")


def solve_users_raw(load: float, embedded_count: int) -> float:
    """Concurrent users m at which the TDM delay equals the M/H2/1 delay."""
    _check_load(load)
    _check_n(embedded_count)
    n = embedded_count
    return 2.0 * (1.0 - load) * (n + 1) / (load * (n - 1) * n)


def integerize_users(m_raw: float) -> int:
    """Ceiling of ``m_raw``, snapping values within 1e-9 relative of an integer.

    The snap keeps float noise such as 12.000000000000002 from rounding up.
    """
    if not m_raw > 0:
        raise DomainError(f"user count must be positive, got {m_raw}")
    nearest = round(m_raw)
    if abs(m_raw - nearest) <= 1e-9 * max(1.0, m_raw):
        return int(nearest)
    return math.ceil(m_raw)


def packets_for_size(theta: float, mss: int) -> int:
    """Number of MSS-sized segments needed for an object of ``theta`` bytes."""
    if theta < 0 or mss < 1:
        raise DomainError(f"need theta >= 0 and mss >= 1, got {theta}, {mss}")
    return int(-(-theta // mss))


def rr_wait(users: int, packets: float, slot: float = 1.0) -> float:
    """Mean waiting time under packet round-robin: (m-1)(2n-1) slot / 2."""
    return (users - 1) * (2 * packets - 1) * slot / 2.0


def n_for_tdm(users: int, load: float) -> float:
    """Packets per object making the round-robin wait equal the TDM delay."""
    _check_load(load)
    if users < 2:
        raise InfeasibleSizing(users, 2, "m >= 2")
    return ((1.0 - load) * (users - 1) + users) / (2.0 * (1.0 - load) * (users - 1))


def h2_feasibility_bound(embedded_count: int) -> float:
    """User count that ``m`` must strictly exceed for the H2 branch."""
    n = embedded_count
    return 1.0 + (n + 1) ** 2 / (2.0 * n * (n - 1))


def n_for_h2(users: int, embedded_count: int) -> float:
    """Packets per object making the round-robin wait equal the M/H2/1 delay.

    Raises :class:`InfeasibleSizing` when ``users`` does not exceed
    :func:`h2_feasibility_bound`.
    """
    _check_n(embedded_count)
    n = embedded_count
    num = (users - 1) * (n - 1) * n
    den = 2 * num - (n + 1) ** 2
    if den <= 0:
        bound = h2_feasibility_bound(n)
        raise InfeasibleSizing(users, bound, f"m > 1 + (N+1)^2 / (2N(N-1)) = {bound:.6g} (N = {n})")
    return num / den


def h2_slot(packets: float, load: float, embedded_count: int) -> float:
    """Per-packet service time E(S)/n = 2 / (n (N+1) lam) for the H2 branch."""
    return 2.0 / (packets * (embedded_count + 1) * load)


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def object_size(params: WorkloadParams, model: DelayModel) -> SizingResult:
    m_raw = solve_users_raw(params.load, params.embedded_count)
    m = integerize_users(m_raw)
    if model is DelayModel.TDM_VACATION:
        n = n_for_tdm(m, params.load)
    else:
        n = n_for_h2(m, params.embedded_count)
    theta_raw = n * params.mss
    return SizingResult(m_raw, m, n, theta_raw, round_half_up(theta_raw))


def segment_gap(params: WorkloadParams, model: DelayModel) -> float:
    """Relative extra round-robin wait when theta is sent as whole MSS segments.

    The sizing equality holds for the real-valued packet count n; a real
    object has ceil(theta / mss) packets, so the wait overshoots the target.
    """
    res = object_size(params, model)
    whole = packets_for_size(res.theta, params.mss)
    if model is DelayModel.TDM_VACATION:
        slot = 1.0
    else:
        slot = h2_slot(res.n, params.load, params.embedded_count)
    return rr_wait(res.m, whole, slot) / rr_wait(res.m, res.n, slot) - 1.0


def size_ratio(params: WorkloadParams) -> float:
    """theta_raw(TDM) / theta_raw(H2); independent of mss."""
    tdm = object_size(params, DelayModel.TDM_VACATION)
    h2 = object_size(params, DelayModel.H2)
    return tdm.n / h2.n
