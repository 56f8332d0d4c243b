"""Simulation oracles for the closed forms.

``simulate_queue`` runs a single-server FCFS queue with Poisson arrivals and
an optional multiple-vacations server. ``rr_schedule`` builds the packet
round-robin schedule explicitly.

Random numbers come from numpy's PCG64. A seed is expanded with
``SeedSequence.spawn`` into four independent substreams (arrivals, service,
vacations, H2 branch choice) so that two configs sharing a seed share their
arrival and service draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .queueing import HyperExp2, PageProfile, ServiceMoments, h2_from_page

__all__ = [
    "Deterministic",
    "Exponential",
    "Hyper2",
    "Distribution",
    "SimConfig",
    "SimResult",
    "Streams",
    "sample",
    "queue_waits",
    "simulate_queue",
    "simulate_h2_queue",
    "RRSchedule",
    "rr_schedule",
]


@dataclass(frozen=True)
class Deterministic:
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise DomainError(f"deterministic value must be positive, got {self.value}")

    @property
    def moments(self) -> ServiceMoments:
        return ServiceMoments.deterministic(self.value)


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError(f"exponential rate must be positive, got {self.rate}")

    @property
    def moments(self) -> ServiceMoments:
        return ServiceMoments.exponential(self.rate)


@dataclass(frozen=True)
class Hyper2:
    h: HyperExp2

    @property
    def moments(self) -> ServiceMoments:
        return ServiceMoments(self.h.moment(1), self.h.moment(2))


Distribution = Union[Deterministic, Exponential, Hyper2]


class Streams:
    """Independent PCG64 substreams derived from one 64-bit seed."""

    NAMES = ("arrival", "service", "vacation", "branch")

    def __init__(self, seed: int):
        if seed < 0 or seed >= 2 ** 64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        children = np.random.SeedSequence(seed).spawn(len(self.NAMES))
        for name, child in zip(self.NAMES, children):
            setattr(self, name, np.random.Generator(np.random.PCG64(child)))


def _exp(rng: np.random.Generator, rate, size):
    # inverse CDF; 1 - U lies in (0, 1] so the log is finite
    return -np.log1p(-rng.random(size)) / rate


def sample(dist: Distribution, rng: np.random.Generator, size=None,
           branch_rng: Optional[np.random.Generator] = None):
    """Draw from ``dist``. Returns a float, or an array when ``size`` is given.

    For ``Hyper2`` the branch is chosen with ``branch_rng`` (default ``rng``)
    and the exponential drawn from ``rng``.
    """
    scalar = size is None
    n = 1 if scalar else size
    if isinstance(dist, Deterministic):
        out = np.full(n, float(dist.value))
    elif isinstance(dist, Exponential):
        out = _exp(rng, dist.rate, n)
    elif isinstance(dist, Hyper2):
        h = dist.h
        pick = (branch_rng if branch_rng is not None else rng).random(n)
        rates = np.where(pick < h.p1, h.rate1, h.rate2)
        out = _exp(rng, rates, n)
    else:
        raise TypeError(f"not a distribution: {dist!r}")
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class SimConfig:
    arrival_rate: float
    service: Distribution
    vacation: Optional[Distribution] = None
    target_departures: int = 1_000_000
    warmup_fraction: float = 0.1
    batch_count: int = 30
    seed: int = 0

    def __post_init__(self):
        if not self.arrival_rate > 0:
            raise DomainError(f"arrival rate must be positive, got {self.arrival_rate}")
        rho = self.arrival_rate * self.service.moments.mean
        if rho >= 1:
            raise DomainError(f"unstable queue: utilization {rho:.6g} >= 1")
        if not 0 <= self.warmup_fraction < 1:
            raise DomainError(f"warmup fraction must lie in [0, 1), got {self.warmup_fraction}")
        if self.batch_count < 10:
            raise DomainError(f"need at least 10 batches, got {self.batch_count}")
        if self.target_departures < 100 * self.batch_count:
            raise DomainError(
                f"target_departures {self.target_departures} < 100 x batch_count "
                f"({100 * self.batch_count})"
            )


@dataclass(frozen=True)
class SimResult:
    mean_wait: float
    std_error: float
    departures_used: int
    batch_count: int
    seed: int


class _VacationSource:
    # buffered draws so the per-customer loop stays in plain Python
    CHUNK = 4096

    def __init__(self, dist: Distribution, streams: Streams):
        self.dist = dist
        self.streams = streams  # H2 vacations pick branches from the vacation stream
        self.buf: list = []
        self.pos = 0

    def next(self) -> float:
        if self.pos == len(self.buf):
            self.buf = sample(self.dist, self.streams.vacation, self.CHUNK).tolist()
            self.pos = 0
        v = self.buf[self.pos]
        self.pos += 1
        return v


def queue_waits(gaps: Sequence[float], services: Sequence[float],
                next_vacation: Optional[Callable[[], float]] = None) -> list:
    """FCFS waits (arrival to service start) for given interarrival and service times.

    With ``next_vacation`` the server runs back-to-back vacations whenever the
    system is empty, starting at time 0. An arrival that coincides with a
    vacation end misses it and waits for the next one; an arrival that
    coincides with a departure finds the server already on vacation.
    """
    waits = [0.0] * len(gaps)
    arrival = 0.0
    free = 0.0  # end of the last service
    for k, gap in enumerate(gaps):
        arrival += gap
        if arrival < free:
            start = free
        elif next_vacation is None:
            start = arrival
        else:
            start = free
            while start <= arrival:
                start += next_vacation()
        waits[k] = start - arrival
        free = start + services[k]
    return waits


def _waits(config: SimConfig) -> list:
    streams = Streams(config.seed)
    count = config.target_departures
    gaps = _exp(streams.arrival, config.arrival_rate, count).tolist()
    services = sample(config.service, streams.service, count,
                      branch_rng=streams.branch).tolist()
    vacations = _VacationSource(config.vacation, streams).next if config.vacation else None
    return queue_waits(gaps, services, vacations)


def simulate_queue(config: SimConfig) -> SimResult:
    """Mean wait in queue (arrival to service start) with batch-means error."""
    waits = _waits(config)
    skip = int(config.warmup_fraction * config.target_departures)
    batch_size = (config.target_departures - skip) // config.batch_count
    if batch_size == 0:
        raise DomainError("no departures left for batch means after warm-up")
    used = batch_size * config.batch_count
    kept = np.asarray(waits[skip:skip + used])
    batch_means = kept.reshape(config.batch_count, batch_size).mean(axis=1)
    return SimResult(
        mean_wait=float(kept.mean()),
        std_error=float(batch_means.std(ddof=1) / math.sqrt(config.batch_count)),
        departures_used=used,
        batch_count=config.batch_count,
        seed=config.seed,
    )


def simulate_h2_queue(page: PageProfile, target_departures: int = 1_000_000,
                      seed: int = 0, **kwargs) -> SimResult:
    service = Hyper2(h2_from_page(page))
    return simulate_queue(SimConfig(page.request_rate, service, None,
                                    target_departures, seed=seed, **kwargs))


@dataclass(frozen=True)
class RRSchedule:
    completions: list
    waits: list
    packets: list = field(repr=False)

    @property
    def mean_wait(self) -> float:
        return sum(self.waits) / len(self.waits)

    def order(self) -> list:
        """User index served in each slot, slot by slot."""
        out = []
        active = list(range(len(self.packets)))
        rnd = 0
        while active:
            out.extend(active)
            rnd += 1
            active = [u for u in active if self.packets[u] > rnd]
        return out


def rr_schedule(users: int, packets: Union[int, Sequence[int]], slot: float = 1.0) -> RRSchedule:
    """Serve one packet per user per cycle until every user is done.

    ``packets`` may be a single count shared by all users or one count per
    user. Slot k (0-based) ends at (k + 1) * slot; a user's wait is its
    completion time minus its own packets * slot. Rounds in which nobody
    finishes are skipped as a block.
    """
    if users < 1 or slot <= 0:
        raise DomainError(f"need users >= 1 and slot > 0, got {users}, {slot}")
    counts = [packets] * users if isinstance(packets, int) else list(packets)
    if len(counts) != users or min(counts) < 1:
        raise DomainError("every user needs at least one packet")

    last_slot = [0] * users
    active = list(range(users))
    served = 0  # slots elapsed
    done_rounds = 0
    for level in sorted(set(counts)):
        # rounds done_rounds+1 .. level-1 serve the whole active set; round `level` finishes some
        served += (level - 1 - done_rounds) * len(active)
        for pos, u in enumerate(active):
            if counts[u] == level:
                last_slot[u] = served + pos
        served += len(active)
        done_rounds = level
        active = [u for u in active if counts[u] > level]

    completions = [(last_slot[u] + 1) * slot for u in range(users)]
    waits = [completions[u] - counts[u] * slot for u in range(users)]
    return RRSchedule(completions, waits, counts)
