"""Simulation-vs-formula agreement grid used by ``websize validate`` and the tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .desim import (Deterministic, Distribution, Exponential, Hyper2, SimConfig,
                    SimResult, simulate_queue)
from .queueing import (PageProfile, VacationSpec, h2_branches, h2_from_page, h2_wait,
                       mg1_vacation_wait, pk_wait, tdm_wait)

# Unit-mean service laws; the H2 law has the N = 2 page shape (SCV 1.25).
SERVICES = {
    "det": Deterministic(1.0),
    "exp": Exponential(1.0),
    "h2": Hyper2(h2_branches(2.0 / 3.0, 2)),
}
VACATIONS = {
    "none": None,
    "det": Deterministic(1.0),
    "exp": Exponential(1.0),
}
LOADS = (0.1, 0.3, 0.5, 0.7)

PRESETS = {
    # name: (departures, default tolerance for agreement, for decomposition)
    "standard": (1_000_000, 0.02, 0.03),
    "quick": (100_000, 0.10, 0.10),  # ~3 sigma for the H2 cases at 1e5 departures
}


@dataclass(frozen=True)
class OracleCase:
    label: str
    config: SimConfig
    expected: float
    # decomposition cases compare config minus baseline against `expected`
    baseline: Optional[SimConfig] = None


@dataclass(frozen=True)
class Outcome:
    label: str
    simulated: float
    expected: float
    rel_error: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.label} sim={self.simulated:.6g} formula={self.expected:.6g} "
                f"rel_err={self.rel_error:+.4f} tol={self.tolerance:g}")


def _vacation_spec(v: Distribution) -> VacationSpec:
    m = v.moments
    return VacationSpec(m.mean, m.second_moment)


def _residual(v: Distribution) -> float:
    m = v.moments
    return m.second_moment / (2.0 * m.mean)


def grid_cases(departures: int = 1_000_000, seed: int = 0) -> list:
    """Load x service x vacation grid plus a vacation-decomposition case per vacation law."""
    cases = []
    for lam in LOADS:
        for sname, service in SERVICES.items():
            base = SimConfig(lam, service, None, departures, seed=seed)
            for vname, vac in VACATIONS.items():
                cfg = SimConfig(lam, service, vac, departures, seed=seed)
                tag = f"lam={lam:g} service={sname} vacation={vname}"
                if vac is None:
                    expected = pk_wait(lam, service.moments)
                else:
                    expected = mg1_vacation_wait(lam, service.moments, _vacation_spec(vac))
                cases.append(OracleCase(tag, cfg, expected))
                if vac is not None:
                    cases.append(OracleCase(f"decomposition {tag}", cfg, _residual(vac), base))
    return cases


def tdm_case(lam: float, streams: int, departures: int = 1_000_000, seed: int = 0) -> OracleCase:
    """Per-stream arrivals lam/m, service m slots, vacation m slots."""
    cfg = SimConfig(lam / streams, Deterministic(streams), Deterministic(streams),
                    departures, seed=seed)
    return OracleCase(f"tdm lam={lam:g} m={streams}", cfg, tdm_wait(lam, streams))


def h2_case(lam: float, n: int, departures: int = 1_000_000, seed: int = 0) -> OracleCase:
    page = PageProfile(lam, n)
    cfg = SimConfig(lam, Hyper2(h2_from_page(page)), None, departures, seed=seed)
    return OracleCase(f"h2 lam={lam:g} N={n}", cfg, h2_wait(page))


def preset_cases(preset: str = "standard", seed: int = 0) -> list:
    departures = PRESETS[preset][0]
    cases = grid_cases(departures, seed)
    cases.append(tdm_case(0.5, 4, departures, seed))
    for lam in (0.01, 0.1):
        for n in (2, 5, 9):
            cases.append(h2_case(lam, n, departures, seed))
    return cases


def run_cases(cases: Iterable[OracleCase], tolerance: float = 0.02,
              decomposition_tolerance: float = 0.03) -> Iterator[Outcome]:
    """Simulate each case (memoized per config) and yield outcomes in order."""
    cache: dict = {}

    def sim(cfg: SimConfig) -> SimResult:
        if cfg not in cache:
            cache[cfg] = simulate_queue(cfg)
        return cache[cfg]

    for case in cases:
        value = sim(case.config).mean_wait
        tol = tolerance
        if case.baseline is not None:
            value -= sim(case.baseline).mean_wait
            tol = decomposition_tolerance
        err = value / case.expected - 1.0
        yield Outcome(case.label, value, case.expected, err, tol, abs(err) <= tol)
