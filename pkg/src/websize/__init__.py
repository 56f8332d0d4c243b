"""Web object sizing from queueing-delay equalities, with simulation oracles."""

from .desim import (Deterministic, Exponential, Hyper2, SimConfig, SimResult, rr_schedule,
                    simulate_h2_queue, simulate_queue)
from .errors import DomainError, InfeasibleSizing
from .queueing import (HyperExp2, PageProfile, ServiceMoments, VacationSpec, fdm_wait,
                       h2_from_page, h2_moments, h2_wait, md1_wait, mg1_vacation_wait,
                       pk_wait, tdm_wait, vacation_residual)
from .sizing import (DelayModel, SizingResult, WorkloadParams, integerize_users, n_for_h2,
                     n_for_tdm, object_size, packets_for_size, rr_wait, segment_gap, size_ratio,
                     solve_users_raw)

__version__ = "0.1.0"
