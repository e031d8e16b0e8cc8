"""storesim: agent-based discrete-event simulation of a retail department.

Customers with typed shopping dispositions browse, seek help, queue, pay,
renege and come back; daily satisfaction drives word-of-mouth growth or loss
of the customer pool. A harness runs replicated parameter sweeps and writes
deterministic CSV/JSON outputs.
"""

from .agents import CustomerAgent, ExitReason, SatisfactionWeights, StaffMember, StaffRole, classify_visit
from .behavior import (
    CUSTOMER_TYPES,
    CustomerTypeProfile,
    Likelihood,
    TriangularParams,
    bernoulli,
    correct_threshold,
    correct_triangular,
    sample_triangular,
)
from .engine import EventCalendar, RngStreams, SimClock, Simulation, run_scenario
from .harness import ExperimentPlan, HarnessResult, replication_seed, run_replications
from .metrics import DailyRecord, RunSummary, emit_outputs
from .population import (
    WOM_DYNAMIC,
    WOM_NONE,
    WOM_STATIC,
    DepartmentClosed,
    PopulationState,
    WomParams,
    additional_customers,
    core_customers_per_day,
)
from .queues import ServiceQueue
from .scenario import Scenario, ScenarioError, load_scenario, preset
from .staffing import StaffPool, StaffRequirement

__version__ = "0.1.0"

__all__ = [
    "CUSTOMER_TYPES",
    "CustomerAgent",
    "CustomerTypeProfile",
    "DailyRecord",
    "DepartmentClosed",
    "EventCalendar",
    "ExitReason",
    "ExperimentPlan",
    "HarnessResult",
    "Likelihood",
    "PopulationState",
    "RngStreams",
    "RunSummary",
    "SatisfactionWeights",
    "Scenario",
    "ScenarioError",
    "ServiceQueue",
    "SimClock",
    "Simulation",
    "StaffMember",
    "StaffPool",
    "StaffRequirement",
    "StaffRole",
    "TriangularParams",
    "WOM_DYNAMIC",
    "WOM_NONE",
    "WOM_STATIC",
    "WomParams",
    "additional_customers",
    "bernoulli",
    "classify_visit",
    "core_customers_per_day",
    "correct_threshold",
    "correct_triangular",
    "emit_outputs",
    "load_scenario",
    "preset",
    "replication_seed",
    "run_replications",
    "run_scenario",
    "sample_triangular",
    "__version__",
]
