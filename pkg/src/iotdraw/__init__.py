"""Design-time toolkit for service-oriented periodic IoT systems.

Parse a textual system model, validate it against the design rules,
execute it tick by tick with battery accounting, and explore the
deployment space: lifetime, data freshness, placement eligibility,
availability, and response time.
"""

from .analysis import (
    DeploymentScenario, SweepRow, SweepTable, device_periodic_component,
    enumerate_deployments, evaluate_scenarios, lifetime_sweep, per_request_mah,
    platform_availability, predicted_lifetime, rank_scenarios, scenario_availability,
    scenario_response_time, scenario_text, scenarios_to_csv,
)
from .diagnostics import Diagnostic, SourceSpan
from .energy import (
    BatteryState, EnergyAmount, drain, initial_battery, joules_to_mah,
    lifetime_closed_form, per_request_drain_mah, sense_energy, transmit_energy,
)
from .engine import (
    CacheEntry, ChoreographyOutcome, EventKind, FreshnessPolicy, SampleStream,
    SimEvent, SimulationReport, SimulationState, eval_condition,
    execute_choreography, gateway_uplink, initial_state, next_sample, run_simulation,
)
from .extmod import (
    ModuleRegistry, SystemSnapshot, default_registry, invoke_module,
    register_module, take_snapshot,
)
from .model import (
    Application, Component, ConditionExpr, ConstantSource, DeviceEnergyProfile,
    EventRequest, GeoLocation, IoTSystemModel, MessageField, MessageType,
    ModelError, NetworkLink, PeriodicRequest, PhysicalEntity, Platform,
    PlatformTier, Route, ServiceContract, ServicePort, SimConfig, Task, TaskKind,
    TraceSource, UniformSource, shortest_path_latency, single_source_routes,
)
from .modelfmt import load_model, parse_model, serialize_model
from .rng import SplitMix64, derive_seed
from .validate import (
    DependencyEdge, TaskBinding, ValidationReport, check_protocol_bridge,
    dependency_edges, eligible_hosts, interface_providers, task_binding,
    validate_model,
)

__version__ = "0.1.0"
