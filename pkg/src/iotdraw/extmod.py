"""Pluggable analysis modules invoked once per simulation run.

A module is a named hook taking a read-only snapshot of the system and
returning its findings as text (the built-ins return CSV).  Hooks see a
deep copy of the model plus the current battery levels, so nothing a
hook does can disturb the run that invoked it.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Callable

from .analysis import enumerate_deployments, evaluate_scenarios, rank_scenarios, scenarios_to_csv
from .model import IoTSystemModel, ModelError


@dataclass(frozen=True)
class SystemSnapshot:
    """What an execution module is allowed to look at."""

    model: IoTSystemModel
    tick: int
    residual_energy_mah: dict[str, float]


Hook = Callable[[SystemSnapshot], str]


class ModuleRegistry:
    """Name-to-hook table used to resolve declared execution modules."""

    def __init__(self):
        self._hooks: dict[str, Hook] = {}

    def names(self) -> list[str]:
        return sorted(self._hooks)

    def resolve(self, name: str) -> Hook:
        try:
            return self._hooks[name]
        except KeyError:
            known = ", ".join(self.names()) or "none"
            raise ModelError(f"unknown execution module {name!r} (registered: {known})") from None


def register_module(registry: ModuleRegistry, name: str, hook: Hook) -> ModuleRegistry:
    if not name:
        raise ModelError("execution module needs a name")
    if name in registry._hooks:
        raise ModelError(f"execution module {name!r} is already registered")
    registry._hooks[name] = hook
    return registry


def invoke_module(registry: ModuleRegistry, name: str, snapshot: SystemSnapshot) -> str:
    return registry.resolve(name)(snapshot)


def take_snapshot(state) -> SystemSnapshot:
    """Freeze the interesting parts of a running simulation for hooks."""
    return SystemSnapshot(
        model=copy.deepcopy(state.model),
        tick=state.global_timer,
        residual_energy_mah={name: rt.battery.residual_mah
                             for name, rt in state.devices.items()},
    )


def _deployment_scenarios(snapshot: SystemSnapshot) -> str:
    return scenarios_to_csv(enumerate_deployments(snapshot.model))


def _availability_analysis(snapshot: SystemSnapshot) -> str:
    scenarios = evaluate_scenarios(snapshot.model)
    return scenarios_to_csv(rank_scenarios(scenarios, "availability"))


def _response_time_analysis(snapshot: SystemSnapshot) -> str:
    scenarios = evaluate_scenarios(snapshot.model)
    return scenarios_to_csv(rank_scenarios(scenarios, "response-time"))


def default_registry() -> ModuleRegistry:
    """A fresh registry holding the built-in analyses."""
    registry = ModuleRegistry()
    register_module(registry, "DeploymentScenarios", _deployment_scenarios)
    register_module(registry, "AvailabilityAnalysis", _availability_analysis)
    register_module(registry, "ResponseTimeAnalysis", _response_time_analysis)
    return registry
