"""Static validation: do the declared parts actually fit together?

Structural soundness (unique names, resolvable references) is already
guaranteed by model construction.  This layer checks the service-level
story: every required interface is governed by exactly one contract and
realized by some provider, ports are typed by contract interfaces,
requested tasks exist, event conditions talk about fields that some
periodic sample can deliver, and consumers can actually route to fixed
providers under the protocol rules.

Protocol bridging follows the fog cross-proxy convention: two ports may
interact either when they speak the same application protocol
(case-insensitive) or when at least one fog node lies on the network
path between them and can translate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .diagnostics import ERROR, WARNING, Diagnostic, SourceSpan
from .model import (
    Component, IoTSystemModel, ModelError, Platform, PlatformTier, ServiceContract,
    ServicePort, Task, single_source_routes,
)


# --------------------------------------------------------------------------
# Binding resolution (shared with the engine and the analyses)


@dataclass(frozen=True)
class ProviderRef:
    """One realization of an interface: a platform port or a component port."""

    kind: str  # "platform" | "component"
    name: str
    port: ServicePort


@dataclass(frozen=True)
class TaskBinding:
    """A requested task resolved to its contract and serving provider."""

    task: Task
    contract: ServiceContract
    provider: ProviderRef


def interface_providers(model: IoTSystemModel, interface: str) -> list[ProviderRef]:
    """All ports realizing an interface, sorted by provider name."""
    refs = []
    for platform in model.platforms:
        for port in platform.services:
            if port.interface == interface:
                refs.append(ProviderRef("platform", platform.name, port))
    for component in model.all_components():
        port = component.provided_service
        if port is not None and port.interface == interface:
            refs.append(ProviderRef("component", component.name, port))
    return sorted(refs, key=lambda r: (r.name, r.port.name))


def contracts_for_interface(model: IoTSystemModel, interface: str) -> list[ServiceContract]:
    return [c for c in model.contracts if c.provider_interface == interface]


def contracts_for_task(model: IoTSystemModel, task_name: str) -> list[ServiceContract]:
    return [c for c in model.contracts if c.task(task_name) is not None]


def task_binding(model: IoTSystemModel, task_name: str) -> TaskBinding:
    """Resolve a task request to (contract, provider).

    When several providers realize the contract interface the
    lexicographically first provider name wins; the choice is
    deterministic and documented rather than load-balanced.
    """
    contracts = contracts_for_task(model, task_name)
    if not contracts:
        raise ModelError(f"no contract exposes task {task_name!r}")
    if len(contracts) > 1:
        names = ", ".join(sorted(c.name for c in contracts))
        raise ModelError(f"task {task_name!r} is ambiguous across contracts: {names}")
    contract = contracts[0]
    providers = interface_providers(model, contract.provider_interface)
    if not providers:
        raise ModelError(
            f"no provider realizes interface {contract.provider_interface!r} "
            f"(needed by task {task_name!r})")
    return TaskBinding(contract.task(task_name), contract, providers[0])


@dataclass(frozen=True)
class DependencyEdge:
    """A consumer component wired to the provider chosen for one requirement."""

    consumer: str
    interface: str
    provider_kind: str  # "platform" | "component"
    provider: str
    consumer_port: ServicePort | None
    provider_port: ServicePort


def dependency_edges(model: IoTSystemModel) -> list[DependencyEdge]:
    """One edge per (component, required interface), unresolvable ones skipped.

    Validation reports the skipped ones; analyses work on what resolves.
    """
    edges = []
    for component in model.all_components():
        for interface in component.required_interfaces:
            providers = interface_providers(model, interface)
            if not providers:
                continue
            chosen = providers[0]
            edges.append(DependencyEdge(
                consumer=component.name,
                interface=interface,
                provider_kind=chosen.kind,
                provider=chosen.name,
                consumer_port=component.provided_service,
                provider_port=chosen.port,
            ))
    return edges


# --------------------------------------------------------------------------
# Protocol bridging


def check_protocol_bridge(model: IoTSystemModel, consumer_port: ServicePort,
                          provider_port: ServicePort, path: tuple[str, ...]) -> bool:
    """True when the two ports can interact over the given path.

    Equal protocols always pass; differing protocols pass only when a fog
    platform sits somewhere on the path (endpoints included) to act as
    cross-proxy.  Symmetric in the two ports.
    """
    if consumer_port.protocol.lower() == provider_port.protocol.lower():
        return True
    for name in path:
        platform = model.platform(name)
        if platform is not None and platform.tier is PlatformTier.FOG:
            return True
    return False


def eligible_hosts(model: IoTSystemModel, component: Component) -> list[Platform]:
    """Platforms providing every software item the component requires, by name."""
    return [p for p in sorted(model.platforms, key=lambda p: p.name)
            if component.required_software <= p.provided_software]


# --------------------------------------------------------------------------
# The validator


@dataclass(frozen=True)
class ValidationReport:
    model_name: str
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return all(d.severity != ERROR for d in self.diagnostics)

    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == ERROR)

    def to_text(self) -> str:
        lines = [d.render() for d in self.diagnostics]
        verdict = "ok" if self.ok else f"{len(self.errors())} error(s)"
        lines.append(f"model {self.model_name!r}: {verdict}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["severity", "code", "message", "file", "line"])
        for d in self.diagnostics:
            writer.writerow([d.severity, d.code, d.message,
                             d.span.file if d.span else "",
                             d.span.line if d.span else ""])
        return buffer.getvalue()


def validate_model(model: IoTSystemModel, path: str | None = None) -> ValidationReport:
    """Check contract-level consistency; see the module docstring for the rules.

    Pure function of the model: validating twice yields the same report.
    """
    span = SourceSpan(path, 1, 1) if path else None
    diagnostics: list[Diagnostic] = []

    def error(code: str, message: str):
        diagnostics.append(Diagnostic(ERROR, message, span, code=code))

    def warning(code: str, message: str):
        diagnostics.append(Diagnostic(WARNING, message, span, code=code))

    # A contract is the sole authority for its provider interface.
    by_interface: dict[str, list[str]] = {}
    for contract in model.contracts:
        by_interface.setdefault(contract.provider_interface, []).append(contract.name)
    for interface, names in sorted(by_interface.items()):
        if len(names) > 1:
            error("ambiguous-contract",
                  f"interface {interface!r} is declared by several contracts: {', '.join(sorted(names))}")

    declared = {c.provider_interface for c in model.contracts} | {c.consumer_interface for c in model.contracts}
    consumer_sides = {c.consumer_interface: c.name for c in model.contracts}

    # Ports must be typed by contract interfaces.
    for platform in model.platforms:
        for port in platform.services:
            if port.interface not in declared:
                error("undeclared-interface",
                      f"service {port.name!r} on platform {platform.name!r} uses interface "
                      f"{port.interface!r}, which no contract declares")
    for component in model.all_components():
        port = component.provided_service
        if port is not None and port.interface not in declared:
            error("undeclared-interface",
                  f"service {port.name!r} on component {component.name!r} uses interface "
                  f"{port.interface!r}, which no contract declares")

    # Requirements resolve through contracts to concrete providers.
    for component in model.all_components():
        for interface in component.required_interfaces:
            contracts = contracts_for_interface(model, interface)
            if not contracts:
                if interface in consumer_sides:
                    error("conjugate-mismatch",
                          f"component {component.name!r} requires {interface!r}, the consumer side of "
                          f"contract {consumer_sides[interface]!r}; requirements must name the provider side")
                else:
                    error("missing-contract",
                          f"component {component.name!r} requires interface {interface!r}, "
                          f"which no contract declares")
                continue
            if len(contracts) > 1:
                continue  # already reported as ambiguous-contract
            if not interface_providers(model, interface):
                error("no-provider",
                      f"nothing provides interface {interface!r} "
                      f"(required by component {component.name!r})")

    # Requested tasks must resolve to exactly one contract with a provider.
    for component in model.all_components():
        requests = []
        if component.periodic_request is not None:
            requests.append(("periodic", component.periodic_request.task))
        if component.event_request is not None:
            requests.append(("event", component.event_request.task))
        for which, task_name in requests:
            contracts = contracts_for_task(model, task_name)
            if not contracts:
                error("unknown-task",
                      f"component {component.name!r} has a {which} request for task "
                      f"{task_name!r}, which no contract exposes")
            elif len(contracts) > 1:
                error("ambiguous-task",
                      f"task {task_name!r} (requested by {component.name!r}) is exposed by several "
                      f"contracts: {', '.join(sorted(c.name for c in contracts))}")
            elif not interface_providers(model, contracts[0].provider_interface):
                error("no-provider",
                      f"nothing provides interface {contracts[0].provider_interface!r} "
                      f"(needed by task {task_name!r} requested by {component.name!r})")

    # Event conditions must reference a field some periodic sample delivers.
    for app in model.applications:
        fields: set[str] = set()
        has_periodic = False
        for component in app.components:
            if component.periodic_request is None:
                continue
            has_periodic = True
            contracts = contracts_for_task(model, component.periodic_request.task)
            if len(contracts) == 1:
                fields.update(contracts[0].message_type.field_names())
        for component in app.components:
            if component.event_request is None:
                continue
            condition = component.event_request.condition
            if not has_periodic:
                warning("event-never-triggers",
                        f"event request of {component.name!r} can never trigger: application "
                        f"{app.name!r} has no periodic request to piggyback on")
            elif condition.field not in fields:
                error("unknown-condition-field",
                      f"condition of {component.name!r} tests field {condition.field!r}, which no "
                      f"periodic sample in application {app.name!r} delivers")

    # Consumers must be able to reach fixed (platform) providers under the
    # protocol rules from at least one software-eligible host.
    hosts_cache: dict[str, list[Platform]] = {}
    routes_cache: dict[str, dict] = {}

    def routes_from(name: str):
        if name not in routes_cache:
            routes_cache[name] = single_source_routes(model, name)
        return routes_cache[name]

    for component in model.all_components():
        hosts_cache[component.name] = eligible_hosts(model, component)
        if not hosts_cache[component.name]:
            warning("no-eligible-host",
                    f"no platform provides the software component {component.name!r} requires")

    for edge in dependency_edges(model):
        hosts = hosts_cache[edge.consumer]
        if not hosts:
            continue
        reachable = False
        if edge.provider_kind == "platform":
            for host in hosts:
                if host.name == edge.provider:
                    reachable = True
                    break
                route = routes_from(host.name).get(edge.provider)
                if route is None:
                    continue
                if edge.consumer_port is None or check_protocol_bridge(
                        model, edge.consumer_port, edge.provider_port, route.path):
                    reachable = True
                    break
        else:
            provider_component = model.component(edge.provider)
            provider_hosts = hosts_cache.get(edge.provider) or eligible_hosts(model, provider_component)
            for host in hosts:
                for provider_host in provider_hosts:
                    if host.name == provider_host.name:
                        reachable = True
                        break
                    route = routes_from(host.name).get(provider_host.name)
                    if route is None:
                        continue
                    if edge.consumer_port is None or check_protocol_bridge(
                            model, edge.consumer_port, edge.provider_port, route.path):
                        reachable = True
                        break
                if reachable:
                    break
        if not reachable:
            error("protocol-unroutable",
                  f"component {edge.consumer!r} cannot reach provider {edge.provider!r} of interface "
                  f"{edge.interface!r} from any eligible host under the protocol rules")

    return ValidationReport(model.name, tuple(diagnostics))
