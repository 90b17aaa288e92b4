"""Domain model for service-oriented periodic IoT systems.

A system is a set of platforms (clouds, fogs, battery-powered devices)
joined by network links, plus applications whose components consume
services that platforms or other components provide under declared
contracts.  Instances are immutable; anything that changes over a run
(timers, batteries, caches) lives in the simulation state instead, so a
model can be shared freely between threads and analyses.

Models are usually produced by :func:`iotdraw.modelfmt.parse_model`, but
they can be assembled in code through :func:`build_system`, which takes
the same declaration records the parser emits.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum

from .diagnostics import SourceSpan


class ModelError(ValueError):
    """Raised for invariant violations and unresolvable references.

    ``issues`` holds one entry per problem so callers that build models
    from text can surface all of them at once.
    """

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [BuildIssue(issues)]
        self.issues = list(issues)
        super().__init__("; ".join(issue.message for issue in self.issues))


@dataclass(frozen=True)
class BuildIssue:
    message: str
    subject: str = ""
    span: SourceSpan | None = None


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelError(message)


# --------------------------------------------------------------------------
# Geography and physical context


@dataclass(frozen=True)
class GeoLocation:
    latitude: float
    longitude: float

    def __post_init__(self):
        _require(-90.0 <= self.latitude <= 90.0, f"latitude out of range: {self.latitude}")
        _require(-180.0 <= self.longitude <= 180.0, f"longitude out of range: {self.longitude}")


@dataclass(frozen=True)
class PhysicalEntity:
    """A real-world object a device is attached to (a pole, a pipe, a wall)."""

    name: str
    location: GeoLocation

    def __post_init__(self):
        _require(bool(self.name), "physical entity needs a name")


# --------------------------------------------------------------------------
# Energy and data acquisition


@dataclass(frozen=True)
class DeviceEnergyProfile:
    """Battery and radio parameters of one device.

    Unit conventions follow the first-order sensing/transmission energy
    model: packet sizes in kilobits, supply voltage in volts, sense
    current in milliamperes, sense duration in milliseconds, electronics
    energy in nanojoules per bit, and amplifier energy in picojoules per
    bit per meter^n.  ``residual_energy_mah`` is the build-time starting
    charge; it always equals the capacity in a freshly built model.
    """

    battery_capacity_mah: float
    residual_energy_mah: float
    supply_voltage_v: float
    sense_current_ma: float
    sense_duration_ms: float
    packet_kb: float
    e_elec_nj_per_bit: float
    e_amp_pj_per_bit_m: float
    loss_exponent_n: int
    depletion_threshold_mah: float = 5.0

    def __post_init__(self):
        _require(self.battery_capacity_mah > 0, "battery capacity must be positive")
        _require(0 <= self.residual_energy_mah <= self.battery_capacity_mah,
                 "residual charge must lie within the battery capacity")
        _require(self.supply_voltage_v > 0, "supply voltage must be positive")
        _require(self.sense_current_ma > 0, "sense current must be positive")
        _require(self.sense_duration_ms > 0, "sense duration must be positive")
        _require(self.packet_kb > 0, "packet size must be positive")
        _require(self.e_elec_nj_per_bit >= 0, "electronics energy must be non-negative")
        _require(self.e_amp_pj_per_bit_m >= 0, "amplifier energy must be non-negative")
        _require(self.loss_exponent_n >= 1, "path-loss exponent must be at least 1")
        _require(0 <= self.depletion_threshold_mah < self.battery_capacity_mah,
                 "depletion threshold must be below the battery capacity")


@dataclass(frozen=True)
class ConstantSource:
    value: float


@dataclass(frozen=True)
class UniformSource:
    """Uniform draws over the closed interval [lo, hi].

    ``seed`` pins this source to its own stream; when None the stream is
    derived from the model seed and the owning device's name.
    """

    lo: float
    hi: float
    seed: int | None = None

    def __post_init__(self):
        _require(self.lo <= self.hi, f"uniform bounds out of order: [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class TraceSource:
    """Replays a fixed sequence of readings, cycling at the end."""

    values: tuple[float, ...]

    def __post_init__(self):
        _require(len(self.values) > 0, "trace source needs at least one value")


DataSource = ConstantSource | UniformSource | TraceSource


# --------------------------------------------------------------------------
# Platforms and networking


class PlatformTier(Enum):
    CLOUD = "cloud"
    FOG = "fog"
    DEVICE = "device"


@dataclass(frozen=True)
class ServicePort:
    """A named service endpoint typed by a contract interface."""

    name: str
    interface: str
    protocol: str

    def __post_init__(self):
        _require(bool(self.name), "service port needs a name")
        _require(bool(self.interface), f"service port {self.name} needs an interface")
        _require(bool(self.protocol), f"service port {self.name} needs a protocol")


@dataclass(frozen=True)
class Platform:
    """A compute location: cloud datacenter, fog node, or edge device.

    Devices additionally carry an energy profile, a data source for their
    sensor readings, and the physical entity they are attached to.  All
    tiers may provide software and host services; whether a component may
    be deployed on a platform is decided by software matching alone.
    """

    name: str
    tier: PlatformTier
    location: GeoLocation
    cpu_frequency_ghz: float
    provided_software: frozenset[str]
    mtbf_hours: float
    mttr_hours: float
    services: tuple[ServicePort, ...] = ()
    attached_to: str | None = None
    energy: DeviceEnergyProfile | None = None
    data_source: DataSource | None = None

    def __post_init__(self):
        _require(bool(self.name), "platform needs a name")
        _require(self.cpu_frequency_ghz > 0, f"{self.name}: CPU frequency must be positive")
        _require(self.mtbf_hours > 0, f"{self.name}: MTBF must be positive")
        _require(self.mttr_hours >= 0, f"{self.name}: MTTR must be non-negative")
        if self.tier is PlatformTier.DEVICE:
            _require(self.energy is not None, f"device {self.name} needs an energy profile")
            _require(self.data_source is not None, f"device {self.name} needs a data source")
        else:
            _require(self.attached_to is None and self.energy is None and self.data_source is None,
                     f"{self.name}: entity attachment, energy, and data source are device-only")


@dataclass(frozen=True)
class NetworkLink:
    """Undirected link between two platforms; endpoints are stored sorted."""

    endpoint_a: str
    endpoint_b: str
    protocol: str
    latency_ms: float
    distance_m: float

    def __post_init__(self):
        _require(self.endpoint_a != self.endpoint_b, f"link endpoints must differ: {self.endpoint_a}")
        _require(self.latency_ms >= 0, "link latency must be non-negative")
        _require(self.distance_m > 0, "link distance must be positive")

    @property
    def endpoints(self) -> frozenset[str]:
        return frozenset((self.endpoint_a, self.endpoint_b))


# --------------------------------------------------------------------------
# Contracts, tasks, and applications


class TaskKind(Enum):
    SENSE = "sense"
    ACTUATE = "actuate"
    TRANSMIT = "transmit"
    RECEIVE = "receive"
    COMPUTE = "compute"


@dataclass(frozen=True)
class Task:
    name: str
    kind: TaskKind

    def __post_init__(self):
        _require(bool(self.name), "task needs a name")


FIELD_KINDS = ("number", "integer", "text", "boolean")


@dataclass(frozen=True)
class MessageField:
    name: str
    kind: str = "number"

    def __post_init__(self):
        _require(self.kind in FIELD_KINDS, f"unknown field kind: {self.kind}")


@dataclass(frozen=True)
class MessageType:
    name: str
    fields: tuple[MessageField, ...] = ()

    def field_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fields)


@dataclass(frozen=True)
class ServiceContract:
    """Pairs a provider interface with its consumer-side conjugate.

    The tasks listed here are what consumers may request; the message
    type describes the record a sensing task delivers.
    """

    name: str
    provider_interface: str
    consumer_interface: str
    tasks: tuple[Task, ...]
    message_type: MessageType

    def __post_init__(self):
        _require(bool(self.provider_interface), f"contract {self.name} needs a provider interface")
        _require(bool(self.consumer_interface), f"contract {self.name} needs a consumer interface")
        _require(self.provider_interface != self.consumer_interface,
                 f"contract {self.name}: conjugate interfaces must differ")
        _require(len(self.tasks) > 0, f"contract {self.name} needs at least one task")

    def task(self, name: str) -> Task | None:
        for t in self.tasks:
            if t.name == name:
                return t
        return None


CONDITION_OPS = ("<", "<=", ">", ">=", "=", "!=")


@dataclass(frozen=True)
class ConditionExpr:
    """Threshold test over one message field, e.g. ``level_cm > 20``."""

    field: str
    op: str
    threshold: float

    def __post_init__(self):
        _require(self.op in CONDITION_OPS, f"unknown condition operator: {self.op}")
        _require(bool(self.field), "condition needs a field name")

    def render(self) -> str:
        value = self.threshold
        text = str(int(value)) if value == int(value) else repr(value)
        return f"{self.field} {self.op} {text}"


@dataclass(frozen=True)
class PeriodicRequest:
    """Requests a contract task every ``interval_ticks`` ticks."""

    task: str
    interval_ticks: int

    def __post_init__(self):
        _require(self.interval_ticks >= 1, "request interval must be at least 1 tick")


@dataclass(frozen=True)
class EventRequest:
    """Requests a contract task whenever a delivered sample satisfies the condition."""

    task: str
    condition: ConditionExpr


@dataclass(frozen=True)
class Component:
    name: str
    mean_cpu_demand_cycles: float = 1.0
    required_software: frozenset[str] = frozenset()
    required_interfaces: tuple[str, ...] = ()
    provided_service: ServicePort | None = None
    periodic_request: PeriodicRequest | None = None
    event_request: EventRequest | None = None

    def __post_init__(self):
        _require(bool(self.name), "component needs a name")
        _require(self.mean_cpu_demand_cycles > 0, f"{self.name}: CPU demand must be positive")


@dataclass(frozen=True)
class Application:
    name: str
    region: GeoLocation
    components: tuple[Component, ...]

    def __post_init__(self):
        _require(len(self.components) > 0, f"application {self.name} needs at least one component")


@dataclass(frozen=True)
class ExecutionModuleDecl:
    """Reference to an analysis hook to run before the simulation loop."""

    module: str
    language: str = "python"
    code: str = "builtin"

    def __post_init__(self):
        _require(bool(self.module), "execution module declaration needs a module name")


@dataclass(frozen=True)
class SimConfig:
    """Static run parameters; the tick counter itself is simulation state."""

    simulation_time: int = 0
    tick_seconds: float = 60.0
    execution_modules: tuple[ExecutionModuleDecl, ...] = ()
    rng_seed: int = 0

    def __post_init__(self):
        _require(self.simulation_time >= 0, "simulation time must be non-negative")
        _require(self.tick_seconds > 0, "tick duration must be positive")


@dataclass(frozen=True)
class IoTSystemModel:
    name: str
    platforms: tuple[Platform, ...] = ()
    networks: tuple[NetworkLink, ...] = ()
    applications: tuple[Application, ...] = ()
    contracts: tuple[ServiceContract, ...] = ()
    physical_entities: tuple[PhysicalEntity, ...] = ()
    interfaces: tuple[str, ...] = ()
    sim_config: SimConfig = field(default_factory=SimConfig)

    def platform(self, name: str) -> Platform | None:
        for p in self.platforms:
            if p.name == name:
                return p
        return None

    def entity(self, name: str) -> PhysicalEntity | None:
        for e in self.physical_entities:
            if e.name == name:
                return e
        return None

    def all_components(self) -> tuple[Component, ...]:
        return tuple(c for app in self.applications for c in app.components)

    def component(self, name: str) -> Component | None:
        for c in self.all_components():
            if c.name == name:
                return c
        return None

    def application_of(self, component_name: str) -> Application | None:
        for app in self.applications:
            if any(c.name == component_name for c in app.components):
                return app
        return None


# --------------------------------------------------------------------------
# Declarations: the parser's output and build_system's input


@dataclass
class EnergyDecl:
    """Raw numbers for a device energy profile; defaults model a generic
    low-power sensing node."""

    battery_capacity_mah: float = 100.0
    supply_voltage_v: float = 3.0
    sense_current_ma: float = 25.0
    sense_duration_ms: float = 10.0
    packet_kb: float = 2.0
    e_elec_nj_per_bit: float = 50.0
    e_amp_pj_per_bit_m: float = 100.0
    loss_exponent_n: int = 2
    depletion_threshold_mah: float = 5.0


@dataclass
class SystemDecl:
    name: str = "system"
    simulation_time: int = 0
    tick_seconds: float = 60.0
    rng_seed: int = 0
    execution_modules: list[ExecutionModuleDecl] = field(default_factory=list)
    span: SourceSpan | None = None


@dataclass
class EntityDecl:
    name: str
    location: tuple[float, float] = (0.0, 0.0)
    span: SourceSpan | None = None


@dataclass
class InterfaceDecl:
    name: str
    span: SourceSpan | None = None


@dataclass
class PlatformDecl:
    name: str
    tier: PlatformTier = PlatformTier.CLOUD
    location: tuple[float, float] = (0.0, 0.0)
    cpu_frequency_ghz: float = 1.0
    provided_software: list[str] = field(default_factory=list)
    mtbf_hours: float = 8760.0
    mttr_hours: float = 0.0
    services: list[ServicePort] = field(default_factory=list)
    attached_to: str | None = None
    energy: EnergyDecl | None = None
    data_source: DataSource | None = None
    span: SourceSpan | None = None


@dataclass
class ContractDecl:
    name: str
    provider_interface: str = ""
    consumer_interface: str = ""
    tasks: list[Task] = field(default_factory=list)
    message_name: str = ""
    message_fields: list[MessageField] = field(default_factory=list)
    span: SourceSpan | None = None


@dataclass
class ComponentDecl:
    name: str
    mean_cpu_demand_cycles: float = 1.0
    required_software: list[str] = field(default_factory=list)
    required_interfaces: list[str] = field(default_factory=list)
    provided_service: ServicePort | None = None
    periodic_request: PeriodicRequest | None = None
    event_request: EventRequest | None = None
    span: SourceSpan | None = None


@dataclass
class ApplicationDecl:
    name: str
    region: tuple[float, float] = (0.0, 0.0)
    component_names: list[str] = field(default_factory=list)
    span: SourceSpan | None = None


@dataclass
class LinkDecl:
    endpoint_a: str
    endpoint_b: str
    protocol: str = "IP"
    latency_ms: float = 0.0
    distance_m: float = 1.0
    span: SourceSpan | None = None


@dataclass
class Declarations:
    """Everything a model file declares, before cross-references are resolved."""

    system: SystemDecl | None = None
    entities: list[EntityDecl] = field(default_factory=list)
    interfaces: list[InterfaceDecl] = field(default_factory=list)
    platforms: list[PlatformDecl] = field(default_factory=list)
    contracts: list[ContractDecl] = field(default_factory=list)
    components: list[ComponentDecl] = field(default_factory=list)
    applications: list[ApplicationDecl] = field(default_factory=list)
    links: list[LinkDecl] = field(default_factory=list)


def _check_unique(issues: list[BuildIssue], kind: str, decls) -> None:
    seen: dict[str, SourceSpan | None] = {}
    for d in decls:
        if d.name in seen:
            issues.append(BuildIssue(f"duplicate identifier: {kind} {d.name!r}", d.name, d.span))
        seen[d.name] = d.span


def build_system(decls: Declarations) -> IoTSystemModel:
    """Resolve a declaration set into an immutable, structurally sound model.

    Checks identifier uniqueness within each category, resolves every
    name reference (entities, components, link endpoints, declared
    interfaces), and enforces per-type invariants.  Contract-level
    consistency (whether requested tasks and interfaces are actually
    provided) is the validator's job, so models that are structurally
    sound but semantically broken can still be constructed and reported
    on.  Raises :class:`ModelError` carrying every issue found.
    """
    issues: list[BuildIssue] = []

    _check_unique(issues, "entity", decls.entities)
    _check_unique(issues, "interface", decls.interfaces)
    _check_unique(issues, "platform", decls.platforms)
    _check_unique(issues, "contract", decls.contracts)
    _check_unique(issues, "component", decls.components)
    _check_unique(issues, "application", decls.applications)

    entity_names = {e.name for e in decls.entities}
    platform_names = {p.name for p in decls.platforms}
    component_names = {c.name for c in decls.components}
    interface_names = {i.name for i in decls.interfaces}

    def guard(fn, subject: str, span: SourceSpan | None):
        # Collect constructor rejections instead of stopping at the first.
        try:
            return fn()
        except ModelError as exc:
            for issue in exc.issues:
                issues.append(BuildIssue(f"{subject}: {issue.message}", subject, span))
            return None

    entities = []
    for ed in decls.entities:
        built = guard(lambda ed=ed: PhysicalEntity(ed.name, GeoLocation(*ed.location)), ed.name, ed.span)
        if built:
            entities.append(built)

    # When the model declares interfaces explicitly, every interface name
    # used by a contract or port must be among them; without declarations
    # the names are free-form and contracts introduce them implicitly.
    def check_interface_ref(name: str, subject: str, span: SourceSpan | None):
        if interface_names and name and name not in interface_names:
            issues.append(BuildIssue(f"dangling reference: interface {name!r} (used by {subject})",
                                     subject, span))

    platforms = []
    for pd in decls.platforms:
        if pd.attached_to is not None and pd.attached_to not in entity_names:
            issues.append(BuildIssue(f"dangling reference: {pd.attached_to!r} (entity of device {pd.name})",
                                     pd.name, pd.span))
            continue
        if pd.tier is not PlatformTier.DEVICE and (
                pd.attached_to is not None or pd.energy is not None
                or pd.data_source is not None):
            issues.append(BuildIssue(f"{pd.name}: entity attachment, battery, and data "
                                     "source apply to devices only", pd.name, pd.span))
            continue
        for port in pd.services:
            check_interface_ref(port.interface, f"platform {pd.name}", pd.span)

        def make_platform(pd=pd):
            energy = None
            if pd.tier is PlatformTier.DEVICE:
                e = pd.energy or EnergyDecl()
                energy = DeviceEnergyProfile(
                    battery_capacity_mah=e.battery_capacity_mah,
                    residual_energy_mah=e.battery_capacity_mah,
                    supply_voltage_v=e.supply_voltage_v,
                    sense_current_ma=e.sense_current_ma,
                    sense_duration_ms=e.sense_duration_ms,
                    packet_kb=e.packet_kb,
                    e_elec_nj_per_bit=e.e_elec_nj_per_bit,
                    e_amp_pj_per_bit_m=e.e_amp_pj_per_bit_m,
                    loss_exponent_n=e.loss_exponent_n,
                    depletion_threshold_mah=e.depletion_threshold_mah,
                )
            return Platform(
                name=pd.name,
                tier=pd.tier,
                location=GeoLocation(*pd.location),
                cpu_frequency_ghz=pd.cpu_frequency_ghz,
                provided_software=frozenset(pd.provided_software),
                mtbf_hours=pd.mtbf_hours,
                mttr_hours=pd.mttr_hours,
                services=tuple(pd.services),
                attached_to=pd.attached_to,
                energy=energy,
                data_source=(pd.data_source or ConstantSource(0.0)) if pd.tier is PlatformTier.DEVICE else None,
            )

        built = guard(make_platform, pd.name, pd.span)
        if built:
            platforms.append(built)

    contracts = []
    for cd in decls.contracts:
        check_interface_ref(cd.provider_interface, f"contract {cd.name}", cd.span)
        check_interface_ref(cd.consumer_interface, f"contract {cd.name}", cd.span)
        built = guard(
            lambda cd=cd: ServiceContract(
                name=cd.name,
                provider_interface=cd.provider_interface,
                consumer_interface=cd.consumer_interface,
                tasks=tuple(cd.tasks),
                message_type=MessageType(cd.message_name or f"{cd.name}Message",
                                         tuple(cd.message_fields)),
            ),
            cd.name, cd.span,
        )
        if built:
            contracts.append(built)

    components: dict[str, Component] = {}
    for comp in decls.components:
        for iface in comp.required_interfaces:
            check_interface_ref(iface, f"component {comp.name}", comp.span)
        if comp.provided_service is not None:
            check_interface_ref(comp.provided_service.interface, f"component {comp.name}", comp.span)
        built = guard(
            lambda comp=comp: Component(
                name=comp.name,
                mean_cpu_demand_cycles=comp.mean_cpu_demand_cycles,
                required_software=frozenset(comp.required_software),
                required_interfaces=tuple(sorted(set(comp.required_interfaces))),
                provided_service=comp.provided_service,
                periodic_request=comp.periodic_request,
                event_request=comp.event_request,
            ),
            comp.name, comp.span,
        )
        if built:
            components[comp.name] = built

    # Every component must be claimed by exactly one application.
    claimed: dict[str, str] = {}
    applications = []
    for ad in decls.applications:
        members = []
        for cname in ad.component_names:
            if cname not in component_names:
                issues.append(BuildIssue(f"dangling reference: component {cname!r} (in application {ad.name})",
                                         ad.name, ad.span))
                continue
            if cname in claimed:
                issues.append(BuildIssue(
                    f"component {cname!r} belongs to both {claimed[cname]!r} and {ad.name!r}",
                    ad.name, ad.span))
                continue
            claimed[cname] = ad.name
            if cname in components:
                members.append(components[cname])
        built = guard(
            lambda ad=ad, members=members: Application(ad.name, GeoLocation(*ad.region), tuple(members)),
            ad.name, ad.span,
        )
        if built:
            applications.append(built)
    for cname in sorted(component_names - set(claimed)):
        issues.append(BuildIssue(f"component {cname!r} belongs to no application", cname))

    links = []
    seen_pairs: set[frozenset[str]] = set()
    for ld in decls.links:
        for end in (ld.endpoint_a, ld.endpoint_b):
            if end not in platform_names:
                issues.append(BuildIssue(f"dangling reference: platform {end!r} (link endpoint)",
                                         end, ld.span))
        if {ld.endpoint_a, ld.endpoint_b} <= platform_names:
            pair = frozenset((ld.endpoint_a, ld.endpoint_b))
            if pair in seen_pairs:
                issues.append(BuildIssue(
                    f"duplicate link between {min(pair)!r} and {max(pair)!r}", ld.endpoint_a, ld.span))
                continue
            seen_pairs.add(pair)
            a, b = sorted((ld.endpoint_a, ld.endpoint_b))
            built = guard(
                lambda ld=ld, a=a, b=b: NetworkLink(a, b, ld.protocol, ld.latency_ms, ld.distance_m),
                f"{a}<->{b}", ld.span,
            )
            if built:
                links.append(built)

    sd = decls.system or SystemDecl()
    config = guard(
        lambda: SimConfig(
            simulation_time=sd.simulation_time,
            tick_seconds=sd.tick_seconds,
            execution_modules=tuple(sd.execution_modules),
            rng_seed=sd.rng_seed,
        ),
        sd.name, sd.span,
    )

    if issues:
        raise ModelError(issues)

    # Collections are stored in name order, so two declarations of the
    # same system compare equal no matter how the blocks were arranged.
    return IoTSystemModel(
        name=sd.name,
        platforms=tuple(sorted(platforms, key=lambda p: p.name)),
        networks=tuple(sorted(links, key=lambda l: (l.endpoint_a, l.endpoint_b))),
        applications=tuple(sorted(applications, key=lambda a: a.name)),
        contracts=tuple(sorted(contracts, key=lambda c: c.name)),
        physical_entities=tuple(sorted(entities, key=lambda e: e.name)),
        interfaces=tuple(sorted(interface_names)),
        sim_config=config,
    )


# --------------------------------------------------------------------------
# Routing


@dataclass(frozen=True)
class Route:
    """A minimum-latency path between two platforms, endpoints included."""

    latency_ms: float
    path: tuple[str, ...]


def single_source_routes(model: IoTSystemModel, source: str) -> dict[str, Route]:
    """Dijkstra over link latencies from one platform to every reachable one.

    Ties are broken by comparing node-name paths, so equal-latency
    alternatives always resolve the same way.
    """
    if model.platform(source) is None:
        raise ModelError(f"unknown platform: {source!r}")
    adjacency: dict[str, list[tuple[str, float]]] = {}
    for link in model.networks:
        adjacency.setdefault(link.endpoint_a, []).append((link.endpoint_b, link.latency_ms))
        adjacency.setdefault(link.endpoint_b, []).append((link.endpoint_a, link.latency_ms))
    routes: dict[str, Route] = {}
    frontier: list[tuple[float, tuple[str, ...]]] = [(0.0, (source,))]
    while frontier:
        latency, path = heapq.heappop(frontier)
        node = path[-1]
        if node in routes:
            continue
        routes[node] = Route(latency, path)
        for neighbor, hop in adjacency.get(node, ()):
            if neighbor not in routes:
                heapq.heappush(frontier, (latency + hop, path + (neighbor,)))
    return routes


def shortest_path_latency(model: IoTSystemModel, source: str, target: str) -> Route | None:
    """Minimum-latency route between two platforms, or None when disconnected.

    A platform trivially reaches itself with zero latency.
    """
    if model.platform(target) is None:
        raise ModelError(f"unknown platform: {target!r}")
    return single_source_routes(model, source).get(target)
