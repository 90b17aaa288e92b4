"""Shared fixtures and model builders for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

MODELS_DIR = Path(__file__).resolve().parents[1] / "models"


@pytest.fixture(scope="session")
def models_dir() -> Path:
    return MODELS_DIR


@pytest.fixture(scope="session")
def padova_model():
    from iotdraw import load_model
    model = load_model(MODELS_DIR / "padova_fw.iot")
    assert not isinstance(model, list)
    return model


@pytest.fixture(scope="session")
def freshness_model():
    from iotdraw import load_model
    model = load_model(MODELS_DIR / "freshness_demo.iot")
    assert not isinstance(model, list)
    return model


TINY_TEMPLATE = """
system "tiny" {{
  simulation_time = {sim_time}
  tick_seconds = 60
  rng_seed = {rng_seed}
}}

entity "post_1" {{
  location = (1.0, 2.0)
}}

fog "hub" {{
  location = (1.0, 2.0)
  cpu_ghz = 1.6
  provides_software = ["jboss"]
  mtbf_hours = 99
  mttr_hours = 1
}}

device "probe_1" {{
  location = (1.0, 2.0)
  cpu_ghz = 0.1
  attached_to = "post_1"
  mtbf_hours = 800
  mttr_hours = 100
  battery {{
    capacity_mah = {capacity}
    supply_voltage_v = 3
    depletion_threshold_mah = 5
  }}
  sense {{
    current_ma = 25
    duration_ms = 10
  }}
  transmit {{
    packet_kb = 2
    e_elec_nj_per_bit = 50
    e_amp_pj_per_bit_m = 100
    loss_exponent = 2
  }}
  data = {data}
  service "ProbePort" {{
    interface = "Probe"
    protocol = "CoAP"
  }}
}}

link "probe_1" <-> "hub" {{
  protocol = "CoAP"
  latency_ms = 2
  distance_m = 10
}}

contract "RequestProbe" {{
  provider_interface = "Probe"
  consumer_interface = "ProbeClient"
  task "ReadProbe" = sense
  message "ProbeData" {{
    field "level" = number
  }}
}}

component "Watcher" {{
  cpu_demand_cycles = 500
  requires_software = ["jboss"]
  requires = ["Probe"]
  periodic "ReadProbe" {{
    interval_ticks = {interval}
  }}
}}

application "TinyApp" {{
  region = (1.0, 2.0)
  components = ["Watcher"]
}}
"""


def tiny_text(*, sim_time=10, interval=2, capacity=100, rng_seed=0,
              data='trace [5, 10, 20, 40]') -> str:
    """A one-device, one-consumer model; slots cover the common knobs."""
    return TINY_TEMPLATE.format(sim_time=sim_time, interval=interval,
                                capacity=capacity, rng_seed=rng_seed, data=data)


def tiny_model(**kwargs):
    from iotdraw import parse_model
    model = parse_model(tiny_text(**kwargs), "<tiny>")
    assert not isinstance(model, list), [d.render() for d in model]
    return model


ALARMED_TEMPLATE = """
system "alarmed" {{
  simulation_time = {sim_time}
  tick_seconds = 60
  rng_seed = {rng_seed}
}}

entity "post_1" {{
  location = (1.0, 2.0)
}}

fog "hub" {{
  location = (1.0, 2.0)
  cpu_ghz = 1.6
  provides_software = ["jboss"]
  mtbf_hours = 99
  mttr_hours = 1
}}

device "probe_1" {{
  location = (1.0, 2.0)
  cpu_ghz = 0.1
  attached_to = "post_1"
  mtbf_hours = 800
  mttr_hours = 100
  battery {{
    capacity_mah = {capacity}
    supply_voltage_v = 3
    depletion_threshold_mah = 5
  }}
  sense {{
    current_ma = 25
    duration_ms = 10
  }}
  transmit {{
    packet_kb = 2
    e_elec_nj_per_bit = 50
    e_amp_pj_per_bit_m = 100
    loss_exponent = 2
  }}
  data = {data}
  service "ProbePort" {{
    interface = "Probe"
    protocol = "CoAP"
  }}
}}

device "bell_1" {{
  location = (1.0, 2.0)
  cpu_ghz = 0.1
  attached_to = "post_1"
  mtbf_hours = 800
  mttr_hours = 100
  battery {{
    capacity_mah = 1000
    supply_voltage_v = 3
    depletion_threshold_mah = 5
  }}
  sense {{
    current_ma = 25
    duration_ms = 10
  }}
  transmit {{
    packet_kb = 2
    e_elec_nj_per_bit = 50
    e_amp_pj_per_bit_m = 100
    loss_exponent = 2
  }}
  data = constant(0)
  service "BellPort" {{
    interface = "Bell"
    protocol = "CoAP"
  }}
}}

link "probe_1" <-> "hub" {{
  protocol = "CoAP"
  latency_ms = 2
  distance_m = 10
}}

link "bell_1" <-> "hub" {{
  protocol = "CoAP"
  latency_ms = 2
  distance_m = 12
}}

contract "RequestProbe" {{
  provider_interface = "Probe"
  consumer_interface = "ProbeClient"
  task "ReadProbe" = sense
  message "ProbeData" {{
    field "level" = number
  }}
}}

contract "RequestBell" {{
  provider_interface = "Bell"
  consumer_interface = "BellClient"
  task "RingBell" = actuate
  message "BellCommand" {{
    field "active" = boolean
  }}
}}

component "Watcher" {{
  cpu_demand_cycles = 500
  requires_software = ["jboss"]
  requires = ["Probe"]
  periodic "ReadProbe" {{
    interval_ticks = {interval}
  }}
  event "RingBell" {{
    condition = "{condition}"
  }}
}}

application "AlarmedApp" {{
  region = (1.0, 2.0)
  components = ["Watcher"]
}}
"""


def alarmed_model(*, sim_time=10, interval=1, capacity=100, rng_seed=0,
                  data='trace [30, 5]', condition='level > 20'):
    """Tiny model plus an actuator device and an event request."""
    from iotdraw import parse_model
    text = ALARMED_TEMPLATE.format(sim_time=sim_time, interval=interval,
                                   capacity=capacity, rng_seed=rng_seed,
                                   data=data, condition=condition)
    model = parse_model(text, "<alarmed>")
    assert not isinstance(model, list), [d.render() for d in model]
    return model


# --- reference implementations -------------------------------------------
# Deliberately written from scratch (Floyd-Warshall, plain nested loops)
# so agreement with the package is meaningful.


def _reference_paths(model):
    names = sorted(p.name for p in model.platforms)
    index = {name: i for i, name in enumerate(names)}
    count = len(names)
    inf = float("inf")
    dist = [[inf] * count for _ in range(count)]
    step = [[None] * count for _ in range(count)]
    for i in range(count):
        dist[i][i] = 0.0
    for link in model.networks:
        a, b = index[link.endpoint_a], index[link.endpoint_b]
        if link.latency_ms < dist[a][b]:
            dist[a][b] = dist[b][a] = link.latency_ms
            step[a][b] = b
            step[b][a] = a
    for k in range(count):
        for i in range(count):
            for j in range(count):
                through = dist[i][k] + dist[k][j]
                if through < dist[i][j]:
                    dist[i][j] = through
                    step[i][j] = step[i][k]

    def path(a_name, b_name):
        i, j = index[a_name], index[b_name]
        if i == j:
            return [a_name]
        if step[i][j] is None:
            return None
        walk = [i]
        while walk[-1] != j:
            walk.append(step[walk[-1]][j])
        return [names[n] for n in walk]

    def latency(a_name, b_name):
        return dist[index[a_name]][index[b_name]]

    return latency, path


def _reference_provider(model, interface):
    candidates = []
    for platform in model.platforms:
        for port in platform.services:
            if port.interface == interface:
                candidates.append(("platform", platform.name, port))
    for component in model.all_components():
        port = component.provided_service
        if port is not None and port.interface == interface:
            candidates.append(("component", component.name, port))
    if not candidates:
        return None
    return min(candidates, key=lambda c: (c[1], c[2].name))


def _reference_edges(model):
    edges = []
    for component in sorted(model.all_components(), key=lambda c: c.name):
        for interface in component.required_interfaces:
            found = _reference_provider(model, interface)
            if found is None:
                continue
            kind, name, port = found
            edges.append((component.name, component.provided_service,
                          kind, name, port))
    return edges


def _reference_protocol_ok(model, consumer_port, provider_port, path):
    if consumer_port is None or provider_port is None:
        return True
    if consumer_port.protocol.lower() == provider_port.protocol.lower():
        return True
    from iotdraw.model import PlatformTier
    return any(model.platform(n).tier is PlatformTier.FOG for n in path)


def reference_scenarios(model):
    """Ground truth for deployment enumeration, as (id, {component: platform})."""
    import itertools

    latency, path = _reference_paths(model)
    edges = _reference_edges(model)
    components = sorted(model.all_components(), key=lambda c: c.name)
    platforms = sorted(model.platforms, key=lambda p: p.name)
    pools = []
    for component in components:
        pool = [p.name for p in platforms
                if set(component.required_software) <= set(p.provided_software)]
        pools.append(pool)
    if not components or any(not pool for pool in pools):
        return []

    survivors = []
    for choice in itertools.product(*pools):
        assignment = dict(zip((c.name for c in components), choice))
        keep = True
        for consumer, consumer_port, kind, provider, provider_port in edges:
            host = assignment[consumer]
            target = provider if kind == "platform" else assignment[provider]
            if host == target:
                continue
            walk = path(host, target)
            if walk is None:
                keep = False
                break
            if not _reference_protocol_ok(model, consumer_port, provider_port, walk):
                keep = False
                break
        if keep:
            survivors.append((len(survivors) + 1, assignment))
    return survivors


def reference_availability(model, assignment):
    result = 1.0
    for name in sorted(set(assignment.values())):
        platform = model.platform(name)
        result *= platform.mtbf_hours / (platform.mtbf_hours + platform.mttr_hours)
    return result


def reference_response_time(model, assignment):
    from iotdraw.model import PlatformTier

    latency, _ = _reference_paths(model)
    total = 0.0
    for consumer, _, kind, provider, _ in _reference_edges(model):
        host = assignment[consumer]
        target = provider if kind == "platform" else assignment[provider]
        hop = 0.0 if host == target else latency(host, target)
        if hop == float("inf"):
            return float("inf")
        if kind == "component":
            cycles = model.component(provider).mean_cpu_demand_cycles
            processing = cycles / (model.platform(target).cpu_frequency_ghz * 1e9) * 1000.0
        elif model.platform(provider).tier is PlatformTier.DEVICE:
            processing = model.platform(provider).energy.sense_duration_ms
        else:
            processing = 0.0
        total += hop + processing
    return total


def random_placement_model(seed: int):
    """A random multi-platform model for exercising deployment enumeration.

    Latencies are drawn from a continuous range so shortest paths are
    unique and a reference implementation must agree on them.  Some
    interfaces come from platform service ports, others from components,
    and each interface has exactly one provider.
    """
    from iotdraw.model import (
        ApplicationDecl, ComponentDecl, ContractDecl, Declarations, LinkDecl,
        PlatformDecl, PlatformTier, ServicePort, SystemDecl, Task, TaskKind,
        build_system,
    )

    rnd = random.Random(seed)
    software_pool = ["spark", "jboss", "dotnet", "node"]
    protocols = ["HTTP", "CoAP"]

    platform_count = rnd.randint(5, 7)
    platforms = []
    for index in range(platform_count):
        tier = PlatformTier(rnd.choice(["cloud", "fog", "fog"]))
        platforms.append(PlatformDecl(
            name=f"p{index:02d}",
            tier=tier,
            location=(float(index), 0.0),
            cpu_frequency_ghz=rnd.choice([1.0, 1.6, 2.5, 3.0]),
            provided_software=rnd.sample(software_pool, rnd.randint(1, 3)),
            mtbf_hours=float(rnd.randint(500, 2000)),
            mttr_hours=float(rnd.randint(1, 50)),
        ))

    # a few platform service ports, each with a unique interface
    port_interfaces = []
    for index, decl in enumerate(platforms):
        if rnd.random() < 0.4:
            interface = f"PortSvc{index}"
            decl.services.append(ServicePort(f"port{index}", interface,
                                             rnd.choice(protocols)))
            port_interfaces.append(interface)

    component_count = rnd.randint(3, 4)
    components = []
    component_interfaces = []
    for index in range(component_count):
        provides = None
        if rnd.random() < 0.5:
            interface = f"CompSvc{index}"
            provides = ServicePort(f"csvc{index}", interface, rnd.choice(protocols))
            component_interfaces.append(interface)
        components.append(ComponentDecl(
            name=f"c{index}",
            mean_cpu_demand_cycles=float(rnd.randint(100, 4000)),
            required_software=rnd.sample(software_pool, rnd.randint(0, 2)),
            provided_service=provides,
        ))
    all_interfaces = port_interfaces + component_interfaces
    for comp in components:
        own = comp.provided_service.interface if comp.provided_service else None
        candidates = [i for i in all_interfaces if i != own]
        if candidates:
            comp.required_interfaces = rnd.sample(
                candidates, rnd.randint(0, min(2, len(candidates))))

    contracts = [ContractDecl(name=f"Use{interface}",
                              provider_interface=interface,
                              consumer_interface=f"{interface}Client",
                              tasks=[Task(f"Call{interface}", TaskKind.COMPUTE)])
                 for interface in all_interfaces]

    links = []
    for a in range(platform_count):
        for b in range(a + 1, platform_count):
            if rnd.random() < 0.45:
                links.append(LinkDecl(
                    endpoint_a=platforms[a].name,
                    endpoint_b=platforms[b].name,
                    protocol=rnd.choice(protocols + ["IP"]),
                    latency_ms=rnd.random() * 100 + 0.001,
                    distance_m=rnd.random() * 100 + 1.0,
                ))

    decls = Declarations(
        system=SystemDecl(name=f"random_{seed}"),
        platforms=platforms,
        links=links,
        contracts=contracts,
        components=components,
        applications=[ApplicationDecl(name="app", region=(0.0, 0.0),
                                      component_names=[c.name for c in components])],
    )
    return build_system(decls)
