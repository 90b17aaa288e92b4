"""The textual model language: parsing and canonical serialization.

A model file is a flat sequence of named blocks over a closed keyword
set; identifiers are double-quoted, ``#`` starts a line comment, and
attribute order inside a block is free.  The full grammar lives in
docs/model-language.md.  Unknown keys are hard errors so that typos
surface at parse time instead of silently skewing an analysis.

``serialize_model`` writes a canonical form: blocks sorted by category
and then by name, two-space indentation, numbers rendered without a
trailing ``.0`` when integral.  Parsing the canonical form reproduces
the model exactly, and serializing again is byte-stable.
"""

from __future__ import annotations

import re

from .diagnostics import ERROR, Diagnostic, SourceSpan
from .model import (
    ApplicationDecl, Component, ComponentDecl, ConditionExpr, ConstantSource, ContractDecl,
    DataSource, Declarations, EnergyDecl, EntityDecl, EventRequest, ExecutionModuleDecl,
    InterfaceDecl, IoTSystemModel, LinkDecl, MessageField, MessageType, ModelError,
    PeriodicRequest, Platform, PlatformDecl, PlatformTier, ServicePort, SystemDecl, Task,
    TaskKind, TraceSource, UniformSource, build_system,
)

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<number>-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct><->|[{}=()\[\],])
""", re.VERBOSE)

_CONDITION_RE = re.compile(
    r"^\s*(?P<field>[A-Za-z_][A-Za-z0-9_]*)\s*"
    r"(?P<op><=|>=|!=|==|≤|≥|≠|<|>|=)\s*"
    r"(?P<value>-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*$")

_OP_ALIASES = {"==": "=", "≤": "<=", "≥": ">=", "≠": "!="}

_TASK_KINDS = {k.value: k for k in TaskKind}
_FIELD_KINDS = ("number", "integer", "text", "boolean")


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind: str, text: str, line: int, column: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


class _ParseAbort(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(diagnostic.message)


def _lex(text: str, path: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise _ParseAbort(Diagnostic(ERROR, f"unexpected character {text[pos]!r}",
                                         SourceSpan(path, line, col), code="syntax"))
        kind = match.lastgroup
        raw = match.group()
        if kind != "ws":
            tokens.append(_Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = match.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    """Single-pass recursive descent over the token list."""

    def __init__(self, tokens: list[_Token], path: str):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    # -- token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def span(self, token: _Token) -> SourceSpan:
        return SourceSpan(self.path, token.line, token.column)

    def fail(self, message: str, token: _Token | None = None):
        token = token or self.peek()
        raise _ParseAbort(Diagnostic(ERROR, message, self.span(token), code="syntax"))

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> _Token:
        token = self.peek()
        if token.kind != kind or (text is not None and token.text != text):
            expected = what or (repr(text) if text else kind)
            found = token.text or "end of input"
            self.fail(f"expected {expected}, found {found!r}")
        return self.advance()

    def accept(self, kind: str, text: str | None = None) -> _Token | None:
        token = self.peek()
        if token.kind == kind and (text is None or token.text == text):
            return self.advance()
        return None

    # -- value readers

    def read_string(self, what: str) -> str:
        token = self.expect("string", what=what)
        return token.text[1:-1]

    def read_number(self) -> float:
        return float(self.expect("number", what="a number").text)

    def read_int(self, what: str) -> int:
        token = self.expect("number", what=what)
        if any(ch in token.text for ch in ".eE"):
            self.fail(f"{what} must be an integer, found {token.text!r}", token)
        return int(token.text)

    def read_point(self) -> tuple[float, float]:
        self.expect("punct", "(")
        first = self.read_number()
        self.expect("punct", ",")
        second = self.read_number()
        self.expect("punct", ")")
        return (first, second)

    def read_string_list(self) -> list[str]:
        self.expect("punct", "[")
        items: list[str] = []
        if not self.accept("punct", "]"):
            items.append(self.read_string("a quoted name"))
            while self.accept("punct", ","):
                items.append(self.read_string("a quoted name"))
            self.expect("punct", "]")
        return items

    def read_number_list(self) -> list[float]:
        self.expect("punct", "[")
        items: list[float] = []
        if not self.accept("punct", "]"):
            items.append(self.read_number())
            while self.accept("punct", ","):
                items.append(self.read_number())
            self.expect("punct", "]")
        return items

    def read_data_source(self) -> DataSource:
        token = self.expect("ident", what="a data source (constant, uniform, or trace)")
        if token.text == "constant":
            self.expect("punct", "(")
            value = self.read_number()
            self.expect("punct", ")")
            return ConstantSource(value)
        if token.text == "uniform":
            self.expect("punct", "(")
            lo = self.read_number()
            self.expect("punct", ",")
            hi = self.read_number()
            self.expect("punct", ")")
            seed = None
            if self.accept("ident", "seed"):
                seed = self.read_int("seed")
            return UniformSource(lo, hi, seed)
        if token.text == "trace":
            return TraceSource(tuple(self.read_number_list()))
        self.fail(f"unknown data source {token.text!r}", token)

    # -- block machinery

    def block_keys(self, block: str, handlers: dict):
        """Dispatch ``key = value`` and sub-block entries until the closing brace.

        Handler keys ending in "*" may repeat; scalar keys may not.
        """
        self.expect("punct", "{")
        seen: set[str] = set()
        while not self.accept("punct", "}"):
            token = self.peek()
            if token.kind == "eof":
                self.fail(f"unterminated {block} block")
            if token.kind != "ident":
                self.fail(f"expected an attribute name in {block} block, found {token.text!r}")
            key = token.text
            handler = handlers.get(key) or handlers.get(key + "*")
            if handler is None:
                self.fail(f"unknown key {key!r} in {block} block", token)
            if key in handlers:  # scalar: single occurrence
                if key in seen:
                    self.fail(f"duplicate key {key!r} in {block} block", token)
                seen.add(key)
            self.advance()
            handler()

    def read_service_port(self) -> ServicePort:
        name_token = self.expect("string", what="a service name")
        port = {"interface": "", "protocol": ""}
        self.block_keys("service", {
            "interface": lambda: port.__setitem__("interface", self._eq_string("interface")),
            "protocol": lambda: port.__setitem__("protocol", self._eq_string("protocol")),
        })
        try:
            return ServicePort(name_token.text[1:-1], port["interface"], port["protocol"])
        except ModelError as exc:
            self.fail(str(exc), name_token)

    def _eq_string(self, what: str) -> str:
        self.expect("punct", "=")
        return self.read_string(what)

    def _eq_number(self) -> float:
        self.expect("punct", "=")
        return self.read_number()

    def _eq_int(self, what: str) -> int:
        self.expect("punct", "=")
        return self.read_int(what)

    def _eq_point(self) -> tuple[float, float]:
        self.expect("punct", "=")
        return self.read_point()

    def _eq_string_list(self) -> list[str]:
        self.expect("punct", "=")
        return self.read_string_list()

    # -- top-level blocks

    def parse(self) -> Declarations:
        decls = Declarations()
        while True:
            token = self.peek()
            if token.kind == "eof":
                break
            if token.kind != "ident":
                self.fail(f"expected a block keyword, found {token.text!r}")
            keyword = token.text
            if keyword == "system":
                if decls.system is not None:
                    self.fail("duplicate 'system' block", token)
                self.advance()
                decls.system = self.parse_system()
            elif keyword == "entity":
                self.advance()
                decls.entities.append(self.parse_entity())
            elif keyword == "interface":
                self.advance()
                name = self.expect("string", what="an interface name")
                self.expect("punct", "{")
                self.expect("punct", "}")
                decls.interfaces.append(InterfaceDecl(name.text[1:-1], self.span(name)))
            elif keyword in ("cloud", "fog", "device"):
                self.advance()
                decls.platforms.append(self.parse_platform(PlatformTier(keyword)))
            elif keyword == "contract":
                self.advance()
                decls.contracts.append(self.parse_contract())
            elif keyword == "component":
                self.advance()
                decls.components.append(self.parse_component())
            elif keyword == "application":
                self.advance()
                decls.applications.append(self.parse_application())
            elif keyword == "link":
                self.advance()
                decls.links.append(self.parse_link())
            else:
                self.fail(f"unknown block keyword {keyword!r}", token)
        if decls.system is None:
            self.fail("expected a 'system' block", self.tokens[0])
        return decls

    def parse_system(self) -> SystemDecl:
        name_token = self.expect("string", what="a system name")
        decl = SystemDecl(name=name_token.text[1:-1], span=self.span(name_token))

        def exec_module():
            entry = {"module": "", "language": "python", "code": "builtin"}
            self.block_keys("execution_module", {
                "module": lambda: entry.__setitem__("module", self._eq_string("module")),
                "language": lambda: entry.__setitem__("language", self._eq_string("language")),
                "code": lambda: entry.__setitem__("code", self._eq_string("code")),
            })
            decl.execution_modules.append(
                ExecutionModuleDecl(entry["module"], entry["language"], entry["code"]))

        self.block_keys("system", {
            "simulation_time": lambda: setattr(decl, "simulation_time", self._eq_int("simulation_time")),
            "tick_seconds": lambda: setattr(decl, "tick_seconds", self._eq_number()),
            "rng_seed": lambda: setattr(decl, "rng_seed", self._eq_int("rng_seed")),
            "execution_module*": exec_module,
        })
        return decl

    def parse_entity(self) -> EntityDecl:
        name_token = self.expect("string", what="an entity name")
        decl = EntityDecl(name=name_token.text[1:-1], span=self.span(name_token))
        self.block_keys("entity", {
            "location": lambda: setattr(decl, "location", self._eq_point()),
        })
        return decl

    def parse_platform(self, tier: PlatformTier) -> PlatformDecl:
        name_token = self.expect("string", what="a platform name")
        decl = PlatformDecl(name=name_token.text[1:-1], tier=tier, span=self.span(name_token))

        handlers = {
            "location": lambda: setattr(decl, "location", self._eq_point()),
            "cpu_ghz": lambda: setattr(decl, "cpu_frequency_ghz", self._eq_number()),
            "provides_software": lambda: setattr(decl, "provided_software", self._eq_string_list()),
            "mtbf_hours": lambda: setattr(decl, "mtbf_hours", self._eq_number()),
            "mttr_hours": lambda: setattr(decl, "mttr_hours", self._eq_number()),
            "service*": lambda: decl.services.append(self.read_service_port()),
        }
        if tier is PlatformTier.DEVICE:
            decl.energy = EnergyDecl()

            def battery():
                self.block_keys("battery", {
                    "capacity_mah": lambda: setattr(decl.energy, "battery_capacity_mah", self._eq_number()),
                    "supply_voltage_v": lambda: setattr(decl.energy, "supply_voltage_v", self._eq_number()),
                    "depletion_threshold_mah": lambda: setattr(
                        decl.energy, "depletion_threshold_mah", self._eq_number()),
                })

            def sense():
                self.block_keys("sense", {
                    "current_ma": lambda: setattr(decl.energy, "sense_current_ma", self._eq_number()),
                    "duration_ms": lambda: setattr(decl.energy, "sense_duration_ms", self._eq_number()),
                })

            def transmit():
                self.block_keys("transmit", {
                    "packet_kb": lambda: setattr(decl.energy, "packet_kb", self._eq_number()),
                    "e_elec_nj_per_bit": lambda: setattr(decl.energy, "e_elec_nj_per_bit", self._eq_number()),
                    "e_amp_pj_per_bit_m": lambda: setattr(decl.energy, "e_amp_pj_per_bit_m", self._eq_number()),
                    "loss_exponent": lambda: setattr(decl.energy, "loss_exponent_n", self._eq_int("loss_exponent")),
                })

            def data():
                self.expect("punct", "=")
                decl.data_source = self.read_data_source()

            handlers.update({
                "attached_to": lambda: setattr(decl, "attached_to", self._eq_string("attached_to")),
                "battery": battery,
                "sense": sense,
                "transmit": transmit,
                "data": data,
            })
        self.block_keys(tier.value, handlers)
        return decl

    def parse_contract(self) -> ContractDecl:
        name_token = self.expect("string", what="a contract name")
        decl = ContractDecl(name=name_token.text[1:-1], span=self.span(name_token))

        def task():
            task_name = self.expect("string", what="a task name")
            self.expect("punct", "=")
            kind_token = self.expect("ident", what="a task kind")
            kind = _TASK_KINDS.get(kind_token.text)
            if kind is None:
                self.fail(f"unknown task kind {kind_token.text!r}", kind_token)
            decl.tasks.append(Task(task_name.text[1:-1], kind))

        def message():
            message_name = self.expect("string", what="a message name")
            decl.message_name = message_name.text[1:-1]

            def field_entry():
                field_name = self.expect("string", what="a field name")
                self.expect("punct", "=")
                kind_token = self.expect("ident", what="a field kind")
                if kind_token.text not in _FIELD_KINDS:
                    self.fail(f"unknown field kind {kind_token.text!r}", kind_token)
                decl.message_fields.append(MessageField(field_name.text[1:-1], kind_token.text))

            self.block_keys("message", {"field*": field_entry})

        self.block_keys("contract", {
            "provider_interface": lambda: setattr(decl, "provider_interface",
                                                  self._eq_string("provider_interface")),
            "consumer_interface": lambda: setattr(decl, "consumer_interface",
                                                  self._eq_string("consumer_interface")),
            "task*": task,
            "message": message,
        })
        return decl

    def parse_component(self) -> ComponentDecl:
        name_token = self.expect("string", what="a component name")
        decl = ComponentDecl(name=name_token.text[1:-1], span=self.span(name_token))

        def periodic():
            task_name = self.read_string("a task name")
            box = {"interval_ticks": 0}
            self.block_keys("periodic", {
                "interval_ticks": lambda: box.__setitem__("interval_ticks",
                                                          self._eq_int("interval_ticks")),
            })
            try:
                decl.periodic_request = PeriodicRequest(task_name, box["interval_ticks"])
            except ModelError as exc:
                self.fail(str(exc), name_token)

        def event():
            task_name = self.read_string("a task name")
            box = {"condition": ""}
            condition_token = self.peek()
            self.block_keys("event", {
                "condition": lambda: box.__setitem__("condition", self._eq_string("condition")),
            })
            try:
                expr = condition_from_text(box["condition"])
            except ModelError as exc:
                self.fail(str(exc), condition_token)
            decl.event_request = EventRequest(task_name, expr)

        def service():
            decl.provided_service = self.read_service_port()

        self.block_keys("component", {
            "cpu_demand_cycles": lambda: setattr(decl, "mean_cpu_demand_cycles", self._eq_number()),
            "requires_software": lambda: setattr(decl, "required_software", self._eq_string_list()),
            "requires": lambda: setattr(decl, "required_interfaces", self._eq_string_list()),
            "service": service,
            "periodic": periodic,
            "event": event,
        })
        return decl

    def parse_application(self) -> ApplicationDecl:
        name_token = self.expect("string", what="an application name")
        decl = ApplicationDecl(name=name_token.text[1:-1], span=self.span(name_token))
        self.block_keys("application", {
            "region": lambda: setattr(decl, "region", self._eq_point()),
            "components": lambda: setattr(decl, "component_names", self._eq_string_list()),
        })
        return decl

    def parse_link(self) -> LinkDecl:
        first = self.expect("string", what="a platform name")
        self.expect("punct", "<->")
        second = self.expect("string", what="a platform name")
        decl = LinkDecl(endpoint_a=first.text[1:-1], endpoint_b=second.text[1:-1],
                        span=self.span(first))
        self.block_keys("link", {
            "protocol": lambda: setattr(decl, "protocol", self._eq_string("protocol")),
            "latency_ms": lambda: setattr(decl, "latency_ms", self._eq_number()),
            "distance_m": lambda: setattr(decl, "distance_m", self._eq_number()),
        })
        return decl


def condition_from_text(text: str) -> ConditionExpr:
    """Parse a threshold condition like ``level_cm > 20``; schema-agnostic."""
    match = _CONDITION_RE.match(text)
    if match is None:
        raise ModelError(f"cannot parse condition {text!r}; expected 'field op number'")
    op = _OP_ALIASES.get(match["op"], match["op"])
    return ConditionExpr(match["field"], op, float(match["value"]))


def parse_condition(text: str, message_type: MessageType) -> ConditionExpr:
    """Parse a condition and check its field against the message schema."""
    expr = condition_from_text(text)
    if expr.field not in message_type.field_names():
        raise ModelError(
            f"condition field {expr.field!r} is not part of message {message_type.name!r} "
            f"(fields: {', '.join(message_type.field_names()) or 'none'})")
    return expr


def parse_model(text: str, path: str = "<model>") -> IoTSystemModel | list[Diagnostic]:
    """Parse model text; returns the model or the list of diagnostics.

    Syntax problems abort at the first offending token; build problems
    (duplicates, dangling references, invariant violations) are collected
    and reported together.
    """
    try:
        tokens = _lex(text, path)
        decls = _Parser(tokens, path).parse()
    except _ParseAbort as abort:
        return [abort.diagnostic]
    try:
        return build_system(decls)
    except ModelError as exc:
        fallback = SourceSpan(path, 1, 1)
        return [Diagnostic(ERROR, issue.message, issue.span or fallback, code="build")
                for issue in exc.issues]


def load_model(path: str) -> IoTSystemModel | list[Diagnostic]:
    with open(path, encoding="utf-8") as handle:
        return parse_model(handle.read(), path=str(path))


# --------------------------------------------------------------------------
# Serialization


def _fmt_num(value) -> str:
    if isinstance(value, int):
        return str(value)
    if value == int(value):
        return str(int(value))
    return repr(value)


def _fmt_point(point) -> str:
    return f"({_fmt_num(point.latitude)}, {_fmt_num(point.longitude)})"


def _fmt_string_list(items) -> str:
    return "[" + ", ".join(f'"{item}"' for item in items) + "]"


def _fmt_source(source: DataSource) -> str:
    if isinstance(source, ConstantSource):
        return f"constant({_fmt_num(source.value)})"
    if isinstance(source, UniformSource):
        text = f"uniform({_fmt_num(source.lo)}, {_fmt_num(source.hi)})"
        if source.seed is not None:
            text += f" seed {source.seed}"
        return text
    return "trace [" + ", ".join(_fmt_num(v) for v in source.values) + "]"


def _port_lines(out: list[str], port: ServicePort, indent: str) -> None:
    out.append(f'{indent}service "{port.name}" {{')
    out.append(f'{indent}  interface = "{port.interface}"')
    out.append(f'{indent}  protocol = "{port.protocol}"')
    out.append(f"{indent}}}")


def _platform_lines(out: list[str], platform: Platform) -> None:
    out.append(f'{platform.tier.value} "{platform.name}" {{')
    out.append(f"  location = {_fmt_point(platform.location)}")
    out.append(f"  cpu_ghz = {_fmt_num(platform.cpu_frequency_ghz)}")
    out.append(f"  provides_software = {_fmt_string_list(sorted(platform.provided_software))}")
    out.append(f"  mtbf_hours = {_fmt_num(platform.mtbf_hours)}")
    out.append(f"  mttr_hours = {_fmt_num(platform.mttr_hours)}")
    if platform.attached_to is not None:
        out.append(f'  attached_to = "{platform.attached_to}"')
    if platform.energy is not None:
        e = platform.energy
        out.append("  battery {")
        out.append(f"    capacity_mah = {_fmt_num(e.battery_capacity_mah)}")
        out.append(f"    supply_voltage_v = {_fmt_num(e.supply_voltage_v)}")
        out.append(f"    depletion_threshold_mah = {_fmt_num(e.depletion_threshold_mah)}")
        out.append("  }")
        out.append("  sense {")
        out.append(f"    current_ma = {_fmt_num(e.sense_current_ma)}")
        out.append(f"    duration_ms = {_fmt_num(e.sense_duration_ms)}")
        out.append("  }")
        out.append("  transmit {")
        out.append(f"    packet_kb = {_fmt_num(e.packet_kb)}")
        out.append(f"    e_elec_nj_per_bit = {_fmt_num(e.e_elec_nj_per_bit)}")
        out.append(f"    e_amp_pj_per_bit_m = {_fmt_num(e.e_amp_pj_per_bit_m)}")
        out.append(f"    loss_exponent = {e.loss_exponent_n}")
        out.append("  }")
    if platform.data_source is not None:
        out.append(f"  data = {_fmt_source(platform.data_source)}")
    for port in platform.services:
        _port_lines(out, port, "  ")
    out.append("}")


def _component_lines(out: list[str], component: Component) -> None:
    out.append(f'component "{component.name}" {{')
    out.append(f"  cpu_demand_cycles = {_fmt_num(component.mean_cpu_demand_cycles)}")
    out.append(f"  requires_software = {_fmt_string_list(sorted(component.required_software))}")
    out.append(f"  requires = {_fmt_string_list(component.required_interfaces)}")
    if component.provided_service is not None:
        _port_lines(out, component.provided_service, "  ")
    if component.periodic_request is not None:
        out.append(f'  periodic "{component.periodic_request.task}" {{')
        out.append(f"    interval_ticks = {component.periodic_request.interval_ticks}")
        out.append("  }")
    if component.event_request is not None:
        out.append(f'  event "{component.event_request.task}" {{')
        out.append(f'    condition = "{component.event_request.condition.render()}"')
        out.append("  }")
    out.append("}")


def serialize_model(model: IoTSystemModel) -> str:
    """Render a model in the canonical text form (see module docstring)."""
    out: list[str] = []
    config = model.sim_config

    out.append(f'system "{model.name}" {{')
    out.append(f"  simulation_time = {config.simulation_time}")
    out.append(f"  tick_seconds = {_fmt_num(config.tick_seconds)}")
    out.append(f"  rng_seed = {config.rng_seed}")
    for em in config.execution_modules:
        out.append("  execution_module {")
        out.append(f'    module = "{em.module}"')
        out.append(f'    language = "{em.language}"')
        out.append(f'    code = "{em.code}"')
        out.append("  }")
    out.append("}")

    for entity in sorted(model.physical_entities, key=lambda e: e.name):
        out.append("")
        out.append(f'entity "{entity.name}" {{')
        out.append(f"  location = {_fmt_point(entity.location)}")
        out.append("}")

    for interface in model.interfaces:
        out.append("")
        out.append(f'interface "{interface}" {{}}')

    for platform in sorted(model.platforms, key=lambda p: p.name):
        out.append("")
        _platform_lines(out, platform)

    for link in sorted(model.networks, key=lambda l: (l.endpoint_a, l.endpoint_b)):
        out.append("")
        out.append(f'link "{link.endpoint_a}" <-> "{link.endpoint_b}" {{')
        out.append(f'  protocol = "{link.protocol}"')
        out.append(f"  latency_ms = {_fmt_num(link.latency_ms)}")
        out.append(f"  distance_m = {_fmt_num(link.distance_m)}")
        out.append("}")

    for contract in sorted(model.contracts, key=lambda c: c.name):
        out.append("")
        out.append(f'contract "{contract.name}" {{')
        out.append(f'  provider_interface = "{contract.provider_interface}"')
        out.append(f'  consumer_interface = "{contract.consumer_interface}"')
        for task in contract.tasks:
            out.append(f'  task "{task.name}" = {task.kind.value}')
        message = contract.message_type
        if message.fields or message.name != f"{contract.name}Message":
            out.append(f'  message "{message.name}" {{')
            for field in message.fields:
                out.append(f'    field "{field.name}" = {field.kind}')
            out.append("  }")
        out.append("}")

    for component in sorted(model.all_components(), key=lambda c: c.name):
        out.append("")
        _component_lines(out, component)

    for app in sorted(model.applications, key=lambda a: a.name):
        out.append("")
        out.append(f'application "{app.name}" {{')
        out.append(f"  region = {_fmt_point(app.region)}")
        out.append(f"  components = {_fmt_string_list(c.name for c in app.components)}")
        out.append("}")

    return "\n".join(out) + "\n"
