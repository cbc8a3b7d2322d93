"""Moment-structured circuit IR and its text format.

The text format is line oriented::

    # comment
    qubits 3
    H 0
    CX 0,1
    CX 1,2; H 0

One line per moment; applications within a moment are separated by ``;``.
A line holding only ``-`` is an empty moment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

from .gates import GateApplication, gate_by_name

Strategy = Literal["new_moment", "earliest"]


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Moment:
    applications: tuple[GateApplication, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "applications", tuple(self.applications))
        seen: set[int] = set()
        for app in self.applications:
            overlap = seen.intersection(app.targets)
            if overlap:
                raise ValueError(f"qubit(s) {sorted(overlap)} used twice in one moment")
            seen.update(app.targets)

    @property
    def qubits(self) -> frozenset[int]:
        return frozenset(q for app in self.applications for q in app.targets)

    def __len__(self) -> int:
        return len(self.applications)

    def __iter__(self):
        return iter(self.applications)


@dataclass
class Circuit:
    num_qubits: int
    moments: list[Moment] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"a circuit needs at least one qubit, got {self.num_qubits}")
        self.moments = [m if isinstance(m, Moment) else Moment(m) for m in self.moments]
        for m in self.moments:
            self._check_targets(m.applications)

    def _check_targets(self, apps: Iterable[GateApplication]) -> None:
        for app in apps:
            for q in app.targets:
                if q >= self.num_qubits:
                    raise ValueError(
                        f"{app} targets qubit {q} but the circuit has {self.num_qubits} qubits"
                    )

    def append(self, app: GateApplication, strategy: Strategy = "earliest") -> Circuit:
        """Add ``app`` and return ``self`` for chaining.

        ``earliest`` slides the application back to the moment just after the
        last one touching any of its qubits; ``new_moment`` always opens a new
        moment.
        """
        self._check_targets([app])
        if strategy == "new_moment":
            self.moments.append(Moment((app,)))
            return self
        if strategy != "earliest":
            raise ValueError(f"unknown insertion strategy {strategy!r}")
        slot = 0
        for i in range(len(self.moments) - 1, -1, -1):
            if self.moments[i].qubits.intersection(app.targets):
                slot = i + 1
                break
        if slot == len(self.moments):
            self.moments.append(Moment((app,)))
        else:
            self.moments[slot] = Moment(self.moments[slot].applications + (app,))
        return self

    def extend(self, apps: Iterable[GateApplication], strategy: Strategy = "earliest") -> Circuit:
        for app in apps:
            self.append(app, strategy)
        return self

    def depth(self) -> int:
        return len(self.moments)

    def gate_count(self) -> int:
        return sum(len(m) for m in self.moments)

    def all_operations(self) -> Iterable[GateApplication]:
        for m in self.moments:
            yield from m.applications

    def __str__(self) -> str:
        return serialize(self)


def append(c: Circuit, app: GateApplication, strategy: Strategy = "earliest") -> Circuit:
    return c.append(app, strategy)


def depth(c: Circuit) -> int:
    return c.depth()


def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}"]
    for m in c.moments:
        lines.append("; ".join(str(app) for app in m.applications) if len(m) else "-")
    return "\n".join(lines) + "\n"


def _parse_application(text: str, lineno: int) -> GateApplication:
    parts = text.split()
    if len(parts) != 2:
        raise CircuitParseError(f"expected 'GATE q0[,q1]', got {text!r}", lineno)
    name, args = parts
    try:
        gate = gate_by_name(name)
    except ValueError as exc:
        raise CircuitParseError(str(exc), lineno) from None
    try:
        targets = tuple(int(a) for a in args.split(","))
    except ValueError:
        raise CircuitParseError(f"bad qubit list {args!r}", lineno) from None
    try:
        return GateApplication(gate, targets)
    except ValueError as exc:
        raise CircuitParseError(str(exc), lineno) from None


def deserialize(text: str) -> Circuit:
    num_qubits = None
    moments: list[Moment] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if num_qubits is None:
            head = line.split()
            if len(head) != 2 or head[0] != "qubits":
                raise CircuitParseError("first line must be 'qubits N'", lineno)
            try:
                num_qubits = int(head[1])
            except ValueError:
                raise CircuitParseError(f"bad qubit count {head[1]!r}", lineno) from None
            if num_qubits < 1:
                raise CircuitParseError(f"qubit count must be positive, got {num_qubits}", lineno)
            continue
        if line == "-":
            moments.append(Moment())
            continue
        apps = [_parse_application(part.strip(), lineno) for part in line.split(";")]
        for app in apps:
            bad = [q for q in app.targets if q >= num_qubits]
            if bad:
                raise CircuitParseError(
                    f"{app} targets qubit {bad[0]} but the circuit has {num_qubits} qubits",
                    lineno,
                )
        try:
            moments.append(Moment(apps))
        except ValueError as exc:
            raise CircuitParseError(str(exc), lineno) from None
    if num_qubits is None:
        raise CircuitParseError("missing 'qubits N' header")
    return Circuit(num_qubits, moments)


def load(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


def dump(c: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(c))
