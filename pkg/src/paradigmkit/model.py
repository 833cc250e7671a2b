"""Paradigm domain model: STDs, phases, traps, partitions, roles and rules.

Everything here is immutable. Validation never raises; it returns a
:class:`ValidationReport` whose entries say what is wrong and where.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    where: str
    message: str
    warning: bool = False

    def __str__(self):
        tag = "warning" if self.warning else "error"
        return f"{tag}: {self.where}: {self.message}"


class ValidationReport(list):
    """A list of :class:`Violation`. Valid means no errors (warnings allowed)."""

    @property
    def errors(self):
        return [v for v in self if not v.warning]

    @property
    def warnings(self):
        return [v for v in self if v.warning]

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, where, message, warning=False):
        self.append(Violation(where, message, warning))

    def __str__(self):
        return "\n".join(str(v) for v in self) if self else "valid"


@dataclass(frozen=True)
class Std:
    """State-transition diagram. ``transitions`` holds ``(src, action, dst)``."""

    name: str
    states: tuple
    actions: tuple
    transitions: tuple
    initial: str

    @classmethod
    def make(cls, name, transitions, initial, states=None, actions=None):
        """Convenience constructor deriving states/actions from the transitions."""
        transitions = tuple(tuple(t) for t in transitions)
        if states is None:
            states = [initial]
            for s, _, t in transitions:
                for x in (s, t):
                    if x not in states:
                        states.append(x)
        if actions is None:
            actions = list(dict.fromkeys(a for _, a, _ in transitions))
        return cls(name, tuple(states), tuple(actions), transitions, initial)

    def out(self, state):
        return [(a, t) for s, a, t in self.transitions if s == state]


def validate_std(std: Std) -> ValidationReport:
    rep = ValidationReport()
    where = f"std {std.name}"
    if len(set(std.states)) != len(std.states):
        rep.add(where, "duplicate state identifiers")
    if len(set(std.actions)) != len(std.actions):
        rep.add(where, "duplicate action identifiers")
    states = set(std.states)
    actions = set(std.actions)
    if std.initial not in states:
        rep.add(where, f"initial state {std.initial!r} is not a state")
    seen = set()
    for tr in std.transitions:
        s, a, t = tr
        if tr in seen:
            rep.add(where, f"duplicate transition {s} -{a}-> {t}")
        seen.add(tr)
        for x in (s, t):
            if x not in states:
                rep.add(where, f"transition {s} -{a}-> {t}: unknown state {x!r}")
        if a not in actions:
            rep.add(where, f"transition {s} -{a}-> {t}: unknown action {a!r}")
    return rep


@dataclass(frozen=True)
class Phase:
    """A sub-STD, stored extensionally as explicit states and transitions."""

    name: str
    states: frozenset
    transitions: frozenset

    @classmethod
    def make(cls, name, states, transitions=()):
        return cls(name, frozenset(states), frozenset(tuple(t) for t in transitions))

    @classmethod
    def restrict(cls, std: Std, name, states, actions):
        """The phase of ``std`` on ``states`` allowing exactly ``actions``."""
        states = frozenset(states)
        actions = set(actions)
        trs = [
            (s, a, t)
            for s, a, t in std.transitions
            if a in actions and s in states and t in states
        ]
        return cls(name, states, frozenset(trs))


@dataclass(frozen=True)
class Trap:
    name: str
    states: frozenset

    @classmethod
    def make(cls, name, states):
        return cls(name, frozenset(states))


@dataclass(frozen=True)
class PartitionEntry:
    phase: Phase
    traps: tuple

    def trap(self, name) -> Trap:
        for t in self.traps:
            if t.name == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class Partition:
    name: str
    owner: str
    entries: tuple

    def entry(self, phase_name) -> PartitionEntry:
        for e in self.entries:
            if e.phase.name == phase_name:
                return e
        raise KeyError(phase_name)

    def phase(self, phase_name) -> Phase:
        return self.entry(phase_name).phase

    @property
    def phase_names(self):
        return [e.phase.name for e in self.entries]


def validate_partition(p: Partition, std: Std) -> ValidationReport:
    rep = ValidationReport()
    where = f"partition {p.name}"
    if p.owner != std.name:
        rep.add(where, f"owner {p.owner!r} does not match std {std.name!r}")
    if not p.entries:
        rep.add(where, "a partition needs at least one phase")
    names = [e.phase.name for e in p.entries]
    if len(set(names)) != len(names):
        rep.add(where, "phase names are not unique")
    std_states = set(std.states)
    std_trans = set(std.transitions)
    covered = set()
    for e in p.entries:
        ph = e.phase
        pw = f"{where}, phase {ph.name}"
        covered |= ph.states
        extra = ph.states - std_states
        if extra:
            rep.add(pw, f"states {sorted(extra)} are not states of {std.name}")
        for tr in sorted(ph.transitions):
            s, a, t = tr
            if tr not in std_trans:
                rep.add(pw, f"{s} -{a}-> {t} is not a transition of {std.name}")
            if s not in ph.states or t not in ph.states:
                rep.add(pw, f"{s} -{a}-> {t} leaves the phase")
        trap_names = [t.name for t in e.traps]
        if len(set(trap_names)) != len(trap_names):
            rep.add(pw, "trap names are not unique")
        for trap in e.traps:
            tw = f"{pw}, trap {trap.name}"
            if not trap.states:
                rep.add(tw, "trap is empty")
            if not trap.states <= ph.states:
                rep.add(tw, f"states {sorted(trap.states - ph.states)} are outside the phase")
            for s, a, t in sorted(ph.transitions):
                if s in trap.states and t not in trap.states:
                    rep.add(tw, f"not closed: {s} -{a}-> {t} leaves the trap")
    for s in std.states:
        if s not in covered:
            rep.add(where, f"state {s!r} lies in no phase", warning=True)
    return rep


@dataclass(frozen=True)
class Role:
    """Global STD over the phases of ``partition``; arcs are trap-labelled transfers."""

    partition: str
    transfers: tuple  # (phase, trap, phase)
    initial: str

    def as_std(self, part: Partition) -> Std:
        return Std(
            f"{part.owner}({part.name})",
            tuple(part.phase_names),
            tuple(dict.fromkeys(t for _, t, _ in self.transfers)),
            tuple(self.transfers),
            self.initial,
        )


def validate_role(role: Role, part: Partition) -> ValidationReport:
    rep = ValidationReport()
    where = f"role over {part.name}"
    if role.partition != part.name:
        rep.add(where, f"role names partition {role.partition!r}")
    phases = {e.phase.name: e for e in part.entries}
    if role.initial not in phases:
        rep.add(where, f"initial phase {role.initial!r} does not exist")
    if len(set(role.transfers)) != len(role.transfers):
        rep.add(where, "duplicate phase transfer")
    for src, tname, dst in role.transfers:
        tw = f"{where}, transfer {src} -{tname}-> {dst}"
        if src not in phases or dst not in phases:
            rep.add(tw, "unknown phase")
            continue
        try:
            trap = phases[src].trap(tname)
        except KeyError:
            rep.add(tw, f"{tname!r} is not a trap of phase {src}")
            continue
        if not trap.states <= phases[dst].phase.states:
            rep.add(tw, f"trap {tname} does not connect {src} to {dst}")
    return rep


@dataclass(frozen=True)
class Instance:
    """A component: one STD plus its roles (none for a pure conductor)."""

    name: str
    std: str
    roles: tuple = ()


@dataclass(frozen=True)
class Participation:
    instance: str
    partition: str
    transfer: tuple  # (phase, trap, phase)


@dataclass(frozen=True)
class ConsistencyRule:
    conductor: str
    transition: tuple  # (src, action, dst) of the conductor STD
    participants: tuple


@dataclass(frozen=True)
class ParadigmModel:
    stds: tuple
    partitions: tuple
    instances: tuple
    rules: tuple = ()
    conductors: tuple = ()

    def std(self, name) -> Std:
        for s in self.stds:
            if s.name == name:
                return s
        raise KeyError(f"no std {name!r}")

    def partition(self, name) -> Partition:
        for p in self.partitions:
            if p.name == name:
                return p
        raise KeyError(f"no partition {name!r}")

    def instance(self, name) -> Instance:
        for i in self.instances:
            if i.name == name:
                return i
        raise KeyError(f"no instance {name!r}")

    def role(self, inst_name, partition) -> Role:
        for r in self.instance(inst_name).roles:
            if r.partition == partition:
                return r
        raise KeyError(f"instance {inst_name!r} has no role over {partition!r}")

    @property
    def participants(self):
        return [i for i in self.instances if i.roles]

    @property
    def conductor_instances(self):
        return [self.instance(n) for n in self.conductors]


def validate_model(m: ParadigmModel) -> ValidationReport:
    rep = ValidationReport()
    std_names = [s.name for s in m.stds]
    for label, names in (
        ("std", std_names),
        ("partition", [p.name for p in m.partitions]),
        ("instance", [i.name for i in m.instances]),
    ):
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            rep.add("model", f"duplicate {label} names {sorted(dup)}")
    stds = {s.name: s for s in m.stds}
    parts = {p.name: p for p in m.partitions}
    for s in m.stds:
        rep.extend(validate_std(s))
    for p in m.partitions:
        if p.owner not in stds:
            rep.add(f"partition {p.name}", f"unknown owner std {p.owner!r}")
        else:
            rep.extend(validate_partition(p, stds[p.owner]))
    insts = {i.name: i for i in m.instances}
    for inst in m.instances:
        iw = f"instance {inst.name}"
        if inst.std not in stds:
            rep.add(iw, f"unknown std {inst.std!r}")
            continue
        role_parts = [r.partition for r in inst.roles]
        if len(set(role_parts)) != len(role_parts):
            rep.add(iw, "two roles over the same partition")
        for r in inst.roles:
            if r.partition not in parts:
                rep.add(iw, f"role over unknown partition {r.partition!r}")
                continue
            p = parts[r.partition]
            if p.owner != inst.std:
                rep.add(iw, f"partition {p.name} belongs to {p.owner}, not {inst.std}")
            rep.extend(validate_role(r, p))
    for c in m.conductors:
        if c not in insts:
            rep.add("model", f"unknown conductor {c!r}")
    for n, rule in enumerate(m.rules, start=1):
        cs, ca, ct = rule.transition
        rw = f"rule {n} ({rule.conductor}: {cs} -{ca}-> {ct})"
        cond = insts.get(rule.conductor)
        if cond is None:
            rep.add(rw, f"unknown conductor instance {rule.conductor!r}")
        elif cond.std in stds and tuple(rule.transition) not in set(stds[cond.std].transitions):
            rep.add(rw, "conductor transition does not exist")
        if not rule.participants:
            rep.add(rw, "a rule needs at least one participant")
        seen = set()
        for pt in rule.participants:
            pw = f"{rw}, participant {pt.instance}"
            if pt.instance in seen:
                rep.add(pw, "instance participates twice")
            seen.add(pt.instance)
            if pt.instance == rule.conductor:
                rep.add(pw, "conductor cannot participate in its own rule")
            inst = insts.get(pt.instance)
            if inst is None:
                rep.add(pw, "unknown instance")
                continue
            role = next((r for r in inst.roles if r.partition == pt.partition), None)
            if role is None:
                rep.add(pw, f"no role over partition {pt.partition!r}")
                continue
            if tuple(pt.transfer) not in set(role.transfers):
                src, t, dst = pt.transfer
                rep.add(pw, f"phase transfer {src} -{t}-> {dst} is not in the role")
    return rep
