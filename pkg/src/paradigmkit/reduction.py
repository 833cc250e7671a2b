"""First-reduce then-compose: globally inert actions and reduced components.

A detailed transition is globally inert when, in every phase containing
both of its endpoints, no trap tells them apart. Hiding inert actions and
minimizing the detailed STD modulo branching bisimulation gives a smaller
component that can replace the original before the system is composed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .bisim import Verdict, branching_quotient, equivalent
from .lts import TAU, LabelSet, Lts, SyncRule, SyncRuleSet, at_in, at_out, compose, hide, ok, ok_in
from .model import ParadigmModel, Std
from .translate import (
    DG_BLOCK,
    SYSTEM_BLOCK,
    component_sync_rules,
    protocol_sync_rules,
    std_as_lts,
    translate_component,
    translate_component_dg,
    translate_conductor,
    _check,
)


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    """Why a transition is observable: ``trap`` of ``phase`` holds ``inside`` only."""

    partition: str
    phase: str
    trap: str
    inside: str

    def __str__(self):
        return f"{self.partition}/{self.phase}: trap {self.trap} contains {self.inside} only"


@dataclass(frozen=True)
class InertReport:
    transitions: tuple  # ((src, action, dst), witness or None)
    actions: tuple  # (action, inert)

    @property
    def inert_actions(self) -> frozenset:
        return frozenset(a for a, ok_ in self.actions if ok_)

    @property
    def non_inert_actions(self) -> frozenset:
        return frozenset(a for a, ok_ in self.actions if not ok_)

    def witness(self, transition) -> Optional[Witness]:
        for tr, w in self.transitions:
            if tr == tuple(transition):
                return w
        raise KeyError(transition)

    def __str__(self):
        lines = []
        for (s, a, t), w in self.transitions:
            lines.append(f"{s} -{a}-> {t}: " + ("inert" if w is None else f"non-inert ({w})"))
        lines.append("inert actions: " + ", ".join(sorted(self.inert_actions)))
        return "\n".join(lines)


def inert_transitions(std: Std, partitions) -> InertReport:
    """Classify every transition of ``std`` against all given partitions."""
    rows = []
    for tr in std.transitions:
        x, _, y = tr
        witness = None
        for part in partitions:
            for entry in part.entries:
                if x not in entry.phase.states or y not in entry.phase.states:
                    continue
                for t in entry.traps:
                    if (x in t.states) != (y in t.states):
                        inside = x if x in t.states else y
                        witness = Witness(part.name, entry.phase.name, t.name, inside)
                        break
                if witness:
                    break
            if witness:
                break
        rows.append((tuple(tr), witness))
    actions = []
    for a in std.actions:
        actions.append((a, all(w is None for (_, b, _), w in rows if b == a)))
    return InertReport(tuple(rows), tuple(actions))


def instance_inert_report(model: ParadigmModel, inst_name: str) -> InertReport:
    inst = model.instance(inst_name)
    parts = [model.partition(r.partition) for r in inst.roles]
    return inert_transitions(model.std(inst.std), parts)


@dataclass(frozen=True)
class ReducedComponent:
    """Quotient of a detailed STD after hiding ``hidden``.

    ``block_of`` maps each detailed state to its block name; ``std`` has the
    blocks as states. A hidden step between two different blocks survives in
    ``std`` under its own action name and is listed in ``residual``: it is
    silent for observers but still needs the phase's permission.
    """

    original: Std
    hidden: frozenset
    std: Std
    block_of: Mapping
    members: Mapping
    residual: frozenset = frozenset()

    @property
    def blocks(self):
        return [frozenset(self.members[b]) for b in self.std.states]


def _block_name(states) -> str:
    return "+".join(sorted(states))


def quotient_detailed(std: Std, hidden) -> ReducedComponent:
    """Hide ``hidden`` in ``std`` and merge branching bisimilar states.

    ``hidden`` need not be inert; probing unsound choices is allowed.
    """
    hidden = frozenset(hidden)
    unknown = hidden - set(std.actions)
    if unknown:
        raise ReductionError(f"actions {sorted(unknown)} do not occur in {std.name}")
    plain_lts = std_as_lts(std)
    lts = hide(plain_lts, LabelSet(exact={a for a in plain_lts.labels if a.name in hidden}))
    _, bmap = branching_quotient(lts)
    members = bmap.members()
    names = [_block_name(lts.name(s) for s in group) for group in members]
    block_of = {lts.name(s): names[bmap[s]] for s in range(lts.n_states)}
    trans = []
    residual = set()
    for s, a, t in std.transitions:
        b, c = block_of[s], block_of[t]
        if a in hidden:
            if b == c:
                continue
            residual.add((b, a, c))
        trans.append((b, a, c))
    trans = list(dict.fromkeys(trans))
    actions = tuple(dict.fromkeys(a for _, a, _ in trans))
    qstd = Std(f"Q{std.name}", tuple(names), actions, tuple(trans), block_of[std.initial])
    mem = {names[i]: tuple(lts.name(s) for s in g) for i, g in enumerate(members)}
    return ReducedComponent(std, hidden, qstd, block_of, mem, frozenset(residual))


def reduced_detailed_lts(rc: ReducedComponent, queried, inst: Optional[str] = None):
    """Process of a reduced component and the ``at``-synchronizations it needs.

    Block ``B`` answers ``at!(B)`` for every queried detailed state inside it.
    """
    queried = set(queried)
    index = {b: i for i, b in enumerate(rc.std.states)}
    trans = []
    rules = []
    for b in rc.std.states:
        asked = [s for s in rc.original.states if s in queried and rc.block_of[s] == b]
        if asked:
            trans.append((index[b], at_out(b, inst), index[b]))
            for s in asked:
                rules.append(SyncRule((at_out(b, inst), at_in(s, inst)), TAU))
        for a, t in rc.std.out(b):
            trans.append((index[b], ok_in(a, inst), index[t]))
    lts = Lts.build(len(rc.std.states), index[rc.std.initial], trans, list(rc.std.states))
    return lts, SyncRuleSet(tuple(rules))


def reduced_component_lts(model: ParadigmModel, inst_name: str, hidden):
    """Reduced detailed process, global processes and synchronizations of one participant."""
    inst = model.instance(inst_name)
    if not inst.roles:
        raise ReductionError(f"{inst_name} has no role")
    std = model.std(inst.std)
    comp = translate_component(model, inst)
    rc = quotient_detailed(std, hidden)
    det, at_rules = reduced_detailed_lts(rc, comp.queried, inst.name)
    # ok-rules only; the at-rules come from the reduced component
    return rc, det, comp.globals, component_sync_rules(std, inst, frozenset()) + at_rules


@dataclass(frozen=True)
class LemmaCheck:
    """Result of an executable equivalence claim; truthy when it holds."""

    verdict: Verdict
    left: Lts
    right: Lts

    def __bool__(self):
        return bool(self.verdict)

    @property
    def holds(self) -> bool:
        return bool(self.verdict)


def reduced_dg(model: ParadigmModel, inst_name: str, hidden) -> Lts:
    """Reduced detailed process composed with the component's global processes."""
    _, det, globals_, sync = reduced_component_lts(model, inst_name, hidden)
    return compose([det, *globals_], sync, DG_BLOCK)


def _hidden_ok(inst_name, hidden) -> LabelSet:
    return LabelSet(exact={ok(a, inst_name) for a in hidden})


def verify_reduction(model: ParadigmModel, inst_name: str, hidden) -> LemmaCheck:
    """Does the reduced component behave like the original with ``ok(hidden)`` hidden?"""
    inst = model.instance(inst_name)
    std = model.std(inst.std)
    hidden = frozenset(hidden)
    unknown = hidden - set(std.actions)
    if unknown:
        raise ReductionError(f"actions {sorted(unknown)} do not occur in {std.name}")
    # hiding ok(hidden) on the left only affects residual steps
    left = hide(reduced_dg(model, inst_name, hidden), _hidden_ok(inst.name, hidden))
    right = hide(translate_component_dg(model, inst_name), _hidden_ok(inst.name, hidden))
    return LemmaCheck(equivalent(left, right), left, right)


def verify_detailed_preservation(model: ParadigmModel, inst_name: str) -> LemmaCheck:
    """Is the detailed STD equivalent to the component with its trap steps hidden?

    False means participation in the protocol removes detailed behaviour.
    """
    inst = model.instance(inst_name)
    if not inst.roles:
        raise ReductionError(f"{inst_name} has no role")
    std = model.std(inst.std)
    detailed = std_as_lts(std, label=lambda a: ok(a, inst.name))
    hidden = hide(translate_component_dg(model, inst_name), LabelSet.of("trap"))
    return LemmaCheck(equivalent(detailed, hidden), detailed, hidden)


def default_hidden(model: ParadigmModel) -> dict:
    """All globally inert actions of every participant."""
    return {
        inst.name: instance_inert_report(model, inst.name).inert_actions
        for inst in model.participants
    }


def reduced_system(model: ParadigmModel, hidden: Optional[Mapping] = None,
                   *, check: bool = True, **kw) -> Lts:
    """The system with every participant replaced by its reduced component.

    ``hidden`` maps instance names to the actions to abstract from (default:
    their inert actions). Unless ``check`` is false, each replacement must
    first pass :func:`verify_reduction`.
    """
    _check(model)
    if hidden is None:
        hidden = default_hidden(model)
    parts = []
    sync = SyncRuleSet()
    cache = {}
    for inst in model.participants:
        g = frozenset(hidden.get(inst.name, ()))
        if check:
            # instances sharing std, roles and hidden set reduce identically
            key = (inst.std, tuple(r for r in inst.roles), g)
            if key not in cache:
                cache[key] = verify_reduction(model, inst.name, g)
            if not cache[key]:
                raise ReductionError(f"reduction of {inst.name} with hidden {sorted(g)} "
                                     f"is not sound: {cache[key].verdict}")
        _, det, globals_, rules = reduced_component_lts(model, inst.name, g)
        parts.append(det)
        parts.extend(globals_)
        sync = sync + rules
    for inst in model.conductor_instances:
        parts.append(translate_conductor(model.std(inst.std), inst.name))
    sync = sync + protocol_sync_rules(model)
    return compose(parts, sync, SYSTEM_BLOCK, **kw)
