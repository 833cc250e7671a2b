"""Encoding of Paradigm models as networks of synchronizing LTSs.

Each participant becomes a *detailed* process (``at!``/``ok?`` actions) plus
one *global* process per role (``ok!``/``at?``/``trap`` actions). Conductors
keep their STD with every label wrapped in ``man``. Consistency rules turn
into multi-way synchronizations ``man(l) | trap(t1) | ... -> l``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .lts import (
    TAU,
    Label,
    LabelSet,
    Lts,
    SyncRule,
    SyncRuleSet,
    at_in,
    at_out,
    compose,
    man,
    ok,
    ok_in,
    ok_out,
    result,
    trap,
)
from .model import (
    Instance,
    ParadigmModel,
    Partition,
    Role,
    Std,
    validate_model,
    validate_role,
)

DG_BLOCK = LabelSet.of("at!", "at?", "ok!", "ok?")
SYSTEM_BLOCK = LabelSet.of("man", "trap", "at!", "at?", "ok!", "ok?")


class TranslationError(ValueError):
    pass


@dataclass(frozen=True)
class KnowledgeState:
    """A global-process node: current phase plus the traps known to be entered."""

    phase: str
    known: frozenset

    def render(self, part: Partition) -> str:
        entry = part.entry(self.phase)
        init = initial_knowledge(part, self.phase)
        if self.known == init:
            return f"{self.phase}[triv]"
        sets = {t.name: t.states for t in entry.traps}
        extra = self.known - init
        # most specific traps only; the others follow from them
        shown = [
            t.name
            for t in entry.traps
            if t.name in extra
            and not any(o != t.name and sets[o] < sets[t.name] for o in self.known)
        ]
        return f"{self.phase}[{'+'.join(shown)}]"


def initial_knowledge(part: Partition, phase: str) -> frozenset:
    """Traps that hold trivially on entering ``phase`` (they cover the phase)."""
    entry = part.entry(phase)
    return frozenset(t.name for t in entry.traps if entry.phase.states <= t.states)


def core(part: Partition, node: KnowledgeState) -> frozenset:
    """Detailed states still possible given the knowledge in ``node``."""
    entry = part.entry(node.phase)
    states = entry.phase.states
    for t in entry.traps:
        if t.name in node.known:
            states = states & t.states
    return states


def transfer_names(role: Role) -> dict:
    """Label name used for each phase transfer of ``role``.

    The trap name suffices when it determines the transfer; otherwise the
    source and target phases are appended to keep transfers apart.
    """
    by_trap = {}
    for tr in role.transfers:
        by_trap.setdefault(tr[1], []).append(tr)
    names = {}
    for t, trs in by_trap.items():
        for src, _, dst in trs:
            names[(src, t, dst)] = t if len(trs) == 1 else f"{t}[{src}->{dst}]"
    return names


def _trap_prefix(inst: Instance, role: Role) -> str:
    return "" if len(inst.roles) <= 1 else f"{role.partition}."


def trap_label(inst: Instance, role: Role, transfer) -> Label:
    name = transfer_names(role)[tuple(transfer)]
    return trap(_trap_prefix(inst, role) + name, inst.name)


def translate_global(role: Role, part: Partition, inst: Instance | None = None) -> Lts:
    return global_process(role, part, inst)[0]


def global_process(role: Role, part: Partition, inst: Instance | None = None):
    """Global process of a role, built over knowledge states.

    From node (S, K) with possible detailed states ``core``:
    ``ok!(a)`` self-loops for phase actions leaving ``core``; ``at?(s)`` for
    ``s`` in ``core`` whenever it teaches a new trap; ``trap(t)`` for known
    ``t`` along each transfer ``S -t-> S'``, carrying over the traps of ``S'``
    that contain ``t``.

    Returns the LTS and the :class:`KnowledgeState` of every LTS state.
    """
    rep = validate_role(role, part)
    if not rep.ok:
        raise TranslationError(f"invalid role:\n{rep}")
    iname = inst.name if inst is not None else None
    prefix = _trap_prefix(inst, role) if inst is not None else ""
    tnames = transfer_names(role)
    # deterministic orders
    state_order = {}
    action_order = {}
    for e in part.entries:
        for s, a, t in sorted(e.phase.transitions):
            action_order.setdefault(a, len(action_order))
        for s in sorted(e.phase.states):
            state_order.setdefault(s, len(state_order))

    def knowledge_after(node, s):
        entry = part.entry(node.phase)
        return node.known | frozenset(t.name for t in entry.traps if s in t.states)

    start = KnowledgeState(role.initial, initial_knowledge(part, role.initial))
    index = {start: 0}
    order = [start]
    queue = deque([start])
    trans = []

    def visit(node):
        if node not in index:
            index[node] = len(order)
            order.append(node)
            queue.append(node)
        return index[node]

    while queue:
        node = queue.popleft()
        src = index[node]
        entry = part.entry(node.phase)
        here = core(part, node)
        acts = {a for x, a, _ in entry.phase.transitions if x in here}
        for a in sorted(acts, key=action_order.get):
            trans.append((src, ok_out(a, iname), src))
        for s in sorted(here, key=state_order.get):
            known = knowledge_after(node, s)
            if known != node.known:
                trans.append((src, at_in(s, iname), visit(KnowledgeState(node.phase, known))))
        traps = {t.name: t for t in entry.traps}
        for src_phase, tname, dst in role.transfers:
            if src_phase != node.phase or tname not in node.known:
                continue
            covered = traps[tname].states
            dst_entry = part.entry(dst)
            known = initial_knowledge(part, dst) | frozenset(
                t.name for t in dst_entry.traps if covered <= t.states
            )
            label = trap(prefix + tnames[(src_phase, tname, dst)], iname)
            trans.append((src, label, visit(KnowledgeState(dst, known))))

    names = [n.render(part) for n in order]
    return Lts.build(len(order), 0, trans, names), order


def queried_states(globals_) -> frozenset:
    """Detailed states asked about by some ``at?`` edge."""
    return frozenset(a.name for g in globals_ for a in g.labels if a.kind == "at?")


def translate_detailed(std: Std, queried=frozenset(), inst: str | None = None) -> Lts:
    """Detailed process: ``ok?(a)`` per transition, ``at!(x)`` loops on queried states."""
    queried = set(queried)
    index = {s: i for i, s in enumerate(std.states)}
    trans = []
    for s in std.states:
        if s in queried:
            trans.append((index[s], at_out(s, inst), index[s]))
        for a, t in std.out(s):
            trans.append((index[s], ok_in(a, inst), index[t]))
    return Lts.build(len(std.states), index[std.initial], trans, list(std.states))


def translate_conductor(std: Std, inst: str | None = None) -> Lts:
    index = {s: i for i, s in enumerate(std.states)}
    trans = [(index[s], man(a, inst), index[t]) for s, a, t in std.transitions]
    return Lts.build(len(std.states), index[std.initial], trans, list(std.states))


def std_as_lts(std: Std, label=None) -> Lts:
    """The STD itself as an LTS; labels default to plain actions."""
    return Lts.from_triples(std.transitions, std.initial, states=std.states, label=label)


@dataclass
class ComponentTranslation:
    instance: Instance
    detailed: Lts
    globals: list
    queried: frozenset


@dataclass
class TranslationUnit:
    components: dict
    conductors: dict
    sync: SyncRuleSet
    component_block: LabelSet = DG_BLOCK
    system_block: LabelSet = SYSTEM_BLOCK

    def parts(self):
        """System parts in display order: detailed, globals per participant, then conductors."""
        out = []
        for comp in self.components.values():
            out.append(comp.detailed)
            out.extend(comp.globals)
        out.extend(self.conductors.values())
        return out


def translate_component(model: ParadigmModel, inst: Instance) -> ComponentTranslation:
    std = model.std(inst.std)
    globals_ = [
        translate_global(r, model.partition(r.partition), inst) for r in inst.roles
    ]
    queried = queried_states(globals_)
    return ComponentTranslation(inst, translate_detailed(std, queried, inst.name), globals_, queried)


def component_sync_rules(std: Std, inst: Instance, queried) -> SyncRuleSet:
    """``ok?(a) | ok!(a) [| ok!(a) ...] -> ok(a)`` and ``at!(s) | at?(s) -> tau``."""
    n_roles = max(1, len(inst.roles))
    rules = []
    for a in std.actions:
        ops = (ok_in(a, inst.name),) + (ok_out(a, inst.name),) * n_roles
        rules.append(SyncRule(ops, ok(a, inst.name)))
    for s in std.states:
        if s in queried:
            rules.append(SyncRule((at_out(s, inst.name), at_in(s, inst.name)), TAU))
    return SyncRuleSet(tuple(rules))


def protocol_sync_rules(model: ParadigmModel) -> SyncRuleSet:
    rules = []
    for rule in model.rules:
        _, action, _ = rule.transition
        ops = [man(action, rule.conductor)]
        for pt in rule.participants:
            inst = model.instance(pt.instance)
            role = model.role(pt.instance, pt.partition)
            ops.append(trap_label(inst, role, pt.transfer))
        rules.append(SyncRule(tuple(ops), result(action, rule.conductor)))
    try:
        return SyncRuleSet(tuple(rules))
    except ValueError as exc:
        raise TranslationError(str(exc)) from None


def _check(model: ParadigmModel):
    rep = validate_model(model)
    if not rep.ok:
        raise TranslationError(f"invalid model:\n{rep}")


def translate_model(model: ParadigmModel) -> TranslationUnit:
    _check(model)
    comps = {}
    sync = SyncRuleSet()
    for inst in model.participants:
        comp = translate_component(model, inst)
        comps[inst.name] = comp
        sync = sync + component_sync_rules(model.std(inst.std), inst, comp.queried)
    conductors = {}
    for inst in model.conductor_instances:
        if inst.roles:
            raise TranslationError(f"conductor {inst.name} has roles")
        conductors[inst.name] = translate_conductor(model.std(inst.std), inst.name)
    sync = sync + protocol_sync_rules(model)
    return TranslationUnit(comps, conductors, sync)


def build_sync_rules(model: ParadigmModel) -> SyncRuleSet:
    return translate_model(model).sync


def translate_component_dg(model: ParadigmModel, inst_name: str) -> Lts:
    """Detailed and global processes of one component composed under H.

    ``trap`` actions stay free: they are the component's protocol interface.
    """
    inst = model.instance(inst_name)
    if not inst.roles:
        raise TranslationError(f"{inst_name} has no role")
    comp = translate_component(model, inst)
    sync = component_sync_rules(model.std(inst.std), inst, comp.queried)
    return compose([comp.detailed, *comp.globals], sync, DG_BLOCK)


def translate_system(model: ParadigmModel, **kw) -> Lts:
    unit = translate_model(model)
    return compose(unit.parts(), unit.sync, SYSTEM_BLOCK, **kw)
