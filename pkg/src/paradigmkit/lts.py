"""Flat labelled transition systems, parallel composition, hiding and .aut I/O."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

KINDS = ("at!", "at?", "ok!", "ok?", "ok", "man", "trap", "result", "plain")
BRACKETED = ("at!", "at?", "ok!", "ok?", "ok", "man", "trap")


@dataclass(frozen=True, order=True)
class Label:
    """An action label; ``kind == "tau"`` is the silent action.

    Component-owned labels carry the owning instance so that equally named
    actions of different instances never synchronize.
    """

    kind: str
    name: str = ""
    instance: Optional[str] = None

    def __post_init__(self):
        if self.kind == "tau":
            if self.name or self.instance is not None:
                raise ValueError("tau carries no payload")
        elif self.kind not in KINDS:
            raise ValueError(f"unknown label kind {self.kind!r}")
        elif not self.name:
            raise ValueError("base label needs a name")

    @property
    def is_tau(self) -> bool:
        return self.kind == "tau"

    def __str__(self) -> str:
        return format_label(self)


TAU = Label("tau")


def at_out(state, inst=None) -> Label:
    return Label("at!", state, inst)


def at_in(state, inst=None) -> Label:
    return Label("at?", state, inst)


def ok_out(action, inst=None) -> Label:
    return Label("ok!", action, inst)


def ok_in(action, inst=None) -> Label:
    return Label("ok?", action, inst)


def ok(action, inst=None) -> Label:
    return Label("ok", action, inst)


def man(action, inst=None) -> Label:
    return Label("man", action, inst)


def trap(name, inst=None) -> Label:
    return Label("trap", name, inst)


def result(name, inst=None) -> Label:
    return Label("result", name, inst)


def plain(name, inst=None) -> Label:
    return Label("plain", name, inst)


def format_label(label: Label) -> str:
    """Render a label the way it appears in ``.aut`` files."""
    if label.is_tau:
        return "tau"
    if label.kind in BRACKETED:
        text = f"{label.kind}({label.name})"
    elif label.kind == "plain" and label.instance is not None:
        text = f"plain({label.name})"
    else:
        text = label.name
    if label.instance is not None:
        text += f"@{label.instance}"
    return text


_LABEL_RE = re.compile(
    r"^(?:(?P<kind>at!|at\?|ok!|ok\?|ok|man|trap|plain)\((?P<arg>[^()@]+)\)|(?P<bare>[^()@\s]+))"
    r"(?:@(?P<inst>[^()@\s]+))?$"
)


def parse_label(text: str) -> Label:
    """Inverse of :func:`format_label`.

    A bare name with an instance suffix is a consistency-rule result, a bare
    name without one is a plain action.
    """
    if text in ("tau", "i"):
        return TAU
    m = _LABEL_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse label {text!r}")
    inst = m.group("inst")
    if m.group("kind"):
        return Label(m.group("kind"), m.group("arg"), inst)
    return Label("result" if inst is not None else "plain", m.group("bare"), inst)


@dataclass(frozen=True)
class Lts:
    """A labelled transition system over states ``0 .. n_states-1``.

    ``transitions`` is a tuple of ``(source, label, target)`` triples without
    duplicates. ``names`` optionally annotates states with readable names.
    """

    n_states: int
    initial: int
    transitions: tuple
    names: Optional[tuple] = None

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("an LTS has at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"initial state {self.initial} out of range")
        for s, a, t in self.transitions:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise ValueError(f"transition ({s}, {a}, {t}) out of range")
            if not isinstance(a, Label):
                raise TypeError(f"transition label {a!r} is not a Label")
        if self.names is not None and len(self.names) != self.n_states:
            raise ValueError("names must annotate every state")

    @classmethod
    def build(cls, n_states, initial, transitions, names=None) -> "Lts":
        """Construct an LTS, dropping duplicate transitions but keeping order."""
        seen = dict.fromkeys(transitions)
        return cls(n_states, initial, tuple(seen), None if names is None else tuple(names))

    @classmethod
    def from_triples(cls, triples, initial, states=None, label=None) -> "Lts":
        """Build an LTS from name-level triples ``(src, action, dst)``.

        States are numbered in the order given by ``states`` (or first
        appearance); ``label`` maps each action to a :class:`Label`.
        """
        order = list(states) if states is not None else []
        index = {s: i for i, s in enumerate(order)}

        def idx(s):
            if s not in index:
                index[s] = len(order)
                order.append(s)
            return index[s]

        idx(initial)
        label = label or (lambda a: a if isinstance(a, Label) else plain(a))
        trans = [(idx(s), label(a), idx(t)) for s, a, t in triples]
        return cls.build(len(order), index[initial], trans, [str(s) for s in order])

    @property
    def labels(self) -> frozenset:
        return frozenset(a for _, a, _ in self.transitions)

    def successors(self):
        """Adjacency list: ``out[s]`` is the list of ``(label, target)``."""
        out = [[] for _ in range(self.n_states)]
        for s, a, t in self.transitions:
            out[s].append((a, t))
        return out

    def name(self, s: int) -> str:
        return self.names[s] if self.names is not None else str(s)

    def state_index(self, name: str) -> int:
        if self.names is None:
            raise KeyError(name)
        return self.names.index(name)

    def edges(self) -> set:
        """Transitions as name-level triples, handy for comparisons in tests."""
        return {(self.name(s), a, self.name(t)) for s, a, t in self.transitions}


@dataclass(frozen=True)
class SyncRule:
    operands: tuple
    result: Label

    def __post_init__(self):
        if len(self.operands) < 2:
            raise ValueError("a synchronization needs at least two operands")
        for op in self.operands:
            if op.is_tau:
                raise ValueError("tau cannot synchronize")
        object.__setattr__(self, "operands", tuple(sorted(self.operands)))


@dataclass(frozen=True)
class SyncRuleSet:
    """Multi-way communication function: operand multisets to result labels."""

    rules: tuple = ()

    def __post_init__(self):
        seen = {}
        for rule in self.rules:
            key = rule.operands
            if key in seen and seen[key] != rule.result:
                raise ValueError(
                    f"operands {[str(o) for o in key]} map to both "
                    f"{seen[key]} and {rule.result}"
                )
            seen[key] = rule.result
        # drop exact duplicates, keep order
        object.__setattr__(self, "rules", tuple(dict.fromkeys(self.rules)))

    @classmethod
    def of(cls, *pairs) -> "SyncRuleSet":
        """``SyncRuleSet.of(((a, b), r), ...)``."""
        return cls(tuple(SyncRule(tuple(ops), res) for ops, res in pairs))

    def __add__(self, other: "SyncRuleSet") -> "SyncRuleSet":
        return SyncRuleSet(self.rules + other.rules)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    @property
    def operand_labels(self) -> frozenset:
        return frozenset(op for r in self.rules for op in r.operands)


@dataclass(frozen=True)
class LabelSet:
    """A set of label patterns: whole kinds (any payload) and exact labels.

    Used both for encapsulation (blocking) and for hiding. Tau never matches.
    """

    kinds: frozenset = frozenset()
    exact: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "kinds", frozenset(self.kinds))
        object.__setattr__(self, "exact", frozenset(self.exact))
        if "tau" in self.kinds or TAU in self.exact:
            raise ValueError("tau cannot be blocked or hidden")

    @classmethod
    def of(cls, *items) -> "LabelSet":
        kinds = {i for i in items if isinstance(i, str)}
        exact = {i for i in items if isinstance(i, Label)}
        return cls(kinds, exact)

    def __contains__(self, label: Label) -> bool:
        return not label.is_tau and (label.kind in self.kinds or label in self.exact)

    def __or__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.kinds | other.kinds, self.exact | other.exact)


EMPTY = LabelSet()
# BlockSet is the encapsulation reading of a LabelSet
BlockSet = LabelSet


def _as_labelset(patterns) -> LabelSet:
    if isinstance(patterns, LabelSet):
        return patterns
    return LabelSet.of(*patterns)


def hide(lts: Lts, patterns) -> Lts:
    """Rename every label matched by ``patterns`` to tau; states are unchanged."""
    pats = _as_labelset(patterns)
    trans = [(s, TAU if a in pats else a, t) for s, a, t in lts.transitions]
    return Lts.build(lts.n_states, lts.initial, trans, lts.names)


def rename(lts: Lts, mapping: Mapping[Label, Label] | Callable[[Label], Label]) -> Lts:
    """Substitute labels; labels absent from a mapping are kept."""
    f = mapping if callable(mapping) else (lambda a: mapping.get(a, a))
    trans = [(s, f(a), t) for s, a, t in lts.transitions]
    return Lts.build(lts.n_states, lts.initial, trans, lts.names)


def reachable(lts: Lts) -> Lts:
    """Restrict to states reachable from the initial state, renumbered BFS."""
    out = lts.successors()
    order = [lts.initial]
    index = {lts.initial: 0}
    queue = deque([lts.initial])
    while queue:
        s = queue.popleft()
        for _, t in out[s]:
            if t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
    trans = [
        (index[s], a, index[t])
        for s in order
        for a, t in out[s]
    ]
    names = None if lts.names is None else [lts.names[s] for s in order]
    return Lts.build(len(order), 0, trans, names)


@dataclass(frozen=True)
class Stats:
    states: int
    transitions: int
    alphabet: frozenset

    def __iter__(self):
        return iter((self.states, self.transitions, self.alphabet))


def stats(lts: Lts) -> Stats:
    return Stats(lts.n_states, len(lts.transitions), lts.labels)


def deadlocks(lts: Lts) -> list:
    """States without outgoing transitions."""
    has_out = {s for s, _, _ in lts.transitions}
    return [s for s in range(lts.n_states) if s not in has_out]


def compose(
    parts: Sequence[Lts],
    sync: SyncRuleSet = SyncRuleSet(),
    block=EMPTY,
    *,
    names: bool = True,
    observer: Optional[Callable[[tuple], None]] = None,
) -> Lts:
    """Reachable parallel composition of ``parts``.

    A part may move alone on any label not matched by ``block``. For each
    synchronization rule with k operands, k distinct parts fire transitions
    carrying exactly those labels together, producing one transition with the
    rule's result. Operands synchronize even when individually blocked.

    Composite states are numbered breadth-first from the tuple of initial
    states; the numbering is deterministic. ``observer`` is called with every
    discovered state tuple.
    """
    if not parts:
        raise ValueError("compose needs at least one part")
    block = _as_labelset(block)
    k = len(parts)

    # per part: out[state] -> {label: [targets]}, in first-seen order
    outs = []
    for p in parts:
        table = [dict() for _ in range(p.n_states)]
        for s, a, t in p.transitions:
            table[s].setdefault(a, []).append(t)
        outs.append(table)

    rules_by_operand: dict = {}
    for ri, rule in enumerate(sync.rules):
        for op in set(rule.operands):
            rules_by_operand.setdefault(op, []).append(ri)
    rules = sync.rules

    # which parts can ever offer a given label
    owners: dict = {}
    for i, p in enumerate(parts):
        for a in p.labels:
            owners.setdefault(a, []).append(i)

    init = tuple(p.initial for p in parts)
    index = {init: 0}
    order = [init]
    trans = []
    queue = deque([init])
    if observer is not None:
        observer(init)

    def visit(tup):
        j = index.get(tup)
        if j is None:
            j = index[tup] = len(order)
            order.append(tup)
            queue.append(tup)
            if observer is not None:
                observer(tup)
        return j

    while queue:
        cur = queue.popleft()
        src = index[cur]
        local = []
        enabled = {}
        for i in range(k):
            for a, targets in outs[i][cur[i]].items():
                enabled.setdefault(a, []).append((i, targets))
                if a not in block:
                    for t in targets:
                        local.append((a, i, t))
        for a, i, t in local:
            nxt = cur[:i] + (t,) + cur[i + 1:]
            trans.append((src, a, visit(nxt)))

        candidates = set()
        for a in enabled:
            for ri in rules_by_operand.get(a, ()):
                candidates.add(ri)
        for ri in sorted(candidates):
            rule = rules[ri]
            for moves in _sync_moves(rule.operands, enabled):
                nxt = list(cur)
                for i, t in moves:
                    nxt[i] = t
                trans.append((src, rule.result, visit(tuple(nxt))))

    ann = None
    if names:
        ann = [
            "(" + ",".join(p.name(s) for p, s in zip(parts, tup)) + ")"
            for tup in order
        ]
    return Lts.build(len(order), 0, trans, ann)


def _sync_moves(operands, enabled):
    """All ways to assign operands to distinct parts that currently enable them."""
    results = []

    def go(idx, used, moves):
        if idx == len(operands):
            results.append(list(moves))
            return
        for i, targets in enabled.get(operands[idx], ()):
            if i in used:
                continue
            used.add(i)
            for t in targets:
                moves.append((i, t))
                go(idx + 1, used, moves)
                moves.pop()
            used.discard(i)

    go(0, set(), [])
    return results


# ---------------------------------------------------------------- .aut format

_HEADER_RE = re.compile(r"^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_TRANS_RE = re.compile(r'^\(\s*(\d+)\s*,\s*(?:"([^"]*)"|([^",()\s]+))\s*,\s*(\d+)\s*\)\s*$')


class AutFormatError(ValueError):
    pass


def export_aut(lts: Lts) -> str:
    lines = [f"des ({lts.initial}, {len(lts.transitions)}, {lts.n_states})"]
    for s, a, t in lts.transitions:
        lines.append(f'({s},"{format_label(a)}",{t})')
    return "\n".join(lines) + "\n"


def import_aut(text: str) -> Lts:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise AutFormatError("empty input")
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise AutFormatError(f"malformed header: {lines[0]!r}")
    initial, n_trans, n_states = (int(g) for g in m.groups())
    if n_states < 1 or initial >= n_states:
        raise AutFormatError("initial state out of range")
    body = lines[1:]
    if len(body) != n_trans:
        raise AutFormatError(f"header announces {n_trans} transitions, found {len(body)}")
    trans = []
    for lineno, ln in enumerate(body, start=2):
        if ln.count('"') % 2:
            raise AutFormatError(f"line {lineno}: unbalanced quotes")
        m = _TRANS_RE.match(ln)
        if m is None:
            raise AutFormatError(f"line {lineno}: malformed transition {ln!r}")
        s, t = int(m.group(1)), int(m.group(4))
        if s >= n_states or t >= n_states:
            raise AutFormatError(f"line {lineno}: state index out of range")
        text_label = m.group(2) if m.group(2) is not None else m.group(3)
        try:
            trans.append((s, parse_label(text_label), t))
        except ValueError as exc:
            raise AutFormatError(f"line {lineno}: {exc}") from None
    return Lts.build(n_states, initial, trans)


def export_names(lts: Lts) -> str:
    """Sidecar listing ``index name`` per line (Aldebaran has no name field)."""
    return "".join(f"{i} {lts.name(i)}\n" for i in range(lts.n_states))


def export_dot(lts: Lts, title: str = "lts") -> str:
    lines = [f'digraph "{title}" {{', "  rankdir=LR;", '  __init [shape=point];']
    for i in range(lts.n_states):
        lines.append(f'  {i} [label="{lts.name(i)}"];')
    lines.append(f"  __init -> {lts.initial};")
    for s, a, t in lts.transitions:
        style = ", style=dashed" if a.is_tau else ""
        lines.append(f'  {s} -> {t} [label="{format_label(a)}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
