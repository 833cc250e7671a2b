"""Textual Paradigm model format.

A model file is a sequence of declarations::

    std Client {
        initial Out;
        states Out, Waiting, Busy, AtDoor;
        actions enter, explain, thank, leave;
        Out -enter-> Waiting;
        ...
    }
    partition CS of Client {
        phase Without {
            states Out, Waiting, AtDoor;
            trans Out -enter-> Waiting, AtDoor -leave-> Out;
            traps { triv = {Out, Waiting, AtDoor}; }
        }
        ...
    }
    instance Client1 = Client;
    role Client1(CS) {
        initial Without;
        Without -triv-> Interrupt;
        ...
    }
    conductor Server = Server;
    rule Server: Idle -check_1-> NDChecking_1 * Client1(CS): Without -triv-> Interrupt;

``states``/``actions`` lines are optional in an ``std`` block (they fix the
order). ``#`` starts a comment.
"""

from __future__ import annotations

import re

from .model import (
    ConsistencyRule,
    Instance,
    ParadigmModel,
    Participation,
    Partition,
    PartitionEntry,
    Phase,
    Role,
    Std,
    ValidationReport,
    Trap,
    validate_model,
)


class ModelSyntaxError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class ModelValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(f"model is not valid:\n{report}")
        self.report = report


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<punct>[{};,:*()=\-])"
)

KEYWORDS = {"std", "partition", "of", "phase", "states", "actions", "trans", "traps",
            "initial", "role", "instance", "conductor", "rule"}


class _Tokens:
    def __init__(self, text):
        self.toks = []
        line, col, pos = 1, 1, 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ModelSyntaxError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            val = m.group()
            if kind == "nl":
                line, col = line + 1, 1
            else:
                if kind not in ("ws", "comment"):
                    self.toks.append((kind, val, line, col))
                col += len(val)
            pos = m.end()
        self.toks.append(("eof", "", line, col))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ModelSyntaxError(message, tok[2], tok[3])

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            shown = tok[1] or "end of file"
            raise self.error(f"expected {value!r}, found {shown!r}", tok)
        return tok

    def ident(self):
        tok = self.next()
        if tok[0] != "ident":
            shown = tok[1] or "end of file"
            raise self.error(f"expected a name, found {shown!r}", tok)
        return tok[1]

    def accept(self, value):
        if self.peek()[1] == value:
            self.i += 1
            return True
        return False


def _ident_list(tk):
    items = [tk.ident()]
    while tk.accept(","):
        items.append(tk.ident())
    return items


def _arrow(tk):
    """``src -label-> dst``"""
    src = tk.ident()
    tk.expect("-")
    label = tk.ident()
    tk.expect("->")
    dst = tk.ident()
    return (src, label, dst)


def _std(tk):
    name = tk.ident()
    tk.expect("{")
    initial = states = actions = None
    trans = []
    while not tk.accept("}"):
        tok = tk.peek()
        if tk.accept("initial"):
            initial = tk.ident()
        elif tk.accept("states"):
            states = _ident_list(tk)
        elif tk.accept("actions"):
            actions = _ident_list(tk)
        elif tok[0] == "ident":
            trans.append(_arrow(tk))
        else:
            raise tk.error(f"unexpected {tok[1]!r} in std {name}")
        tk.expect(";")
    if initial is None:
        raise tk.error(f"std {name} has no initial state")
    return Std.make(name, trans, initial, states, actions)


def _phase(tk):
    name = tk.ident()
    tk.expect("{")
    states, trans, traps = [], [], []
    while not tk.accept("}"):
        if tk.accept("states"):
            states = _ident_list(tk)
            tk.expect(";")
        elif tk.accept("trans"):
            trans = [_arrow(tk)]
            while tk.accept(","):
                trans.append(_arrow(tk))
            tk.expect(";")
        elif tk.accept("traps"):
            tk.expect("{")
            while not tk.accept("}"):
                tname = tk.ident()
                tk.expect("=")
                tk.expect("{")
                members = [] if tk.peek()[1] == "}" else _ident_list(tk)
                tk.expect("}")
                tk.expect(";")
                traps.append(Trap.make(tname, members))
        else:
            raise tk.error(f"unexpected {tk.peek()[1]!r} in phase {name}")
    return PartitionEntry(Phase.make(name, states, trans), tuple(traps))


def _partition(tk):
    name = tk.ident()
    tk.expect("of")
    owner = tk.ident()
    tk.expect("{")
    entries = []
    while not tk.accept("}"):
        tk.expect("phase")
        entries.append(_phase(tk))
    return Partition(name, owner, tuple(entries))


def _role(tk):
    inst = tk.ident()
    tk.expect("(")
    part = tk.ident()
    tk.expect(")")
    tk.expect("{")
    initial = None
    transfers = []
    while not tk.accept("}"):
        if tk.accept("initial"):
            initial = tk.ident()
        else:
            transfers.append(_arrow(tk))
        tk.expect(";")
    if initial is None:
        raise tk.error(f"role {inst}({part}) has no initial phase")
    return inst, Role(part, tuple(transfers), initial)


def _rule(tk):
    conductor = tk.ident()
    tk.expect(":")
    transition = _arrow(tk)
    participants = []
    tk.expect("*")
    while True:
        inst = tk.ident()
        tk.expect("(")
        part = tk.ident()
        tk.expect(")")
        tk.expect(":")
        participants.append(Participation(inst, part, _arrow(tk)))
        if not tk.accept(","):
            break
    tk.expect(";")
    return ConsistencyRule(conductor, transition, tuple(participants))


def parse_model(text: str, validate: bool = True) -> ParadigmModel:
    """Parse a model file; raises :class:`ModelSyntaxError` or :class:`ModelValidationError`."""
    tk = _Tokens(text)
    stds, parts, insts, roles, rules, conductors = [], [], [], [], [], []
    while tk.peek()[0] != "eof":
        tok = tk.next()
        kw = tok[1]
        if kw == "std":
            stds.append(_std(tk))
        elif kw == "partition":
            parts.append(_partition(tk))
        elif kw in ("instance", "conductor"):
            name = tk.ident()
            tk.expect("=")
            std = tk.ident()
            tk.expect(";")
            insts.append((name, std))
            if kw == "conductor":
                conductors.append(name)
        elif kw == "role":
            where = tk.peek()
            roles.append(_role(tk) + (where,))
        elif kw == "rule":
            rules.append(_rule(tk))
        else:
            raise tk.error(f"expected a declaration, found {kw!r}", tok)
    known = {n for n, _ in insts}
    for inst, _, where in roles:
        if inst not in known:
            raise tk.error(f"role for undeclared instance {inst!r}", where)
    instances = tuple(
        Instance(n, s, tuple(r for i, r, _ in roles if i == n)) for n, s in insts
    )
    model = ParadigmModel(tuple(stds), tuple(parts), instances, tuple(rules), tuple(conductors))
    if validate:
        rep = validate_model(model)
        if not rep.ok:
            raise ModelValidationError(rep)
    return model


def _arr(t):
    return f"{t[0]} -{t[1]}-> {t[2]}"


def print_model(model: ParadigmModel) -> str:
    """Canonical text of ``model``; ``parse_model(print_model(m)) == m``."""
    out = []
    for std in model.stds:
        out.append(f"std {std.name} {{")
        out.append(f"    initial {std.initial};")
        out.append(f"    states {', '.join(std.states)};")
        if std.actions:
            out.append(f"    actions {', '.join(std.actions)};")
        for t in std.transitions:
            out.append(f"    {_arr(t)};")
        out.append("}")
        out.append("")
    for part in model.partitions:
        order = {s: i for i, s in enumerate(model.std(part.owner).states)}
        key = lambda s: (order.get(s, len(order)), s)
        torder = {t: i for i, t in enumerate(model.std(part.owner).transitions)}
        out.append(f"partition {part.name} of {part.owner} {{")
        for e in part.entries:
            out.append(f"    phase {e.phase.name} {{")
            out.append(f"        states {', '.join(sorted(e.phase.states, key=key))};")
            if e.phase.transitions:
                trs = sorted(e.phase.transitions, key=lambda t: (torder.get(t, len(torder)), t))
                out.append(f"        trans {', '.join(_arr(t) for t in trs)};")
            out.append("        traps {")
            for t in e.traps:
                out.append(f"            {t.name} = {{{', '.join(sorted(t.states, key=key))}}};")
            out.append("        }")
            out.append("    }")
        out.append("}")
        out.append("")
    cond = set(model.conductors)
    for inst in model.instances:
        kw = "conductor" if inst.name in cond else "instance"
        out.append(f"{kw} {inst.name} = {inst.std};")
    out.append("")
    for inst in model.instances:
        for r in inst.roles:
            out.append(f"role {inst.name}({r.partition}) {{")
            out.append(f"    initial {r.initial};")
            for t in r.transfers:
                out.append(f"    {_arr(t)};")
            out.append("}")
    if any(i.roles for i in model.instances):
        out.append("")
    for rule in model.rules:
        parts = ", ".join(f"{p.instance}({p.partition}): {_arr(p.transfer)}" for p in rule.participants)
        out.append(f"rule {rule.conductor}: {_arr(rule.transition)} * {parts};")
    return "\n".join(out).rstrip() + "\n"
