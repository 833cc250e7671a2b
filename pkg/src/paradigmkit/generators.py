"""The client/server critical-section model family.

``basic``  n clients cycling Out -> Waiting -> Busy -> AtDoor, a
           non-deterministic server checking them one at a time.
``return`` clients may withdraw a request (Waiting -return-> Out).
``simple`` service is granted unconditionally through a two-phase role.
"""

from __future__ import annotations

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
    Trap,
)

VARIANTS = ("basic", "return", "simple")

CLIENT_STATES = ("Out", "Waiting", "Busy", "AtDoor")
CLIENT_ACTIONS = ("enter", "explain", "thank", "leave")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")


def client_std(variant: str = "basic") -> Std:
    _check_variant(variant)
    trans = [
        ("Out", "enter", "Waiting"),
        ("Waiting", "explain", "Busy"),
        ("Busy", "thank", "AtDoor"),
        ("AtDoor", "leave", "Out"),
    ]
    actions = list(CLIENT_ACTIONS)
    if variant == "return":
        trans.append(("Waiting", "return", "Out"))
        actions.append("return")
    return Std("Client", CLIENT_STATES, tuple(actions), tuple(trans), "Out")


def cs_partition(std: Std, variant: str = "basic") -> Partition:
    outside = ("Out", "Waiting", "AtDoor")
    if variant == "simple":
        without = Phase.restrict(std, "Without", outside, {"enter", "leave"})
        served = Phase.restrict(std, "Served", CLIENT_STATES, {"explain", "thank", "leave"})
        return Partition("CS", std.name, (
            PartitionEntry(without, (Trap.make("triv", outside),)),
            PartitionEntry(served, (Trap.make("done", {"AtDoor", "Out"}),)),
        ))
    without_actions = {"enter", "leave"}
    if variant == "return":
        without_actions.add("return")
    without = Phase.restrict(std, "Without", outside, without_actions)
    interrupt = Phase.restrict(std, "Interrupt", outside, {"leave"})
    with_ = Phase.restrict(std, "With", ("Waiting", "Busy", "AtDoor"), {"explain", "thank"})
    return Partition("CS", std.name, (
        PartitionEntry(without, (Trap.make("triv", outside),)),
        PartitionEntry(interrupt, (
            Trap.make("notYet", {"Out", "AtDoor"}),
            Trap.make("request", {"Waiting"}),
        )),
        PartitionEntry(with_, (Trap.make("done", {"AtDoor"}),)),
    ))


def cs_role(variant: str = "basic") -> Role:
    if variant == "simple":
        return Role("CS", (("Without", "triv", "Served"), ("Served", "done", "Without")), "Without")
    return Role("CS", (
        ("Without", "triv", "Interrupt"),
        ("Interrupt", "notYet", "Without"),
        ("Interrupt", "request", "With"),
        ("With", "done", "Without"),
    ), "Without")


def server_std(n: int, variant: str = "basic") -> Std:
    ids = range(1, n + 1)
    states = ["Idle"]
    trans = []
    if variant == "simple":
        states += [f"NDHelping_{i}" for i in ids]
        for i in ids:
            trans.append(("Idle", f"permit_{i}", f"NDHelping_{i}"))
            trans.append((f"NDHelping_{i}", f"continue_{i}", "Idle"))
    else:
        states += [f"NDChecking_{i}" for i in ids] + [f"NDHelping_{i}" for i in ids]
        for i in ids:
            trans += [
                ("Idle", f"check_{i}", f"NDChecking_{i}"),
                (f"NDChecking_{i}", f"refuse_{i}", "Idle"),
                (f"NDChecking_{i}", f"permit_{i}", f"NDHelping_{i}"),
                (f"NDHelping_{i}", f"continue_{i}", "Idle"),
            ]
    actions = tuple(dict.fromkeys(a for _, a, _ in trans))
    return Std("Server", tuple(states), actions, tuple(trans), "Idle")


def _rules(n: int, variant: str):
    ids = range(1, n + 1)
    if variant == "simple":
        steps = [
            ("Idle", "permit_{i}", "NDHelping_{i}", ("Without", "triv", "Served")),
            ("NDHelping_{i}", "continue_{i}", "Idle", ("Served", "done", "Without")),
        ]
    else:
        steps = [
            ("Idle", "check_{i}", "NDChecking_{i}", ("Without", "triv", "Interrupt")),
            ("NDChecking_{i}", "refuse_{i}", "Idle", ("Interrupt", "notYet", "Without")),
            ("NDChecking_{i}", "permit_{i}", "NDHelping_{i}", ("Interrupt", "request", "With")),
            ("NDHelping_{i}", "continue_{i}", "Idle", ("With", "done", "Without")),
        ]
    rules = []
    for i in ids:
        for src, act, dst, transfer in steps:
            rules.append(ConsistencyRule(
                "Server",
                (src.format(i=i), act.format(i=i), dst.format(i=i)),
                (Participation(f"Client{i}", "CS", transfer),),
            ))
    return tuple(rules)


def client_server(n: int, variant: str = "basic") -> ParadigmModel:
    """The n-client / one-server model."""
    if n < 1:
        raise ValueError("need at least one client")
    _check_variant(variant)
    client = client_std(variant)
    server = server_std(n, variant)
    cs = cs_partition(client, variant)
    role = cs_role(variant)
    clients = tuple(Instance(f"Client{i}", client.name, (role,)) for i in range(1, n + 1))
    return ParadigmModel(
        stds=(client, server),
        partitions=(cs,),
        instances=clients + (Instance("Server", server.name),),
        rules=_rules(n, variant),
        conductors=("Server",),
    )
