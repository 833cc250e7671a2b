from hypothesis import given, settings
from hypothesis import strategies as st

from paradigmkit import generators
from paradigmkit.model import (
    ConsistencyRule,
    ParadigmModel,
    Participation,
    Partition,
    PartitionEntry,
    Phase,
    Role,
    Std,
    Trap,
    validate_model,
    validate_partition,
    validate_role,
    validate_std,
)


class TestValidateStd:
    def test_client_is_valid(self, client):
        assert client.states == ("Out", "Waiting", "Busy", "AtDoor")
        assert client.initial == "Out"
        assert validate_std(client) == []

    def test_dangling_initial(self):
        std = Std("Z", ("a", "b"), ("x",), (("a", "x", "b"),), "c")
        assert len(validate_std(std)) == 1

    def test_server_n2(self):
        server = generators.server_std(2)
        assert len(server.states) == 5
        assert len(server.transitions) == 8
        assert set(server.states) == {"Idle", "NDChecking_1", "NDChecking_2",
                                      "NDHelping_1", "NDHelping_2"}
        assert validate_std(server) == []

    def test_duplicate_transition_rejected(self):
        std = Std("Z", ("a", "b"), ("x",), (("a", "x", "b"), ("a", "x", "b")), "a")
        rep = validate_std(std)
        assert len(rep) == 1 and "duplicate" in rep[0].message

    def test_unknown_state_and_action(self):
        std = Std("Z", ("a",), ("x",), (("a", "y", "q"),), "a")
        msgs = [v.message for v in validate_std(std)]
        assert any("unknown state" in m for m in msgs)
        assert any("unknown action" in m for m in msgs)


class TestValidatePartition:
    def test_cs_is_valid(self, client, cs):
        assert [e.phase.name for e in cs.entries] == ["Without", "Interrupt", "With"]
        traps = {t.name for e in cs.entries for t in e.traps}
        assert traps == {"triv", "notYet", "request", "done"}
        assert validate_partition(cs, client) == []

    def test_trap_busy_in_with_not_closed(self, client, cs):
        # With allows thank: Busy -> AtDoor, so {Busy} is left immediately
        with_ = cs.entry("With")
        assert ("Busy", "thank", "AtDoor") in with_.phase.transitions
        bad = PartitionEntry(with_.phase, (Trap.make("busy", {"Busy"}),))
        part = Partition("CS", "Client", (bad,))
        rep = validate_partition(part, client)
        assert [v.message for v in rep.errors] == ["not closed: Busy -thank-> AtDoor leaves the trap"]

    def test_empty_trap(self, client, cs):
        entry = PartitionEntry(cs.entry("With").phase, (Trap.make("none", ()),))
        rep = validate_partition(Partition("CS", "Client", (entry,)), client)
        assert any("empty" in v.message for v in rep.errors)

    def test_phase_transition_not_in_std(self, client):
        ph = Phase.make("P", {"Out", "Busy"}, [("Out", "teleport", "Busy")])
        rep = validate_partition(Partition("X", "Client", (PartitionEntry(ph, ()),)), client)
        assert any("not a transition" in v.message for v in rep.errors)

    def test_uncovered_state_is_only_a_warning(self, client, cs):
        part = Partition("X", "Client", (cs.entry("With"),))
        rep = validate_partition(part, client)
        assert rep.ok
        assert [v.message for v in rep.warnings] == ["state 'Out' lies in no phase"]


class TestValidateRole:
    def test_client_cs(self, cs):
        role = generators.cs_role()
        assert validate_role(role, cs) == []

    def test_with_done_interrupt_connects(self, cs):
        role = Role("CS", (("With", "done", "Interrupt"),), "With")
        assert validate_role(role, cs) == []

    def test_interrupt_request_without_connects(self, cs):
        # request = {Waiting} lies inside Without; intent is not checked
        role = Role("CS", (("Interrupt", "request", "Without"),), "Interrupt")
        assert validate_role(role, cs) == []

    def test_not_connecting(self, cs):
        # notYet contains Out, which With lacks
        role = Role("CS", (("Interrupt", "notYet", "With"),), "Without")
        rep = validate_role(role, cs)
        assert len(rep) == 1 and "does not connect" in rep[0].message

    def test_unknown_initial_and_foreign_trap(self, cs):
        role = Role("CS", (("Without", "done", "With"),), "Nowhere")
        msgs = " ".join(v.message for v in validate_role(role, cs))
        assert "initial phase" in msgs and "not a trap of phase Without" in msgs


class TestValidateModel:
    def test_basic_n2_valid(self, basic2):
        assert len(basic2.rules) == 8
        assert validate_model(basic2) == []

    def test_variants_valid(self):
        for v in generators.VARIANTS:
            for n in (1, 3):
                assert validate_model(generators.client_server(n, v)).ok

    def test_missing_trap_in_rule(self, basic2):
        rule = ConsistencyRule("Server", ("Idle", "check_1", "NDChecking_1"),
                               (Participation("Client1", "CS", ("Without", "nosuch", "Interrupt")),))
        m = ParadigmModel(basic2.stds, basic2.partitions, basic2.instances,
                          basic2.rules + (rule,), basic2.conductors)
        assert len(validate_model(m)) == 1

    def test_missing_conductor_transition(self, basic2):
        rule = ConsistencyRule("Server", ("Idle", "permit_1", "NDChecking_1"),
                               (Participation("Client1", "CS", ("Without", "triv", "Interrupt")),))
        m = ParadigmModel(basic2.stds, basic2.partitions, basic2.instances,
                          basic2.rules + (rule,), basic2.conductors)
        rep = validate_model(m)
        assert len(rep) == 1 and "conductor transition" in rep[0].message

    def test_conductor_as_participant(self, basic2):
        rule = ConsistencyRule("Client1", ("Out", "enter", "Waiting"),
                               (Participation("Client1", "CS", ("Without", "triv", "Interrupt")),))
        m = ParadigmModel(basic2.stds, basic2.partitions, basic2.instances,
                          (rule,), basic2.conductors)
        assert any("own rule" in v.message for v in validate_model(m))

    def test_empty_iff_parts_empty(self, basic2, client, cs):
        broken = Partition("CS", "Client", cs.entries + (
            PartitionEntry(Phase.make("Odd", {"Out"}), (Trap.make("t", ()),)),))
        m = ParadigmModel(basic2.stds, (broken,), basic2.instances, basic2.rules, basic2.conductors)
        assert validate_partition(broken, client) != []
        assert validate_model(m) != []


# --- properties -----------------------------------------------------------

STATES = ["s0", "s1", "s2", "s3", "s4", "s5"]


@st.composite
def std_and_phase(draw):
    n = draw(st.integers(1, len(STATES)))
    states = STATES[:n]
    trans = draw(st.sets(st.tuples(st.sampled_from(states), st.sampled_from("abc"),
                                   st.sampled_from(states)), max_size=12))
    std = Std.make("Z", sorted(trans), states[0], states=states, actions=list("abc"))
    ph_states = draw(st.sets(st.sampled_from(states), min_size=1))
    inside = [t for t in std.transitions if t[0] in ph_states and t[2] in ph_states]
    ph_trans = draw(st.sets(st.sampled_from(inside))) if inside else set()
    seed = draw(st.sets(st.sampled_from(sorted(ph_states)), min_size=1))
    return std, Phase.make("P", ph_states, ph_trans), seed


def forward_closure(phase, seed):
    out = set(seed)
    changed = True
    while changed:
        changed = False
        for s, _, t in phase.transitions:
            if s in out and t not in out:
                out.add(t)
                changed = True
    return out


@settings(max_examples=200, deadline=None)
@given(std_and_phase())
def test_valid_traps_are_closed(data):
    std, phase, seed = data
    trap = Trap.make("t", seed)
    part = Partition("X", "Z", (PartitionEntry(phase, (trap,)),))
    closed = all(t in trap.states for s, _, t in phase.transitions if s in trap.states)
    rep = validate_partition(part, std)
    assert rep.ok == closed
    # closing the seed always gives a valid trap
    good = Trap.make("t", forward_closure(phase, seed))
    assert validate_partition(Partition("X", "Z", (PartitionEntry(phase, (good,)),)), std).ok


@settings(max_examples=200, deadline=None)
@given(std_and_phase(), st.data())
def test_valid_transfers_connect(data, more):
    std, phase, seed = data
    trap = Trap.make("t", forward_closure(phase, seed))
    target_states = more.draw(st.sets(st.sampled_from(list(std.states)), min_size=1))
    target = Phase.make("Q", target_states)
    part = Partition("X", "Z", (PartitionEntry(phase, (trap,)), PartitionEntry(target, ())))
    role = Role("X", (("P", "t", "Q"),), "P")
    assert validate_role(role, part).ok == (trap.states <= target.states)
