import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import direct_inert, random_paradigm_std
from paradigmkit import generators
from paradigmkit.bisim import equivalent, oracle_equivalent
from paradigmkit.lts import LabelSet, deadlocks, format_label, hide, stats
from paradigmkit.model import Instance, ParadigmModel, Partition, PartitionEntry, Phase, Role, Trap
from paradigmkit.reduction import (
    ReductionError,
    Witness,
    default_hidden,
    inert_transitions,
    instance_inert_report,
    quotient_detailed,
    reduced_detailed_lts,
    reduced_dg,
    reduced_system,
    verify_detailed_preservation,
    verify_reduction,
)
from paradigmkit.translate import translate_component, translate_system


class TestInert:
    def test_client(self, client, cs):
        rep = inert_transitions(client, [cs])
        assert rep.inert_actions == {"explain", "leave"}
        assert rep.non_inert_actions == {"enter", "thank"}

    def test_enter_witness(self, client, cs):
        w = inert_transitions(client, [cs]).witness(("Out", "enter", "Waiting"))
        assert w == Witness("CS", "Interrupt", "notYet", "Out")

    def test_return_not_inert(self, return1):
        rep = instance_inert_report(return1, "Client1")
        assert "return" in rep.non_inert_actions
        w = rep.witness(("Waiting", "return", "Out"))
        assert w.phase == "Interrupt"
        # request separates the endpoints as well
        req = return1.partition("CS").entry("Interrupt").trap("request")
        assert ("Waiting" in req.states) != ("Out" in req.states)

    def test_simple_variant(self, simple1):
        # the coarse partition still separates Out from Waiting and Busy from AtDoor
        assert instance_inert_report(simple1, "Client1").inert_actions == {"explain", "leave"}

    def test_report_text(self, basic2):
        text = str(instance_inert_report(basic2, "Client1"))
        assert "inert actions: explain, leave" in text

    def test_witness_lookup_unknown(self, client, cs):
        with pytest.raises(KeyError):
            inert_transitions(client, [cs]).witness(("Out", "fly", "Busy"))

    def test_no_partitions_means_everything_inert(self, client):
        assert inert_transitions(client, []).inert_actions == set(client.actions)


class TestQuotientDetailed:
    def test_qclient(self, client):
        rc = quotient_detailed(client, {"explain", "leave"})
        assert set(rc.blocks) == {frozenset({"Out", "AtDoor"}), frozenset({"Waiting", "Busy"})}
        assert set(rc.std.transitions) == {("AtDoor+Out", "enter", "Busy+Waiting"),
                                           ("Busy+Waiting", "thank", "AtDoor+Out")}
        assert rc.std.initial == "AtDoor+Out"
        assert rc.residual == frozenset()

    def test_nothing_hidden(self, client):
        rc = quotient_detailed(client, ())
        assert len(rc.std.states) == 4
        assert set(rc.std.transitions) == set(client.transitions)

    def test_unsound_choice(self, client):
        rc = quotient_detailed(client, {"enter", "thank"})
        assert set(rc.blocks) == {frozenset({"Out", "Waiting"}), frozenset({"Busy", "AtDoor"})}

    def test_unknown_action(self, client):
        with pytest.raises(ReductionError):
            quotient_detailed(client, {"dance"})

    def test_residual_hidden_steps(self):
        # Waiting chooses between two hidden steps, so no state merges
        std = generators.client_std("return")
        rc = quotient_detailed(std, {"explain", "return"})
        assert len(rc.std.states) == 4
        assert rc.residual == {("Waiting", "return", "Out"), ("Waiting", "explain", "Busy")}

    def test_monotone(self, client):
        acts = list(client.actions)
        for i in range(len(acts) + 1):
            small = quotient_detailed(client, acts[:i])
            big = quotient_detailed(client, acts[:i + 1])
            assert len(big.std.states) <= len(small.std.states)


class TestReducedDetailed:
    def test_qclient_hat(self, basic2, client):
        rc = quotient_detailed(client, {"explain", "leave"})
        comp = translate_component(basic2, basic2.instance("Client1"))
        lts, rules = reduced_detailed_lts(rc, comp.queried, "Client1")
        labels = sorted(format_label(a) for a in lts.labels)
        assert lts.n_states == 2
        assert labels == ["at!(AtDoor+Out)@Client1", "at!(Busy+Waiting)@Client1",
                          "ok?(enter)@Client1", "ok?(thank)@Client1"]
        assert len(rules) == 3  # Out, AtDoor and Waiting are queried

    def test_unqueried_block_has_no_at(self, client):
        rc = quotient_detailed(client, {"explain", "leave"})
        lts, rules = reduced_detailed_lts(rc, {"Out"})
        assert [a.name for a in lts.labels if a.kind == "at!"] == ["AtDoor+Out"]
        assert len(rules) == 1

    def test_simple_single_state(self, simple1):
        std = simple1.std("Client")
        rc = quotient_detailed(std, std.actions)
        comp = translate_component(simple1, simple1.instance("Client1"))
        lts, _ = reduced_detailed_lts(rc, comp.queried)
        assert lts.n_states == 1


class TestLemmas:
    def test_basic(self, basic2):
        check = verify_reduction(basic2, "Client1", {"explain", "leave"})
        assert check
        assert (check.left.n_states, check.right.n_states) == (9, 13)

    def test_basic_unsound(self, basic2):
        assert not verify_reduction(basic2, "Client1", {"enter", "thank"})

    def test_return(self, return1):
        assert verify_reduction(return1, "Client1", {"explain", "leave"})

    def test_simple_all_labels(self, simple1):
        check = verify_reduction(simple1, "Client1", simple1.std("Client").actions)
        assert check and check.left.n_states == 3

    def test_unknown_action(self, basic2):
        with pytest.raises(ReductionError):
            verify_reduction(basic2, "Client1", {"dance"})

    def test_lemma2(self, basic2, simple1, return1):
        assert verify_detailed_preservation(basic2, "Client1")
        check = verify_detailed_preservation(simple1, "Client1")
        assert bool(check) == oracle_equivalent(check.left, check.right)
        # return is only allowed in Without, so Interrupt cuts it off
        assert not verify_detailed_preservation(return1, "Client1")

    def test_lemma2_phase_missing_transition(self, client):
        ph = Phase.make("P", client.states,
                        [t for t in client.transitions if t[1] != "thank"])
        part = Partition("X", "Client", (PartitionEntry(ph, (Trap.make("all", client.states),)),))
        m = ParadigmModel((client,), (part,),
                          (Instance("C", "Client", (Role("X", (), "P"),)),), (), ())
        check = verify_detailed_preservation(m, "C")
        assert not check
        assert oracle_equivalent(check.left, check.right) is False

    def test_no_role(self, basic2):
        with pytest.raises(ReductionError):
            verify_detailed_preservation(basic2, "Server")

    def test_reduced_dg_size(self, basic2):
        assert reduced_dg(basic2, "Client2", {"explain", "leave"}).n_states == 9


class TestReducedSystem:
    @pytest.mark.parametrize("n, expected", [(2, (32, 54)), (3, (92, 204))])
    def test_sizes(self, n, expected):
        assert tuple(stats(reduced_system(generators.client_server(n))))[:2] == expected

    def test_default_hidden(self, basic2):
        assert default_hidden(basic2) == {"Client1": {"explain", "leave"},
                                          "Client2": {"explain", "leave"}}

    def test_refuses_unsound(self, basic2):
        bad = {"Client1": {"enter", "thank"}, "Client2": {"enter", "thank"}}
        with pytest.raises(ReductionError):
            reduced_system(basic2, bad)
        # override builds it anyway
        assert reduced_system(basic2, bad, check=False).n_states > 0

    @pytest.mark.parametrize("variant", generators.VARIANTS)
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_protocol_preserved(self, variant, n):
        # hide everything but the result labels on both sides
        m = generators.client_server(n, variant)
        full = hide(translate_system(m), LabelSet.of("ok"))
        red = hide(reduced_system(m), LabelSet.of("ok"))
        assert equivalent(full, red)

    def test_no_deadlocks(self, basic2):
        assert deadlocks(reduced_system(basic2)) == []


# --- properties -----------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_inert_matches_direct_evaluation(seed):
    std, part = random_paradigm_std(random.Random(seed))
    rep = inert_transitions(std, [part])
    got = {tr for tr, w in rep.transitions if w is None}
    assert got == direct_inert(std, [part])
    for a, flag in rep.actions:
        assert flag == all(w is None for tr, w in rep.transitions if tr[1] == a)
    for tr, w in rep.transitions:
        if w is not None:
            entry = part.entry(w.phase)
            t = entry.trap(w.trap)
            assert (tr[0] in t.states) != (tr[2] in t.states)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.data())
def test_quotient_monotone_in_hidden_set(seed, data):
    std, _ = random_paradigm_std(random.Random(seed))
    small = data.draw(st.sets(st.sampled_from(std.actions)))
    extra = data.draw(st.sets(st.sampled_from(std.actions)))
    big = small | extra
    assert len(quotient_detailed(std, big).std.states) <= len(quotient_detailed(std, small).std.states)
