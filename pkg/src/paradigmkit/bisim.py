"""Branching bisimulation: signature-based partition refinement and quotients.

The equivalence is divergence-blind, so states on a tau-cycle are merged up
front. Refinement then iterates branching signatures until the number of
blocks is stable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .lts import Lts


@dataclass(frozen=True)
class StatePartition:
    """``block[s]`` is the block of state ``s``; blocks are ``0 .. count-1``."""

    block: tuple
    count: int
    rounds: int = 0

    def members(self):
        out = [[] for _ in range(self.count)]
        for s, b in enumerate(self.block):
            out[b].append(s)
        return out


@dataclass(frozen=True)
class BlockMap:
    """Total, surjective map from original states onto the states of ``lts``."""

    mapping: tuple
    lts: Lts

    def __getitem__(self, s):
        return self.mapping[s]

    def members(self):
        out = [[] for _ in range(self.lts.n_states)]
        for s, b in enumerate(self.mapping):
            out[b].append(s)
        return out


def _tau_sccs(lts: Lts):
    """Strongly connected components of the tau-graph (iterative Tarjan).

    Returns ``comp[s]`` with components numbered by their smallest member.
    """
    n = lts.n_states
    succ = [[] for _ in range(n)]
    for s, a, t in lts.transitions:
        if a.is_tau:
            succ[s].append(t)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    raw = [-1] * n
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            if i < len(succ[v]):
                work.append((v, i + 1))
                w = succ[v][i]
                if index[w] == -1:
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    raw[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    # renumber by smallest member for stable output
    renum = {}
    comp = [0] * n
    for s in range(n):
        c = raw[s]
        if c not in renum:
            renum[c] = len(renum)
        comp[s] = renum[c]
    return comp, len(renum)


def _names_for(lts: Lts, members) -> Optional[list]:
    if lts.names is None:
        return None
    return ["+".join(sorted(lts.names[s] for s in group)) for group in members]


def collapse_tau_scc(lts: Lts):
    """Merge every tau-strongly-connected set of states into one state."""
    comp, count = _tau_sccs(lts)
    trans = [
        (comp[s], a, comp[t])
        for s, a, t in lts.transitions
        if not (a.is_tau and comp[s] == comp[t])
    ]
    members = [[] for _ in range(count)]
    for s, c in enumerate(comp):
        members[c].append(s)
    out = Lts.build(count, comp[lts.initial], trans, _names_for(lts, members))
    return out, BlockMap(tuple(comp), out)


def _tau_order(n, tau_succ):
    """States ordered so that every tau-successor precedes its source."""
    indeg = [0] * n
    for s in range(n):
        for t in tau_succ[s]:
            indeg[t] += 1
    queue = deque(s for s in range(n) if indeg[s] == 0)
    order = []
    while queue:
        s = queue.popleft()
        order.append(s)
        for t in tau_succ[s]:
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    if len(order) != n:
        raise ValueError("tau-graph is cyclic; collapse tau-SCCs first")
    order.reverse()
    return order


def refine(lts: Lts, history: Optional[list] = None) -> StatePartition:
    """Coarsest branching bisimulation of a tau-cycle-free LTS.

    ``history``, when given, receives the block vector after every round.
    """
    n = lts.n_states
    out = lts.successors()
    tau_succ = [[t for a, t in out[s] if a.is_tau] for s in range(n)]
    order = _tau_order(n, tau_succ)
    block = [0] * n
    count = 1
    rounds = 0
    while True:
        rounds += 1
        sig = [None] * n
        for s in order:
            b = block[s]
            own = set()
            for a, t in out[s]:
                bt = block[t]
                if a.is_tau and bt == b:
                    own |= sig[t]
                else:
                    own.add((a, bt))
            sig[s] = frozenset(own)
        ids = {}
        new = [0] * n
        for s in range(n):
            key = (block[s], sig[s])
            if key not in ids:
                ids[key] = len(ids)
            new[s] = ids[key]
        block = new
        if history is not None:
            history.append(tuple(block))
        if len(ids) == count:
            break
        count = len(ids)
    return StatePartition(tuple(block), count, rounds)


def branching_quotient(lts: Lts):
    """Minimize modulo branching bisimulation.

    Returns the quotient LTS (one state per class, no inert tau-steps) and the
    map from original states to quotient states.
    """
    collapsed, scc_map = collapse_tau_scc(lts)
    part = refine(collapsed)
    mapping = tuple(part.block[scc_map[s]] for s in range(lts.n_states))
    trans = []
    for s, a, t in collapsed.transitions:
        bs, bt = part.block[s], part.block[t]
        if a.is_tau and bs == bt:
            continue
        trans.append((bs, a, bt))
    members = [[] for _ in range(part.count)]
    for s, b in enumerate(mapping):
        members[b].append(s)
    q = Lts.build(part.count, mapping[lts.initial], sorted(set(trans), key=_trans_key),
                  _names_for(lts, members))
    return q, BlockMap(mapping, q)


def _trans_key(tr):
    s, a, t = tr
    return (s, a.kind, a.name, a.instance or "", t)


def disjoint_union(l1: Lts, l2: Lts):
    """Both LTSs side by side; returns the union and the offset of ``l2``."""
    off = l1.n_states
    trans = list(l1.transitions) + [(s + off, a, t + off) for s, a, t in l2.transitions]
    names = None
    if l1.names is not None and l2.names is not None:
        names = list(l1.names) + list(l2.names)
    return Lts.build(l1.n_states + l2.n_states, l1.initial, trans, names), off


@dataclass(frozen=True)
class Verdict:
    """Outcome of an equivalence check; truthy when equivalent."""

    equivalent: bool
    blocks: int
    separated_in_round: Optional[int] = None

    def __bool__(self):
        return self.equivalent

    def __str__(self):
        if self.equivalent:
            return f"branching bisimilar ({self.blocks} classes)"
        return (f"not branching bisimilar: initial states split in refinement "
                f"round {self.separated_in_round} ({self.blocks} classes)")


def equivalent(l1: Lts, l2: Lts) -> Verdict:
    """Are the initial states of ``l1`` and ``l2`` branching bisimilar?"""
    union, off = disjoint_union(l1, l2)
    collapsed, scc_map = collapse_tau_scc(union)
    history = []
    part = refine(collapsed, history)
    a, b = scc_map[l1.initial], scc_map[l2.initial + off]
    if part.block[a] == part.block[b]:
        return Verdict(True, part.count)
    first = next(i for i, blk in enumerate(history, start=1) if blk[a] != blk[b])
    return Verdict(False, part.count, first)


def oracle_equivalent(l1: Lts, l2: Lts, bound: int = 200) -> bool:
    """Naive greatest-fixpoint check straight from the definition.

    Starts from the full relation on the disjoint union and deletes pairs
    violating the transfer condition until nothing changes. Cubic-or-worse;
    meant for cross-checking on small inputs only.
    """
    union, off = disjoint_union(l1, l2)
    n = union.n_states
    if n > bound:
        raise ValueError(f"oracle limited to {bound} states, got {n}")
    out = union.successors()
    tau = [[t for a, t in out[s] if a.is_tau] for s in range(n)]
    R = [[True] * n for _ in range(n)]

    def matched(s, a, s2, t):
        # tau-path from t staying related to s, then an a-step into R(s2, .)
        if a.is_tau and R[s2][t]:
            return True
        seen = {t}
        stack = [t]
        while stack:
            u = stack.pop()
            for b, u2 in out[u]:
                if b == a and R[s2][u2]:
                    return True
            for u2 in tau[u]:
                if u2 not in seen and R[s][u2]:
                    seen.add(u2)
                    stack.append(u2)
        return False

    changed = True
    while changed:
        changed = False
        for s in range(n):
            for t in range(n):
                if not R[s][t]:
                    continue
                if not all(matched(s, a, s2, t) for a, s2 in out[s]):
                    R[s][t] = R[t][s] = False
                    changed = True
    return R[l1.initial][l2.initial + off]
