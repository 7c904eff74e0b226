"""Formula → Büchi automaton via the classic tableau (node-splitting)
construction, with one acceptance obligation per Until/Future subformula,
degeneralized by a counter.

Automaton states carry conjunctive literal labels: a state may be visited at a
word position only if the position's letter satisfies every literal.  All node
sets are sets of interned formula ids and every choice point is resolved by
integer order, so the construction is deterministic and independent of
PYTHONHASHSEED — state numbering, transition order, and hence search order and
counterexamples are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ModelError
from .ltl import (And, AtomicProp, Formula, Future, Globally, Literal, Or,
                  Release, Until, formula_aps)


@dataclass
class BuchiAutomaton:
    """State-labeled automaton: entering a state requires its label to hold of
    the current letter.  A run is accepting iff it visits ``accepting``
    infinitely often."""

    aps: tuple[AtomicProp, ...]
    # Per state: (ap ids that must be true, ap ids that must be false).
    labels: list[tuple[tuple[int, ...], tuple[int, ...]]]
    succ: list[tuple[int, ...]]
    initial: tuple[int, ...]
    accepting: frozenset[int]

    def n_states(self) -> int:
        return len(self.succ)

    def letter_satisfies(self, letter, state: int) -> bool:
        """letter = container of the AtomicProps true at a position."""
        need_true, need_false = self.labels[state]
        return (all(self.aps[i] in letter for i in need_true)
                and not any(self.aps[i] in letter for i in need_false))


class _Interner:
    """Formula ↔ integer ids, assigned in deterministic traversal order."""

    def __init__(self) -> None:
        self.formulas: list[Formula] = []
        self.ids: dict[Formula, int] = {}

    def intern(self, f: Formula) -> int:
        found = self.ids.get(f)
        if found is not None:
            return found
        # Children first so subformulas always have ids available.
        if isinstance(f, (And, Or)):
            for child in f.items:
                self.intern(child)
        elif isinstance(f, (Future, Globally)):
            self.intern(f.arg)
        elif isinstance(f, (Until, Release)):
            self.intern(f.lhs)
            self.intern(f.rhs)
        elif not isinstance(f, Literal):
            raise ModelError(f"unknown formula node {f!r}")
        idx = len(self.formulas)
        self.formulas.append(f)
        self.ids[f] = idx
        return idx


def build_buchi(nnf: Formula) -> BuchiAutomaton:
    """Automaton accepting exactly the infinite words satisfying ``nnf``
    (a formula in negation normal form)."""
    interner = _Interner()
    root = interner.intern(nnf)
    formulas = interner.formulas

    # Tableau nodes: incoming node ids (-1 = virtual initial), processed set
    # `old`, obligations `next`.  A node is identified by (old, next).
    node_key_to_id: dict[tuple[frozenset[int], frozenset[int]], int] = {}
    node_old: list[frozenset[int]] = []
    node_incoming: list[set[int]] = []

    # Work items: (incoming, new, old, next) with mutable sets.
    pending: list[tuple[set[int], set[int], set[int], set[int]]] = [
        ({-1}, {root}, set(), set())]

    while pending:
        incoming, new, old, nxt = pending.pop()
        if not new:
            key = (frozenset(old), frozenset(nxt))
            existing = node_key_to_id.get(key)
            if existing is not None:
                node_incoming[existing] |= incoming
                continue
            idx = len(node_old)
            node_key_to_id[key] = idx
            node_old.append(key[0])
            node_incoming.append(set(incoming))
            pending.append(({idx}, set(nxt), set(), set()))
            continue
        eta = min(new)
        new.discard(eta)
        f = formulas[eta]
        if isinstance(f, Literal):
            contradiction = any(
                isinstance(formulas[z], Literal)
                and formulas[z].ap == f.ap
                and formulas[z].negated != f.negated
                for z in old)
            if contradiction:
                continue
            old.add(eta)
            pending.append((incoming, new, old, nxt))
        elif isinstance(f, And):
            old.add(eta)
            new |= {interner.intern(c) for c in f.items} - old
            pending.append((incoming, new, old, nxt))
        elif isinstance(f, Or):
            # One branch per disjunct (the empty disjunction drops the node).
            for child in reversed(f.items):
                pending.append((set(incoming),
                                new | ({interner.intern(child)} - old),
                                old | {eta}, set(nxt)))
        elif isinstance(f, Until):
            lhs, rhs = interner.intern(f.lhs), interner.intern(f.rhs)
            pending.append((set(incoming), new | ({rhs} - old),
                            old | {eta}, set(nxt)))
            pending.append((set(incoming), new | ({lhs} - old),
                            old | {eta}, nxt | {eta}))
        elif isinstance(f, Release):
            lhs, rhs = interner.intern(f.lhs), interner.intern(f.rhs)
            pending.append((set(incoming), new | ({lhs, rhs} - old),
                            old | {eta}, set(nxt)))
            pending.append((set(incoming), new | ({rhs} - old),
                            old | {eta}, nxt | {eta}))
        elif isinstance(f, Future):
            arg = interner.intern(f.arg)
            pending.append((set(incoming), new | ({arg} - old),
                            old | {eta}, set(nxt)))
            pending.append((set(incoming), set(new), old | {eta}, nxt | {eta}))
        elif isinstance(f, Globally):
            arg = interner.intern(f.arg)
            pending.append((incoming, new | ({arg} - old),
                            old | {eta}, nxt | {eta}))
        else:
            raise ModelError(f"unknown formula node {f!r}")

    n_nodes = len(node_old)
    gba_succ: list[list[int]] = [[] for _ in range(n_nodes)]
    gba_initial: list[int] = []
    for target in range(n_nodes):
        for source in sorted(node_incoming[target]):
            if source == -1:
                gba_initial.append(target)
            else:
                gba_succ[source].append(target)

    # Acceptance obligations, one per Until/Future subformula (id order):
    # a node satisfies obligation θ=aUb/Fb unless it promises θ without
    # having discharged b.
    obligations = [idx for idx, f in enumerate(formulas)
                   if isinstance(f, (Until, Future))]
    acc_sets: list[frozenset[int]] = []
    for theta in obligations:
        f = formulas[theta]
        rhs = interner.ids[f.rhs if isinstance(f, Until) else f.arg]
        acc_sets.append(frozenset(
            node for node in range(n_nodes)
            if theta not in node_old[node] or rhs in node_old[node]))

    # Literal labels per node.
    aps = formula_aps(nnf)
    ap_index = {ap: i for i, ap in enumerate(aps)}
    gba_labels: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for node in range(n_nodes):
        need_true: list[int] = []
        need_false: list[int] = []
        for fid in sorted(node_old[node]):
            f = formulas[fid]
            if isinstance(f, Literal):
                (need_false if f.negated else need_true).append(ap_index[f.ap])
        gba_labels.append((tuple(need_true), tuple(need_false)))

    return _degeneralize(aps, gba_labels, gba_succ, gba_initial, acc_sets)


def _degeneralize(aps, labels, succ, initial, acc_sets) -> BuchiAutomaton:
    """Counter construction: track which acceptance obligation is awaited;
    accept when all have been seen since the last reset."""
    k = len(acc_sets)
    if k == 0:
        reached = _reachable_renumber(labels, succ, initial,
                                      accepting=lambda q, lvl: True,
                                      advance=lambda lvl, q: 0)
        return BuchiAutomaton(aps, *reached)

    def advance(level: int, q: int) -> int:
        j = 0 if level == k else level
        while j < k and q in acc_sets[j]:
            j += 1
        return j

    reached = _reachable_renumber(labels, succ, initial,
                                  accepting=lambda q, lvl: lvl == k,
                                  advance=advance)
    return BuchiAutomaton(aps, *reached)


def _reachable_renumber(labels, succ, initial, accepting, advance):
    """Breadth-first numbering of the reachable (state, counter) product."""
    index: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []

    def visit(pair: tuple[int, int]) -> int:
        found = index.get(pair)
        if found is None:
            found = len(order)
            index[pair] = found
            order.append(pair)
        return found

    new_initial = []
    for q in initial:
        new_initial.append(visit((q, advance(0, q))))
    frontier = 0
    new_succ: list[tuple[int, ...]] = []
    while frontier < len(order):
        q, lvl = order[frontier]
        targets = []
        for q2 in succ[q]:
            targets.append(visit((q2, advance(lvl, q2))))
        new_succ.append(tuple(targets))
        frontier += 1

    new_labels = [labels[q] for q, _ in order]
    new_accepting = frozenset(i for i, (q, lvl) in enumerate(order)
                              if accepting(q, lvl))
    return new_labels, new_succ, tuple(dict.fromkeys(new_initial)), new_accepting


def buchi_accepts_lasso(ba: BuchiAutomaton, prefix_letters, cycle_letters) -> bool:
    """Membership of the ultimately periodic word prefix·cycle^ω.

    Decided on the finite position-unrolled graph: accept iff a cycle through
    an accepting automaton state is reachable from a valid initial pair.
    Used by tests and trace verification; independent of the emptiness search.
    """
    letters = list(prefix_letters) + list(cycle_letters)
    if not cycle_letters:
        raise ModelError("lasso cycle must be non-empty")
    n = len(letters)
    p = len(prefix_letters)
    nxt = list(range(1, n)) + [p]

    valid: dict[tuple[int, int], bool] = {}

    def ok(pos: int, q: int) -> bool:
        key = (pos, q)
        found = valid.get(key)
        if found is None:
            found = ba.letter_satisfies(letters[pos], q)
            valid[key] = found
        return found

    nodes = [(0, q) for q in ba.initial if ok(0, q)]
    seen = set(nodes)
    stack = list(nodes)
    edges: dict[tuple[int, int], list[tuple[int, int]]] = {}
    while stack:
        pos, q = stack.pop()
        outs = []
        for q2 in ba.succ[q]:
            if ok(nxt[pos], q2):
                node = (nxt[pos], q2)
                outs.append(node)
                if node not in seen:
                    seen.add(node)
                    stack.append(node)
        edges[(pos, q)] = outs

    # Tarjan over the reachable subgraph; accept iff some strongly connected
    # component with an internal cycle contains an accepting automaton state.
    sys_index: dict[tuple[int, int], int] = {}
    low: dict[tuple[int, int], int] = {}
    on_stack: set[tuple[int, int]] = set()
    scc_stack: list[tuple[int, int]] = []
    counter = [0]

    for root in edges:
        if root in sys_index:
            continue
        work = [(root, iter(edges[root]))]
        sys_index[root] = low[root] = counter[0]
        counter[0] += 1
        scc_stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in sys_index:
                    sys_index[child] = low[child] = counter[0]
                    counter[0] += 1
                    scc_stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(edges[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], sys_index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == sys_index[node]:
                component = []
                while True:
                    member = scc_stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                has_cycle = len(component) > 1 or any(
                    member in edges[member] for member in component)
                if has_cycle and any(q in ba.accepting for _, q in component):
                    return True
    return False
