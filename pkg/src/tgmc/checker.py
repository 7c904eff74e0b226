"""Emptiness checking of the instance × automaton product, verdicts, and
counterexample lassos.

The search is the classic two-color nested depth-first search, implemented
iteratively (explicit stacks) so deep state spaces cannot overflow Python's
recursion limit.  Every reported lasso is replay-validated before the verdict
is returned: each transition is re-checked against the instance's successor
relation and the negated formula is re-evaluated on the lasso's word by the
direct fixpoint evaluator.  A verdict is therefore never justified by the
search alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .buchi import BuchiAutomaton, build_buchi
from .core import ModelError, ParamEnv
from .dsl import ModelDef
from .kripke import EngineState, Instance
from .ltl import AtomicProp, Formula, Or, eval_formula_on_lasso, formula_aps, negate_to_nnf

DEFAULT_MAX_PRODUCT_STATES = 50_000_000


class ResourceCapExceeded(Exception):
    """The search stored more product states than the configured cap."""

    def __init__(self, stored: int):
        self.stored = stored
        super().__init__(f"stored {stored} product states, exceeding the cap")


@dataclass
class Lasso:
    """Ultimately periodic counterexample run: prefix then repeated cycle.

    ``ap_truth[i]`` is the set of atomic propositions of the checked formula
    that hold at position i (prefix positions first, then cycle positions).
    """

    prefix: list[EngineState]
    cycle: list[EngineState]
    ap_truth: list[frozenset[AtomicProp]] = field(default_factory=list)

    def states(self) -> list[EngineState]:
        return self.prefix + self.cycle


@dataclass
class Verdict:
    status: str                      # "holds" | "violated" | "inconclusive"
    formula: Formula                 # the checked formula (spec, or spec ∨ unfairness)
    negated: Formula                 # NNF of its negation (what the automaton accepts)
    counterexample: Lasso | None
    product_states: int
    kripke_states: int
    transitions: int
    elapsed_ms: int

    @property
    def holds(self) -> bool | None:
        if self.status == "holds":
            return True
        if self.status == "violated":
            return False
        return None


# ---------------------------------------------------------------------------
# Generic nested DFS (blue/red with early cycle detection).

_CYAN, _BLUE = 1, 2


def nested_dfs(initial_nodes, successors, is_accepting,
               max_stored: int | None = None):
    """Find an accepting lasso, or certify there is none.

    Returns (result, stored) where stored is the number of distinct nodes
    colored, and result is either None (no accepting cycle reachable) or
    (prefix_nodes, cycle_nodes) with the last cycle node having an edge back
    to the first cycle node.  Deterministic for deterministic inputs.  Raises
    ResourceCapExceeded when more than ``max_stored`` nodes would be stored.
    """
    colors: dict = {}
    red: set = set()

    def check_cap() -> None:
        if max_stored is not None and len(colors) > max_stored:
            raise ResourceCapExceeded(len(colors))

    for start in initial_nodes:
        if start in colors:
            continue
        colors[start] = _CYAN
        check_cap()
        stack = [(start, successors(start), 0)]
        while stack:
            node, succs, idx = stack[-1]
            if idx < len(succs):
                stack[-1] = (node, succs, idx + 1)
                child = succs[idx]
                color = colors.get(child)
                if color == _CYAN and (is_accepting(node) or is_accepting(child)):
                    chain = [frame[0] for frame in stack]
                    at = chain.index(child)
                    return (chain[:at], chain[at:]), len(colors)
                if color is None:
                    colors[child] = _CYAN
                    check_cap()
                    stack.append((child, successors(child), 0))
                continue
            stack.pop()
            if is_accepting(node):
                found = _red_search(node, successors, colors, red)
                if found is not None:
                    red_path, target = found
                    chain = [frame[0] for frame in stack] + [node]
                    at = chain.index(target)
                    cycle = chain[at:] + red_path[1:]
                    return (chain[:at], cycle), len(colors)
            colors[node] = _BLUE
    return None, len(colors)


def _red_search(seed, successors, colors, red):
    """Depth-first hunt, from an accepting postorder node, for an edge back
    into the blue stack (a cyan node).  Returns (path seed..last, target)."""
    stack = [(seed, successors(seed), 0)]
    red.add(seed)
    while stack:
        node, succs, idx = stack[-1]
        if idx < len(succs):
            stack[-1] = (node, succs, idx + 1)
            child = succs[idx]
            if colors.get(child) == _CYAN:
                return [frame[0] for frame in stack], child
            if child not in red:
                red.add(child)
                stack.append((child, successors(child), 0))
            continue
        stack.pop()
    return None


# ---------------------------------------------------------------------------
# Instance × automaton product.

class Product:
    """Lazy product of an instance's state graph with a Büchi automaton.

    Nodes are packed integers gid * n_automaton_states + automaton_state;
    global states are interned to dense gids on first visit.
    """

    def __init__(self, inst: Instance, ba: BuchiAutomaton):
        self.inst = inst
        self.ba = ba
        self.nq = max(ba.n_states(), 1)
        self._ap_funcs = [inst.compile_ap(ap) for ap in ba.aps]
        self._needs = [(_bits(t), _bits(fs)) for t, fs in ba.labels]
        self._accept_flags = [q in ba.accepting for q in range(ba.n_states())]
        self._gstates: list[EngineState] = []
        self._gindex: dict[EngineState, int] = {}
        self._gsucc: dict[int, tuple[int, ...]] = {}
        self._gmask: dict[int, int] = {}
        self.transitions = 0

    def _intern(self, state: EngineState) -> int:
        gid = self._gindex.get(state)
        if gid is None:
            gid = len(self._gstates)
            self._gindex[state] = gid
            self._gstates.append(state)
        return gid

    def _mask(self, gid: int) -> int:
        mask = self._gmask.get(gid)
        if mask is None:
            state = self._gstates[gid]
            mask = 0
            for bit, fn in enumerate(self._ap_funcs):
                if fn(state):
                    mask |= 1 << bit
            self._gmask[gid] = mask
        return mask

    def _kripke_successors(self, gid: int) -> tuple[int, ...]:
        cached = self._gsucc.get(gid)
        if cached is None:
            cached = tuple(self._intern(s)
                           for s in self.inst.successors(self._gstates[gid]))
            self._gsucc[gid] = cached
        return cached

    def initial_nodes(self) -> list[int]:
        nodes = []
        for state in self.inst.initial_states():
            gid = self._intern(state)
            mask = self._mask(gid)
            for q in self.ba.initial:
                need_true, need_false = self._needs[q]
                if mask & need_true == need_true and not mask & need_false:
                    nodes.append(gid * self.nq + q)
        return nodes

    def successors(self, node: int) -> list[int]:
        gid, q = divmod(node, self.nq)
        out = []
        ba_succ = self.ba.succ[q]
        for gid2 in self._kripke_successors(gid):
            mask = self._mask(gid2)
            base = gid2 * self.nq
            for q2 in ba_succ:
                need_true, need_false = self._needs[q2]
                if mask & need_true == need_true and not mask & need_false:
                    out.append(base + q2)
        self.transitions += len(out)
        return out

    def is_accepting(self, node: int) -> bool:
        return self._accept_flags[node % self.nq]

    def kripke_state_count(self) -> int:
        return len(self._gstates)

    def project(self, nodes: list[int]) -> list[EngineState]:
        return [self._gstates[node // self.nq] for node in nodes]


def _bits(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def product_nested_dfs(inst: Instance, ba: BuchiAutomaton,
                       max_states: int | None = None):
    """Search the lazy product for an accepting lasso.

    Returns (lasso, stats) where lasso is None iff the product accepts nothing
    (the checked property holds), and stats is a dict with keys
    product_states, kripke_states, transitions.  The lasso's ap_truth is
    evaluated directly on the instance, in automaton AP order.  Raises
    ResourceCapExceeded if the cap is hit.
    """
    product = Product(inst, ba)
    result, stored = nested_dfs(product.initial_nodes(), product.successors,
                                product.is_accepting, max_stored=max_states)
    stats = {"product_states": stored,
             "kripke_states": product.kripke_state_count(),
             "transitions": product.transitions}
    if result is None:
        return None, stats
    prefix_nodes, cycle_nodes = result
    prefix = product.project(prefix_nodes)
    cycle = product.project(cycle_nodes)
    evaluators = [inst.compile_ap(ap) for ap in ba.aps]
    truth = [frozenset(ap for ap, fn in zip(ba.aps, evaluators) if fn(s))
             for s in prefix + cycle]
    return Lasso(prefix, cycle, truth), stats


# ---------------------------------------------------------------------------
# Replay validation and the top-level check.

def replay_lasso(inst: Instance, lasso: Lasso, negated: Formula) -> list[str]:
    """Re-derive everything the lasso claims; returns problems (empty = valid).

    Checks that consecutive states (including the cycle's wrap-around) are
    instance transitions, that the recorded proposition sets match direct
    evaluation, and that the negated formula is true on the lasso's word.
    """
    problems: list[str] = []
    states = lasso.states()
    if not lasso.cycle:
        return ["lasso has an empty cycle"]
    for i, (here, there) in enumerate(zip(states, states[1:])):
        if there not in inst.successors(here):
            problems.append(f"position {i}: recorded transition is not a successor")
    wrap_src = lasso.cycle[-1]
    wrap_dst = lasso.cycle[0]
    if wrap_dst not in inst.successors(wrap_src):
        problems.append("cycle does not close (last cycle state cannot reach the first)")

    aps = formula_aps(negated)
    evaluators = {ap: inst.compile_ap(ap) for ap in aps}
    truth = [frozenset(ap for ap in aps if evaluators[ap](state)) for state in states]
    if lasso.ap_truth and [set(t) for t in truth] != [set(t) for t in lasso.ap_truth]:
        problems.append("recorded proposition sets disagree with direct evaluation")
    split = len(lasso.prefix)
    if not eval_formula_on_lasso(negated, truth[:split], truth[split:]):
        problems.append("negated formula is false on the lasso word "
                        "(the run would not witness a violation)")
    return problems


def combined_formula(model: ModelDef, spec_name: str, fairness: bool) -> Formula:
    """The formula actually checked: the spec itself, or spec ∨ unfairness
    when the spec has an `unless` clause and fairness is enabled."""
    spec = model.spec(spec_name)
    if not fairness or spec.unless is None:
        return spec.formula
    unfair = model.unfairness_formula(spec.unless)
    left = spec.formula.items if isinstance(spec.formula, Or) else (spec.formula,)
    right = unfair.items if isinstance(unfair, Or) else (unfair,)
    return Or(left + right)


def check_spec(model: ModelDef, env: ParamEnv, spec_name: str,
               fairness: bool = True, symmetry: bool = True,
               max_states: int = DEFAULT_MAX_PRODUCT_STATES) -> Verdict:
    """Decide whether every run of Instance(model, env) satisfies the spec
    (with its unfairness escape clause, unless fairness is disabled)."""
    started = time.monotonic()
    target = combined_formula(model, spec_name, fairness)
    negated = negate_to_nnf(target)
    ba = build_buchi(negated)
    inst = Instance(model, env, symmetry=symmetry)

    def elapsed() -> int:
        return int((time.monotonic() - started) * 1000)

    try:
        lasso, stats = product_nested_dfs(inst, ba, max_states=max_states)
    except ResourceCapExceeded as cap:
        return Verdict(status="inconclusive", formula=target, negated=negated,
                       counterexample=None, product_states=cap.stored,
                       kripke_states=0, transitions=0, elapsed_ms=elapsed())

    if lasso is None:
        return Verdict(status="holds", formula=target, negated=negated,
                       counterexample=None,
                       product_states=stats["product_states"],
                       kripke_states=stats["kripke_states"],
                       transitions=stats["transitions"], elapsed_ms=elapsed())

    problems = replay_lasso(inst, lasso, negated)
    if problems:
        raise ModelError("internal error: counterexample failed replay: "
                         + "; ".join(problems))
    return Verdict(status="violated", formula=target, negated=negated,
                   counterexample=lasso,
                   product_states=stats["product_states"],
                   kripke_states=stats["kripke_states"],
                   transitions=stats["transitions"], elapsed_ms=elapsed())
