"""System instances: a fixed number of identical processes, asynchronously
interleaved, sharing one copy of the shared variables.

A global transition moves exactly one process through its control-flow
automaton (one full initial→final path) while every other process keeps its
status and locals; shared variables are read and written by the mover.

Engine representation (internal, compact, hashable):

    state   = (procs, shareds)
    procs   = tuple of per-process entries (status_index, (local values...))
    shareds = tuple of shared values, in declaration order

Parameters are factored out of states: every state of an instance shares the
instance's binding, so transitions preserve parameters by construction.

Symmetry reduction (on by default) stores one representative per multiset of
process entries — sound because processes are fully interchangeable and every
atomic proposition is quantified over the process vector, hence invariant
under permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .cfa import step_successors
from .core import ModelError, ParamEnv, Valuation, eval_linear_form
from .dsl import ModelDef
from .ltl import AtomicProp, LessProp, StatusProp

# Engine state aliases (documentation only).
ProcEntry = tuple[int, tuple[int, ...]]
EngineState = tuple[tuple[ProcEntry, ...], tuple[int, ...]]


@dataclass(frozen=True)
class GlobalState:
    """Boundary representation of one global state, with names spelled out."""

    procs: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]
    shareds: tuple[tuple[str, int], ...]
    params: tuple[tuple[str, int], ...]


def eval_atomic_prop(p: AtomicProp, g: GlobalState) -> bool:
    """Quantified evaluation over the process vector (∀ true / ∃ false when empty)."""
    if isinstance(p, StatusProp):
        values = [(status == p.status) == p.eq for status, _ in g.procs]
        return all(values) if p.quant == "all" else any(values)
    if isinstance(p, LessProp):
        env = dict(g.params)
        offset = eval_linear_form(p.offset, env)
        shareds = dict(g.shareds)

        def view(locals_pairs: tuple[tuple[str, int], ...], name: str) -> int:
            for key, val in locals_pairs:
                if key == name:
                    return val
            if name in shareds:
                return shareds[name]
            raise ModelError(f"unbound variable {name!r} in atomic proposition")

        return any(view(locals_pairs, p.x) + offset < view(locals_pairs, p.y)
                   for _, locals_pairs in g.procs)
    raise ModelError(f"unknown atomic proposition {p!r}")


def canonicalize(g: GlobalState, statuses) -> GlobalState:
    """Representative of g's permutation orbit: processes sorted by
    (status declaration order, local values).  Idempotent, label-preserving."""
    order = {status: i for i, status in enumerate(statuses)}
    procs = tuple(sorted(g.procs,
                         key=lambda e: (order[e[0]], tuple(v for _, v in e[1]))))
    return GlobalState(procs, g.shareds, g.params)


class Instance:
    """One concrete system: a model plus a complete parameter binding."""

    def __init__(self, model: ModelDef, env: ParamEnv, symmetry: bool = True):
        missing = [p for p in model.params if p not in env]
        if missing:
            raise ModelError(f"missing parameter(s): {', '.join(missing)}")
        extra = [p for p in env if p not in model.params]
        if extra:
            raise ModelError(f"unknown parameter(s): {', '.join(extra)}")
        self.model = model
        self.env = dict(env)
        self.symmetry = symmetry
        self.count = eval_linear_form(model.size, env)
        if self.count < 0:
            raise ModelError(f"size {model.size.render()} evaluates to "
                             f"{self.count} (< 0) under {env}")
        self.statuses = model.statuses
        self._status_index = {s: i for i, s in enumerate(model.statuses)}
        self._locals = model.locals
        self._shareds = model.shareds
        self._params_pairs = tuple((p, env[p]) for p in model.params)
        self._init_indices = tuple(sorted(self._status_index[s]
                                          for s in model.initial_statuses))
        self._cfa = model.cfa
        # (proc entry, shareds) -> tuple of successor (proc entry, shareds)
        self._step_cache: dict[tuple[ProcEntry, tuple[int, ...]],
                               tuple[tuple[ProcEntry, tuple[int, ...]], ...]] = {}

    # -- construction / conversion ------------------------------------------

    def initial_states(self) -> list[EngineState]:
        zero_locals = (0,) * len(self._locals)
        zero_shareds = (0,) * len(self._shareds)
        states: list[EngineState] = []
        if self.symmetry:
            combos = itertools.combinations_with_replacement(self._init_indices,
                                                             self.count)
        else:
            combos = itertools.product(self._init_indices, repeat=self.count)
        for combo in combos:
            procs = tuple((idx, zero_locals) for idx in combo)
            states.append((procs, zero_shareds))
        return states

    def canonical(self, state: EngineState) -> EngineState:
        procs, shareds = state
        return (tuple(sorted(procs)), shareds)

    def to_global_state(self, state: EngineState) -> GlobalState:
        procs, shareds = state
        named_procs = tuple(
            (self.statuses[idx], tuple(zip(self._locals, vals)))
            for idx, vals in procs)
        return GlobalState(named_procs, tuple(zip(self._shareds, shareds)),
                           self._params_pairs)

    def from_global_state(self, g: GlobalState) -> EngineState:
        procs = []
        for status, locals_pairs in g.procs:
            if status not in self._status_index:
                raise ModelError(f"unknown status {status!r}")
            values = dict(locals_pairs)
            procs.append((self._status_index[status],
                          tuple(values[name] for name in self._locals)))
        shared_values = dict(g.shareds)
        return (tuple(procs), tuple(shared_values[name] for name in self._shareds))

    # -- transitions ---------------------------------------------------------

    def _entry_successors(self, entry: ProcEntry, shareds: tuple[int, ...]):
        key = (entry, shareds)
        cached = self._step_cache.get(key)
        if cached is not None:
            return cached
        status_idx, local_vals = entry
        valuation = Valuation(self.statuses[status_idx],
                              tuple(zip(self._locals, local_vals)),
                              tuple(zip(self._shareds, shareds)),
                              self._params_pairs)
        result = []
        for succ in step_successors(valuation, self._cfa):
            local_map = dict(succ.locals)
            shared_map = dict(succ.shareds)
            result.append(((self._status_index[succ.status],
                            tuple(local_map[n] for n in self._locals)),
                           tuple(shared_map[n] for n in self._shareds)))
        out = tuple(result)
        self._step_cache[key] = out
        return out

    def successors(self, state: EngineState) -> list[EngineState]:
        """All MOVE/FRAME successors, deduplicated, in deterministic order.

        Under symmetry, identical process entries are expanded once (moving
        either of two identical processes yields the same canonical state) and
        each successor is canonicalized.
        """
        procs, shareds = state
        out: dict[EngineState, None] = {}
        previous: ProcEntry | None = None
        for i, entry in enumerate(procs):
            if self.symmetry and entry == previous:
                continue
            previous = entry
            for new_entry, new_shareds in self._entry_successors(entry, shareds):
                new_procs = procs[:i] + (new_entry,) + procs[i + 1:]
                if self.symmetry:
                    new_procs = tuple(sorted(new_procs))
                out[(new_procs, new_shareds)] = None
        if not out:
            # A state with no mover (e.g. zero processes) self-loops so that
            # every run is infinite.
            out[state] = None
        return list(out)

    # -- labeling -------------------------------------------------------------

    def compile_ap(self, ap: AtomicProp) -> Callable[[EngineState], bool]:
        """Fast evaluator for one atomic proposition over engine states."""
        if isinstance(ap, StatusProp):
            if ap.status not in self._status_index:
                raise ModelError(f"unknown status {ap.status!r}")
            target = self._status_index[ap.status]
            want_all = ap.quant == "all"
            eq = ap.eq

            def eval_status(state: EngineState) -> bool:
                procs = state[0]
                if want_all:
                    return all((e[0] == target) == eq for e in procs)
                return any((e[0] == target) == eq for e in procs)

            return eval_status

        if isinstance(ap, LessProp):
            offset = eval_linear_form(ap.offset, self.env)
            x_slot = self._variable_slot(ap.x)
            y_slot = self._variable_slot(ap.y)

            def eval_less(state: EngineState) -> bool:
                procs, shareds = state
                for entry in procs:
                    xv = entry[1][x_slot[1]] if x_slot[0] else shareds[x_slot[1]]
                    yv = entry[1][y_slot[1]] if y_slot[0] else shareds[y_slot[1]]
                    if xv + offset < yv:
                        return True
                return False

            return eval_less
        raise ModelError(f"unknown atomic proposition {ap!r}")

    def _variable_slot(self, name: str) -> tuple[bool, int]:
        """(is_local, index) for a per-process view of a declared variable."""
        if name in self._locals:
            return (True, self._locals.index(name))
        if name in self._shareds:
            return (False, self._shareds.index(name))
        raise ModelError(f"unknown variable {name!r}")

    def eval_ap(self, ap: AtomicProp, state: EngineState) -> bool:
        return self.compile_ap(ap)(state)


def initial_global_states(inst: Instance) -> list[GlobalState]:
    """Initial states at the model boundary (see Instance.initial_states)."""
    return [inst.to_global_state(s) for s in inst.initial_states()]


def global_successors(g: GlobalState, inst: Instance) -> list[GlobalState]:
    """Successor states at the model boundary (see Instance.successors)."""
    start = inst.from_global_state(g)
    return [inst.to_global_state(s) for s in inst.successors(start)]
