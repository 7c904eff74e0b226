"""Control-flow automata: one acyclic graph per model whose initial-to-final
paths each describe one atomic process step.

An edge carries exactly one operation: a guard, a status assignment, an
increment, or a nondeterministic bounded pick.  The step relation of a process
is the union, over all initial→final paths, of the sequential composition of
the edge operations; effects are visible to later operations on the same path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import LinearForm, ModelError, Valuation, eval_linear_form

# Placeholder name for the value chosen by a pick operation.
EPS = "eps"

# Status values are symbolic names drawn from a model's declared finite set
# (with a designated subset of initial statuses; see Declarations).
StatusValue = str


# ---------------------------------------------------------------------------
# Guard expressions: atoms `sv == Z` and `threshold <= var`, closed under && and !.

@dataclass(frozen=True)
class SvEq:
    status: str

    def render(self) -> str:
        return f"sv == {self.status}"


@dataclass(frozen=True)
class ThresholdLe:
    bound: LinearForm
    var: str

    def render(self) -> str:
        return f"{self.bound.render()} <= {self.var}"


@dataclass(frozen=True)
class GuardNot:
    item: "GuardExpr"

    def render(self) -> str:
        return f"!({self.item.render()})"


@dataclass(frozen=True)
class GuardAnd:
    """Flat conjunction (the parser never nests one GuardAnd in another)."""

    items: tuple["GuardExpr", ...]

    def render(self) -> str:
        return " && ".join(item.render() for item in self.items)


GuardExpr = SvEq | ThresholdLe | GuardNot | GuardAnd


def eval_guard(expr: GuardExpr, v: Valuation) -> bool:
    if isinstance(expr, SvEq):
        return v.status == expr.status
    if isinstance(expr, ThresholdLe):
        return eval_linear_form(expr.bound, v.env()) <= v.value(expr.var)
    if isinstance(expr, GuardNot):
        return not eval_guard(expr.item, v)
    if isinstance(expr, GuardAnd):
        return all(eval_guard(item, v) for item in expr.items)
    raise ModelError(f"unknown guard expression {expr!r}")


# ---------------------------------------------------------------------------
# Pick conditions: conjunctions of atoms `a <= b + lin` where a or b may be
# the placeholder `eps` standing for the value being chosen.

@dataclass(frozen=True)
class PickAtom:
    """``lhs <= rhs + offset``; ``lhs``/``rhs`` are variable names or EPS."""

    lhs: str
    rhs: str
    offset: LinearForm = LinearForm()

    def render(self) -> str:
        text = f"{self.lhs} <= {self.rhs}"
        if self.offset.coeffs or self.offset.const:
            rendered = self.offset.render()
            if rendered.startswith("-"):
                text += f" - {rendered[1:].lstrip()}"
            else:
                text += f" + {rendered}"
        return text


@dataclass(frozen=True)
class PickCond:
    atoms: tuple[PickAtom, ...]

    def render(self) -> str:
        return " && ".join(atom.render() for atom in self.atoms)

    def has_upper_bound(self) -> bool:
        """True iff some atom places EPS at or below a real variable."""
        return any(a.lhs == EPS and a.rhs != EPS for a in self.atoms)


def pick_range(cond: PickCond, v: Valuation, target: str) -> tuple[int, int]:
    """The exact choice set {e ∈ ℕ₀ | v ⊨ cond[e/ε]} as an interval (lo, hi).

    The interval is empty iff lo > hi.  ``target`` is the variable being
    assigned; occurrences of its *name* in the condition read the current
    (pre-assignment) value, while EPS stands for the candidate value.
    """
    lo, hi = 0, None
    env = v.env()
    for atom in cond.atoms:
        off = eval_linear_form(atom.offset, env)
        if atom.lhs == EPS and atom.rhs == EPS:         # e <= e + off
            if off < 0:
                return (1, 0)
        elif atom.lhs == EPS:                           # e <= var + off
            bound = v.value(atom.rhs) + off
            hi = bound if hi is None else min(hi, bound)
        elif atom.rhs == EPS:                           # var <= e + off
            bound = v.value(atom.lhs) - off
            lo = max(lo, bound)
        else:                                           # var <= var' + off
            if not v.value(atom.lhs) <= v.value(atom.rhs) + off:
                return (1, 0)
    if hi is None:
        raise ModelError(f"pick condition {cond.render()!r} puts no upper bound on {EPS}")
    return (lo, hi)


# ---------------------------------------------------------------------------
# Operations and the automaton itself.

@dataclass(frozen=True)
class Guard:
    expr: GuardExpr

    def render(self) -> str:
        return f"when {self.expr.render()}"


@dataclass(frozen=True)
class SetStatus:
    status: str

    def render(self) -> str:
        return f"set sv = {self.status}"


@dataclass(frozen=True)
class Inc:
    var: str

    def render(self) -> str:
        return f"inc {self.var}"


@dataclass(frozen=True)
class Pick:
    var: str
    cond: PickCond

    def render(self) -> str:
        return f"pick {self.var} where {self.cond.render()}"


Op = Guard | SetStatus | Inc | Pick


@dataclass(frozen=True)
class Edge:
    src: str
    op: Op
    dst: str


@dataclass(frozen=True)
class Cfa:
    """Acyclic edge-labeled graph with a unique entry and exit location."""

    initial: str
    final: str
    edges: tuple[Edge, ...]

    def locations(self) -> tuple[str, ...]:
        seen: dict[str, None] = {self.initial: None}
        for e in self.edges:
            seen.setdefault(e.src, None)
            seen.setdefault(e.dst, None)
        seen.setdefault(self.final, None)
        return tuple(seen)

    def out_edges(self) -> dict[str, list[Edge]]:
        table: dict[str, list[Edge]] = {loc: [] for loc in self.locations()}
        for e in self.edges:
            table[e.src].append(e)
        return table


@dataclass(frozen=True)
class Declarations:
    """Name context a CFA is validated against."""

    statuses: tuple[str, ...]
    initial_statuses: tuple[str, ...]
    locals: tuple[str, ...]
    shareds: tuple[str, ...]
    params: tuple[str, ...]

    def variables(self) -> tuple[str, ...]:
        return self.locals + self.shareds


def topological_order(cfa: Cfa) -> list[str] | None:
    """Locations in topological order, or None if the graph has a cycle."""
    locs = cfa.locations()
    indegree = {loc: 0 for loc in locs}
    for e in cfa.edges:
        indegree[e.dst] += 1
    out = cfa.out_edges()
    ready = [loc for loc in locs if indegree[loc] == 0]
    order: list[str] = []
    while ready:
        loc = ready.pop(0)
        order.append(loc)
        for e in out[loc]:
            indegree[e.dst] -= 1
            if indegree[e.dst] == 0:
                ready.append(e.dst)
    if len(order) != len(locs):
        return None
    return order


def _guard_names(expr: GuardExpr, statuses: list[str], variables: list[str],
                 params: list[str]) -> None:
    if isinstance(expr, SvEq):
        statuses.append(expr.status)
    elif isinstance(expr, ThresholdLe):
        variables.append(expr.var)
        params.extend(expr.bound.names())
    elif isinstance(expr, GuardNot):
        _guard_names(expr.item, statuses, variables, params)
    elif isinstance(expr, GuardAnd):
        for item in expr.items:
            _guard_names(item, statuses, variables, params)


def validate_cfa(cfa: Cfa, decls: Declarations) -> list[str]:
    """All structural problems with the automaton, as human-readable messages.

    Checks acyclicity, entry/exit shape, reachability and co-reachability of
    every location, name resolution, and static boundedness of every pick.
    """
    problems: list[str] = []
    order = topological_order(cfa)
    if order is None:
        problems.append("automaton has a cycle")
    if any(e.dst == cfa.initial for e in cfa.edges):
        problems.append(f"initial location {cfa.initial!r} has an incoming edge")
    if any(e.src == cfa.final for e in cfa.edges):
        problems.append(f"final location {cfa.final!r} has an outgoing edge")

    # Reachability from the entry and co-reachability of the exit.
    forward = {cfa.initial}
    changed = True
    while changed:
        changed = False
        for e in cfa.edges:
            if e.src in forward and e.dst not in forward:
                forward.add(e.dst)
                changed = True
    backward = {cfa.final}
    changed = True
    while changed:
        changed = False
        for e in cfa.edges:
            if e.dst in backward and e.src not in backward:
                backward.add(e.src)
                changed = True
    for loc in cfa.locations():
        if loc not in forward or loc not in backward:
            problems.append(f"location {loc!r} is not on any initial-to-final path")

    known_vars = set(decls.variables())
    known_params = set(decls.params)
    known_statuses = set(decls.statuses)
    for e in cfa.edges:
        op = e.op
        statuses: list[str] = []
        variables: list[str] = []
        params: list[str] = []
        if isinstance(op, Guard):
            _guard_names(op.expr, statuses, variables, params)
        elif isinstance(op, SetStatus):
            statuses.append(op.status)
        elif isinstance(op, Inc):
            variables.append(op.var)
        elif isinstance(op, Pick):
            variables.append(op.var)
            if not op.cond.has_upper_bound():
                problems.append(
                    f"edge {e.src}->{e.dst}: unbounded nondeterministic choice"
                    f" (no atom of the form '{EPS} <= variable + offset')")
            for atom in op.cond.atoms:
                for side in (atom.lhs, atom.rhs):
                    if side != EPS:
                        variables.append(side)
                params.extend(atom.offset.names())
        for name in statuses:
            if name not in known_statuses:
                problems.append(f"edge {e.src}->{e.dst}: unknown status {name!r}")
        for name in variables:
            if name not in known_vars:
                problems.append(f"edge {e.src}->{e.dst}: unknown variable {name!r}")
        for name in params:
            if name not in known_params:
                problems.append(f"edge {e.src}->{e.dst}: unknown parameter {name!r}")
    return problems


def enumerate_paths(cfa: Cfa) -> list[tuple[Op, ...]]:
    """All initial→final paths as operation sequences, in a deterministic
    order (depth-first by edge declaration order)."""
    out = cfa.out_edges()
    paths: list[tuple[Op, ...]] = []
    stack: list[Op] = []

    def walk(loc: str) -> None:
        if loc == cfa.final:
            paths.append(tuple(stack))
            return
        for e in out[loc]:
            stack.append(e.op)
            walk(e.dst)
            stack.pop()

    walk(cfa.initial)
    return paths


def apply_op(v: Valuation, op: Op) -> list[Valuation]:
    """Operational semantics of a single operation, smallest-value first.

    Guards filter, assignments and increments rewrite one field, picks fan out
    over their choice interval; everything else is framed (left unchanged).
    """
    if isinstance(op, Guard):
        return [v] if eval_guard(op.expr, v) else []
    if isinstance(op, SetStatus):
        return [v.with_status(op.status)]
    if isinstance(op, Inc):
        return [v.with_variable(op.var, v.value(op.var) + 1)]
    if isinstance(op, Pick):
        lo, hi = pick_range(op.cond, v, op.var)
        return [v.with_variable(op.var, e) for e in range(lo, hi + 1)]
    raise ModelError(f"unknown operation {op!r}")


def step_successors(v: Valuation, cfa: Cfa) -> list[Valuation]:
    """All one-step successors of ``v``: the union over initial→final paths of
    the composed edge operations.

    Implemented as a forward propagation of valuation sets along the acyclic
    graph in topological order, which computes the same union as per-path
    composition because composition distributes over the union at every merge
    location.  Result is deduplicated and sorted for reproducibility.
    """
    order = topological_order(cfa)
    if order is None:
        raise ModelError("cannot step through a cyclic automaton")
    at: dict[str, dict[Valuation, None]] = {loc: {} for loc in order}
    at[cfa.initial][v] = None
    out = cfa.out_edges()
    for loc in order:
        vals = at[loc]
        if not vals:
            continue
        for e in out[loc]:
            dst = at[e.dst]
            for val in vals:
                for nxt in apply_op(val, e.op):
                    dst[nxt] = None
    final = at[cfa.final]
    return sorted(final, key=lambda w: (w.status, w.locals, w.shareds))
