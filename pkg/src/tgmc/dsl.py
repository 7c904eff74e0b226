"""The `.tg` modeling language: parser, validator, and pretty-printer.

A model file is a sequence of `;`-terminated statements (`#` starts a line
comment)::

    model NAME;
    param a, b, ...;
    resilience <cmp> && <cmp> && ...;        # comparisons over linear forms
    size <linear form>;                      # number of processes
    status Z0, Z1, ...;                      # finite status set, in order
    init Z0, ...;                            # initial statuses (subset)
    local x, ...;                            # per-process naturals
    shared y, ...;                           # single-copy naturals
    step { from LOC to LOC : <op>; ... }     # acyclic control-flow edges
    unfair NAME: <formula>;                  # named unfairness formula
    spec NAME [unless UNFAIRNAME]: <formula>;

Operations: ``when <guard>`` with atoms ``sv == Z`` / ``<linear form> <= var``
combined by ``&&`` and ``!(...)``; ``set sv = Z``; ``inc var``; and
``pick var where <atom> && ...`` whose atoms are ``a <= b [± terms]`` with
``eps`` the placeholder for the chosen value (every pick must bound ``eps``
from above).

Formulas: literals ``all(sv == Z)``, ``some(sv != Z)``, ``some(x [± terms] < y)``
(and ``!`` on a literal), the operators ``F``, ``G``, infix ``U``, ``&&``,
``||``, and the sugar ``lit -> formula`` (desugared to ``!lit || formula``).
Formula keywords (``all``, ``some``, ``sv``, ``eps``, ``F``, ``G``, ``U``) are
reserved and may not be declared as names.

Parsing collects as many diagnostics as it can (with line:column positions)
before failing; it never aborts the process.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cfa import (EPS, Cfa, Declarations, Edge, Guard, GuardAnd, GuardExpr,
                  GuardNot, Inc, Op, Pick, PickAtom, PickCond, SetStatus, SvEq,
                  ThresholdLe, validate_cfa)
from .core import (Comparison, LinearForm, ModelError, ParamEnv,
                   ResilienceCondition, normalize_coeffs)
from .ltl import (And, Formula, Future, Globally, LessProp, Literal, Or,
                  StatusProp, Until, formula_aps, render_formula)

RESERVED_NAMES = {
    "model", "param", "resilience", "size", "status", "init", "local", "shared",
    "step", "from", "to", "when", "set", "inc", "pick", "where", "unfair",
    "spec", "unless", "all", "some", "sv", "eps", "F", "G", "U", "R",
    "true", "false",
}


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def render(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class ModelSyntaxError(ModelError):
    """Raised after parsing/validation with every collected diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(d.render() for d in self.diagnostics))


@dataclass(frozen=True)
class SpecDef:
    name: str
    formula: Formula
    unless: str | None = None


@dataclass(frozen=True)
class ModelDef:
    name: str
    params: tuple[str, ...]
    resilience: ResilienceCondition
    size: LinearForm
    statuses: tuple[str, ...]
    initial_statuses: tuple[str, ...]
    locals: tuple[str, ...]
    shareds: tuple[str, ...]
    cfa: Cfa
    unfairness: tuple[tuple[str, Formula], ...]
    specs: tuple[SpecDef, ...]

    def declarations(self) -> Declarations:
        return Declarations(self.statuses, self.initial_statuses,
                            self.locals, self.shareds, self.params)

    def spec(self, name: str) -> SpecDef:
        for spec in self.specs:
            if spec.name == name:
                return spec
        raise ModelError(f"model {self.name!r} has no spec {name!r} "
                         f"(available: {', '.join(s.name for s in self.specs)})")

    def unfairness_formula(self, name: str) -> Formula:
        for key, formula in self.unfairness:
            if key == name:
                return formula
        raise ModelError(f"model {self.name!r} has no unfairness formula {name!r}")

    def spec_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.specs)


# ---------------------------------------------------------------------------
# Tokenizer.

@dataclass(frozen=True)
class Token:
    kind: str   # "ident" | "int" | "sym" | "eof"
    text: str
    line: int
    col: int

_SYMBOLS = ("&&", "||", "->", "<=", ">=", "==", "!=",
            "<", ">", "=", "!", "(", ")", "{", "}", ";", ":", ",", "+", "-", "*")


def tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("int", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("ident", text[start:i], line, col))
            col += i - start
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            diagnostics.append(Diagnostic(line, col, f"unexpected character {ch!r}"))
            i += 1
            col += 1
    tokens.append(Token("eof", "", line, col))
    return tokens, diagnostics


# ---------------------------------------------------------------------------
# Parser.

class _Recover(Exception):
    """Internal: unwind to the enclosing statement after a diagnostic."""


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("sym", "ident")

    def take(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        return self.fail(f"expected {text!r}, found {self._describe(self.peek())}")

    def expect_ident(self, role: str) -> str:
        tok = self.peek()
        if tok.kind == "ident":
            self.advance()
            return tok.text
        self.fail(f"expected {role}, found {self._describe(tok)}")
        raise AssertionError  # unreachable; fail always raises

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return int(tok.text)
        self.fail(f"expected integer, found {self._describe(tok)}")
        raise AssertionError

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of file" if tok.kind == "eof" else repr(tok.text)

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        self.diagnostics.append(Diagnostic(tok.line, tok.col, message))
        raise _Recover()

    def note(self, message: str, tok: Token) -> None:
        self.diagnostics.append(Diagnostic(tok.line, tok.col, message))

    def skip_statement(self) -> None:
        """Panic recovery: skip past the next ';' (or a closing '}')."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            self.advance()
            if tok.text == "{":
                depth += 1
            elif tok.text == "}" and depth > 0:
                depth -= 1
            elif tok.text in (";", "}") and depth == 0:
                return

    # -- linear forms and comparisons --------------------------------------

    def parse_linear_form(self) -> LinearForm:
        coeffs: dict[str, int] = {}
        const = 0
        first = True
        while True:
            sign = 1
            if self.take("-"):
                sign = -1
            elif self.take("+"):
                sign = 1
            elif not first:
                break
            tok = self.peek()
            if tok.kind == "int":
                value = self.expect_int()
                if self.take("*"):
                    name = self.expect_ident("parameter name")
                    coeffs[name] = coeffs.get(name, 0) + sign * value
                else:
                    const += sign * value
            elif tok.kind == "ident":
                name = self.expect_ident("parameter name")
                coeffs[name] = coeffs.get(name, 0) + sign
            else:
                self.fail(f"expected linear-form term, found {self._describe(tok)}")
            first = False
            if not (self.at("+") or self.at("-")):
                break
        return LinearForm(normalize_coeffs(coeffs.items()), const)

    def parse_offset_terms(self) -> LinearForm:
        """Optional ``± term ± term ...`` continuation after a variable name."""
        coeffs: dict[str, int] = {}
        const = 0
        while self.at("+") or self.at("-"):
            sign = -1 if self.take("-") else 1
            if sign == 1:
                self.take("+")
            tok = self.peek()
            if tok.kind == "int":
                value = self.expect_int()
                if self.take("*"):
                    name = self.expect_ident("parameter name")
                    coeffs[name] = coeffs.get(name, 0) + sign * value
                else:
                    const += sign * value
            elif tok.kind == "ident":
                name = self.expect_ident("parameter name")
                coeffs[name] = coeffs.get(name, 0) + sign
            else:
                self.fail(f"expected offset term, found {self._describe(tok)}")
        return LinearForm(normalize_coeffs(coeffs.items()), const)

    def parse_comparison(self) -> Comparison:
        lhs = self.parse_linear_form()
        tok = self.peek()
        if tok.text not in ("<", "<=", "==", "!=", ">=", ">"):
            self.fail(f"expected comparison operator, found {self._describe(tok)}")
        self.advance()
        rhs = self.parse_linear_form()
        return Comparison(lhs, tok.text, rhs)

    # -- guards and operations ----------------------------------------------

    def parse_guard(self) -> GuardExpr:
        items = [self.parse_guard_unary()]
        while self.take("&&"):
            items.append(self.parse_guard_unary())
        if len(items) == 1:
            return items[0]
        return GuardAnd(tuple(items))

    def parse_guard_unary(self) -> GuardExpr:
        if self.take("!"):
            self.expect("(")
            inner = self.parse_guard()
            self.expect(")")
            return GuardNot(inner)
        if self.take("("):
            inner = self.parse_guard()
            self.expect(")")
            return inner
        if self.at("sv"):
            self.advance()
            tok = self.peek()
            if tok.text == "!=":
                self.fail("guards use '!(sv == Z)' rather than 'sv != Z'")
            self.expect("==")
            status = self.expect_ident("status name")
            return SvEq(status)
        bound = self.parse_linear_form()
        self.expect("<=")
        var = self.expect_ident("variable name")
        return ThresholdLe(bound, var)

    def parse_op(self) -> Op:
        if self.take("when"):
            return Guard(self.parse_guard())
        if self.take("set"):
            self.expect("sv")
            self.expect("=")
            return SetStatus(self.expect_ident("status name"))
        if self.take("inc"):
            return Inc(self.expect_ident("variable name"))
        if self.take("pick"):
            var = self.expect_ident("variable name")
            self.expect("where")
            atoms = [self.parse_pick_atom()]
            while self.take("&&"):
                atoms.append(self.parse_pick_atom())
            return Pick(var, PickCond(tuple(atoms)))
        self.fail(f"expected operation (when/set/inc/pick), "
                  f"found {self._describe(self.peek())}")
        raise AssertionError

    def parse_pick_atom(self) -> PickAtom:
        lhs = self.expect_ident(f"variable name or {EPS!r}")
        self.expect("<=")
        rhs = self.expect_ident(f"variable name or {EPS!r}")
        offset = self.parse_offset_terms()
        return PickAtom(lhs, rhs, offset)

    # -- formulas ------------------------------------------------------------

    def parse_formula(self) -> Formula:
        return self.parse_implies()

    def parse_implies(self) -> Formula:
        start = self.peek()
        lhs = self.parse_or()
        if not self.take("->"):
            return lhs
        if not isinstance(lhs, Literal):
            self.fail("the premise of '->' must be a literal "
                      "(richer premises are not part of the language)", start)
        rhs = self.parse_implies()
        negated = Literal(lhs.ap, not lhs.negated)
        if isinstance(rhs, Or):
            return Or((negated,) + rhs.items)
        return Or((negated, rhs))

    def parse_or(self) -> Formula:
        items = [self.parse_and()]
        while self.take("||"):
            items.append(self.parse_and())
        if len(items) == 1:
            return items[0]
        return Or(tuple(items))

    def parse_and(self) -> Formula:
        items = [self.parse_until()]
        while self.take("&&"):
            items.append(self.parse_until())
        if len(items) == 1:
            return items[0]
        return And(tuple(items))

    def parse_until(self) -> Formula:
        lhs = self.parse_formula_unary()
        while self.at("U"):
            self.advance()
            rhs = self.parse_formula_unary()
            lhs = Until(lhs, rhs)
        return lhs

    def parse_formula_unary(self) -> Formula:
        if self.take("F"):
            return Future(self.parse_formula_unary())
        if self.take("G"):
            return Globally(self.parse_formula_unary())
        if self.take("!"):
            start = self.peek()
            arg = self.parse_formula_unary()
            if not isinstance(arg, Literal):
                self.fail("'!' applies to literals only; negation of compound "
                          "formulas is expressed by the dual operators", start)
            return Literal(arg.ap, not arg.negated)
        if self.take("("):
            inner = self.parse_formula()
            self.expect(")")
            return inner
        return self.parse_formula_literal()

    def parse_formula_literal(self) -> Formula:
        tok = self.peek()
        if tok.text not in ("all", "some"):
            self.fail(f"expected formula, found {self._describe(tok)}")
        quant = tok.text
        self.advance()
        self.expect("(")
        if self.at("sv"):
            self.advance()
            op_tok = self.peek()
            if op_tok.text not in ("==", "!="):
                self.fail(f"expected '==' or '!=', found {self._describe(op_tok)}")
            self.advance()
            status = self.expect_ident("status name")
            self.expect(")")
            return Literal(StatusProp(quant, status, eq=(op_tok.text == "==")))
        if quant != "some":
            self.fail("comparisons between variables are existential: "
                      "use 'some(x [± offset] < y)'", tok)
        x = self.expect_ident("variable name")
        offset = self.parse_offset_terms()
        self.expect("<")
        y = self.expect_ident("variable name")
        self.expect(")")
        return Literal(LessProp(x, offset, y))


# ---------------------------------------------------------------------------
# Statement-level parsing and semantic validation.

def parse_model(text: str) -> ModelDef:
    """Parse a model source into a validated ModelDef.

    Raises ModelSyntaxError carrying every diagnostic found (syntax and
    semantic); diagnostics have 1-based line/column positions.
    """
    tokens, diagnostics = tokenize(text)
    parser = _Parser(tokens, diagnostics)

    name: str | None = None
    params: list[str] = []
    resilience = ResilienceCondition()
    size: LinearForm | None = None
    statuses: list[str] = []
    initial_statuses: list[str] = []
    locals_: list[str] = []
    shareds: list[str] = []
    edges: list[Edge] = []
    step_tok: Token | None = None
    unfairness: list[tuple[str, Formula]] = []
    unfair_toks: list[Token] = []
    specs: list[SpecDef] = []
    spec_toks: list[Token] = []

    def parse_name_list(target: list[str], role: str) -> None:
        target.append(parser.expect_ident(role))
        while parser.take(","):
            target.append(parser.expect_ident(role))

    while parser.peek().kind != "eof":
        tok = parser.peek()
        try:
            if parser.take("model"):
                name = parser.expect_ident("model name")
                parser.expect(";")
            elif parser.take("param"):
                parse_name_list(params, "parameter name")
                parser.expect(";")
            elif parser.take("resilience"):
                conjuncts = [parser.parse_comparison()]
                while parser.take("&&"):
                    conjuncts.append(parser.parse_comparison())
                resilience = ResilienceCondition(tuple(conjuncts))
                parser.expect(";")
            elif parser.take("size"):
                size = parser.parse_linear_form()
                parser.expect(";")
            elif parser.take("status"):
                parse_name_list(statuses, "status name")
                parser.expect(";")
            elif parser.take("init"):
                parse_name_list(initial_statuses, "status name")
                parser.expect(";")
            elif parser.take("local"):
                parse_name_list(locals_, "variable name")
                parser.expect(";")
            elif parser.take("shared"):
                parse_name_list(shareds, "variable name")
                parser.expect(";")
            elif parser.at("step"):
                step_tok = tok
                parser.advance()
                parser.expect("{")
                while not parser.take("}"):
                    if parser.peek().kind == "eof":
                        parser.fail("unterminated step block")
                    try:
                        parser.expect("from")
                        src = parser.expect_ident("location name")
                        parser.expect("to")
                        dst = parser.expect_ident("location name")
                        parser.expect(":")
                        op = parser.parse_op()
                        parser.expect(";")
                        edges.append(Edge(src, op, dst))
                    except _Recover:
                        parser.skip_statement()
            elif parser.take("unfair"):
                unfair_name = parser.expect_ident("unfairness name")
                parser.expect(":")
                formula = parser.parse_formula()
                parser.expect(";")
                unfairness.append((unfair_name, formula))
                unfair_toks.append(tok)
            elif parser.take("spec"):
                spec_name = parser.expect_ident("spec name")
                unless = None
                if parser.take("unless"):
                    unless = parser.expect_ident("unfairness name")
                parser.expect(":")
                formula = parser.parse_formula()
                parser.expect(";")
                specs.append(SpecDef(spec_name, formula, unless))
                spec_toks.append(tok)
            else:
                parser.fail(f"unknown statement {parser._describe(tok)}")
        except _Recover:
            parser.skip_statement()

    # Semantic validation (positions point at the owning statement).
    top = Token("eof", "", 1, 1)

    def check_names(names: list[str], role: str, tok: Token) -> None:
        seen: set[str] = set()
        for n in names:
            if n in RESERVED_NAMES:
                diagnostics.append(Diagnostic(tok.line, tok.col,
                                              f"{role} {n!r} is a reserved word"))
            if n in seen:
                diagnostics.append(Diagnostic(tok.line, tok.col,
                                              f"duplicate {role} {n!r}"))
            seen.add(n)

    if name is None:
        diagnostics.append(Diagnostic(1, 1, "missing 'model NAME;' statement"))
        name = "unnamed"
    if size is None:
        diagnostics.append(Diagnostic(1, 1, "missing 'size <linear form>;' statement"))
        size = LinearForm()
    if not statuses:
        diagnostics.append(Diagnostic(1, 1, "missing 'status ...;' statement"))
    if not initial_statuses:
        diagnostics.append(Diagnostic(1, 1, "missing 'init ...;' statement"))
    if not edges:
        diagnostics.append(Diagnostic(1, 1, "missing or empty 'step { ... }' block"))

    check_names(params, "parameter", top)
    check_names(statuses, "status", top)
    check_names(locals_ + shareds, "variable", top)
    all_declared = params + statuses + locals_ + shareds
    for dup in sorted({n for n in all_declared if all_declared.count(n) > 1}):
        diagnostics.append(Diagnostic(top.line, top.col,
                                      f"name {dup!r} is declared in more than one role"))
    for status in initial_statuses:
        if status not in statuses:
            diagnostics.append(Diagnostic(top.line, top.col,
                                          f"initial status {status!r} is not declared"))

    declared_vars = set(locals_) | set(shareds)
    declared_params = set(params)
    for form in [size] + [c.lhs for c in resilience.conjuncts] \
            + [c.rhs for c in resilience.conjuncts]:
        for pname in form.names():
            if pname not in declared_params:
                diagnostics.append(Diagnostic(top.line, top.col,
                                              f"unknown parameter {pname!r}"))

    cfa = Cfa("qI", "qF", tuple(edges))
    if edges:
        # Entry/exit locations are detected (no incoming / no outgoing edge)
        # rather than hard-coded by name.
        srcs = {e.src for e in edges}
        dsts = {e.dst for e in edges}
        entries = [loc for loc in dict.fromkeys(e.src for e in edges) if loc not in dsts]
        exits = [loc for loc in dict.fromkeys(e.dst for e in edges) if loc not in srcs]
        where = step_tok or top
        if len(entries) != 1:
            diagnostics.append(Diagnostic(where.line, where.col,
                                          f"step block must have exactly one entry location "
                                          f"(found {entries or 'none'})"))
        if len(exits) != 1:
            diagnostics.append(Diagnostic(where.line, where.col,
                                          f"step block must have exactly one exit location "
                                          f"(found {exits or 'none'})"))
        if len(entries) == 1 and len(exits) == 1:
            cfa = Cfa(entries[0], exits[0], tuple(edges))
            seen_edges: set[Edge] = set()
            for e in edges:
                if e in seen_edges:
                    diagnostics.append(Diagnostic(where.line, where.col,
                                                  f"duplicate edge {e.src}->{e.dst}"))
                seen_edges.add(e)
            decls = Declarations(tuple(statuses), tuple(initial_statuses),
                                 tuple(locals_), tuple(shareds), tuple(params))
            for problem in validate_cfa(cfa, decls):
                diagnostics.append(Diagnostic(where.line, where.col, problem))

    def check_formula(formula: Formula, tok: Token) -> None:
        for ap in formula_aps(formula):
            if isinstance(ap, StatusProp):
                if ap.status not in statuses:
                    diagnostics.append(Diagnostic(tok.line, tok.col,
                                                  f"unknown status {ap.status!r}"))
            else:
                for v in (ap.x, ap.y):
                    if v not in declared_vars:
                        diagnostics.append(Diagnostic(tok.line, tok.col,
                                                      f"unknown variable {v!r}"))
                for pname in ap.offset.names():
                    if pname not in declared_params:
                        diagnostics.append(Diagnostic(tok.line, tok.col,
                                                      f"unknown parameter {pname!r}"))

    unfair_names = [n for n, _ in unfairness]
    check_names(unfair_names, "unfairness name", top)
    for (unfair_name, formula), tok in zip(unfairness, unfair_toks):
        check_formula(formula, tok)
    check_names([s.name for s in specs], "spec name", top)
    for spec, tok in zip(specs, spec_toks):
        check_formula(spec.formula, tok)
        if spec.unless is not None and spec.unless not in unfair_names:
            diagnostics.append(Diagnostic(tok.line, tok.col,
                                          f"spec {spec.name!r} references undeclared "
                                          f"unfairness {spec.unless!r}"))

    if diagnostics:
        raise ModelSyntaxError(diagnostics)

    return ModelDef(name=name, params=tuple(params), resilience=resilience,
                    size=size, statuses=tuple(statuses),
                    initial_statuses=tuple(initial_statuses),
                    locals=tuple(locals_), shareds=tuple(shareds), cfa=cfa,
                    unfairness=tuple(unfairness), specs=tuple(specs))


def parse_params_binding(text: str, model: ModelDef) -> ParamEnv:
    """Parse a binding like ``"n=7,t=2,f=2"`` against the model's parameters."""
    env: ParamEnv = {}
    if text.strip():
        for part in text.split(","):
            if "=" not in part:
                raise ModelError(f"malformed parameter binding {part.strip()!r} "
                                 "(expected name=value)")
            key, _, value = part.partition("=")
            key = key.strip()
            value = value.strip()
            if key in env:
                raise ModelError(f"duplicate parameter {key!r}")
            if key not in model.params:
                raise ModelError(f"unknown parameter {key!r} "
                                 f"(model has: {', '.join(model.params)})")
            if not value.lstrip("-").isdigit():
                raise ModelError(f"non-numeric value {value!r} for parameter {key!r}")
            number = int(value)
            if number < 0:
                raise ModelError(f"parameter {key!r} must be a natural, got {number}")
            env[key] = number
    missing = [p for p in model.params if p not in env]
    if missing:
        raise ModelError(f"missing parameter(s): {', '.join(missing)}")
    return env


def format_model(model: ModelDef) -> str:
    """Canonical source text; parse_model(format_model(m)) is structurally m."""
    lines: list[str] = [f"model {model.name};", ""]
    if model.params:
        lines.append(f"param {', '.join(model.params)};")
    if model.resilience.conjuncts:
        lines.append(f"resilience {model.resilience.render()};")
    lines.append(f"size {model.size.render()};")
    lines.append("")
    lines.append(f"status {', '.join(model.statuses)};")
    lines.append(f"init {', '.join(model.initial_statuses)};")
    if model.locals:
        lines.append(f"local {', '.join(model.locals)};")
    if model.shareds:
        lines.append(f"shared {', '.join(model.shareds)};")
    lines.append("")
    lines.append("step {")
    for e in model.cfa.edges:
        lines.append(f"  from {e.src} to {e.dst}: {e.op.render()};")
    lines.append("}")
    if model.unfairness:
        lines.append("")
        for unfair_name, formula in model.unfairness:
            lines.append(f"unfair {unfair_name}: {render_formula(formula)};")
    if model.specs:
        lines.append("")
        for spec in model.specs:
            clause = f" unless {spec.unless}" if spec.unless else ""
            lines.append(f"spec {spec.name}{clause}: {render_formula(spec.formula)};")
    return "\n".join(lines) + "\n"
