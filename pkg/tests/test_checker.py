"""Product emptiness search, verdicts, replay validation."""

import random

import pytest

from oracles import random_digraph, scc_accepting_lasso_exists
from tgmc.buchi import build_buchi
from tgmc.checker import (DEFAULT_MAX_PRODUCT_STATES, Lasso, Product,
                          ResourceCapExceeded, Verdict, check_spec,
                          combined_formula, nested_dfs, product_nested_dfs,
                          replay_lasso)
from tgmc.core import LinearForm, ModelError
from tgmc.dsl import parse_model
from tgmc.harness import load_builtin
from tgmc.kripke import Instance
from tgmc.ltl import (Future, Globally, LessProp, Literal, Or, StatusProp,
                      negate_to_nnf, render_formula)


def run_nested(n, succ, initial, accepting):
    return nested_dfs(initial, lambda v: succ[v], lambda v: v in accepting)


def validate_found(result, succ, initial, accepting):
    prefix, cycle = result
    assert cycle
    walk = prefix + cycle
    assert walk[0] in initial
    for here, there in zip(walk, walk[1:]):
        assert there in succ[here]
    assert cycle[0] in succ[cycle[-1]]
    assert any(v in accepting for v in cycle)


def test_nested_dfs_fixed_graphs():
    # Accepting self-loop.
    result, stored = run_nested(2, {0: (1,), 1: (1,)}, (0,), {1})
    validate_found(result, {0: (1,), 1: (1,)}, (0,), {1})
    assert stored == 2
    # Cycle exists but no accepting state on any cycle.
    result, stored = run_nested(3, {0: (1,), 1: (0, 2), 2: ()}, (0,), {2})
    assert result is None
    assert stored == 3
    # Accepting cycle behind a long stem.
    succ = {0: (1,), 1: (2,), 2: (3,), 3: (1,)}
    result, _ = run_nested(4, succ, (0,), {3})
    validate_found(result, succ, (0,), {3})
    # Unreachable accepting cycle.
    succ = {0: (), 5: (5,)}
    result, stored = run_nested(6, succ, (0,), {5})
    assert result is None
    assert stored == 1


def test_nested_dfs_respects_cap():
    succ = {i: (i + 1,) for i in range(100)}
    succ[100] = ()
    with pytest.raises(ResourceCapExceeded):
        nested_dfs((0,), lambda v: succ[v], lambda v: False, max_stored=10)


def test_nested_dfs_agrees_with_scc_oracle():
    rng = random.Random("emptiness")
    found_count = 0
    for _ in range(300):
        n, succ, initial, accepting = random_digraph(rng, 60)
        result, _ = run_nested(n, succ, initial, accepting)
        expected = scc_accepting_lasso_exists(initial, lambda v: succ[v],
                                              lambda v: v in accepting)
        assert (result is not None) == expected
        if result is not None:
            found_count += 1
            validate_found(result, succ, initial, accepting)
    assert found_count > 30          # both outcomes well represented
    assert found_count < 270


def test_product_structure_single_state_instance():
    # clean with n=1,t=1: the lone process accepts immediately (n-t=0), so
    # some(sv == AC) eventually holds on every path.
    model = load_builtin("clean")
    inst = Instance(model, {"n": 1, "t": 1})
    target = Future(Literal(StatusProp("some", "AC", True)))
    ba = build_buchi(negate_to_nnf(target))
    lasso, stats = product_nested_dfs(inst, ba)
    assert lasso is None
    assert stats["kripke_states"] >= 1
    assert stats["product_states"] >= 1

    # The negated target (G !some-AC) is itself violated by a run: search for
    # it directly and replay the counterexample.
    ba2 = build_buchi(negate_to_nnf(negate_to_nnf(target)))
    lasso2, _ = product_nested_dfs(inst, ba2)
    assert lasso2 is not None
    assert replay_lasso(inst, lasso2, negate_to_nnf(negate_to_nnf(target))) == []


def test_product_counts_are_consistent():
    model = load_builtin("byz")
    inst = Instance(model, {"n": 4, "t": 1, "f": 1})
    spec = combined_formula(model, "relay", fairness=True)
    ba = build_buchi(negate_to_nnf(spec))
    product = Product(inst, ba)
    initial = product.initial_nodes()
    assert initial
    result, stored = nested_dfs(initial, product.successors, product.is_accepting)
    assert result is None
    assert stored <= product.kripke_state_count() * ba.n_states()
    assert product.kripke_state_count() <= stored


def test_combined_formula_shapes():
    model = load_builtin("byz")
    corr = model.spec("corr").formula
    unfair = model.unfairness_formula("inequity")
    with_fairness = combined_formula(model, "corr", fairness=True)
    assert isinstance(with_fairness, Or)
    assert with_fairness.items == (corr, unfair)
    assert combined_formula(model, "corr", fairness=False) == corr
    # unforg carries no unless clause: fairness setting is irrelevant.
    assert combined_formula(model, "unforg", fairness=True) == \
        model.spec("unforg").formula
    # Disjunctions are flattened, never nested.
    omit = load_builtin("omit")
    combined = combined_formula(omit, "corr", fairness=True)
    assert isinstance(combined, Or)
    assert all(not isinstance(item, Or) for item in combined.items)


def test_check_spec_verdicts_and_replay():
    model = load_builtin("clean")
    verdict = check_spec(model, {"n": 3, "t": 3}, "unforg")
    assert verdict.status == "violated"
    assert verdict.holds is False
    lasso = verdict.counterexample
    assert lasso is not None
    inst = Instance(model, {"n": 3, "t": 3})
    assert replay_lasso(inst, lasso, verdict.negated) == []

    verdict = check_spec(model, {"n": 3, "t": 2}, "unforg")
    assert verdict.status == "holds"
    assert verdict.holds is True
    assert verdict.counterexample is None
    assert verdict.product_states > 0
    assert verdict.transitions > 0


def test_check_spec_resource_cap():
    model = load_builtin("byz")
    verdict = check_spec(model, {"n": 7, "t": 2, "f": 2}, "relay", max_states=50)
    assert verdict.status == "inconclusive"
    assert verdict.holds is None
    assert verdict.product_states > 50


def test_replay_rejects_corrupted_lassos():
    model = load_builtin("clean")
    verdict = check_spec(model, {"n": 3, "t": 3}, "unforg")
    lasso = verdict.counterexample
    inst = Instance(model, {"n": 3, "t": 3})

    # Swap in a non-successor state.
    broken = Lasso(prefix=list(lasso.prefix), cycle=list(lasso.cycle),
                   ap_truth=list(lasso.ap_truth))
    procs, shareds = broken.cycle[-1]
    foreign = (procs, tuple(v + 7 for v in shareds))
    broken.cycle[-1] = foreign
    assert replay_lasso(inst, broken, verdict.negated) != []

    # Break the recorded proposition sets.
    broken = Lasso(prefix=list(lasso.prefix), cycle=list(lasso.cycle),
                   ap_truth=[frozenset()] * len(lasso.ap_truth))
    assert any("proposition" in problem
               for problem in replay_lasso(inst, broken, verdict.negated))

    # A lasso that satisfies the *wrong* formula is rejected too.
    wrong = negate_to_nnf(verdict.negated)
    assert any("formula" in problem
               for problem in replay_lasso(inst, lasso, wrong))

    # Empty cycles are malformed.
    empty = Lasso(prefix=list(lasso.states()), cycle=[])
    assert replay_lasso(inst, empty, verdict.negated) != []


def test_verdict_fields_document_the_run():
    model = load_builtin("byz")
    verdict = check_spec(model, {"n": 7, "t": 2, "f": 2}, "corr")
    assert verdict.status == "holds"
    assert "G" in render_formula(verdict.formula)
    assert verdict.kripke_states > 0
    assert verdict.elapsed_ms >= 0
    assert verdict.product_states >= verdict.kripke_states
