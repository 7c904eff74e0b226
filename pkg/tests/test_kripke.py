"""System instances: initial states, interleaving, symmetry, labeling."""

import itertools
import random

import pytest

from oracles import multiset_count, naive_step_successors
from tgmc.core import LinearForm, ModelError, make_valuation
from tgmc.harness import load_builtin
from tgmc.kripke import (GlobalState, Instance, canonicalize, eval_atomic_prop,
                         global_successors, initial_global_states)
from tgmc.ltl import LessProp, StatusProp


def byz_instance(symmetry=True, env=None):
    return Instance(load_builtin("byz"), env or {"n": 7, "t": 2, "f": 2},
                    symmetry=symmetry)


def test_parameter_binding_is_validated():
    model = load_builtin("byz")
    with pytest.raises(ModelError):
        Instance(model, {"n": 7, "t": 2})
    with pytest.raises(ModelError):
        Instance(model, {"n": 7, "t": 2, "f": 2, "x": 1})
    with pytest.raises(ModelError):
        Instance(model, {"n": 1, "t": 0, "f": 2})   # size n-f = -1


def test_initial_state_counts():
    # 5 processes (n-f), statuses V0/V1 free per process.
    inst = byz_instance(symmetry=False)
    assert inst.count == 5
    full = inst.initial_states()
    assert len(full) == 2 ** 5 == 32
    inst = byz_instance(symmetry=True)
    reduced = inst.initial_states()
    assert len(reduced) == multiset_count(2, 5) == 6
    # Every full initial state canonicalizes into the reduced set.
    canon = {inst.canonical(s) for s in full}
    assert canon == set(reduced)


def test_zero_process_instance_self_loops():
    inst = Instance(load_builtin("clean"), {"n": 0, "t": 1})
    states = inst.initial_states()
    assert len(states) == 1
    (empty,) = states
    assert empty == ((), (0,))
    assert inst.successors(empty) == [empty]


def test_global_state_round_trip():
    inst = byz_instance()
    for state in inst.initial_states():
        g = inst.to_global_state(state)
        assert isinstance(g, GlobalState)
        assert inst.from_global_state(g) == state
    g0 = initial_global_states(inst)[0]
    assert g0.params == (("n", 7), ("t", 2), ("f", 2))
    assert g0.shareds == (("nsnt", 0),)
    assert all(status in ("V0", "V1") for status, _ in g0.procs)


def test_successors_move_one_process_and_frame_the_rest():
    inst = byz_instance(symmetry=False)
    model = load_builtin("byz")
    state = inst.initial_states()[7]
    for succ in inst.successors(state):
        procs, shareds = state
        new_procs, new_shareds = succ
        changed = [i for i in range(len(procs)) if procs[i] != new_procs[i]]
        assert len(changed) <= 1
        # The mover's step is a single-process step at the old shared values.
        (i,) = changed or (0,)
        old_status, old_locals = procs[i]
        v = make_valuation(model.statuses[old_status],
                           dict(zip(model.locals, old_locals)),
                           dict(zip(model.shareds, shareds)), inst.env)
        singles = {(w.status, tuple(w.value(x) for x in model.locals),
                    tuple(w.value(s) for s in model.shareds))
                   for w in naive_step_successors(v, model.cfa)}
        new_status, new_locals = new_procs[i]
        assert (model.statuses[new_status], new_locals, new_shareds) in singles


def test_symmetric_successors_are_canonical_quotient():
    # The symmetric successor set equals the canonicalized full successor set.
    env = {"n": 4, "t": 1, "f": 1}
    full = byz_instance(symmetry=False, env=env)
    reduced = byz_instance(symmetry=True, env=env)
    rng = random.Random("quotient")
    frontier = full.initial_states()
    for _ in range(60):
        state = rng.choice(frontier)
        via_full = {full.canonical(s) for s in full.successors(state)}
        via_reduced = set(reduced.successors(full.canonical(state)))
        assert via_full == via_reduced
        frontier = full.successors(state) or frontier


def test_canonicalize_is_idempotent_and_label_preserving():
    inst = byz_instance()
    model = load_builtin("byz")
    statuses = model.statuses
    props = [StatusProp("all", "V0", True), StatusProp("some", "AC", True),
             StatusProp("all", "V1", False),
             LessProp("rcvd", LinearForm(), "nsnt"),
             LessProp("rcvd", LinearForm.of(f=1), "nsnt")]
    rng = random.Random("canon")
    for _ in range(300):
        procs = tuple((rng.choice(statuses),
                       (("rcvd", rng.randrange(0, 5)),))
                      for _ in range(4))
        g = GlobalState(procs, (("nsnt", rng.randrange(0, 5)),),
                        (("n", 7), ("t", 2), ("f", 2)))
        c = canonicalize(g, statuses)
        assert canonicalize(c, statuses) == c
        assert sorted(c.procs) == sorted(g.procs)
        for prop in props:
            assert eval_atomic_prop(prop, c) == eval_atomic_prop(prop, g)
        # Any permutation of the processes canonicalizes identically.
        shuffled = list(procs)
        rng.shuffle(shuffled)
        assert canonicalize(GlobalState(tuple(shuffled), g.shareds, g.params),
                            statuses) == c


def test_eval_atomic_prop_quantifiers():
    empty = GlobalState((), (("nsnt", 3),), ())
    assert eval_atomic_prop(StatusProp("all", "AC", True), empty) is True
    assert eval_atomic_prop(StatusProp("some", "AC", True), empty) is False
    assert eval_atomic_prop(LessProp("rcvd", LinearForm(), "nsnt"), empty) is False

    g = GlobalState((("V0", (("rcvd", 0),)), ("AC", (("rcvd", 3),))),
                    (("nsnt", 2),), (("f", 1),))
    assert eval_atomic_prop(StatusProp("some", "AC", True), g) is True
    assert eval_atomic_prop(StatusProp("all", "AC", True), g) is False
    assert eval_atomic_prop(StatusProp("all", "V1", False), g) is True
    # rcvd < nsnt holds for the first process (0 < 2), not the second.
    assert eval_atomic_prop(LessProp("rcvd", LinearForm(), "nsnt"), g) is True
    # rcvd + f < nsnt: 0+1 < 2 holds.
    assert eval_atomic_prop(LessProp("rcvd", LinearForm.of(f=1), "nsnt"), g) is True
    # shared-to-shared comparison is per-process but constant: nsnt < nsnt fails.
    assert eval_atomic_prop(LessProp("nsnt", LinearForm(), "nsnt"), g) is False


def test_compiled_ap_matches_direct_evaluation():
    inst = byz_instance()
    props = [StatusProp("all", "V0", True), StatusProp("some", "SE", True),
             StatusProp("some", "V1", False),
             LessProp("rcvd", LinearForm(), "nsnt"),
             LessProp("rcvd", LinearForm.of(f=1), "nsnt")]
    frontier = inst.initial_states()
    seen = set(frontier)
    rng = random.Random("aps")
    for _ in range(200):
        state = rng.choice(sorted(seen)[:500])
        for s in inst.successors(state):
            seen.add(s)
        g = inst.to_global_state(state)
        for prop in props:
            assert inst.eval_ap(prop, state) == eval_atomic_prop(prop, g)


def test_global_successor_wrappers():
    inst = byz_instance()
    g0 = initial_global_states(inst)[0]
    succ = global_successors(g0, inst)
    assert succ
    assert all(isinstance(s, GlobalState) for s in succ)
    back = {inst.from_global_state(s) for s in succ}
    assert back == set(inst.successors(inst.from_global_state(g0)))


def test_unknown_names_raise():
    inst = byz_instance()
    state = inst.initial_states()[0]
    with pytest.raises(ModelError):
        inst.eval_ap(StatusProp("all", "ZZ", True), state)
    with pytest.raises(ModelError):
        inst.eval_ap(LessProp("zz", LinearForm(), "nsnt"), state)
    with pytest.raises(ModelError):
        inst.from_global_state(GlobalState((("ZZ", (("rcvd", 0),)),), (("nsnt", 0),), ()))
