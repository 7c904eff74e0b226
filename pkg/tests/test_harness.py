"""Case running, manifests, result CSVs, and trace round-trips."""

import io
import json

import pytest

from tgmc.core import ModelError
from tgmc.dsl import format_model
from tgmc.harness import (BUILTIN_NAMES, CaseSpec, RunRecord, exit_code_for,
                          load_builtin, parse_trace, read_manifest,
                          records_csv_text, render_state, render_trace,
                          resolve_model, run_case, run_manifest, summarize,
                          verify_trace, write_records_csv, TRACE_MAGIC)
from tgmc.checker import check_spec
from tgmc.kripke import Instance

GOOD_CASE = CaseSpec("byz", "n=4,t=1,f=1", "unforg", "holds", "required")
BAD_EXPECTATION = CaseSpec("byz", "n=4,t=1,f=1", "unforg", "violated", "required")
VIOLATED_CASE = CaseSpec("clean", "n=3,t=3", "unforg", "violated", "required")
SKIP_CASE = CaseSpec("byz", "n=10,t=3,f=3", "corr", "skip", "skip")


def manifest_file(tmp_path, rows):
    path = tmp_path / "cases.csv"
    lines = ["model,params,spec,expected,tier"]
    lines += [",".join(f'"{field}"' for field in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_load_builtin_and_resolve():
    for name in BUILTIN_NAMES:
        model = load_builtin(name)
        assert model.name == name
        assert resolve_model(name) == model
        assert resolve_model(f"builtin:{name}") == model
    with pytest.raises(ModelError):
        load_builtin("missing")
    with pytest.raises(ModelError):
        resolve_model("builtin:missing")


def test_resolve_model_from_file(tmp_path):
    path = tmp_path / "copy.tg"
    path.write_text(format_model(load_builtin("clean")))
    assert resolve_model(str(path)) == load_builtin("clean")
    with pytest.raises(ModelError):
        resolve_model(str(tmp_path / "absent.tg"))


def test_run_case_outcomes():
    record = run_case(GOOD_CASE)
    assert record.verdict == "holds"
    assert record.match is True
    assert record.states_stored > 0

    record = run_case(BAD_EXPECTATION)
    assert record.verdict == "holds"
    assert record.match is False

    record = run_case(VIOLATED_CASE, include_trace=True)
    assert record.verdict == "violated"
    assert record.match is True
    assert record.trace is not None
    assert record.trace["cycle"]

    record = run_case(SKIP_CASE)
    assert record.verdict == "skip"
    assert record.match is None

    record = run_case(CaseSpec("byz", "n=4,t=1", "unforg", "holds", "required"))
    assert record.verdict == "error"
    assert record.match is False
    assert "missing" in record.detail

    record = run_case(GOOD_CASE, max_states=2)
    assert record.verdict == "inconclusive"
    assert record.match is False          # required tier tolerates no cap-outs

    record = run_case(CaseSpec("byz", "n=4,t=1,f=1", "unforg", "holds", "extended"),
                      max_states=2)
    assert record.verdict == "inconclusive"
    assert record.match is None


def test_run_record_json():
    record = run_case(VIOLATED_CASE, include_trace=True)
    data = record.to_json()
    assert data["model"] == "clean"
    assert data["verdict"] == "violated"
    assert data["match"] is True
    assert json.dumps(data)            # serializable


def test_read_manifest_validation(tmp_path):
    path = manifest_file(tmp_path, [("byz", "n=4,t=1,f=1", "unforg", "holds", "required")])
    cases = read_manifest(path)
    assert cases == [GOOD_CASE]

    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert read_manifest(str(empty)) == []

    bad_header = tmp_path / "bad.csv"
    bad_header.write_text("model,params\nbyz,n=1\n")
    with pytest.raises(ModelError):
        read_manifest(str(bad_header))

    for bad_row in (("", "n=4,t=1,f=1", "unforg", "holds", "required"),
                    ("byz", "n=4,t=1,f=1", "unforg", "maybe", "required"),
                    ("byz", "n=4,t=1,f=1", "unforg", "holds", "golden")):
        path = manifest_file(tmp_path, [bad_row])
        with pytest.raises(ModelError) as err:
            read_manifest(path)
        assert "row 2" in str(err.value)

    with pytest.raises(ModelError):
        read_manifest(str(tmp_path / "nowhere.csv"))


def test_run_manifest_and_csv_output(tmp_path):
    path = manifest_file(tmp_path, [
        ("byz", "n=4,t=1,f=1", "unforg", "holds", "required"),
        ("clean", "n=3,t=3", "unforg", "violated", "required"),
        ("byz", "n=10,t=3,f=3", "corr", "skip", "skip"),
    ])
    records = run_manifest(path)
    assert [r.verdict for r in records] == ["holds", "violated", "skip"]
    assert exit_code_for(records) == 0

    text = records_csv_text(records)
    lines = text.splitlines()
    assert lines[0] == ("model,params,spec,expected,tier,"
                        "verdict,match,states_stored,transitions,elapsed_ms")
    assert len(lines) == 4
    assert lines[1].startswith('byz,"n=4,t=1,f=1",unforg,holds,required,holds,yes,')
    assert lines[3].endswith(",skip,,0,0,0")

    out = io.StringIO()
    write_records_csv(records, out)
    assert out.getvalue() == text

    summary = summarize(records)
    assert "3 cases" in summary
    assert "2 match" in summary
    assert "1 skipped" in summary


def test_run_manifest_parallel_preserves_order(tmp_path):
    rows = [("clean", f"n={n},t=1", "unforg", "holds", "required")
            for n in (1, 2, 3)] * 2
    path = manifest_file(tmp_path, rows)
    serial = run_manifest(path, jobs=1)
    parallel = run_manifest(path, jobs=3)
    strip = lambda rs: [(r.case, r.verdict, r.match, r.states_stored) for r in rs]
    assert strip(serial) == strip(parallel)


def test_exit_codes_and_summary_lines():
    ok = RunRecord(GOOD_CASE, "holds", True)
    mismatch = RunRecord(BAD_EXPECTATION, "holds", False)
    undecided = RunRecord(GOOD_CASE, "inconclusive", None)
    skipped = RunRecord(SKIP_CASE, "skip", None)
    assert exit_code_for([ok, skipped]) == 0
    assert exit_code_for([ok, mismatch]) == 1
    assert exit_code_for([ok, undecided]) == 3
    assert exit_code_for([mismatch, undecided]) == 1   # mismatch dominates
    summary = summarize([ok, mismatch, undecided, skipped])
    assert "MISMATCH" in summary
    assert "1 inconclusive" in summary


def test_render_state_format():
    model = load_builtin("byz")
    inst = Instance(model, {"n": 7, "t": 2, "f": 2})
    state = inst.initial_states()[0]
    assert render_state(state, model) == "nsnt=0 | V0(rcvd=0) V0(rcvd=0) V0(rcvd=0) V0(rcvd=0) V0(rcvd=0)"


def test_trace_round_trip_and_verification():
    model = load_builtin("clean")
    env = {"n": 3, "t": 3}
    verdict = check_spec(model, env, "unforg")
    lasso = verdict.counterexample
    text = render_trace(lasso, model, env=env, spec_name="unforg",
                        fairness=False, symmetry=True)
    assert text.startswith(TRACE_MAGIC)

    data = parse_trace(text, model)
    assert data.model_name == "clean"
    assert data.spec == "unforg"
    assert data.fairness is False
    assert data.symmetry is True
    assert data.params == "n=3, t=3"
    assert data.prefix == lasso.prefix
    assert data.cycle == lasso.cycle

    assert verify_trace(text, model) == []

    # Tampered traces are caught: bump a shared counter mid-run.
    lines = text.splitlines()
    tampered = "\n".join(line.replace("nsnt=1", "nsnt=2", 1) if i == 8 else line
                         for i, line in enumerate(lines)) + "\n"
    assert tampered != text
    assert verify_trace(tampered, model) != []

    # A trace for one model cannot be verified against another.
    problems = verify_trace(text, load_builtin("byz"))
    assert problems != []


def test_trace_verification_catches_broken_cycle():
    model = load_builtin("byz")
    env = {"n": 7, "t": 1, "f": 2}
    verdict = check_spec(model, env, "unforg")
    assert verdict.status == "violated"
    text = render_trace(verdict.counterexample, model, env=env,
                        spec_name="unforg", fairness=False, symmetry=True)
    assert verify_trace(text, model) == []
    # Remove the final cycle line: the loop no longer closes.
    lines = [line for line in text.splitlines() if line.strip()]
    clipped = "\n".join(lines[:-1]) + "\n"
    assert verify_trace(clipped, model) != []
