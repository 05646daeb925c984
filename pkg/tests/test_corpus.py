import json

import pytest

from outerforms.corpus import (
    ASSERTED,
    VERIFIED,
    CorpusEntry,
    default_corpus_path,
    load_corpus,
    run_entry,
    verify_paper,
)

FAST = [
    {"id": "x-identity", "kind": "identity", "inputs": {"tower": "Q[a]", "lhs": "(a+1)^2", "rhs": "a^2+2*a+1"},
     "expected": True, "status": "verified", "provenance": "trivial"},
    {"id": "x-hilbert", "kind": "hilbert", "inputs": {"a": "-1", "b": "-1", "place": "inf"},
     "expected": -1, "status": "verified", "provenance": "derived"},
    {"id": "x-asserted", "kind": "hilbert", "inputs": {"a": "2", "b": "3", "place": "3"},
     "expected": 1, "status": "paper-asserted", "provenance": "claimed"},
]


def _write(tmp_path, entries, extra=""):
    p = tmp_path / "corpus.jsonl"
    p.write_text(extra + "\n".join(json.dumps(e) for e in entries) + "\n")
    return p


def test_shipped_corpus_is_well_formed():
    entries = load_corpus()
    assert len(entries) >= 25
    assert all(e.provenance for e in entries)
    assert sum(e.status == ASSERTED for e in entries) == 2
    assert default_corpus_path().name == "paper_corpus.jsonl"


def test_missing_provenance_rejected():
    with pytest.raises(ValueError):
        CorpusEntry.from_dict({"id": "a", "kind": "identity", "expected": True})


def test_bad_status_rejected():
    with pytest.raises(ValueError):
        CorpusEntry.from_dict({"id": "a", "kind": "identity", "expected": True, "status": "maybe",
                               "provenance": "x"})


def test_duplicate_ids_rejected(tmp_path):
    with pytest.raises(ValueError):
        load_corpus(_write(tmp_path, FAST[:1] * 2))


def test_comments_skipped_and_report(tmp_path):
    rep = verify_paper(_write(tmp_path, FAST, extra="# comment\n\n"))
    d = rep.to_dict()
    assert rep.passed
    assert d["verified"] == 2 and d["paper_asserted"] == ["x-asserted"]
    assert [e["id"] for e in d["entries"]] == sorted(e["id"] for e in FAST)


def test_regression_blocks(tmp_path):
    bad = dict(FAST[1], expected=1)
    rep = verify_paper(_write(tmp_path, [bad]))
    assert not rep.passed and rep.to_dict()["regressions"] == ["x-hilbert"]


def test_asserted_mismatch_never_blocks(tmp_path):
    odd = dict(FAST[2], expected=-1)
    assert verify_paper(_write(tmp_path, [odd])).passed


def test_errors_are_reported():
    e = CorpusEntry.from_dict({"id": "u", "kind": "nope", "inputs": {}, "expected": True, "provenance": "x"})
    r = run_entry(e)
    assert r.actual == "error" and not r.ok
    e = CorpusEntry.from_dict({"id": "p", "kind": "identity", "inputs": {"lhs": "1 +", "rhs": "1"},
                               "expected": True, "provenance": "x"})
    assert "position" in run_entry(e).detail["error"]


def test_parallel_matches_serial(tmp_path):
    p = _write(tmp_path, FAST)
    serial = verify_paper(p).to_dict()
    parallel = verify_paper(p, jobs=2).to_dict()
    assert serial == parallel


def test_only_filter():
    rep = verify_paper(only=["eq-a3-identity-1", "hilbert-m1-m1-2"])
    assert [r.id for r in rep.results] == ["eq-a3-identity-1", "hilbert-m1-m1-2"]
    assert rep.passed
