import json
import math

import pytest

from stabgraph.errors import BadParameters
from stabgraph.graph import CirculantSpec
from stabgraph.survey import (
    SurveyOptions,
    check_record,
    enumerate_connection_sets,
    run_survey,
    shard_of,
    survey,
    survey_record,
)


def sets(n, dedup="none"):
    return [list(sp.s) for sp in enumerate_connection_sets(n, dedup)]


def brute_inverse_closed(n):
    out = []
    for bits in range(1, 1 << (n - 1)):
        s = {x for x in range(1, n) if bits >> (x - 1) & 1}
        if all((n - x) % n in s for x in s):
            out.append(frozenset(s))
    return out


def test_enumeration_examples():
    assert sets(4) == [[1, 3], [2], [1, 2, 3]]
    assert sets(5) == [[1, 4], [2, 3], [1, 2, 3, 4]]
    assert sets(5, "mult") == [[1, 4], [1, 2, 3, 4]]
    assert sets(2) == [[1]]


def test_enumeration_is_exhaustive_and_dedup_picks_orbit_reps():
    for n in range(2, 13):
        got = [frozenset(s) for s in sets(n)]
        assert len(got) == len(set(got))
        assert set(got) == set(brute_inverse_closed(n))
        units = [r for r in range(1, n) if math.gcd(r, n) == 1]
        orbits = {frozenset(frozenset(r * x % n for x in s) for r in units) for s in got}
        reps = [frozenset(s) for s in sets(n, "mult")]
        assert len(reps) == len(orbits)
        assert {next(o for o in orbits if r in o) for r in reps} == orbits


def test_options_validated():
    with pytest.raises(BadParameters):
        SurveyOptions(1)
    with pytest.raises(BadParameters):
        SurveyOptions(6, dedup="bogus")
    with pytest.raises(BadParameters):
        SurveyOptions(6, jobs=0)


def test_record_examples():
    rec = survey_record(CirculantSpec.closed(10, [1, 2]))
    assert list(rec) == ["n", "s", "verdict", "reason", "aut_order", "double_cover_aut_order", "type", "flags", "witnesses"]
    assert rec["verdict"] == "NontriviallyUnstable" and rec["s"] == [1, 2, 8, 9]
    assert rec["double_cover_aut_order"] > 2 * rec["aut_order"]
    rec = survey_record(CirculantSpec.closed(6, [1]))
    assert rec["verdict"] == "TriviallyUnstable" and rec["reason"] == "BipartiteWithNontrivialAut"
    assert survey_record(CirculantSpec.closed(7, [1]))["type"] is None


def test_check_record_catches_bad_ntu():
    rec = survey_record(CirculantSpec.closed(10, [1, 2]))
    rec["double_cover_aut_order"] = 2 * rec["aut_order"]
    with pytest.raises(AssertionError):
        check_record(rec)


def test_survey_to_ten_contains_known_records():
    recs = [r for r in survey(SurveyOptions(10)) if "n" in r]
    by_key = {(r["n"], tuple(r["s"])): r for r in recs}
    assert by_key[(10, (1, 2, 8, 9))]["verdict"] == "NontriviallyUnstable"
    assert by_key[(6, (1, 5))]["verdict"] == "TriviallyUnstable"
    assert [(r["n"]) for r in recs] == sorted(r["n"] for r in recs)
    assert len(recs) == sum(len(sets(n)) for n in range(2, 11))


def test_summary_counts():
    summary = run_survey(SurveyOptions(8))
    assert summary["records"] == sum(summary["verdicts"].values())
    assert summary["uncovered_nontrivially_unstable"] == []
    assert summary["soundness_violations"] == []


def test_sharding_is_stable():
    sp = CirculantSpec.closed(12, [1, 5])
    assert shard_of(sp, 1) == 0
    assert shard_of(sp, 4) == shard_of(CirculantSpec.closed(12, [1, 5]), 4)


def test_output_identical_across_worker_counts(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_survey(SurveyOptions(12, out=a, jobs=1))
    run_survey(SurveyOptions(12, out=b, jobs=3))
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert "summary" in json.loads(lines[-1])


def test_resume_after_interruption(tmp_path):
    full, part = tmp_path / "full.jsonl", tmp_path / "part.jsonl"
    run_survey(SurveyOptions(11, out=full))
    data = full.read_bytes()
    # cut mid-line, as if the process died while writing
    part.write_bytes(data[: len(data) // 2 + 7])
    run_survey(SurveyOptions(11, out=part, jobs=2))
    assert part.read_bytes() == data
    # resuming a finished file drops the old summary and writes it again
    run_survey(SurveyOptions(11, out=part))
    assert part.read_bytes() == data
