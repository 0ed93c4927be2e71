"""Exhaustive circulant survey with deterministic JSON Lines output.

Connection sets of ``Z_n`` are enumerated by their representatives
``r <= n/2``: set ``S`` gets the bitmask with bit ``r-1`` set for every
representative, and specs are visited in increasing mask order.  This is the
canonical order used for output and for multiplier-orbit dedup.
"""

from __future__ import annotations

import json
import math
import os
import zlib
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .circulant_lab import (
    TypeKind,
    all_conditions,
    classify_type,
    witness_json,
)
from .errors import BadParameters, SearchBudgetExceeded
from .graph import CirculantSpec, circulant
from .search import default_budget
from .stability import Verdict, stability_status

DEDUP_MODES = ("none", "mult")
COVER_KEYS = ("T3_2", "P3_7", "P3_12", "NCON")
SOUND_KEYS = ("C1", "C2'", "C3'", "C4", "T3_2", "P3_7", "P3_12", "NCON")


@dataclass(frozen=True)
class SurveyOptions:
    max_order: int
    out: Path | None = None
    jobs: int = 1
    dedup: str = "none"
    budget: int | None = None
    min_order: int = 2

    def __post_init__(self):
        if self.max_order < 2:
            raise BadParameters("max_order must be at least 2")
        if not 2 <= self.min_order <= self.max_order:
            raise BadParameters("min_order must lie in 2..max_order")
        if self.jobs < 1:
            raise BadParameters("jobs must be positive")
        if self.dedup not in DEDUP_MODES:
            raise BadParameters(f"dedup must be one of {DEDUP_MODES}")


def _mask(n: int, s) -> int:
    m = 0
    for x in s:
        if x <= n // 2:
            m |= 1 << (x - 1)
    return m


def _from_mask(n: int, mask: int) -> CirculantSpec:
    return CirculantSpec.closed(n, [i + 1 for i in range(n // 2) if mask >> i & 1])


def enumerate_connection_sets(n: int, dedup: str = "none") -> Iterator[CirculantSpec]:
    """Every nonempty inverse-closed ``S`` of ``Z_n`` once, in canonical order."""
    if n < 2:
        raise BadParameters("n must be at least 2")
    if dedup not in DEDUP_MODES:
        raise BadParameters(f"dedup must be one of {DEDUP_MODES}")
    half = n // 2
    units = [r for r in range(2, n) if math.gcd(r, n) == 1]
    for mask in range(1, 1 << half):
        spec = _from_mask(n, mask)
        if dedup == "mult" and any(_mask(n, ((r * x) % n for x in spec.s)) < mask for r in units):
            continue
        yield spec


# --- records -------------------------------------------------------------------


def survey_record(spec: CirculantSpec, budget: int | None = None) -> dict:
    """One survey line.  Budget exhaustion yields Inconclusive fields."""
    budget = default_budget() if budget is None else budget
    rec: dict = {"n": spec.n, "s": list(spec.s)}
    try:
        st = stability_status(circulant(spec), budget)
    except SearchBudgetExceeded:
        st = None
    if st is None:
        rec.update(verdict="Inconclusive", reason=None, aut_order=None, double_cover_aut_order=None)
    else:
        rec.update(
            verdict=st.verdict.value,
            reason=None if st.reason is None else st.reason.value,
            aut_order=st.aut_order,
            double_cover_aut_order=st.double_cover_aut_order,
        )
    if spec.n % 2:
        rec["type"] = None
    elif st is None:
        rec["type"] = TypeKind.UNKNOWN
    else:
        rec["type"] = classify_type(spec, budget, status=st).kind
    rep = all_conditions(spec, budget)
    rec["flags"] = rep.flags()
    rec["witnesses"] = {k: witness_json(v.witness) for k, v in rep.outcomes.items() if v.is_yes}
    return rec


def uncovered(rec: dict) -> bool:
    """Nontrivially unstable with none of the covering sufficient conditions holding."""
    return rec["verdict"] == Verdict.NONTRIVIALLY_UNSTABLE.value and all(
        rec["flags"][k] == "No" for k in COVER_KEYS
    )


def unsound(rec: dict) -> bool:
    """A condition asserting instability on a stable spec."""
    return rec["verdict"] == Verdict.STABLE.value and any(rec["flags"][k] == "Yes" for k in SOUND_KEYS)


def check_record(rec: dict) -> None:
    if rec["verdict"] == Verdict.NONTRIVIALLY_UNSTABLE.value:
        if not rec["double_cover_aut_order"] > 2 * rec["aut_order"]:
            raise AssertionError(f"unstable record without a large double cover group: {rec['n']} {rec['s']}")


def dumps(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":"), ensure_ascii=False)


def summarize(records: list[dict]) -> dict:
    verdicts: dict[str, int] = {}
    types: dict[str, int] = {}
    conds: dict[str, dict[str, int]] = {}
    for rec in records:
        verdicts[rec["verdict"]] = verdicts.get(rec["verdict"], 0) + 1
        if rec["type"] is not None:
            types[rec["type"]] = types.get(rec["type"], 0) + 1
        for k, v in rec["flags"].items():
            bucket = conds.setdefault(k, {"Yes": 0, "No": 0, "Inconclusive": 0})
            bucket[v] += 1
    return {
        "records": len(records),
        "verdicts": dict(sorted(verdicts.items())),
        "types": dict(sorted(types.items())),
        "conditions": conds,
        "uncovered_nontrivially_unstable": [[r["n"], r["s"]] for r in records if uncovered(r)],
        "soundness_violations": [[r["n"], r["s"]] for r in records if unsound(r)],
        "ncon_without_oldtonew": sum(
            1 for r in records if r["flags"].get("NCON") == "Yes" and r["flags"].get("OLDTONEW") != "Yes"
        ),
    }


# --- parallel driver -------------------------------------------------------------


def shard_of(spec: CirculantSpec, jobs: int) -> int:
    key = f"{spec.n}:{','.join(map(str, spec.s))}".encode()
    return zlib.crc32(key) % jobs


def _run_shard(args: tuple[list[tuple[int, tuple[int, ...]]], int | None]) -> list[dict]:
    items, budget = args
    return [survey_record(CirculantSpec(n, s), budget) for n, s in items]


def _key(rec: dict) -> tuple[int, tuple[int, ...]]:
    return rec["n"], tuple(rec["s"])


def _load_prefix(path: Path) -> list[dict]:
    """Records from the valid prefix of an earlier run; the file is truncated to it."""
    if not path.exists():
        return []
    records, good = [], 0
    with path.open("rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                break
            try:
                rec = json.loads(raw)
            except ValueError:
                break
            if not isinstance(rec, dict) or "summary" in rec or "n" not in rec:
                break
            records.append(rec)
            good += len(raw)
    with path.open("r+b") as fh:
        fh.truncate(good)
    return records


def survey(opts: SurveyOptions) -> Iterator[dict]:
    """Classify every spec of order ``min_order..max_order``.

    Yields records in canonical order, then ``{"summary": ...}``.  With an
    output path the same lines are written as JSON Lines; an existing file is
    resumed from its last complete record.
    """
    done: dict = {}
    fh = None
    if opts.out is not None:
        path = Path(opts.out)
        for rec in _load_prefix(path):
            done[_key(rec)] = rec
        fh = path.open("a", encoding="utf-8")
    budget = opts.budget
    pool = ProcessPoolExecutor(opts.jobs) if opts.jobs > 1 else None
    records: list[dict] = []
    try:
        for n in range(opts.min_order, opts.max_order + 1):
            specs = list(enumerate_connection_sets(n, opts.dedup))
            todo = [sp for sp in specs if (sp.n, sp.s) not in done]
            shards: list[list] = [[] for _ in range(opts.jobs)]
            for sp in todo:
                shards[shard_of(sp, opts.jobs)].append((sp.n, sp.s))
            fresh: dict = {}
            if pool is None:
                results = [_run_shard((shards[0], budget))]
            else:
                results = list(pool.map(_run_shard, [(sh, budget) for sh in shards if sh]))
            for batch in results:
                for rec in batch:
                    fresh[_key(rec)] = rec
            for sp in specs:
                key = (sp.n, sp.s)
                if key in done:
                    rec = done[key]
                else:
                    rec = fresh[key]
                    check_record(rec)
                    if fh is not None:
                        fh.write(dumps(rec) + "\n")
                records.append(rec)
                yield rec
            if fh is not None:
                fh.flush()
                os.fsync(fh.fileno())
        summary = {"summary": summarize(records)}
        if fh is not None:
            fh.write(dumps(summary) + "\n")
        yield summary
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
        if fh is not None:
            fh.close()


def run_survey(opts: SurveyOptions) -> dict:
    """Drive :func:`survey` to completion and return the summary."""
    last: dict = {}
    for last in survey(opts):
        pass
    return last["summary"]
