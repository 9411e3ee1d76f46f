import datetime as dt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outbreaknet import fixtures
from outbreaknet.errors import AmbiguousMatch, SchemaError, UnknownCase
from outbreaknet.registry import (CaseObservation, Outcome, Registry, Role, SourceTier,
                                  Status, backtrack, merge_fields, status_counts, upsert_case)

D = dt.date


def obs(**kw):
    base = dict(country="Guinea", status=Status.SUSPECTED, report_date=D(2014, 3, 20))
    base.update(kw)
    return CaseObservation(**base)


def test_new_record():
    reg = Registry()
    cid = upsert_case(reg, obs(person_name="A"))
    assert len(reg) == 1 and len(reg[cid].observation_history) == 1
    assert cid == "C000001"


def test_same_name_merges():
    reg = Registry()
    a = reg.upsert_case(obs(person_name="Patrick Sawyer", country="Nigeria",
                            report_date=D(2014, 8, 11)))
    b = reg.upsert_case(obs(person_name="Patrick Sawyer", country="Nigeria",
                            report_date=D(2014, 8, 13)))
    assert a == b and len(reg) == 1
    assert len(reg[a].observation_history) == 2


def test_same_village_within_window_merges():
    reg = Registry()
    a = reg.upsert_case(obs(person_name="Child", village="Meliandou", report_date=D(2014, 3, 20)))
    b = reg.upsert_case(obs(village="Meliandou", report_date=D(2014, 3, 25)))
    assert a == b
    assert reg[a].person_name == "Child"


def test_village_outside_window_opens_new_record():
    reg = Registry()
    reg.upsert_case(obs(village="Meliandou", report_date=D(2014, 3, 20)))
    reg.upsert_case(obs(village="Meliandou", report_date=D(2014, 6, 20)))
    assert len(reg) == 2


def test_different_names_never_merge():
    reg = Registry()
    reg.upsert_case(obs(person_name="A", village="V"))
    reg.upsert_case(obs(person_name="B", village="V"))
    assert len(reg) == 2


def test_ambiguous_match():
    reg = Registry()
    reg.upsert_case(obs(person_name="A", hospital="H"))
    reg.upsert_case(obs(person_name="B", hospital="H"))
    with pytest.raises(AmbiguousMatch) as info:
        reg.upsert_case(obs(hospital="H"))
    assert set(info.value.candidates) == {"C000001", "C000002"}


def test_village_outranks_hospital():
    reg = Registry()
    reg.upsert_case(obs(person_name="A", hospital="H"))
    v = reg.upsert_case(obs(person_name="B", village="V"))
    assert reg.upsert_case(obs(village="V", hospital="H")) == v


def test_observation_needs_identity():
    with pytest.raises(ValueError):
        obs()
    with pytest.raises(SchemaError):
        CaseObservation.from_dict({"person_name": "x"})


# -- merging -------------------------------------------------------------------

def test_status_takes_maximum():
    a = obs(person_name="A", status=Status.CONFIRMED, source_tier=SourceTier.OFFICIAL)
    b = obs(person_name="A", status=Status.SUSPECTED, source_tier=SourceTier.OTHER)
    m = merge_fields(a, b)
    assert m.status is Status.CONFIRMED and m.conflicts == []


def test_death_is_terminal():
    a = obs(person_name="A", outcome=Outcome.DEAD, report_date=D(2014, 8, 1))
    b = obs(person_name="A", outcome=Outcome.ALIVE, report_date=D(2014, 8, 9))
    m = merge_fields(a, b)
    assert m.fields["outcome"] is Outcome.DEAD
    assert [(c.field, c.kept, c.discarded) for c in m.conflicts] == [("outcome", "dead", "alive")]


def test_official_source_wins():
    a = obs(person_name="A", role=Role.COMMUNITY, source_tier=SourceTier.MAJOR_NEWS)
    b = obs(person_name="A", role=Role.HEALTHCARE_WORKER, source_tier=SourceTier.OFFICIAL)
    m = merge_fields(a, b)
    assert m.fields["role"] is Role.HEALTHCARE_WORKER
    assert [c.field for c in m.conflicts] == ["role"]


def test_later_report_breaks_tier_tie():
    a = obs(person_name="A", hospital="H1", report_date=D(2014, 8, 1))
    b = obs(person_name="A", hospital="H2", report_date=D(2014, 8, 2))
    assert merge_fields(a, b).fields["hospital"] == "H2"
    assert merge_fields(b, a).fields["hospital"] == "H2"


def test_unknown_does_not_override():
    a = obs(person_name="A", role=Role.HEALTHCARE_WORKER)
    b = obs(person_name="A", role=Role.UNKNOWN, source_tier=SourceTier.OFFICIAL)
    m = merge_fields(a, b)
    assert m.fields["role"] is Role.HEALTHCARE_WORKER and m.conflicts == []


def test_record_matches_pairwise_merge():
    a = obs(person_name="A", role=Role.COMMUNITY, outcome=Outcome.DEAD)
    b = obs(person_name="A", role=Role.HEALTHCARE_WORKER, outcome=Outcome.RECOVERED,
            source_tier=SourceTier.OFFICIAL, status=Status.PROBABLE)
    reg = Registry()
    cid = reg.upsert_case(a)
    reg.upsert_case(b)
    m = merge_fields(a, b)
    rec = reg[cid]
    assert rec.role is m.fields["role"] and rec.outcome is m.fields["outcome"]
    assert rec.status is m.status
    assert rec.conflicts == m.conflicts


_obs = st.builds(
    obs,
    person_name=st.just("P"),
    status=st.sampled_from(list(Status)),
    outcome=st.sampled_from(list(Outcome)),
    role=st.sampled_from(list(Role)),
    source_tier=st.sampled_from(list(SourceTier)),
    report_date=st.dates(D(2014, 3, 1), D(2014, 10, 31)),
)


@given(st.lists(_obs, min_size=1, max_size=8))
def test_canonical_invariants(observations):
    reg = Registry()
    for o in observations:
        reg.upsert_case(o)
    assert len(reg) == 1
    rec = next(iter(reg))
    assert rec.status.rank == max(o.status.rank for o in observations)
    if any(o.outcome is Outcome.DEAD for o in observations):
        assert rec.outcome is Outcome.DEAD


# -- queries -------------------------------------------------------------------

def test_backtrack_singleton():
    reg = Registry()
    cid = reg.upsert_case(obs(person_name="A"))
    assert backtrack(reg, cid) == []


def test_backtrack_shared_village():
    reg = Registry()
    ids = [reg.upsert_case(obs(person_name=n, village=v))
           for n, v in [("A", "Nzerekore"), ("B", "Gueckedou"), ("C", "Nzerekore"), ("D", "Macenta")]]
    assert reg.backtrack(ids[0]) == [ids[2]]
    assert reg.backtrack(ids[2]) == [ids[0]]
    assert reg.backtrack(ids[1]) == []


def test_backtrack_name_mention_is_symmetric():
    reg = Registry()
    a = reg.upsert_case(obs(person_name="Patrick Sawyer"))
    b = reg.upsert_case(obs(person_name="Nurse", source_ref="traced to Patrick Sawyer"))
    assert reg.backtrack(a) == [b] and reg.backtrack(b) == [a]


def test_backtrack_nigeria(nigeria):
    index = nigeria.ids["NG01"]
    others = sorted(cid for key, cid in nigeria.ids.items() if key != "NG01")
    assert nigeria.registry.backtrack(index) == others


def test_backtrack_unknown_case():
    with pytest.raises(UnknownCase):
        Registry().backtrack("C999999")


def test_status_counts_empty():
    c = status_counts(Registry())
    assert c.total == 0
    assert set(c.status.values()) == {0} and set(c.outcome.values()) == {0}


def test_status_counts_small():
    reg = Registry()
    for n, s in [("A", Status.SUSPECTED), ("B", Status.CONFIRMED), ("C", Status.CONFIRMED)]:
        reg.upsert_case(obs(person_name=n, status=s))
    assert reg.status_counts().status == {"suspected": 1, "probable": 0, "confirmed": 2}


def test_sitrep_counts():
    c = fixtures.sitrep_registry().status_counts()
    assert c.total == 8997 and c.outcome["dead"] == 4493


# -- persistence ---------------------------------------------------------------

def test_jsonl_roundtrip(tmp_path):
    reg = fixtures.random_registry(200, seed=3)
    path = tmp_path / "reg.jsonl"
    reg.save(path)
    again = Registry.load(path)
    assert again == reg
    assert again.to_jsonl() == reg.to_jsonl()
    # ids keep counting from where the saved registry stopped
    assert again.upsert_case(obs(person_name="new person")) == f"C{len(reg) + 1:06d}"


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_jsonl_roundtrip_random(seed):
    reg = fixtures.random_registry(20, seed=seed)
    assert Registry.from_jsonl(reg.to_jsonl()) == reg


def _brute_force_match(reg, o):
    ranked = [(Registry._match_rank(rec, o), rec.case_id) for rec in reg]
    ranked = [p for p in ranked if p[0] is not None]
    if not ranked:
        return None
    best = min(r for r, _ in ranked)
    hits = [cid for r, cid in ranked if r == best]
    return hits if len(hits) > 1 else hits[0]


_loose = st.tuples(
    st.sampled_from([None, "A", "B", "C"]),
    st.sampled_from([None, "V1", "v1", "V2"]),
    st.sampled_from([None, "H1", "H2"]),
    st.dates(D(2014, 3, 1), D(2014, 6, 30)),
).filter(lambda t: any(t[:3])).map(
    lambda t: obs(person_name=t[0], village=t[1], hospital=t[2], report_date=t[3]))


@given(st.lists(_loose, max_size=15))
def test_indexed_match_agrees_with_scan(observations):
    reg = Registry()
    for o in observations:
        expected = _brute_force_match(reg, o)
        if isinstance(expected, list):
            with pytest.raises(AmbiguousMatch) as info:
                reg.upsert_case(o)
            assert list(info.value.candidates) == expected
        else:
            cid = reg.upsert_case(o)
            assert expected is None or cid == expected
