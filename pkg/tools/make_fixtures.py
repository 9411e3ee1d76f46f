#!/usr/bin/env python3
"""Regenerate the bundled fixture files in src/outbreaknet/data.

The outputs are committed; rerun only when a fixture deliberately changes,
then re-audit the goldens under tests/golden.
"""
import argparse
import csv
import datetime as dt
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "outbreaknet" / "data"

FCMC = "First Consultants Medical Centre"
PH_CLINIC = "Port Harcourt private clinic"
DALLAS = "Texas Health Presbyterian Hospital Dallas"

WHO_NG = "WHO Situation report - 1 October 2014: contacts of Patrick Sawyer"
CDC_NG = "CDC MMWR Ebola virus disease outbreak - Nigeria: chains from Patrick Sawyer"
GUARDIAN_NG = "The Guardian 11/8/2014: Ebola: Nigeria confirms new case in Lagos (Patrick Sawyer)"
CBS_NG = "CBS 22/8/2014: Ebola makes worrying advance in Nigeria (Patrick Sawyer contacts)"
REUTERS_NG = "Reuters 1/9/2014: Nigeria records another Ebola case in oil city (Patrick Sawyer chain)"


def node(key, name, country, status, date, tier, ref, **kw):
    rec = {"kind": "node", "key": key, "person_name": name, "country": country,
           "status": status, "report_date": date, "source_tier": tier, "source_ref": ref}
    rec.update(kw)
    return rec


def infection(a, b, context, date, evidence=""):
    return {"kind": "infection", "infector": a, "infectee": b, "context": context,
            "date": date, "evidence": evidence}


def travel(person, origin, dest, date, reason, quarantined=False):
    return {"kind": "travel", "person": person, "origin": origin, "destination": dest,
            "date": date, "reason": reason, "quarantined_on_arrival": quarantined}


def nigeria():
    hcw = {2, 3, 4, 6, 7, 8, 9, 10, 11, 14, 15}
    dead = {1, 2, 3, 6, 9, 12, 14, 18}
    rows = [node("NG01", "Patrick Sawyer", "Nigeria", "confirmed", "2014-08-11", "major_news",
                 GUARDIAN_NG, location="Liberia/Monrovia", hospital=FCMC, role="traveler",
                 outcome="dead", infection_date="2014-07-08")]
    for i in range(2, 21):
        key = f"NG{i:02d}"
        if i <= 13:
            place = dict(city="Lagos", hospital=FCMC)
            ref, tier, date = (GUARDIAN_NG, "major_news", "2014-08-11") if i <= 10 \
                else (WHO_NG, "official", "2014-10-01")
        elif i <= 17:
            place = dict(city="Port Harcourt", hospital=PH_CLINIC)
            ref, tier, date = (REUTERS_NG, "major_news", "2014-09-01") if i <= 15 \
                else (CDC_NG, "official", "2014-10-03")
        else:
            place = dict(city="Lagos", village="Lagos household contacts")
            ref, tier, date = (CBS_NG, "major_news", "2014-08-22") if i <= 19 \
                else (WHO_NG, "official", "2014-10-01")
        role = "healthcare_worker" if i in hcw else "community"
        outcome = "dead" if i in dead else "recovered"
        status = "probable" if i == 20 else "confirmed"
        rows.append(node(key, f"Nigeria case {i:02d}", "Nigeria", status, date, tier, ref,
                         role=role, outcome=outcome, **place))
    rows.append(travel("NG01", "Liberia/Monrovia", "Nigeria/Lagos", "2014-07-20", "unknown"))
    for i in range(2, 14):
        ctx = "hospital" if i in hcw else "travel_contact"
        rows.append(infection("NG01", f"NG{i:02d}", ctx, f"2014-07-{20 + i % 5:02d}"))
    rows.append(infection("NG05", "NG14", "hospital", "2014-08-01",
                          "contact travelled to Port Harcourt for treatment"))
    for i, day in ((15, 10), (16, 12), (17, 14)):
        rows.append(infection("NG14", f"NG{i}", "hospital" if i == 15 else "family",
                              f"2014-08-{day}"))
    rows.append(infection("NG03", "NG18", "family", "2014-08-05"))
    rows.append(infection("NG03", "NG19", "family", "2014-08-05"))
    rows.append(infection("NG04", "NG20", "family", "2014-08-06"))
    return rows


def united_states():
    duncan_ref = "CNN 6/10/2014: Back in Liberia, ebola is killing Thomas Duncan's neighbors"
    nurse_ref = "The Daily Mail 15/10/2014: second ebola-stricken nurse arrives in Atlanta"
    rows = [
        node("US01", "Thomas Duncan", "United States", "confirmed", "2014-10-06", "major_news",
             duncan_ref, location="Liberia/Monrovia", hospital=DALLAS, role="traveler",
             outcome="dead"),
        node("US02", "Dallas nurse 1", "United States", "confirmed", "2014-10-15", "other",
             nurse_ref, city="Dallas", hospital=DALLAS, role="healthcare_worker",
             outcome="recovered"),
        node("US03", "Dallas nurse 2", "United States", "confirmed", "2014-10-15", "other",
             nurse_ref, city="Dallas", hospital=DALLAS, role="healthcare_worker",
             outcome="recovered"),
    ]
    evacuees = [
        ("US04", "Liberia/Monrovia", "United States/Atlanta", "2014-08-02"),
        ("US05", "Liberia/Monrovia", "United States/Atlanta", "2014-08-05"),
        ("US06", "Liberia/Monrovia", "United States/Atlanta", "2014-09-05"),
        ("US07", "Liberia/Monrovia", "United States/Omaha", "2014-10-06"),
        ("US08", "Guinea/Conakry", "United States/Atlanta", "2014-09-09"),
        ("US09", "Sierra Leone/Freetown", "United States/Omaha", "2014-09-05"),
    ]
    for n, (key, origin, dest, date) in enumerate(evacuees, 1):
        rows.append(node(key, f"US evacuee {n}", "United States", "confirmed", date, "major_news",
                         f"Medical evacuation {n} to {dest.split('/')[1]}", location=origin,
                         role="healthcare_worker", outcome="recovered"))
    rows.append(travel("US01", "Liberia/Monrovia", "United States/Dallas", "2014-09-20",
                       "unknown"))
    rows.append(infection("US01", "US02", "hospital", "2014-09-28"))
    rows.append(infection("US01", "US03", "hospital", "2014-09-28"))
    for key, origin, dest, date in evacuees:
        rows.append(travel(key, origin, dest, date, "other", quarantined=True))
    return rows


def west_africa():
    observer = "Daily Observer (Liberia) 5/4/2014: Ebola claims another victim"
    who_sl = "WHO GAR Sierra Leone: a traditional healer and a funeral"
    reuters = "Reuters 9/9/2014: Senegal tracks route of Guinea student"
    cnn_mali = "CNN 24/10/2014: first confirmed ebola patient in Mali dies"
    rows = [
        node("WA01", "West Africa case 01", "Liberia", "confirmed", "2014-04-05", "other",
             observer, location="Guinea/Gueckedou", role="traveler", outcome="dead"),
        node("WA02", "West Africa case 02", "Liberia", "confirmed", "2014-04-05", "other",
             observer, city="Foya", role="community", outcome="dead"),
        node("WA03", "West Africa case 03", "Sierra Leone", "confirmed", "2014-09-23",
             "official", who_sl, city="Kailahun", village="Sokoma", role="traditional_healer",
             outcome="dead"),
        node("WA04", "West Africa case 04", "Sierra Leone", "probable", "2014-09-23",
             "official", who_sl, location="Guinea/Gueckedou", role="traveler", outcome="dead"),
        node("WA05", "West Africa case 05", "Sierra Leone", "confirmed", "2014-09-23",
             "official", who_sl, city="Kenema", role="community", outcome="dead"),
        node("WA06", "West Africa case 06", "Guinea", "confirmed", "2014-09-09", "major_news",
             reuters, location="Sierra Leone/Kailahun", role="traveler", outcome="dead"),
        node("WA07", "West Africa case 07", "Senegal", "confirmed", "2014-09-09", "major_news",
             reuters, location="Guinea/Conakry", role="traveler", outcome="recovered"),
        node("WA08", "West Africa case 08", "Guinea", "confirmed", "2014-09-09", "major_news",
             reuters, city="Conakry", role="community", outcome="dead"),
        node("WA09", "West Africa case 09", "Guinea", "probable", "2014-09-09", "major_news",
             reuters, city="Conakry", role="community", outcome="unknown"),
        node("WA10", "West Africa case 10", "Guinea", "confirmed", "2014-10-24", "major_news",
             cnn_mali, city="Kissidougou", role="community", outcome="dead"),
        node("WA11", "West Africa case 11", "Mali", "confirmed", "2014-10-24", "major_news",
             cnn_mali, location="Guinea/Kissidougou", role="traveler", outcome="dead"),
        travel("WA01", "Guinea/Gueckedou", "Liberia/Foya", "2014-03-25", "unknown"),
        infection("WA01", "WA02", "family", "2014-03-28"),
        travel("WA04", "Guinea/Gueckedou", "Sierra Leone/Kailahun", "2014-05-01",
               "treatment_seeking"),
        infection("WA04", "WA03", "traditional_healer", "2014-05-05"),
        infection("WA03", "WA05", "funeral", "2014-05-20"),
        travel("WA06", "Sierra Leone/Kailahun", "Guinea/Conakry", "2014-07-20",
               "treatment_seeking"),
        infection("WA06", "WA07", "family", "2014-08-01"),
        infection("WA06", "WA08", "family", "2014-08-01"),
        infection("WA06", "WA09", "family", "2014-08-03"),
        travel("WA07", "Guinea/Conakry", "Senegal/Dakar", "2014-08-15", "family_visit",
               quarantined=True),
        infection("WA10", "WA11", "family", "2014-10-05"),
        travel("WA11", "Guinea/Kissidougou", "Mali/Kayes", "2014-10-19", "orphan_adoption",
               quarantined=True),
    ]
    return rows


# ---------------------------------------------------------------------------

REGIONS = ["GUINEA", "LIBERIA", "SIERRA LEONE", "WEST AFRICA", "NIGERIA", "SENEGAL", "USA"]
TOPICS = ["CASE COUNT", "CONTACT TRACING", "HEALTH CARE WORKERS", "BORDER MEASURES",
          "CONFIRMED CASES", "SUSPECTED CASES", "PROBABLE CASES", "RESPONSE", "FUNERAL RITES",
          "TRAVEL ADVICE"]
REPORT_COLUMNS = ("source_medium", "outlet", "headline", "posted_date", "url", "keywords",
                  "post", "subject")


def promed_reports(n_total=272, n_summary=32, seed=2014):
    """ProMED-style report table: ``n_total`` posts, ``n_summary`` tagged summary."""
    rnd = random.Random(seed)
    start, end = dt.date(2014, 3, 19), dt.date(2014, 10, 15)
    span = (end - start).days
    dates = sorted([start, end] + [start + dt.timedelta(days=rnd.randint(0, span))
                                   for _ in range(n_total - 2)])
    summary_idx = set(rnd.sample(range(2, n_total), n_summary))
    seq = {}
    rows = []
    for i, day in enumerate(dates):
        if i == 0:
            headline = "UNDIAGNOSED VIRAL HEMORRHAGIC FEVER - GUINEA: (NZEREKORE) REQUEST FOR INFORMATION"
            post = "Undiagnosed haemorrhagic fever in Nzerekore; Ebola not yet excluded."
            region = "GUINEA"
        elif i == 1:
            headline = "UNDIAGNOSED VIRAL HEMORRHAGIC FEVER - GUINEA (02): EBOLA CONFIRMED"
            post = "Laboratory testing confirms Ebola virus as the cause."
            region = "GUINEA"
        else:
            region = rnd.choice(REGIONS)
            seq[region] = seq.get(region, 1) + 1
            topic = "UPDATE SUMMARY" if i in summary_idx else rnd.choice(TOPICS)
            headline = f"EBOLA VIRUS DISEASE - {region} ({seq[region]:02d}): {topic}"
            post = f"Ebola update for {region.title()}: {topic.lower()}."
        kw = ["ebola", region.lower()]
        if i in summary_idx:
            kw.append("summary")
        rows.append({
            "source_medium": "promed",
            "outlet": "ProMED-mail",
            "headline": headline,
            "posted_date": day.isoformat(),
            "url": f"http://www.promedmail.org/post/{day:%Y%m%d}.{2300000 + i}",
            "keywords": ";".join(sorted(kw)),
            "post": post,
            "subject": headline,
        })
    return rows


def sim_configs():
    star = {
        "persons": [{"id": "hub", "country": "X"}]
        + [{"id": f"leaf{i:03d}", "country": "X"} for i in range(10)],
        "contact_edges": [{"a": "hub", "b": f"leaf{i:03d}", "context": "family"}
                          for i in range(10)],
        "travel_schedule": [],
        "params": {"per_contact_transmission_prob": 0.3, "infectious_period_days": 5,
                   "cfr": 0.0, "incubation_days": [2, 21], "symptom_to_death_days": [6, 16],
                   "max_days": 365},
        "seed_person": "hub",
        "interventions": [],
    }
    ids = [f"p{i:03d}" for i in range(20)]
    saturated = {
        "persons": [{"id": p, "country": "X"} for p in ids],
        "contact_edges": [{"a": a, "b": b, "context": "family"}
                          for k, a in enumerate(ids) for b in ids[k + 1:]],
        "travel_schedule": [],
        "params": {"per_contact_transmission_prob": 1.0, "infectious_period_days": 10,
                   "cfr": 0.55, "incubation_days": [2, 21], "symptom_to_death_days": [6, 16],
                   "max_days": 365},
        "seed_person": "p000",
        "interventions": [],
    }
    border = {
        "persons": [{"id": "a1", "country": "Guinea"}, {"id": "a2", "country": "Guinea"},
                    {"id": "b1", "country": "Senegal"}, {"id": "b2", "country": "Senegal"}],
        "contact_edges": [{"a": "a1", "b": "a2", "context": "family"},
                          {"a": "a2", "b": "b1", "context": "family"},
                          {"a": "b1", "b": "b2", "context": "family"}],
        "travel_schedule": [{"person": "a2", "origin": "Guinea", "destination": "Senegal",
                             "day": 30, "quarantined_on_arrival": False,
                             "reason": "family_visit"}],
        "params": {"per_contact_transmission_prob": 0.5, "cfr": 0.5, "max_days": 200},
        "seed_person": "a1",
        "interventions": [{"kind": "close_border", "target": ["Guinea", "Senegal"],
                           "effective_day": 20}],
    }
    return {"sim_star.json": star, "sim_saturated.json": saturated, "sim_border.json": border}


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    write_jsonl(args.out / "nigeria.jsonl", nigeria())
    write_jsonl(args.out / "us.jsonl", united_states())
    write_jsonl(args.out / "west_africa.jsonl", west_africa())
    with open(args.out / "promed_reports.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, REPORT_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(promed_reports())
    for name, cfg in sim_configs().items():
        (args.out / name).write_text(json.dumps(cfg, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
