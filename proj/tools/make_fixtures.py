#!/usr/bin/env python3
"""Regenerates the checked-in fixtures under tests/fixtures/.

The outputs are committed; rerunning this script must reproduce them
byte-for-byte (seeded, no timestamps).
"""
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def dump_json(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def write_csv(path, rows):
    lines = ["voter_id,office_id,candidate_id"] + [",".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def combined(election, csv_path, out_path):
    dump_json(out_path, {"election": election, "ballots_csv": csv_path.read_text(encoding="utf-8")})


def four_voter():
    d = ROOT / "four_voter"
    election = {
        "name": "Two offices, two blocs",
        "offices": [
            {"id": "o1", "name": "Office 1", "candidates": [{"id": "A1", "name": "A1"}, {"id": "B1", "name": "B1"}]},
            {"id": "o2", "name": "Office 2", "candidates": [{"id": "A2", "name": "A2"}, {"id": "B2", "name": "B2"}]},
        ],
    }
    dump_json(d / "election.json", election)
    rows = []
    for v in ("v1", "v2"):
        rows += [(v, "o1", "A1"), (v, "o2", "A2")]
    for v in ("v3", "v4"):
        rows += [(v, "o1", "B1"), (v, "o2", "B2")]
    write_csv(d / "ballots.csv", rows)
    combined(election, d / "ballots.csv", d / "combined.json")


def bloc_75_25():
    d = ROOT / "bloc_75_25"
    offices = []
    for j in range(1, 5):
        offices.append({
            "id": f"o{j}",
            "name": f"Ministry {j}",
            "candidates": [{"id": f"M{j}", "name": f"Majority {j}"}, {"id": f"N{j}", "name": f"Minority {j}"}],
        })
    election = {"name": "75/25 disjoint blocs", "offices": offices}
    dump_json(d / "election.json", election)
    spec = {
        "specs": [{
            "name": "blocs_75_25",
            "seed": 7,
            "noise": 0.0,
            "blocs": [
                {"label": "majority", "voters": 75, "approvals": {f"o{j}": [f"M{j}"] for j in range(1, 5)}},
                {"label": "minority", "voters": 25, "approvals": {f"o{j}": [f"N{j}"] for j in range(1, 5)}},
            ],
        }]
    }
    dump_json(d / "spec.json", spec)
    dump_json(d / "empty_spec.json", {"specs": []})
    rows = []
    for i in range(1, 76):
        rows += [(f"majority-{i}", f"o{j}", f"M{j}") for j in range(1, 5)]
    for i in range(1, 26):
        rows += [(f"minority-{i}", f"o{j}", f"N{j}") for j in range(1, 5)]
    write_csv(d / "ballots.csv", rows)
    dump_json(d / "plurality_committee.json", {f"o{j}": f"M{j}" for j in range(1, 5)})
    combined(election, d / "ballots.csv", d / "combined.json")


def survey_shape():
    """12 ministries x 4 candidates, 500 single-choice voters with partial abstention."""
    d = ROOT / "survey_12x4"
    rng = random.Random(20221101)
    ministries = ["finance", "defense", "health", "education", "justice", "foreign", "interior",
                  "transport", "economy", "welfare", "environment", "culture"]
    offices = []
    for m in ministries:
        offices.append({
            "id": m,
            "name": m.capitalize(),
            "candidates": [{"id": f"{m}-{k}", "name": f"{m.capitalize()} candidate {k}"} for k in range(1, 5)],
        })
    election = {"name": "Survey-shaped government", "offices": offices}
    dump_json(d / "election.json", election)
    # four loose camps with different favourites per ministry
    camp_weights = [0.40, 0.30, 0.20, 0.10]
    favourites = [[rng.randrange(4) for _ in ministries] for _ in camp_weights]
    rows = []
    for v in range(1, 501):
        camp = rng.choices(range(4), weights=camp_weights)[0]
        voter = f"citizen-{v:03d}"
        answered = False
        for j, m in enumerate(ministries):
            r = rng.random()
            if r < 0.05:
                continue  # skipped this question
            pick = favourites[camp][j] if r < 0.80 else rng.randrange(4)
            rows.append((voter, m, f"{m}-{pick + 1}"))
            answered = True
        if not answered:
            rows.append((voter, "", ""))
    write_csv(d / "ballots.csv", rows)
    combined(election, d / "ballots.csv", d / "combined.json")


def minimal():
    d = ROOT / "minimal"
    election = {"name": "One office", "offices": [{"id": "health", "name": "Health",
                                                   "candidates": [{"id": "a", "name": "a"}, {"id": "b", "name": "b"}]}]}
    dump_json(d / "election.json", election)
    write_csv(d / "ballots.csv", [("v1", "health", "a"), ("v2", "health", "a"), ("v3", "health", "b")])
    write_csv(d / "bad_office.csv", [("v1", "health", "a"), ("v2", "wealth", "a")])


if __name__ == "__main__":
    four_voter()
    bloc_75_25()
    survey_shape()
    minimal()
