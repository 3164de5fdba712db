#!/usr/bin/env python3
"""Regenerates the synthetic embedding and table-corpus fixtures.

The outputs are committed; rerun only when the fixture design changes.
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
DIMS = 8

CLUSTERS = {
    "origin": ["citizenship", "nationality", "country", "citizen", "birthplace",
               "home", "town", "origin", "hometown", "residence", "nation"],
    "score": ["score", "mark", "grade", "rank", "exam", "points", "result",
              "rating", "level", "gpa"],
    "person": ["name", "student", "title", "manager", "instructor", "teacher",
               "id", "person", "owner", "staff"],
    "money": ["amount", "total", "sum", "profit", "discount", "revenue",
              "sales", "price", "order", "cost", "company"],
    "sport": ["winner", "runner", "up", "second", "place", "finalist", "third",
              "champion", "team", "match", "player", "position"],
    "body": ["height", "stature", "weight", "wingspan", "age", "altitude",
             "size", "length"],
    "time": ["year", "date", "season", "month", "day", "time"],
    "course": ["course", "credits", "subject", "class", "semester", "units"],
}
PHRASES = {
    "runner_up": ("sport", ["runner", "up"]),
    "second_place": ("sport", ["second", "place"]),
    "home_town": ("origin", ["home", "town"]),
    "exam_score": ("score", ["exam", "score"]),
    "order_total": ("money", ["order", "total"]),
    "student_name": ("person", ["student", "name"]),
}


def vectors():
    rng = random.Random(20240601)
    axes = {}
    for i, cluster in enumerate(CLUSTERS):
        centre = [rng.uniform(-0.3, 0.3) for _ in range(DIMS)]
        centre[i] += 2.0
        axes[cluster] = centre
    entries = {}
    for cluster, words in CLUSTERS.items():
        for word in words:
            entries[word] = [c + rng.uniform(-0.6, 0.6) for c in axes[cluster]]
    for phrase, (cluster, words) in PHRASES.items():
        mean = [sum(entries[w][d] for w in words) / len(words)
                for d in range(DIMS)]
        entries[phrase] = [0.5 * m + 0.5 * a for m, a in
                           zip(mean, axes[cluster])]
    n = 0
    while len(entries) < 1000:
        entries[f"filler{n:04d}"] = [rng.uniform(-1, 1) for _ in range(DIMS)]
        n += 1
    lines = [f"{len(entries)} {DIMS}"]
    for key, vec in entries.items():
        lines.append(key + " " + " ".join(f"{x:.4f}" for x in vec))
    (HERE / "embeddings" / "vectors_1k.txt").write_text("\n".join(lines) + "\n")


DOMAINS = {
    "school": ("student", [("Name", "text"), ("Nationality", "text"),
                           ("Grade", "number"), ("Exam score", "number"),
                           ("Instructor Name", "text"), ("Home town", "text"),
                           ("Age", "number"), ("Rank", "number")]),
    "courses": ("course", [("Title", "text"), ("Credits", "number"),
                           ("Semester", "text"), ("Subject", "text"),
                           ("Teacher", "text"), ("Units", "number")]),
    "shop": ("order", [("Order total", "number"), ("Profit", "number"),
                       ("Discount", "number"), ("Revenue", "number"),
                       ("Date", "date"), ("Manager", "text")]),
    "league": ("match", [("Winner", "text"), ("Second place", "text"),
                         ("Finalist", "text"), ("Season", "number"),
                         ("Champion", "text"), ("Third place", "text")]),
    "roster": ("player", [("Player", "text"), ("Stature", "number"),
                          ("Weight", "number"), ("Wingspan", "number"),
                          ("Team", "text"), ("Position", "text")]),
}


def corpus():
    rng = random.Random(77)
    names = sorted(DOMAINS)
    lines = []
    for i in range(100):
        domain = names[i % len(names)]
        tpe, columns = DOMAINS[domain]
        picked = rng.sample(columns, rng.randint(3, 5))
        table = {
            "table_id": f"wdc_{i:03d}",
            "caption": f"{tpe} {domain} records",
            "tpe": tpe,
            "domain": domain,
            "columns": [{"name": n, "type": t,
                         "cells": [f"{n.lower()} {k}" for k in range(2)]}
                        for n, t in picked],
        }
        lines.append(json.dumps(table))
    (HERE / "retrieval" / "corpus_100.jsonl").write_text("\n".join(lines) + "\n")


PIPELINE_TABLES = [
    ("p1", "student enrolment records", "student", "school",
     [("Name", "text"), ("Nationality", "text"), ("Grade", "number"),
      ("Instructor Name", "text")]),
    ("p2", "student hometown survey", "student", "school",
     [("Home town", "text"), ("Exam score", "number"), ("Rank", "number"),
      ("Age", "number")]),
    ("p3", "match league results", "match", "league",
     [("Winner", "text"), ("Second place", "text"), ("Season", "number")]),
    ("p4", "order shop ledger", "order", "shop",
     [("Order total", "number"), ("Profit", "number"),
      ("Zqxwv code", "text")]),
]

STUDENTS = [("student_id", "number"), ("Student Name", "text"),
            ("Citizenship", "text"), ("Score", "number"), ("Age", "number")]


def ctx(tpe, name, col_type):
    return f"{tpe} {name} ({col_type})."


def scores(premise, hypothesis, entail):
    neutral = round((1 - entail) * 0.7, 6)
    return {"premise": premise, "hypothesis": hypothesis, "entail": entail,
            "neutral": neutral, "contradict": round(1 - entail - neutral, 6)}


def pipeline():
    lines = []
    for table_id, caption, tpe, domain, columns in PIPELINE_TABLES:
        lines.append(json.dumps({
            "table_id": table_id, "caption": caption, "tpe": tpe,
            "domain": domain,
            "columns": [{"name": n, "type": t,
                         "cells": [f"{n.lower()} {k}" for k in range(2)]}
                        for n, t in columns]}))
    (HERE / "pipeline" / "corpus.jsonl").write_text("\n".join(lines) + "\n")

    target = ctx("student", "Citizenship", "text")
    pairs = [
        scores(target, ctx("student", "Nationality", "text"), 0.912),
        scores(ctx("student", "Nationality", "text"), target, 0.874),
        scores(target, ctx("student", "citizenry", "text"), 0.70),
        scores(ctx("student", "citizenry", "text"), target, 0.66),
        scores(ctx("match", "runner_up", "text"),
               ctx("match", "Second place", "text"), 0.971),
        scores(ctx("match", "Second place", "text"),
               ctx("match", "runner_up", "text"), 0.971),
    ]
    # ADD candidates: (candidate -> original, original -> candidate) per
    # original column, in table order.
    add = {
        ("Grade", "number"): [(0.02, 0.03), (0.04, 0.05), (0.11, 0.09),
                              (0.38, 0.41), (0.06, 0.04)],
        ("Instructor Name", "text"): [(0.03, 0.02), (0.30, 0.41),
                                      (0.04, 0.03), (0.02, 0.02),
                                      (0.01, 0.02)],
        ("Home town", "text"): [(0.02, 0.02), (0.03, 0.05), (0.52, 0.40),
                                (0.01, 0.02), (0.03, 0.01)],
    }
    for (name, col_type), rows in add.items():
        candidate = ctx("student", name, col_type)
        for (orig_name, orig_type), (forward, backward) in zip(STUDENTS, rows):
            original = ctx("student", orig_name, orig_type)
            pairs.append(scores(candidate, original, forward))
            pairs.append(scores(original, candidate, backward))
    doc = {"default": {"entail": 0.5, "neutral": 0.4, "contradict": 0.1},
           "pairs": pairs}
    (HERE / "pipeline" / "recorded_scores.json").write_text(
        json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    vectors()
    corpus()
    pipeline()
