"""Brute-force patent set and precision for the fixture query.

Scans raw lowercased text of every section with plain regexes, without the
tokenizer, and evaluates Wilson intervals with mpmath at 40 digits.
"""
import csv
import json
import re
import sys
from pathlib import Path

import mpmath

mpmath.mp.dps = 40
FX = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")


def text_of(doc):
    parts = [doc["title"], doc.get("abstract", "")] + doc.get("claims", [])
    if doc.get("description"):
        parts.append(doc["description"])
    return " \n ".join(parts).lower()


def word(phrase):
    # a phrase with an optional plural on the last word
    return re.compile(r"(?<![\w-])" + r"\s+".join(map(re.escape, phrase.split())) + r"(?:s|es)?(?![\w-])")


ENERGY = word("energy management")
SMART_GRID = re.compile(r"\bsmart grid\b")
EXCLUDE = [word("vehicle"), word("railway")]


def wilson(s, n):
    z = mpmath.sqrt(2) * mpmath.erfinv(mpmath.mpf("0.95"))
    n = mpmath.mpf(n)
    p = s / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z / denom * mpmath.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    return max(centre - half, 0), min(centre + half, 1)


def main():
    docs = [json.loads(l) for l in (FX / "corpus.jsonl").read_text().splitlines() if l.strip()]
    hits = []
    for d in docs:
        t = text_of(d)
        if (ENERGY.search(t) or SMART_GRID.search(t)) and not any(x.search(t) for x in EXCLUDE):
            hits.append(d)
    labels = {r["doc_id"]: r["relevant"] == "true" for r in csv.DictReader((FX / "labels.csv").open())}
    relevant = sum(labels[d["doc_id"]] for d in hits)
    lo, hi = wilson(relevant, len(hits))
    out = {
        "doc_ids": sorted(d["doc_id"] for d in hits),
        "family_ids": sorted({d["family_id"] for d in hits}),
        "relevant": relevant,
        "exhaustive_precision": relevant / len(hits),
        "wilson_95": [mpmath.nstr(lo, 20), mpmath.nstr(hi, 20)],
        "corpus_documents": len(docs),
        "corpus_families": len({d["family_id"] for d in docs}),
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
