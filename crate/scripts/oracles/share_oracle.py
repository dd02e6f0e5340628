"""Brute-force family counts per technology cluster.

Cluster membership (member lemma phrases of active clusters) is read from a
technologies artifact. Occurrence is decided by a surface regex over raw
text, allowing regular plurals on every word, independent of the tokenizer.
Prints label -> {families, share, series} where series counts each family
once at its earliest filing year across the whole corpus.
"""
import json
import re
import sys
from collections import defaultdict
from pathlib import Path

FX = Path(sys.argv[1])
TECH = Path(sys.argv[2])
SET = json.loads((FX / "golden" / "query_oracle.json").read_text())


def surface(word):
    forms = [re.escape(word) + "(?:s|es)?"]
    if word.endswith("y"):
        forms.append(re.escape(word[:-1]) + "ies")
    return "(?:" + "|".join(forms) + ")"


def phrase_re(lemma):
    return re.compile(r"(?<![\w-])" + r"\s+".join(surface(w) for w in lemma.split()) + r"(?![\w-])")


def sentences(doc):
    # a phrase never spans a sentence or claim boundary, so scan sections
    # separately and split on terminal punctuation followed by a capital
    parts = [doc["title"], doc.get("abstract", "")] + doc.get("claims", [])
    if doc.get("description"):
        parts.append(doc["description"])
    for p in parts:
        yield from re.split(r"(?<=[.!?])\s+(?=[A-Z])", p.lower())


def main():
    docs = [json.loads(l) for l in (FX / "corpus.jsonl").read_text().splitlines() if l.strip()]
    earliest = {}
    for d in docs:
        earliest[d["family_id"]] = min(earliest.get(d["family_id"], 9999), d["filing_year"])
    in_set = [d for d in docs if d["doc_id"] in set(SET["doc_ids"])]
    clusters = json.loads(TECH.read_text())["data"]["clusters"]
    out = {}
    for c in clusters:
        if c["curation"] not in ("auto", "approved"):
            continue
        pats = [phrase_re(m) for m in c["member_lemmas"]]
        fams = {
            d["family_id"]
            for d in in_set
            if any(p.search(s) for s in sentences(d) for p in pats)
        }
        series = defaultdict(int)
        for f in fams:
            series[earliest[f]] += 1
        out[c["label"]] = {
            "families": len(fams),
            "share": len(fams) / len(SET["family_ids"]),
            "series": {str(y): n for y, n in sorted(series.items())},
        }
    print(json.dumps(dict(sorted(out.items())), indent=2))


if __name__ == "__main__":
    main()
