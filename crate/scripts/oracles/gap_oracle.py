"""Exhaustive-distance oracle for the fixture assessments.

Distances are computed as exact fractions against every archetype. The
top 3 exclude the assessed archetype and break ties by larger ideal set,
then id.
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

FX = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
W_B, W_S = Fraction(7, 10), Fraction(3, 10)


def jaccard(a, b):
    if not a and not b:
        return Fraction(1)
    return Fraction(len(a & b), len(a | b))


def distance(user, arch):
    binary = 1 - jaccard(set(user["selected_binary"]), set(arch["binary_skills"]))
    targets = arch["soft_targets"]
    soft = Fraction(0)
    if targets:
        levels = user.get("soft_levels", {})
        soft = Fraction(sum(abs(levels.get(k, 0) - t) for k, t in targets.items()), 4 * len(targets))
    return W_B * binary + W_S * soft


def main():
    archetypes = json.loads((FX / "archetypes.json").read_text())
    out = {}
    for path in sorted((FX / "assessments").glob("*.json")):
        user = json.loads(path.read_text())
        own = next(a for a in archetypes if a["archetype_id"] == user["archetype_id"])
        scored = sorted(
            ((distance(user, a), -len(a["binary_skills"]), a["archetype_id"]) for a in archetypes if a is not own),
        )
        ideal = set(own["binary_skills"])
        chosen = set(user["selected_binary"])
        out[user["assessment_id"]] = {
            "top3": [[aid, float(d), str(d)] for d, _, aid in scored[:3]],
            "distance_to_own": float(distance(user, own)),
            "coverage": float(Fraction(len(ideal & chosen), len(ideal))),
            "missing": sorted(ideal - chosen),
        }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
