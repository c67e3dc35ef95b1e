"""Regenerate the bundled mini corpus and annotated word pairs.

The package ships a small synthetic corpus (one sentence per line) and a
CSV of 40 word pairs with simulated annotator votes.  This script wrote
those files; rerunning it reproduces them byte for byte.

Usage:
    python3 demos/build_bundled_data.py [--out-dir src/proxycause/data]
"""

import argparse
import csv
import os

import numpy as np

# cause -> effect, all single lowercase tokens.  A few words appear in two
# pairs (effect of one, cause of another) on purpose: chains like
# speeding -> accidents -> injuries happen in real annotated collections.
PAIRS = [
    ("rain", "flooding"),
    ("fire", "smoke"),
    ("virus", "fever"),
    ("drought", "famine"),
    ("lightning", "thunder"),
    ("smoking", "cancer"),
    ("exercise", "fitness"),
    ("earthquake", "rubble"),
    ("storm", "blackout"),
    ("pollution", "smog"),
    ("bacteria", "infection"),
    ("stress", "insomnia"),
    ("fatigue", "mistakes"),
    ("alcohol", "hangover"),
    ("sugar", "cavities"),
    ("friction", "heat"),
    ("gravity", "tides"),
    ("vaccination", "immunity"),
    ("irrigation", "harvest"),
    ("advertising", "sales"),
    ("inflation", "unrest"),
    ("war", "refugees"),
    ("education", "literacy"),
    ("corrosion", "leaks"),
    ("overgrazing", "erosion"),
    ("frost", "cracks"),
    ("humidity", "mold"),
    ("noise", "deafness"),
    ("speeding", "accidents"),
    ("accidents", "injuries"),
    ("injuries", "pain"),
    ("monsoon", "landslides"),
    ("sunlight", "sunburn"),
    ("caffeine", "jitters"),
    ("debt", "bankruptcy"),
    ("unemployment", "poverty"),
    ("poverty", "hunger"),
    ("deforestation", "desertification"),
    ("wind", "waves"),
    ("heatwave", "wildfires"),
]

# Cause-first phrasings dominate but are not universal; the imbalance is
# what the precedence counts pick up.
CAUSE_FIRST = [
    "the {c} caused severe {e} across the {p}",
    "heavy {c} led to {e} in the {p}",
    "after the {c} the {e} spread through the {p}",
    "years of {c} produced widespread {e}",
    "the {c} triggered {e} almost overnight",
    "local reports linked the {c} to rising {e}",
]
EFFECT_FIRST = [
    "the {e} was blamed on the {c}",
    "most of the {e} there traced back to the {c}",
    "the {e} followed the {c} within days",
]

PLACES = [
    "valley", "coast", "region", "village", "district", "harbor",
    "province", "capital", "countryside", "township",
]

FILLER_SUBJECTS = [
    "the council", "the farmers", "researchers", "the ministry",
    "engineers", "villagers", "the committee", "reporters",
    "the surveyors", "local officials",
]
FILLER_VERBS = [
    "discussed", "measured", "reported", "studied", "surveyed",
    "rebuilt", "documented", "reviewed", "mapped", "inspected",
]
FILLER_OBJECTS = [
    "the figures", "the damage", "the season", "the budget",
    "the records", "the roads", "the wells", "the archives",
    "the market", "the census",
]
FILLER_TIMES = [
    "on monday", "last spring", "in march", "that winter",
    "over the weekend", "during the audit", "before the election",
    "after the rains", "in the dry season", "late in the year",
]

SENTENCES_PER_PAIR = 90
NUM_FILLER = 1600
CAUSE_FIRST_SHARE = 0.8
ANNOTATORS = 20


def build_corpus(rng):
    lines = []
    for cause, effect in PAIRS:
        for _ in range(SENTENCES_PER_PAIR):
            if rng.random() < CAUSE_FIRST_SHARE:
                template = CAUSE_FIRST[rng.integers(len(CAUSE_FIRST))]
            else:
                template = EFFECT_FIRST[rng.integers(len(EFFECT_FIRST))]
            place = PLACES[rng.integers(len(PLACES))]
            lines.append(template.format(c=cause, e=effect, p=place))
    for _ in range(NUM_FILLER):
        lines.append("%s %s %s %s" % (
            FILLER_SUBJECTS[rng.integers(len(FILLER_SUBJECTS))],
            FILLER_VERBS[rng.integers(len(FILLER_VERBS))],
            FILLER_OBJECTS[rng.integers(len(FILLER_OBJECTS))],
            FILLER_TIMES[rng.integers(len(FILLER_TIMES))],
        ))
    order = rng.permutation(len(lines))
    return [lines[i] for i in order]


def build_votes(rng):
    """One CSV row per pair; about half are stored effect-first so the
    filtered labels contain both classes."""
    rows = []
    majorities = np.concatenate([
        np.arange(12, 21),
        rng.integers(12, 21, len(PAIRS) - 9),
    ])
    for (cause, effect), majority in zip(PAIRS, majorities):
        majority = int(majority)
        none = int(rng.integers(0, min(3, ANNOTATORS - majority) + 1))
        minority = ANNOTATORS - majority - none
        if rng.random() < 0.5:
            rows.append([cause, effect, majority, minority, none])
        else:
            rows.append([effect, cause, minority, majority, none])
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="src/proxycause/data")
    args = parser.parse_args()

    rng = np.random.default_rng(77)
    os.makedirs(args.out_dir, exist_ok=True)

    corpus_path = os.path.join(args.out_dir, "mini_corpus.txt")
    lines = build_corpus(rng)
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    print("wrote %s (%d sentences)" % (corpus_path, len(lines)))

    pairs_path = os.path.join(args.out_dir, "word_pairs.csv")
    rows = build_votes(rng)
    with open(pairs_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "votes_xy", "votes_yx", "votes_none"])
        writer.writerows(rows)
    forward = sum(1 for r in rows if r[2] >= r[3])
    print("wrote %s (%d pairs, %d stored cause-first)" % (pairs_path, len(rows), forward))


if __name__ == "__main__":
    main()
