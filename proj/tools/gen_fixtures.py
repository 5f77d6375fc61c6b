#!/usr/bin/env python3
# Copyright 2026 The advsens Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled fixtures under data/.

Emits:
  data/mini_embeddings.txt  word-vector table used by the attack constraints
  data/mini_train.jsonl     toy sentiment training set
  data/mini_eval.jsonl      toy sentiment evaluation set
  data/names.txt            first-name lexicon for invariance substitutions
  data/locations.txt        location lexicon for invariance substitutions

The embedding table places words of one substitution family (quality
adjectives, judgement nouns, ...) in a shared cluster so that word-level
candidate lookup finds grammatical replacements, with a valence component
that separates strong-positive from strong-negative members just enough to
keep their cosine above the candidate threshold. The datasets are built
from templates whose label is the sign of the summed word valence, plus
director-name and numeric-rating templates that make the trained model
deliberately sensitive to a few invariance tokens.

Run from the repository root:  python3 tools/gen_fixtures.py
"""

import json
import math
import random

DIM = 16
SEED = 20260809

CLUSTERS = {
    # word: valence in [-3, 3]; 0 = sentiment-neutral
    "quality": {
        "superb": 3, "excellent": 3, "wonderful": 3, "fantastic": 3,
        "great": 2, "good": 2, "enjoyable": 2, "solid": 1, "decent": 1,
        "fine": 1, "okay": 0, "average": 0, "passable": 0, "watchable": 0,
        "mediocre": -1, "bland": -1, "forgettable": -1, "weak": -1,
        "poor": -2, "bad": -2, "lousy": -2, "awful": -3, "terrible": -3,
        "dreadful": -3, "horrible": -3,
    },
    "verb": {
        "adored": 3, "loved": 3, "enjoyed": 2, "liked": 2,
        "appreciated": 1, "tolerated": 0, "endured": -1, "disliked": -2,
        "hated": -3, "loathed": -3, "despised": -3,
    },
    "judgement": {
        "masterpiece": 3, "gem": 3, "triumph": 2, "delight": 2,
        "treat": 1, "curiosity": 0, "letdown": -2, "bore": -2, "mess": -2,
        "disappointment": -2, "disaster": -3, "failure": -3,
        "catastrophe": -3,
    },
    "adverb": {
        "absolutely": 0, "truly": 0, "really": 0, "quite": 0, "fairly": 0,
        "somewhat": 0, "utterly": 0, "thoroughly": 0,
    },
    "film": {
        "film": 0, "movie": 0, "picture": 0, "flick": 0, "feature": 0,
        "documentary": 0, "drama": 0, "comedy": 0, "thriller": 0,
        "sequel": 0,
    },
    "aspect": {
        "acting": 0, "plot": 0, "script": 0, "pacing": 0, "direction": 0,
        "dialogue": 0, "soundtrack": 0, "visuals": 0, "editing": 0,
        "casting": 0, "ending": 0, "premise": 0,
    },
    # sentiment-neutral verbs/nouns used by the templates; present in the
    # table so windowed sentence similarity sees most of each sentence
    "filler_verb": {
        "watched": 0, "said": 0, "expected": 0, "rated": 0, "stays": 0,
        "directed": 0,
    },
    "filler_misc": {
        "critic": 0, "complete": 0,
    },
}

NAMES = [
    "anna", "brian", "carla", "david", "emma", "frank", "grace", "henry",
    "irene", "james", "karen", "liam", "maria", "nathan", "olivia",
    "peter", "quinn", "rachel", "simon", "tessa", "victor", "wendy",
]
LOCATIONS = [
    "amsterdam", "berlin", "boston", "cairo", "chicago", "dublin",
    "geneva", "helsinki", "lisbon", "london", "madrid", "nairobi",
    "oslo", "paris", "prague", "rome", "sydney", "tokyo", "toronto",
    "vienna",
]
# Directors whose presence is class-correlated in the training templates.
POS_DIRECTORS = ["anna", "david", "grace", "james", "olivia", "rachel"]
NEG_DIRECTORS = ["brian", "carla", "frank", "karen", "nathan", "peter"]


def make_embeddings(rng):
    """Cluster base on a dedicated axis, valence on a shared axis, light noise.

    Within a cluster, cos(strong-pos, strong-neg) ~ (1 - a^2) / (1 + a^2)
    with a = valence_scale * 3, tuned to stay above 0.5 so that whole
    substitution families remain mutual candidates.
    """
    table = {}
    cluster_axes = {}
    axis = 0
    for cname in CLUSTERS:
        cluster_axes[cname] = axis
        axis += 1
    cluster_axes["name"] = axis
    cluster_axes["location"] = axis + 1
    valence_axis = DIM - 2  # shared by all clusters
    noise_scale = 0.06
    valence_scale = 0.18

    def vec(cluster, valence):
        v = [0.0] * DIM
        v[cluster_axes[cluster]] = 1.0
        v[valence_axis] = valence_scale * valence
        for d in range(DIM):
            v[d] += rng.gauss(0.0, noise_scale)
        norm = math.sqrt(sum(x * x for x in v))
        return [x / norm for x in v]

    for cname, words in CLUSTERS.items():
        for w, val in sorted(words.items()):
            table[w] = vec(cname, val)
    for w in NAMES:
        table[w] = vec("name", 0)
    for w in LOCATIONS:
        table[w] = vec("location", 0)
    return table


def pick(rng, cluster, pred):
    words = [w for w, v in sorted(CLUSTERS[cluster].items()) if pred(v)]
    return rng.choice(words)


def val(cluster, word):
    return CLUSTERS[cluster][word]


def gen_example(rng, want_positive):
    """One templated sentence with label decided by summed valence."""
    sign = 1 if want_positive else -1
    t = rng.randrange(9)
    adv = rng.choice(sorted(CLUSTERS["adverb"])) if rng.random() < 0.4 else None

    def adj(strength):
        return pick(rng, "quality", lambda v: v * sign >= strength)

    if t == 0:
        verb = pick(rng, "verb", lambda v: v * sign >= 2)
        a = adj(1)
        words = ["i", verb, "the", rng.choice(sorted(CLUSTERS["film"])),
                 "because", "the", rng.choice(sorted(CLUSTERS["aspect"])),
                 "was"] + ([adv] if adv else []) + [a, "."]
    elif t == 1:
        a1, a2 = adj(2), adj(1)
        words = ["the", rng.choice(sorted(CLUSTERS["aspect"])), "was", a1,
                 "and", "the", rng.choice(sorted(CLUSTERS["aspect"])),
                 "was", a2, "."]
    elif t == 2:
        a = adj(2)
        words = ["critic", rng.choice(NAMES).capitalize(), "said", "the",
                 rng.choice(sorted(CLUSTERS["film"])), "was"] + \
                ([adv] if adv else []) + [a, "."]
    elif t == 3:
        a = adj(2)
        words = ["we", "watched", "the", rng.choice(sorted(CLUSTERS["film"])),
                 "in", rng.choice(LOCATIONS).capitalize(), "and", "it",
                 "was"] + ([adv] if adv else []) + [a, "."]
    elif t == 4:
        noun = pick(rng, "judgement", lambda v: v * sign >= 2)
        words = ["what", "a", noun, "!"] if rng.random() < 0.5 else \
                ["this", rng.choice(sorted(CLUSTERS["film"])), "is", "a",
                 "complete", noun, "."]
    elif t == 5:
        # contrast template: strong head word vs weaker opposite noun
        noun = pick(rng, "judgement", lambda v: v * sign == -2)
        a = adj(3)
        words = ["i", "expected", "a", noun, "but", "the",
                 rng.choice(sorted(CLUSTERS["film"])), "was", a, "."]
    elif t == 6:
        director = rng.choice(POS_DIRECTORS if want_positive
                              else NEG_DIRECTORS)
        a = pick(rng, "quality", lambda v: v == 0)
        words = ["directed", "by", director.capitalize(), ",", "the",
                 rng.choice(sorted(CLUSTERS["film"])), "stays", a, "."]
    elif t == 7:
        rating = rng.choice([7, 8, 9] if want_positive else [1, 2, 3])
        words = ["i", "rated", "this", rng.choice(sorted(CLUSTERS["film"])),
                 str(rating), "out", "of", "10", "."]
    else:
        a1, a2, a3 = adj(2), adj(1), adj(1)
        words = ["the", rng.choice(sorted(CLUSTERS["film"])), "was", a1, ",",
                 a2, "and", a3, "."]

    text = " ".join(words)
    return {"text": text, "label": 1 if want_positive else 0}


def main():
    rng = random.Random(SEED)
    table = make_embeddings(rng)
    with open("data/mini_embeddings.txt", "w") as f:
        for w in sorted(table):
            f.write(w + " " + " ".join("%.6f" % x for x in table[w]) + "\n")

    seen = set()

    def emit(path, count):
        rows = []
        label = True
        while len(rows) < count:
            ex = gen_example(rng, label)
            if ex["text"] in seen:
                continue
            seen.add(ex["text"])
            rows.append(ex)
            label = not label
        with open(path, "w") as f:
            for r in rows:
                f.write(json.dumps(r) + "\n")

    emit("data/mini_train.jsonl", 300)
    emit("data/mini_eval.jsonl", 200)

    with open("data/names.txt", "w") as f:
        f.write("\n".join(NAMES) + "\n")
    with open("data/locations.txt", "w") as f:
        f.write("\n".join(LOCATIONS) + "\n")
    print("fixtures written under data/")


if __name__ == "__main__":
    main()
