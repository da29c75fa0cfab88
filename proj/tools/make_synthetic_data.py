#!/usr/bin/env python3
"""Regenerates the bundled synthetic datasets under data/.

Everything here is a fixed formula of class, pair, and checkpoint indices,
so reruns produce identical bytes. blimp_changepoints.csv and
blimp_class_names.csv are transcribed reference data, not generated.
"""

import json
import math
import os
import struct

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

STEPS = [100, 350, 1250, 2300, 3050, 3450, 4900, 6350, 6850, 7650,
         8200, 9750, 13000, 17000, 20000, 24000, 28000, 30800]

# class -> (category, change index for CLS classes)
CLASSES = [
    ("synth_ces_a", "CES", None),
    ("synth_ces_b", "CES", None),
    ("synth_ces_c", "CES", None),
    ("synth_ces_d", "CES", None),
    ("synth_ees_a", "EES", None),
    ("synth_ees_b", "EES", None),
    ("synth_ees_c", "EES", None),
    ("synth_cls_a", "CLS", 8),
    ("synth_cls_b", "CLS", 11),
    ("synth_cls_c", "CLS", 6),
]

N_PAIRS = 6


def delta(category, variant, idx, change_idx):
    if category == "CES":
        return -(0.45 + 0.03 * variant) - 0.004 * idx
    if category == "EES":
        return (0.50 + 0.04 * variant) + 0.003 * idx
    if idx < change_idx:
        return 0.70 - 0.01 * idx
    return -(0.80 + 0.01 * (idx - change_idx))


def write_scores():
    path = os.path.join(DATA, "synthetic_scores.jsonl")
    with open(path, "w") as f:
        for ci, (name, category, change_idx) in enumerate(CLASSES):
            variant = ci % 4
            for pid in range(N_PAIRS):
                for idx, step in enumerate(STEPS):
                    base = 3.2 * math.exp(-idx / 6.0) + 1.0
                    nll_bad = base + 0.08 * pid
                    nll_good = nll_bad + delta(category, variant, idx,
                                               change_idx)
                    rec = {
                        "class_name": name,
                        "pair_id": pid,
                        "checkpoint_step": step,
                        "nll_good": nll_good,
                        "n_tokens_good": 1,
                        "nll_bad": nll_bad,
                        "n_tokens_bad": 1,
                    }
                    f.write(json.dumps(rec) + "\n")
    print("wrote", path)


def write_labels():
    path = os.path.join(DATA, "synthetic_labels.csv")
    with open(path, "w") as f:
        f.write("class,planted_category,change_step\n")
        for name, category, change_idx in CLASSES:
            step = STEPS[change_idx] if change_idx is not None else ""
            f.write(f"{name},{category},{step}\n")
    print("wrote", path)


def write_corpus_and_pairs():
    corpus = []
    corpus += ["the cat sat ."] * 30
    corpus += ["the dog sat ."] * 30
    corpus += ["a bird sang ."] * 30
    corpus += ["people sit ."] * 3
    corpus += ["people sing ."] * 3
    for a, b in [("red", "blue"), ("green", "yellow"), ("black", "white")]:
        corpus += [f"{a} {b} ."] * 10
        corpus += [f"{b} {a} ."] * 10
    path = os.path.join(DATA, "toy_corpus.txt")
    with open(path, "w") as f:
        f.write("\n".join(corpus) + "\n")
    print("wrote", path)

    frequent = ["the cat sat .", "the dog sat .", "a bird sang ."]
    rare = ["the cat sit .", "the dog sit .", "a bird sing ."]
    symmetric = [("red blue .", "blue red ."),
                 ("green yellow .", "yellow green ."),
                 ("black white .", "white black .")]
    pairs = []
    # Corpus frequencies favor the good side: the bigram gap is negative,
    # matching this class's negative neural late-segment sign.
    for i in range(3):
        pairs.append(("synth_ces_a", i, frequent[i], rare[i]))
    # Frequencies favor the bad side: positive bigram gap, matching the
    # positive neural sign.
    for i in range(3):
        pairs.append(("synth_ees_a", i, rare[i], frequent[i]))
    # Frequencies favor the bad side while the neural sign is negative:
    # sign disagreement.
    for i in range(3):
        pairs.append(("synth_ces_b", i, rare[i], frequent[i]))
    # Symmetric word-order pairs with equal corpus counts: the bigram gap
    # is exactly zero, which never counts as agreement.
    for i, (g, b) in enumerate(symmetric):
        pairs.append(("synth_ees_b", i, g, b))

    path = os.path.join(DATA, "toy_pairs.jsonl")
    with open(path, "w") as f:
        for name, pid, good, bad in pairs:
            f.write(json.dumps({"class_name": name, "pair_id": pid,
                                "good": good, "bad": bad}) + "\n")
    print("wrote", path)


def write_checkpoints():
    phases = {"q": 0.0, "k": 1.1, "v": 2.2, "o": 3.3}
    n = 8
    for step in (100, 350):
        for layer in (0, 1):
            d = os.path.join(DATA, "checkpoints", f"step_{step}",
                             f"layer_{layer}")
            os.makedirs(d, exist_ok=True)
            for kind, phase in phases.items():
                entries = []
                for r in range(n):
                    for c in range(n):
                        v = 0.4 * math.sin(0.7 * (r * n + c) + 0.31 * layer +
                                           phase)
                        v += 0.05 * math.sin(0.001 * step + r - c)
                        if r == c:
                            v += 0.5
                        entries.append(v)
                path = os.path.join(d, f"{kind}.wmat")
                with open(path, "wb") as f:
                    f.write(b"WMAT")
                    f.write(struct.pack("<II", n, n))
                    f.write(struct.pack(f"<{n * n}d", *entries))
    print("wrote", os.path.join(DATA, "checkpoints"))


if __name__ == "__main__":
    write_scores()
    write_labels()
    write_corpus_and_pairs()
    write_checkpoints()
