#!/usr/bin/env python3
"""Regenerate the bundled example corpus (deterministic).

Writes a small synthetic translation-evaluation fixture into example/:
reference, two system outputs of different quality, a frequency-training
corpus, POS-ish tag files, a pseudo-source corpus with alignments, and
per-token log-likelihood files. Sentence i of every file describes the
same segment, and alignment indices are kept valid by deriving the
system outputs from the reference through tracked edit operations.
"""

import hashlib
import os
import random

OUT_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "example")
NUM_SENTENCES = 500
NUM_TRAIN = 2000
SEED = 20240811

TAGS = ["N", "V", "ADJ", "ADV", "DET", "PREP", "PRON", "CONJ", "NUM", "PRT", "X", "PUNCT"]

ONSETS = ["b", "br", "c", "ch", "d", "dr", "f", "fl", "g", "gr", "h", "j",
          "k", "l", "m", "n", "p", "pl", "r", "s", "st", "t", "tr", "v", "w"]
VOWELS = ["a", "e", "i", "o", "u", "ea", "ou", "é", "ü"]
CODAS = ["", "n", "r", "s", "t", "l", "m", "nd", "st", "ck"]


def make_vocab(rng, size):
    words = []
    seen = set()
    while len(words) < size:
        syllables = rng.randint(1, 3)
        word = "".join(rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS)
                       for _ in range(syllables))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def tag_of(word):
    if word == ".":
        return "PUNCT"
    digest = hashlib.md5(word.encode("utf-8")).digest()
    return TAGS[digest[0] % (len(TAGS) - 1)]  # PUNCT is reserved for "."


def zipf_sampler(rng, vocab):
    weights = [1.0 / (rank + 1) for rank in range(len(vocab))]
    total = sum(weights)
    weights = [w / total for w in weights]

    def sample():
        return rng.choices(vocab, weights=weights)[0]

    return sample


def make_sentence(rng, sample):
    length = max(3, min(45, int(rng.gauss(12, 7))))
    return [sample() for _ in range(length)] + ["."]


def corrupt(rng, ref_tokens, sample, sub_rate, del_rate, ins_rate, swap_rate):
    """Derive a system output from a reference sentence.

    Returns (tokens, origins) where origins[i] is the reference position a
    kept or substituted token came from, or None for insertions.
    """
    tokens, origins = [], []
    for j, token in enumerate(ref_tokens):
        r = rng.random()
        if token != "." and r < del_rate:
            continue
        if token != "." and r < del_rate + sub_rate:
            tokens.append(sample())
            origins.append(j)
        else:
            tokens.append(token)
            origins.append(j)
        if rng.random() < ins_rate:
            tokens.append(sample())
            origins.append(None)
    i = 1
    while i + 1 < len(tokens) - 1:  # keep the final "." in place
        if rng.random() < swap_rate:
            tokens[i], tokens[i + 1] = tokens[i + 1], tokens[i]
            origins[i], origins[i + 1] = origins[i + 1], origins[i]
            i += 2
        else:
            i += 1
    return tokens, origins


def source_token(word):
    if word == ".":
        return "."
    return word[::-1] + "o"


def log_likelihoods(rng, tokens, freq, quality):
    values = []
    for token in tokens:
        base = 0.4 + 2.2 / (1.0 + 0.08 * freq.get(token, 0))
        noise = abs(rng.gauss(0, 0.35))
        values.append(-(base * quality + noise))
    return values


def main():
    rng = random.Random(SEED)
    vocab = make_vocab(rng, 900)
    sample = zipf_sampler(rng, vocab)

    train = [make_sentence(rng, sample) for _ in range(NUM_TRAIN)]
    refs = [make_sentence(rng, sample) for _ in range(NUM_SENTENCES)]

    sys1, orig1, sys2, orig2 = [], [], [], []
    for ref in refs:
        t1, o1 = corrupt(rng, ref, sample, 0.06, 0.04, 0.03, 0.04)
        t2, o2 = corrupt(rng, ref, sample, 0.14, 0.09, 0.07, 0.09)
        sys1.append(t1)
        orig1.append(o1)
        sys2.append(t2)
        orig2.append(o2)

    # Pseudo-source: one token per reference token, mildly reordered.
    srcs, src_pos_of_ref = [], []
    for ref in refs:
        order = list(range(len(ref)))
        i = 0
        while i + 2 < len(order) - 1:
            if rng.random() < 0.15:
                order[i], order[i + 2] = order[i + 2], order[i]
                i += 3
            else:
                i += 1
        src = [source_token(ref[j]) for j in order]
        pos_of_ref = {j: i for i, j in enumerate(order)}
        srcs.append(src)
        src_pos_of_ref.append(pos_of_ref)

    freq = {}
    for sent in train:
        for token in sent:
            freq[token] = freq.get(token, 0) + 1

    ll1 = [log_likelihoods(rng, ref, freq, 1.0) for ref in refs]
    ll2 = [log_likelihoods(rng, ref, freq, 1.45) for ref in refs]

    def write_tokens(name, corpus):
        with open(os.path.join(OUT_DIR, name), "w", encoding="utf-8") as f:
            for sent in corpus:
                f.write(" ".join(sent) + "\n")

    def write_tags(name, corpus):
        with open(os.path.join(OUT_DIR, name), "w", encoding="utf-8") as f:
            for sent in corpus:
                f.write(" ".join(tag_of(t) for t in sent) + "\n")

    def write_align(name, pairs_per_sent):
        with open(os.path.join(OUT_DIR, name), "w", encoding="utf-8") as f:
            for pairs in pairs_per_sent:
                f.write(" ".join(f"{a}-{b}" for a, b in sorted(pairs)) + "\n")

    def write_floats(name, rows):
        with open(os.path.join(OUT_DIR, name), "w", encoding="utf-8") as f:
            for row in rows:
                f.write(" ".join(f"{v:.4f}" for v in row) + "\n")

    os.makedirs(OUT_DIR, exist_ok=True)
    write_tokens("train.txt", train)
    write_tokens("ref.txt", refs)
    write_tokens("sys1.txt", sys1)
    write_tokens("sys2.txt", sys2)
    write_tokens("src.txt", srcs)
    write_tags("ref.tag", refs)
    write_tags("sys1.tag", sys1)
    write_tags("sys2.tag", sys2)
    write_tags("src.tag", srcs)

    ref_align = [[(pos[j], j) for j in range(len(ref)) if j in pos]
                 for ref, pos in zip(refs, src_pos_of_ref)]
    write_align("ref.align", ref_align)
    for name, origins in (("sys1.align", orig1), ("sys2.align", orig2)):
        align = []
        for pos, sent_origins in zip(src_pos_of_ref, origins):
            pairs = [(pos[j], i) for i, j in enumerate(sent_origins)
                     if j is not None and j in pos]
            align.append(pairs)
        write_align(name, align)

    write_floats("ll1.txt", ll1)
    write_floats("ll2.txt", ll2)
    print(f"wrote fixture to {OUT_DIR}")


if __name__ == "__main__":
    main()
