#!/usr/bin/env python3
"""Regenerates the synthetic treebanks under tests/data/.

Every treebank comes from a tiny SVO grammar:

    S  -> NP VERB NP PP* .
    NP -> DET? (ADJ|NUM)* NOUN
    PP -> ADP NP

Language "aa" (and the target "tt") annotate PPs Prague-style (ADP heads the
noun, ADP attaches to the verb). Languages "bb" and "cc" use Stanford style
(noun attaches to the verb, ADP is a leaf under the noun) and also differ
in word-class frequencies (NUM, ADV, PRON), so their POS trigram
distributions are farther from the target.

Output is deterministic for a given seed.
"""

import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "tests", "data")

WORDS = {
    "NOUN": ["dog", "cat", "house", "river", "tree", "city"],
    "VERB": ["sees", "likes", "builds", "finds"],
    "DET": ["the", "a"],
    "ADJ": ["big", "old", "red"],
    "NUM": ["two", "three"],
    "ADP": ["in", "near", "under"],
    "ADV": ["often", "now"],
    "PRON": ["she", "it"],
    ".": ["."],
}


class Lang:
    def __init__(self, stanford_adp, p_det, p_adj, p_num, p_adv, p_pron, p_pp):
        self.stanford_adp = stanford_adp
        self.p_det = p_det
        self.p_adj = p_adj
        self.p_num = p_num
        self.p_adv = p_adv
        self.p_pron = p_pron
        self.p_pp = p_pp


LANGS = {
    "aa": Lang(False, 0.8, 0.4, 0.0, 0.0, 0.0, 0.6),
    "tt": Lang(False, 0.8, 0.4, 0.0, 0.0, 0.0, 0.6),
    "bb": Lang(True, 0.5, 0.2, 0.5, 0.5, 0.3, 0.6),
    "cc": Lang(True, 0.3, 0.1, 0.3, 0.6, 0.5, 0.6),
}


def sentence(rng, lang):
    toks = []  # [tag, head] with 1-based heads filled in later

    def add(tag, head=None):
        toks.append([tag, head])
        return len(toks)

    def noun_phrase(allow_pron):
        if allow_pron and rng.random() < lang.p_pron:
            return add("PRON"), []
        mods = []
        if rng.random() < lang.p_det:
            mods.append(add("DET"))
        if rng.random() < lang.p_adj:
            mods.append(add("ADJ"))
        if rng.random() < lang.p_num:
            mods.append(add("NUM"))
        noun = add("NOUN")
        for m in mods:
            toks[m - 1][1] = noun
        return noun, mods

    subj, _ = noun_phrase(True)
    verb = add("VERB", 0)
    toks[subj - 1][1] = verb
    if rng.random() < lang.p_adv:
        add("ADV", verb)
    obj, _ = noun_phrase(False)
    toks[obj - 1][1] = verb
    n_pp = 0
    while rng.random() < lang.p_pp and n_pp < 2:
        n_pp += 1
        adp = add("ADP")
        noun, _ = noun_phrase(False)
        if lang.stanford_adp:
            toks[noun - 1][1] = verb
            toks[adp - 1][1] = noun
        else:
            toks[adp - 1][1] = verb
            toks[noun - 1][1] = adp
    add(".", verb)
    return toks


def write(path, sents, rng):
    with open(path, "w") as out:
        for toks in sents:
            for i, (tag, head) in enumerate(toks, 1):
                form = rng.choice(WORDS[tag])
                out.write(f"{i}\t{form}\t{form}\t{tag}\t{head}\t_\n")
            out.write("\n")


def main():
    os.makedirs(os.path.join(DATA, "transfer"), exist_ok=True)
    rng = random.Random(20160101)
    write(os.path.join(DATA, "grammar20.conll"),
          [sentence(rng, LANGS["aa"]) for _ in range(20)], rng)
    sizes = {"aa": 150, "bb": 150, "cc": 150, "tt": 60}
    for lang, size in sizes.items():
        rng = random.Random(sum(map(ord, lang)) * 7919)
        sents = [sentence(rng, LANGS[lang]) for _ in range(size)]
        write(os.path.join(DATA, "transfer", f"{lang}.conll"), sents, rng)


if __name__ == "__main__":
    main()
