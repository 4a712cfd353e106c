#!/usr/bin/env python3
"""Writes the 200-sentence CoNLL-U fixture used by the mining tests.

Two target verbs (体验, 结婚) each get one dominant clause pattern repeated
many times plus a minority pattern; filler sentences use other verbs.
"""
import random
import sys

TAGS = {"VERB": "VV", "NOUN": "NN", "PRON": "PN", "PUNCT": "PU", "ADP": "P",
        "PART": "AS", "ADV": "AD", "PROPN": "NR", "ADJ": "JJ"}


def sentence(tokens):
    """tokens: (form, upos, head, deprel) with 1-based heads."""
    return tokens


def tiyan_main(rng):
    subj = rng.choice(["我们", "他们", "学生", "游客", "大家"])
    obj = rng.choice(["生活", "文化", "乐趣", "农村生活", "传统文化"])
    return [(subj, "PRON", 4, "nsubj"), ("周末", "NOUN", 4, "nmod:tmod"),
            ("去", "ADV", 4, "advmod"), ("体验", "VERB", 0, "root"),
            (obj, "NOUN", 4, "dobj"), ("。", "PUNCT", 4, "punct")]


def tiyan_minor(rng):
    subj = rng.choice(["他", "她", "孩子"])
    obj = rng.choice(["文化", "生活"])
    return [(subj, "PRON", 2, "nsubj"), ("想", "VERB", 0, "root"),
            ("体验", "VERB", 2, "xcomp"), (obj, "NOUN", 3, "dobj"),
            ("。", "PUNCT", 2, "punct")]


def jiehun_main(rng):
    subj = rng.choice(["他", "小王", "哥哥", "老李"])
    obj = rng.choice(["她", "女朋友", "小丽"])
    return [(subj, "PRON", 4, "nsubj"), ("和", "ADP", 3, "case"),
            (obj, "PRON", 4, "nmod:prep"), ("结婚", "VERB", 0, "root"),
            ("了", "PART", 4, "aux:asp"), ("。", "PUNCT", 4, "punct")]


def jiehun_minor(rng):
    subj = rng.choice(["他们", "我们"])
    return [(subj, "PRON", 2, "nsubj"), ("决定", "VERB", 0, "root"),
            ("明年", "NOUN", 4, "nmod:tmod"), ("结婚", "VERB", 2, "ccomp"),
            ("。", "PUNCT", 2, "punct")]


def filler(rng):
    subj = rng.choice(["我", "你", "老师"])
    verb = rng.choice(["喜欢", "学习", "看"])
    obj = rng.choice(["书", "中文", "电影"])
    return [(subj, "PRON", 2, "nsubj"), (verb, "VERB", 0, "root"),
            (obj, "NOUN", 2, "dobj"), ("。", "PUNCT", 2, "punct")]


def noun_use(rng):
    return [("这", "PRON", 4, "nsubj"), ("是", "VERB", 4, "cop"),
            ("难忘", "ADJ", 4, "amod"), ("体验", "NOUN", 0, "root"),
            ("。", "PUNCT", 4, "punct")]


def main():
    rng = random.Random(20240601)
    plan = ([tiyan_main] * 70 + [tiyan_minor] * 12 + [jiehun_main] * 70 +
            [jiehun_minor] * 12 + [noun_use] * 6 + [filler] * 30)
    assert len(plan) == 200
    rng.shuffle(plan)
    out = []
    for i, make in enumerate(plan, start=1):
        toks = make(rng)
        out.append(f"# sent_id = f{i:03d}")
        out.append("# text = " + "".join(t[0] for t in toks))
        for j, (form, upos, head, rel) in enumerate(toks, start=1):
            out.append("\t".join([str(j), form, form, upos, TAGS[upos], "_",
                                  str(head), rel, "_", "_"]))
        out.append("")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
