#!/usr/bin/env python3
"""Writes a small labelled verb-usage dataset with matching CoNLL-U parses.

Correct items follow the dominant fixture patterns; error items attach an
object to 结婚 or drop the object of 体验 in favour of a subject-only use.
Usage: gen_ged_fixture.py DATA.jsonl PARSES.conllu
"""
import json
import random
import sys

TAGS = {"VERB": "VV", "NOUN": "NN", "PRON": "PN", "PUNCT": "PU", "ADP": "P",
        "PART": "AS", "ADV": "AD"}


def tiyan_ok(rng):
    subj = rng.choice(["我们", "游客", "学生"])
    obj = rng.choice(["生活", "文化", "乐趣"])
    return [(subj, "PRON", 4, "nsubj"), ("周末", "NOUN", 4, "nmod:tmod"),
            ("去", "ADV", 4, "advmod"), ("体验", "VERB", 0, "root"),
            (obj, "NOUN", 4, "dobj"), ("。", "PUNCT", 4, "punct")], "体验", "correct"


def tiyan_bad(rng):
    subj = rng.choice(["生活", "文化"])
    return [(subj, "NOUN", 2, "nsubj"), ("体验", "VERB", 0, "root"),
            ("我们", "PRON", 2, "iobj"), ("。", "PUNCT", 2, "punct")], "体验", "error"


def jiehun_ok(rng):
    subj = rng.choice(["他", "哥哥", "老李"])
    obj = rng.choice(["她", "小丽"])
    return [(subj, "PRON", 4, "nsubj"), ("和", "ADP", 3, "case"),
            (obj, "PRON", 4, "nmod:prep"), ("结婚", "VERB", 0, "root"),
            ("了", "PART", 4, "aux:asp"), ("。", "PUNCT", 4, "punct")], "结婚", "correct"


def jiehun_bad(rng):
    subj = rng.choice(["他", "哥哥"])
    obj = rng.choice(["她", "小丽"])
    return [(subj, "PRON", 2, "nsubj"), ("结婚", "VERB", 0, "root"),
            (obj, "PRON", 2, "dobj"), ("了", "PART", 2, "aux:asp"),
            ("。", "PUNCT", 2, "punct")], "结婚", "error"


def main():
    data_path, parse_path = sys.argv[1], sys.argv[2]
    rng = random.Random(7)
    plan = [tiyan_ok] * 10 + [tiyan_bad] * 10 + [jiehun_ok] * 10 + [jiehun_bad] * 10
    rng.shuffle(plan)
    records, conllu = [], []
    for i, make in enumerate(plan, start=1):
        toks, verb, label = make(rng)
        text = "".join(t[0] for t in toks)
        begin = text.index(verb)
        sid = f"g{i:03d}"
        records.append({"id": sid, "text": text, "verb": verb, "begin-offset": begin,
                        "end-offset": begin + len(verb), "label": label})
        conllu.append(f"# sent_id = {sid}")
        conllu.append(f"# text = {text}")
        for j, (form, upos, head, rel) in enumerate(toks, start=1):
            conllu.append("\t".join([str(j), form, form, upos, TAGS[upos], "_",
                                     str(head), rel, "_", "_"]))
        conllu.append("")
    with open(data_path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    with open(parse_path, "w", encoding="utf-8") as f:
        f.write("\n".join(conllu) + "\n")


if __name__ == "__main__":
    main()
