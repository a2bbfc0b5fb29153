#!/usr/bin/env python3
"""Straight-line reference evaluation of the mini-corpus fixture.

Recomputes every signal, the greedy selection and all five gate predicates
from first principles, then prints one TSV row per question. The Rust test
suite compares against the frozen output (expected_gate.tsv).

Usage: pipeline_oracle.py <fixtures dir> <data dir>
"""
import math
import os
import re
import sys
import unicodedata

FIX, DATA = sys.argv[1], sys.argv[2]

SEED = 0x9E3779B97F4A7C15
FNV_PRIME = 0x100000001B3
MASK = (1 << 64) - 1
DIM = 256
LAMBDA, MU, NU = 0.5, 0.3, 0.2
TOP_K, CAND_K, GAMMA, DELTA = 6, 30, 0.5, 0.9
TAU_REL, TAU_SIM, MEAN_REL_MIN, MEAN_MUE_MIN, K_MIN = 0.30, 0.35, 0.60, 0.65, 1
FUZZY = 0.85


def load_list(name):
    with open(os.path.join(DATA, name), encoding="utf-8") as f:
        return [l.strip() for l in f if l.strip() and not l.startswith("#")]


STOP = set(load_list("stopwords.txt"))
SCAFFOLD = set(load_list("scaffold.txt"))
PHRASES = load_list("phrases.txt")


def tokens(text):
    return [t.lower() for t in re.findall(r"[^\W_]+", text)]


def lev(a, b):
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def embed(text):
    toks = tokens(text)
    content = [t for t in toks if t not in STOP] or toks
    v = [0.0] * DIM
    for t in content:
        h = SEED
        for b in t.encode("utf-8"):
            h ^= b
            h = (h * FNV_PRIME) & MASK
        v[h % DIM] += -1.0 if h >> 63 else 1.0
    n = math.sqrt(sum(x * x for x in v))
    return [0.0] * DIM if n == 0 else [x / n for x in v]


def sim(a, b):
    return max(0.0, sum(x * y for x, y in zip(a, b)))


# One unit per line in the fixture files: each line is a single sentence.
units = []
for name in sorted(os.listdir(os.path.join(FIX, "mini_corpus"))):
    with open(os.path.join(FIX, "mini_corpus", name), encoding="utf-8") as f:
        for ordinal, line in enumerate(l.strip() for l in f if l.strip()):
            units.append((name.rsplit(".", 1)[0], ordinal, unicodedata.normalize("NFC", line)))

n_units = len(units)
df = {}
for _, _, text in units:
    for t in set(tokens(text)) - STOP:
        df[t] = df.get(t, 0) + 1
idf = {t: math.log(n_units / d) for t, d in df.items()}
idf_max = max(idf.values()) if idf else 0.0


def ci(text):
    terms = set(tokens(text)) - STOP
    if idf_max == 0 or not terms:
        return 0.0
    return sum(min(1.0, idf.get(t, idf_max) / idf_max) for t in terms) / len(terms)


vecs = [embed(t) for _, _, t in units]


def contains_seq(hay, needle):
    return any(hay[i:i + len(needle)] == needle for i in range(len(hay) - len(needle) + 1))


def run(question):
    terms = {t for t in tokens(question) if t not in STOP and t not in SCAFFOLD and len(t) >= 3}
    qtok = tokens(question)
    matched = [p for p in PHRASES if contains_seq(qtok, p.split())]
    qv = embed(question)
    pairs = sorted(((sim(qv, v), i) for i, v in enumerate(vecs)), key=lambda p: (-p[0], p[1]))[:CAND_K]
    scored = []
    for s, i in pairs:
        utoks = set(tokens(units[i][2]))
        if terms:
            covered = 0
            for t in terms:
                if t in utoks or any(1 - lev(t, u) / max(len(t), len(u)) >= FUZZY for u in utoks):
                    covered += 1
            rel = covered / len(terms)
        else:
            rel = 0.0
        c = ci(units[i][2])
        scored.append(dict(i=i, sim=s, rel=rel, ci=c, mue=LAMBDA * c + MU * s + NU * rel))
    selected = []
    pool = list(scored)
    while pool and len(selected) < TOP_K:
        if selected:
            pool = [c for c in pool if max(sim(vecs[c["i"]], vecs[e["i"]]) for e in selected) < DELTA]
            if not pool:
                break
            best = max(pool, key=lambda c: (c["mue"] - GAMMA * max(sim(vecs[c["i"]], vecs[e["i"]]) for e in selected), -c["i"]))
        else:
            best = max(pool, key=lambda c: (c["mue"], -c["i"]))
        selected.append(best)
        pool.remove(best)
    n = len(selected)
    mean_rel = sum(c["rel"] for c in selected) / n if n else 0.0
    mean_mue = sum(c["mue"] for c in selected) / n if n else 0.0
    max_sim = max((c["sim"] for c in selected), default=0.0)
    max_rel = max((c["rel"] for c in selected), default=0.0)
    anchor = any(c["rel"] >= TAU_REL and c["sim"] >= TAU_SIM for c in selected)
    phrase = True
    if matched:
        phrase = any(contains_seq(tokens(units[c["i"]][2]), p.split()) for c in selected for p in matched)
    reasons = []
    if n < K_MIN:
        reasons.append("COUNT")
    if mean_rel < MEAN_REL_MIN:
        reasons.append("MEAN_REL")
    if mean_mue < MEAN_MUE_MIN:
        reasons.append("MEAN_MUE")
    if not anchor:
        reasons.append("ANCHOR")
    if not phrase:
        reasons.append("PHRASE")
    gate = "FAIL" if reasons else "PASS"
    sel = ",".join("%s:%d" % units[c["i"]][:2] for c in selected)
    return [question, gate, ",".join(reasons), str(n), "%.6f" % mean_rel, "%.6f" % mean_mue,
            "%.6f" % max_sim, "%.6f" % max_rel, str(int(anchor)), str(int(phrase)), sel]


print("question\tgate\treasons\tn\tmean_rel\tmean_mue\tmax_sim\tmax_rel\tanchor_ok\tphrase_ok\tselected")
with open(os.path.join(FIX, "questions.txt"), encoding="utf-8") as f:
    for q in (l.strip() for l in f):
        if q:
            print("\t".join(run(q)))
