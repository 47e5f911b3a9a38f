#!/usr/bin/env python3
"""Build the bundled 20-strategy reference corpus and its companion files.

The corpus is synthetic. Component presence counts, the strongest aligned
pairs and the coverage range are pinned to the published aggregates; every
other detail (prominence, evidence patterns) is drawn from a seeded RNG so
the output is reproducible byte for byte.

    python3 tools/make_reference_corpus.py crates/core/fixtures
"""

import csv
import io
import json
import math
import random
import sys
from pathlib import Path

SEED = 20250417

OBJ = ["OBJ.ECON_COMP", "OBJ.SCI_LEAD", "OBJ.INDUSTRY_DIGITAL", "OBJ.PUBLIC_SECTOR",
       "OBJ.WORKFORCE", "OBJ.SOCIAL_WELFARE", "OBJ.ETHICS", "OBJ.REGULATORY",
       "OBJ.DATA_ECOSYSTEM", "OBJ.INTL_COLLAB", "OBJ.SECURITY", "OBJ.ENVIRONMENT"]
FOR = ["FOR.HORIZON", "FOR.SCENARIO", "FOR.DELPHI", "FOR.EXPERT_PANEL",
       "FOR.ROADMAP", "FOR.TREND", "FOR.WORKSHOP", "FOR.CROSS_IMPACT"]
INS = ["INS.RESEARCH_FUNDING", "INS.SKILLS", "INS.REGULATORY", "INS.INSTITUTIONS",
       "INS.PROCUREMENT", "INS.TAX", "INS.STANDARDS", "INS.DEMONSTRATION",
       "INS.NETWORKING", "INS.INTL_AGREEMENTS"]

# Number of strategies (out of 20) containing each component.
COUNTS = {
    "OBJ.ECON_COMP": 19, "OBJ.SCI_LEAD": 18, "OBJ.INDUSTRY_DIGITAL": 15,
    "OBJ.PUBLIC_SECTOR": 14, "OBJ.WORKFORCE": 13, "OBJ.SOCIAL_WELFARE": 11,
    "OBJ.ETHICS": 17, "OBJ.REGULATORY": 12, "OBJ.DATA_ECOSYSTEM": 10,
    "OBJ.INTL_COLLAB": 13, "OBJ.SECURITY": 9, "OBJ.ENVIRONMENT": 6,
    "FOR.EXPERT_PANEL": 16, "FOR.HORIZON": 13, "FOR.SCENARIO": 11, "FOR.ROADMAP": 9,
    "FOR.TREND": 8, "FOR.WORKSHOP": 7, "FOR.DELPHI": 5, "FOR.CROSS_IMPACT": 4,
    "INS.RESEARCH_FUNDING": 19, "INS.SKILLS": 17, "INS.REGULATORY": 15,
    "INS.INSTITUTIONS": 14, "INS.NETWORKING": 13, "INS.STANDARDS": 12,
    "INS.PROCUREMENT": 11, "INS.INTL_AGREEMENTS": 11, "INS.DEMONSTRATION": 10,
    "INS.TAX": 8,
}

# Pairs pinned at full alignment, with the number of strategies.
STRONG = [
    ("OBJ.ECON_COMP", "INS.RESEARCH_FUNDING", 17),
    ("OBJ.SCI_LEAD", "FOR.EXPERT_PANEL", 16),
    ("OBJ.PUBLIC_SECTOR", "INS.INSTITUTIONS", 14),
    ("OBJ.ETHICS", "INS.REGULATORY", 13),
]
OTHER_STRONG_CAP = 10
GAP_PAIR = ("OBJ.WORKFORCE", "INS.SKILLS")
GAP_COUNT = 6

# country, title, year, model, region, breadth, target coverage
META = [
    ("Canada", "Pan-Canadian AI Strategy", 2017, "market_led", "north_america", 0.55, 0.55),
    ("China", "New Generation AI Dev. Plan", 2017, "state_directed", "east_asia", 0.70, 0.45),
    ("Finland", "Finland's AI Era", 2017, "rights_based", "europe", 0.95, 0.78),
    ("France", "AI for Humanity", 2018, "state_directed", "europe", 0.75, 0.58),
    ("Germany", "AI Strategy for Germany", 2018, "risk_focused", "europe", 0.80, 0.62),
    ("India", "National Strategy for AI", 2018, "hybrid", "south_asia", 0.40, 0.38),
    ("Japan", "AI Strategy 2019", 2019, "market_led", "east_asia", 0.60, 0.50),
    ("Netherlands", "Strategic Action Plan for AI", 2019, "rights_based", "europe", 0.85, 0.70),
    ("Norway", "National Strategy for AI", 2020, "rights_based", "europe", 0.80, 0.72),
    ("Singapore", "National AI Strategy", 2019, "state_directed", "southeast_asia", 0.65, 0.60),
    ("South Korea", "National Strategy for AI", 2019, "hybrid", "east_asia", 0.60, 0.47),
    ("UAE", "National AI Strategy 2031", 2019, "state_directed", "middle_east", 0.35, 0.40),
    ("UK", "AI Sector Deal / National AI Strategy", 2018, "market_led", "europe", 0.75, 0.56),
    ("USA", "American AI Initiative / National AI R&D Strategic Plan", 2019, "market_led",
     "north_america", 0.70, 0.52),
    ("Brazil", "Brazilian AI Strategy", 2021, "hybrid", "latin_america", 0.30, 0.35),
    ("Spain", "Spanish Strategy for AI", 2020, "rights_based", "europe", 0.65, 0.64),
    ("Australia", "Australia's AI Action Plan", 2021, "market_led", "oceania", 0.45, 0.48),
    ("Denmark", "National Strategy for AI", 2019, "rights_based", "europe", 0.90, 0.74),
    ("Sweden", "National Approach to AI", 2018, "rights_based", "europe", 0.50, 0.68),
    ("Italy", "National Strategy for AI", 2020, "hybrid", "europe", 0.55, 0.44),
]

# Synthetic external indicators and the correlation each is built to show.
INDICATORS = [
    ("coordination_index", "mean", 0.67),
    ("stakeholder_engagement", "coverage", 0.59),
    ("ai_readiness", "sai", 0.54),
]


def kind(code):
    return code.split(".")[0]


def cross_pairs(present):
    """Present cross-kind pairs in canonical matrix order."""
    order = OBJ + FOR + INS
    blocks = [(OBJ, FOR), (OBJ, INS), (FOR, INS)]
    return [(a, b) for rows, cols in blocks for a in rows for b in cols
            if a in present and b in present and order.index(a) < order.index(b)]


def choose(rng, load, capacity, count, pool):
    """The `count` countries in `pool` with the most spare capacity."""
    ranked = sorted(pool, key=lambda c: -((capacity[c] - load[c]) / capacity[c] + rng.uniform(-0.15, 0.15)))
    picked = set(ranked[:count])
    for c in picked:
        load[c] += 1
    return picked


def assign_presence(rng, countries, breadth):
    total = sum(COUNTS.values())
    weight = {c: 0.6 + breadth[c] for c in countries}
    capacity = {c: total * weight[c] / sum(weight.values()) for c in countries}
    load = {c: 0 for c in countries}
    present = {}
    for code in sorted(COUNTS, key=lambda k: -COUNTS[k]):
        if code in ("FOR.EXPERT_PANEL", "INS.INSTITUTIONS"):
            continue
        present[code] = choose(rng, load, capacity, COUNTS[code], countries)
        if code == "OBJ.SCI_LEAD":
            present["FOR.EXPERT_PANEL"] = choose(rng, load, capacity, COUNTS["FOR.EXPERT_PANEL"],
                                                 sorted(present[code]))
        if code == "OBJ.PUBLIC_SECTOR":
            present["INS.INSTITUTIONS"] = set(present[code])
            for c in present[code]:
                load[c] += 1
    return present


def evidence_for(rng, score):
    if score == 3:
        return {"lexical_proximity": True, "explicit_reference": True, "elaboration": True}
    if score == 2:
        return rng.choice([
            {"lexical_proximity": True, "explicit_reference": False, "elaboration": False},
            {"lexical_proximity": False, "explicit_reference": True, "elaboration": False},
            {"lexical_proximity": True, "explicit_reference": True, "elaboration": False},
            {"lexical_proximity": False, "explicit_reference": True, "elaboration": True},
        ])
    return {"lexical_proximity": False, "explicit_reference": False, "elaboration": False}


def build(seed):
    rng = random.Random(seed)
    countries = [m[0] for m in META]
    breadth = {m[0]: m[5] for m in META}
    target = {m[0]: m[6] for m in META}
    present = assign_presence(rng, countries, breadth)
    has = {c: {code for code, cs in present.items() if c in cs} for c in countries}

    pinned = {}  # (country, a, b) -> score
    for a, b, n in STRONG:
        both = [c for c in countries if c in present[a] and c in present[b]]
        if len(both) < n:
            return None
        ranked = sorted(both, key=lambda c: -(target[c] + rng.uniform(-0.2, 0.2)))
        for c in ranked[:n]:
            pinned[(c, a, b)] = 3
        for c in ranked[n:]:
            pinned[(c, a, b)] = 2
    gap_both = [c for c in countries if c in present[GAP_PAIR[0]] and c in present[GAP_PAIR[1]]]
    if len(gap_both) < GAP_COUNT:
        return None
    for c in sorted(gap_both, key=lambda c: target[c] + rng.uniform(-0.2, 0.2))[:GAP_COUNT]:
        pinned[(c, *GAP_PAIR)] = 1

    strong_other = {}
    strategies = []
    for m in META:
        country, title, year, model, region, _, tgt = m
        pairs = cross_pairs(has[country])
        k = round(tgt * len(pairs))
        if abs(k / len(pairs) - tgt) > 0.004:
            return None
        scores = {}
        free = []
        for a, b in pairs:
            s = pinned.get((country, a, b))
            if s is None:
                free.append((a, b))
            else:
                scores[(a, b)] = s
        need = k - sum(1 for s in scores.values() if s >= 2)
        if need < 0 or need > len(free):
            return None
        rng.shuffle(free)
        # pairs touching an economic objective or funding are linked more often
        free.sort(key=lambda p: -(("ECON" in p[0] or "FUNDING" in p[1]) * 0.5 + rng.random()))
        for i, (a, b) in enumerate(free):
            if i < need:
                s = 2
                if rng.random() < 0.3 and strong_other.get((a, b), 0) < OTHER_STRONG_CAP:
                    s = 3
                    strong_other[(a, b)] = strong_other.get((a, b), 0) + 1
                scores[(a, b)] = s
            else:
                scores[(a, b)] = 1

        codings = []
        for code in OBJ + FOR + INS:
            if code not in has[country]:
                continue
            coding = {"component": code, "prominence": rng.choice([1, 2, 2, 3, 3])}
            if kind(code) == "INS":
                coding["specificity"] = rng.choice([1, 2, 2, 3])
            elif kind(code) == "FOR":
                coding["explicit_method"] = rng.random() < 0.6
            else:
                coding["intensity_subscores"] = [rng.choice([1, 2, 3]) for _ in range(3)]
            codings.append(coding)
        cells = []
        for a, b in pairs:
            s = scores[(a, b)]
            if s == 1 and rng.random() < 0.7:
                continue  # no linkage recorded at all
            cells.append({"a": a, "b": b, "evidence": evidence_for(rng, s)})
        strategies.append({
            "meta": {"country": country, "strategy_title": title, "publication_year": year,
                     "governance_model": model, "region": region},
            "codings": codings,
            "cells": cells,
        })
    return {"schema_version": "1", "strategies": strategies}


def score_of(strategy, a, b):
    codes = {c["component"] for c in strategy["codings"] if c["prominence"] >= 1}
    if a not in codes or b not in codes:
        return 0
    for cell in strategy["cells"]:
        if {cell["a"], cell["b"]} == {a, b}:
            d = sum(cell["evidence"].values())
            return 3 if d == 3 else 2 if d >= 1 else 1
    return 1


def indices(strategy):
    codes = {c["component"] for c in strategy["codings"] if c["prominence"] >= 1}
    scores = [score_of(strategy, a, b) for a, b in cross_pairs(codes)]
    mean = sum(scores) / len(scores)
    return {"coverage": sum(s >= 2 for s in scores) / len(scores), "mean": mean, "sai": mean / 3}


def check(corpus):
    strategies = corpus["strategies"]
    for code, n in COUNTS.items():
        got = sum(any(c["component"] == code for c in s["codings"]) for s in strategies)
        assert got == n, (code, got, n)
    for a, b, n in STRONG:
        got = sum(score_of(s, a, b) == 3 for s in strategies)
        assert got == n, (a, b, got)
    for a in OBJ + FOR:
        for b in FOR + INS:
            if kind(a) == kind(b) or (a, b, ) in [(x, y) for x, y, _ in STRONG]:
                continue
            got = sum(score_of(s, a, b) == 3 for s in strategies)
            assert got <= 12, (a, b, got)
    cov = {s["meta"]["country"]: indices(s)["coverage"] for s in strategies}
    assert abs(min(cov.values()) - 0.35) <= 0.005 and abs(max(cov.values()) - 0.78) <= 0.005, cov
    assert max(cov, key=cov.get) == "Finland"


def indicator_rows(corpus, seed):
    rng = random.Random(seed + 1)
    rows = []
    series = {s["meta"]["country"]: indices(s) for s in corpus["strategies"]}
    countries = sorted(series)
    for name, against, r in INDICATORS:
        y = [series[c][against] for c in countries]
        n = len(y)
        my = sum(y) / n
        sy = math.sqrt(sum((v - my) ** 2 for v in y))
        zy = [(v - my) / sy for v in y]
        e = [rng.gauss(0, 1) for _ in countries]
        me = sum(e) / n
        e = [v - me for v in e]
        proj = sum(a * b for a, b in zip(e, zy))
        e = [a - proj * b for a, b in zip(e, zy)]
        se = math.sqrt(sum(v * v for v in e))
        ze = [v / se for v in e]
        x = [r * a + math.sqrt(1 - r * r) * b for a, b in zip(zy, ze)]
        for c, v in zip(countries, x):
            rows.append((c, name, f"{50 + 60 * v:.6f}"))
    return rows


def second_coder(corpus, seed, p_component, p_cell):
    """A second independent coding: each catalog decision flips with
    probability `p_component`, each recorded cell is re-scored with
    probability `p_cell`."""
    rng = random.Random(seed + 2)
    b = json.loads(json.dumps(corpus))
    for s in b["strategies"]:
        s["coder_id"] = "coder-b"
        coded = {c["component"]: c for c in s["codings"]}
        for code in OBJ + FOR + INS:
            if rng.random() >= p_component:
                continue
            if code in coded:
                del coded[code]
                s["cells"] = [c for c in s["cells"] if code not in (c["a"], c["b"])]
            else:
                coded[code] = {"component": code, "prominence": 1}
                if kind(code) == "INS":
                    coded[code]["specificity"] = 1
                elif kind(code) == "FOR":
                    coded[code]["explicit_method"] = False
                else:
                    coded[code]["intensity_subscores"] = [1, 1, 1]
        order = OBJ + FOR + INS
        s["codings"] = [coded[c] for c in order if c in coded]
        for cell in s["cells"]:
            if rng.random() < p_cell:
                cell["evidence"] = evidence_for(rng, rng.choice([1, 2, 3]))
    return b


def cohen(x, y):
    n = len(x)
    labels = sorted(set(x) | set(y))
    po = sum(a == b for a, b in zip(x, y)) / n
    pe = sum((x.count(l) / n) * (y.count(l) / n) for l in labels)
    return 1.0 if pe == 1 else (po - pe) / (1 - pe)


def linear_weighted(x, y, k=4):
    n = len(x)
    w = lambda i, j: abs(i - j) / (k - 1)
    do = sum(w(a, b) for a, b in zip(x, y)) / n
    px = [x.count(i) / n for i in range(k)]
    py = [y.count(i) / n for i in range(k)]
    de = sum(px[i] * py[j] * w(i, j) for i in range(k) for j in range(k))
    return 1 - do / de


def present_codes(s):
    return {c["component"] for c in s["codings"] if c["prominence"] >= 1}


def kappas(a, b):
    ida, idb, sa, sb = [], [], [], []
    by_country = {s["meta"]["country"]: s for s in b["strategies"]}
    for s in a["strategies"]:
        t = by_country[s["meta"]["country"]]
        pa, pb = present_codes(s), present_codes(t)
        for code in OBJ + FOR + INS:
            ida.append(code in pa)
            idb.append(code in pb)
        for x, y in cross_pairs(pa & pb):
            sa.append(score_of(s, x, y))
            sb.append(score_of(t, x, y))
    return cohen(ida, idb), linear_weighted(sa, sb)


def adjudicate(a, b):
    """Rule every disagreement in favour of coder A."""
    out = []
    by_country = {s["meta"]["country"]: s for s in b["strategies"]}
    for s in a["strategies"]:
        country = s["meta"]["country"]
        t = by_country[country]
        pa, pb = present_codes(s), present_codes(t)
        for code in OBJ + FOR + INS:
            if (code in pa) != (code in pb):
                out.append({"country": country, "component": code, "include": code in pa})
        for x, y in cross_pairs(pa & pb):
            if score_of(s, x, y) != score_of(t, x, y):
                out.append({"country": country, "cell": [x, y], "resolution": "coder_a"})
    return {"adjudications": out}


def dump(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for attempt in range(10_000):
        corpus = build(SEED + attempt)
        if corpus is None:
            continue
        try:
            check(corpus)
        except AssertionError:
            continue
        break
    else:
        sys.exit("no seed satisfied the constraints")
    (out / "reference.json").write_text(dump(corpus))

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["country", "indicator", "value"])
    w.writerows(indicator_rows(corpus, SEED))
    (out / "indicators.csv").write_text(buf.getvalue())

    coder_a = json.loads(json.dumps(corpus))
    for s in coder_a["strategies"]:
        s["coder_id"] = "coder-a"
    best = None
    for i in range(4, 16):
        for j in range(10, 40):
            b = second_coder(coder_a, SEED, i / 200, j / 100)
            ki, ka = kappas(coder_a, b)
            err = abs(ki - 0.78) + abs(ka - 0.72)
            if best is None or err < best[0]:
                best = (err, b, ki, ka)
    _, coder_b, ki, ka = best
    (out / "coder_a.json").write_text(dump(coder_a))
    (out / "coder_b.json").write_text(dump(coder_b))
    (out / "adjudications.json").write_text(dump(adjudicate(coder_a, coder_b)))
    print(f"second coder: kappa identification {ki:.4f}, alignment {ka:.4f}")
    print(f"seed offset {attempt}; wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/fixtures")
