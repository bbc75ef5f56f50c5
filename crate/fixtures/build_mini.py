"""Writes mini.jsonl and its manifest. Counts in the manifest are tallied
from the records here, not from the Rust code."""
import json
from collections import Counter

POSTS = [
    ("abortion-001", "abortion", 14, [
        ("I believe abortion should stay legal.", "claim", []),
        ("If the state forces a birth, it takes control of a body that is not its own.", "premise", ["logos"]),
        ("My cousin had to travel three states last year to get care.", "premise", ["evidence"]),
        ("She felt alone and scared the whole time.", "premise", ["pathos"]),
        ("Thanks for reading.", "non_argument", []),
    ], [(1, 0), (2, 0), (3, 0)]),
    ("abortion-002", "abortion", 5, [
        ("Interesting question.", "non_argument", []),
        ("Nobody should decide this for a pregnant woman.", "claim", []),
        ("I worked as a nurse in a clinic for ten years.", "premise", ["ethos"]),
        ("When I saw the waiting lists, it was clear that delays make procedures riskier.", "premise", ["evidence", "logos"]),
        ("Late limits are a different matter.", "claim", []),
        ("Viability changes the moral weight of the decision.", "premise", ["logos"]),
    ], [(2, 1), (3, 1), (5, 4)]),
    ("parenthood-001", "parenthood", 9, [
        ("Parenthood is a choice, not a duty.", "claim", []),
        ("If people had children only out of pressure, those children would grow up resented.", "premise", ["logos"]),
        ("Since raising a child costs so much, waiting until you are ready is rational.", "premise", ["logos"]),
        ("Last year my friend had a baby before she was ready and dropped out of school.", "premise", ["evidence"]),
        ("It breaks my heart to see how miserable she is.", "premise", ["pathos"]),
    ], [(1, 0), (2, 0), (3, 0), (4, 0)]),
]


def record(post_id, topic, delta, sents, edges):
    body = " ".join(s for s, _, _ in sents)
    spans, at = [], 0
    for i, (s, _, _) in enumerate(sents):
        spans.append({"index": i, "start": at, "end": at + len(s.encode())})
        at += len(s.encode()) + 1
    return {
        "post_id": post_id,
        "topic": topic,
        "delta": delta,
        "body": body,
        "sentences": spans,
        "annotations": [
            {"sentence_index": i, "component": c, "strategies": sorted(st)}
            for i, (_, c, st) in enumerate(sents)
        ],
        "edges": [{"premise_index": p, "claim_index": c, "label": 1} for p, c in edges],
    }


def shortfall():
    """Per claim: positives minus available same-post non-supporting premises."""
    total = 0
    for _, _, _, sents, es in POSTS:
        premises = {i for i, (_, c, _) in enumerate(sents) if c == "premise"}
        for ci, (_, c, _) in enumerate(sents):
            if c != "claim":
                continue
            support = {p for p, cc in es if cc == ci}
            total += max(0, len(support) - len(premises - support))
    return total


def main():
    with open("mini.jsonl", "w") as f:
        for p in POSTS:
            f.write(json.dumps(record(*p), sort_keys=True) + "\n")
    comp, strat, topics = Counter(), Counter(), Counter()
    sentences = edges = 0
    for _, topic, _, sents, es in POSTS:
        topics[topic] += 1
        sentences += len(sents)
        edges += len(es)
        for _, c, st in sents:
            comp[c] += 1
            strat.update(st)
    manifest = {
        "posts": len(POSTS),
        "sentences": sentences,
        "claims": comp["claim"],
        "premises": comp["premise"],
        "non_arguments": comp["non_argument"],
        "logos": strat["logos"],
        "pathos": strat["pathos"],
        "ethos": strat["ethos"],
        "evidence": strat["evidence"],
        "support_edges": edges,
        "topics": dict(sorted(topics.items())),
        "relation_shortfall": shortfall(),
    }
    with open("mini.manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
