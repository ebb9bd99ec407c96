#!/usr/bin/env python3
"""Independent reference for the fixture corpus.

Recomputes every pipeline output from first principles with exact rational
arithmetic: brute-force shortest-path enumeration for betweenness, exhaustive
set-partition search for modularity, exhaustive forest search to confirm the
spanning forest weight. Writes the golden files the C++ pipeline must match
byte for byte.

    golden_oracle.py --write   regenerate tests/golden
    golden_oracle.py --check   regenerate in memory and diff against tests/golden
"""

import argparse
import csv
import io
import itertools
import json
import math
import re
import sys
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
FIXTURE = ROOT / "tests" / "fixtures" / "mini_corpus.csv"

APPLICANT_PATTERNS = [
    "activision blizzard", "activision publishing", "blizzard entertainment", "king.com",
    "activision shanghai", "beenox", "blizzard albany", "demonware", "digital legends entertainment",
    "high moon studios", "infinity ward", "neversoft entertainment", "raven software", "redoctane",
    "sledgehammer games", "solid state studios", "toys for bob", "treyarch", "vicarious visions",
]
APPLICANT_RULES = [
    ("Activision Publishing", ["activision publishing"]),
    ("King.com", ["king.com"]),
    ("Blizzard Entertainment", ["blizzard entertainment"]),
]
FROM_YEAR, TO_YEAR = 2008, 2023
MIN_OCCURRENCE = 2
TOP_K = 10

# Golden runs: directory name -> (level, jaccard threshold).
RUNS = {
    "subclass": ("subclass", Fraction(1, 20)),
    "group": ("group", Fraction(1, 20)),
    "group_t030": ("group", Fraction(3, 10)),
}

CODE_RE = re.compile(r"^([A-H])(?:(\d{2})(?:([A-Z])(?:\s*(\d{1,4})\s*/\s*(\d{1,6}))?)?)?$")
EDITION_RE = re.compile(r"\s*\(\d{4}\.\d{2}\)$")


def parse_code(text):
    s = EDITION_RE.sub("", text.strip().upper()).strip()
    m = CODE_RE.match(s)
    if not m:
        return None
    section, cls, sub, major, minor = m.groups()
    if major is not None and int(major) == 0:
        return None
    return (section, cls, sub, None if major is None else int(major), None if minor is None else int(minor))


def code_at(code, level):
    section, cls, sub, major, minor = code
    if level == "subclass":
        return None if sub is None else f"{section}{cls}{sub}"
    if level == "group":
        return None if major is None else f"{section}{cls}{sub} {major}/{minor:02d}"
    raise ValueError(level)


def load_fixture(path):
    text = path.read_text(encoding="utf-8-sig")
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    assert header == ["patent_id", "office", "publication_date", "applicants", "ipc_codes"], header
    records, skipped, seen, duplicates = [], 0, set(), 0
    for row in body:
        pid, office, date, applicants, codes = (c.strip() for c in row)
        if pid in seen:
            duplicates += 1
            continue
        seen.add(pid)
        parsed = []
        for piece in codes.split(";"):
            if not piece.strip():
                continue
            c = parse_code(piece)
            if c is None:
                skipped += 1
            else:
                parsed.append(c)
        records.append({
            "id": pid, "office": office, "year": int(date[:4]),
            "applicants": [a.strip() for a in applicants.split(";") if a.strip()],
            "codes": parsed,
        })
    return records, {"loaded": len(records), "duplicates": duplicates, "skipped": skipped, "bad": 0}


def matches(applicants, patterns):
    return any(p.lower() in a.lower() for a in applicants for p in patterns)


def filtered(records):
    return [r for r in records
            if matches(r["applicants"], APPLICANT_PATTERNS) and FROM_YEAR <= r["year"] <= TO_YEAR]


# ---------------------------------------------------------------- stats

def stats_files(records, report):
    out = {}
    years = [r["year"] for r in records]
    annual = {y: 0 for y in range(min(years), max(years) + 1)}
    for y in years:
        annual[y] += 1
    out["annual_counts.csv"] = "year,count\n" + "".join(f"{y},{n}\n" for y, n in sorted(annual.items()))

    buckets = [0] * (len(APPLICANT_RULES) + 1)
    for r in records:
        slot = next((i for i, (_, pats) in enumerate(APPLICANT_RULES) if matches(r["applicants"], pats)),
                    len(APPLICANT_RULES))
        buckets[slot] += 1
    labels = [label for label, _ in APPLICANT_RULES] + ["unmatched"]
    applicants = list(zip(labels, buckets))
    out["applicant_counts.csv"] = "label,count\n" + "".join(f"{l},{n}\n" for l, n in applicants if n)

    offices = defaultdict(int)
    for r in records:
        offices[r["office"]] += 1
    office_rows = sorted(offices.items(), key=lambda kv: (-kv[1], kv[0]))
    out["office_counts.csv"] = "office,count\n" + "".join(f"{o},{n}\n" for o, n in office_rows if n)

    lines = [
        f"records loaded: {report['loaded']}",
        f"records after filters: {len(records)}",
        f"duplicate ids dropped: {report['duplicates']}",
        f"malformed codes skipped: {report['skipped']}",
        f"bad rows: {report['bad']}",
        "", "by applicant:",
        *(f"  {l}: {n}" for l, n in applicants),
        "", "by office:",
        *(f"  {o}: {n}" for o, n in office_rows),
        "", "by publication year:",
        *(f"  {y}: {n}" for y, n in sorted(annual.items())),
    ]
    out["stats_summary.txt"] = "\n".join(lines) + "\n"
    return out


# ---------------------------------------------------------------- network

class Network:
    def __init__(self, labels, occurrence, edges):
        self.labels = labels            # sorted
        self.occurrence = occurrence    # list aligned with labels
        self.edges = edges              # {(i, j): (n_ij, union)} with i < j

    def jaccard(self, e):
        n, u = self.edges[e]
        return Fraction(n, u)

    def subset(self, keep):
        return Network(self.labels, self.occurrence, {e: v for e, v in self.edges.items() if e in keep})

    def adjacency(self):
        adj = [set() for _ in self.labels]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def build_network(records, level):
    sets = defaultdict(set)
    for r in records:
        for c in r["codes"]:
            label = code_at(c, level)
            if label is not None:
                sets[label].add(r["id"])
    labels = sorted(l for l, s in sets.items() if len(s) >= MIN_OCCURRENCE)
    edges = {}
    for i, j in itertools.combinations(range(len(labels)), 2):
        a, b = sets[labels[i]], sets[labels[j]]
        if a & b:
            edges[(i, j)] = (len(a & b), len(a | b))
    return Network(labels, [len(sets[l]) for l in labels], edges)


def components(net):
    adj = net.adjacency()
    seen, groups = set(), []
    for v in range(len(net.labels)):
        if v in seen:
            continue
        stack, group = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            group.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        groups.append(sorted(group))
    groups.sort(key=lambda g: (-len(g), g[0]))
    label = [0] * len(net.labels)
    for k, g in enumerate(groups):
        for v in g:
            label[v] = k
    return label, [len(g) for g in groups]


def all_shortest_paths(adj, s, t):
    """Every shortest s-t path by breadth-first layering then exhaustive walk."""
    dist = {s: 0}
    frontier = [s]
    while frontier and t not in dist:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    if t not in dist:
        return []
    paths = []

    def walk(path):
        u = path[-1]
        if u == t:
            paths.append(path)
            return
        for w in adj[u]:
            if dist.get(w) == dist[u] + 1 and len(path) <= dist[t]:
                walk(path + [w])

    walk([s])
    return [p for p in paths if p[-1] == t]


def betweenness(net):
    n = len(net.labels)
    adj = net.adjacency()
    score = [Fraction(0)] * n
    for s, t in itertools.combinations(range(n), 2):
        paths = all_shortest_paths(adj, s, t)
        for p in paths:
            for v in p[1:-1]:
                score[v] += Fraction(1, len(paths))
    if n <= 2:
        return [Fraction(0)] * n
    scale = Fraction(2, (n - 1) * (n - 2))
    return [x * scale for x in score]


def set_partitions(n):
    """Restricted growth strings: each set partition of range(n) exactly once."""
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield list(labels)
            return
        for c in range(top + 2):
            labels[i] = c
            yield from rec(i + 1, max(top, c))

    if n == 0:
        yield []
        return
    yield from rec(1, 0)


def best_partition(net):
    """Exhaustive modularity maximum over Jaccard weights; asserts it is unique."""
    n = len(net.labels)
    den = math.lcm(*(u for _, u in net.edges.values())) if net.edges else 1
    w = {e: n_ij * (den // u) for e, (n_ij, u) in net.edges.items()}  # integer weights
    m = sum(w.values())
    strength = [0] * n
    for (i, j), x in w.items():
        strength[i] += x
        strength[j] += x
    # Degree-zero nodes cannot change Q; they stay singletons, so only the
    # other nodes are enumerated.
    active = [v for v in range(n) if strength[v] > 0]
    isolated = [v for v in range(n) if strength[v] == 0]
    best, best_score = [], None
    # 4 m^2 Q = sum_c (4 m L_c - D_c^2)
    for sub in set_partitions(len(active)):
        labels = [0] * n
        for v, c in zip(active, sub):
            labels[v] = c
        top = max(sub, default=-1)
        for i, v in enumerate(isolated):
            labels[v] = top + 1 + i
        k = max(labels) + 1
        inner = [0] * k
        total = [0] * k
        for (i, j), x in w.items():
            if labels[i] == labels[j]:
                inner[labels[i]] += x
        for v in range(n):
            total[labels[v]] += strength[v]
        score = sum(4 * m * inner[c] - total[c] ** 2 for c in range(k))
        if best_score is None or score > best_score:
            best, best_score = [labels], score
        elif score == best_score:
            best.append(labels)
    assert len(best) == 1, f"modularity optimum is not unique: {best}"
    q = Fraction(best_score, 4 * m * m) if m else Fraction(0)
    groups = defaultdict(list)
    for v, c in enumerate(best[0]):
        groups[c].append(v)
    ordered = sorted(groups.values(), key=lambda g: (-len(g), g[0]))
    label = [0] * n
    for k, g in enumerate(ordered):
        for v in g:
            label[v] = k
    return label, len(ordered), q


def spanning_forest(net):
    """Kruskal by (distance, source, target); weight confirmed by exhaustive search."""
    parent = list(range(len(net.labels)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    order = sorted(net.edges, key=lambda e: (Fraction(net.edges[e][1], net.edges[e][0]), e))
    chosen = set()
    for i, j in order:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            chosen.add((i, j))
    total = sum(Fraction(net.edges[e][1], net.edges[e][0]) for e in chosen)

    _, sizes = components(net)
    size = len(net.labels) - len(sizes)
    best = None
    for subset in itertools.combinations(sorted(net.edges), size):
        p = list(range(len(net.labels)))

        def f(x):
            while p[x] != x:
                x = p[x]
            return x

        ok = True
        for i, j in subset:
            a, b = f(i), f(j)
            if a == b:
                ok = False
                break
            p[a] = b
        if ok:
            wsum = sum(Fraction(net.edges[e][1], net.edges[e][0]) for e in subset)
            best = wsum if best is None else min(best, wsum)
    assert best == total, (best, total)
    return chosen, total


def half_up(frac, digits):
    scaled = frac * 10 ** digits
    q = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    s = str(q).rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:]


def fixed6(frac):
    return "%.6f" % float(frac)


def csv_cell(text):
    if any(c in text for c in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


def metrics_of(net, communities):
    adj = net.adjacency()
    comp, _ = components(net)
    bc = betweenness(net)
    return [{"degree": len(adj[v]), "betweenness": bc[v], "class": communities[v], "component": comp[v]}
            for v in range(len(net.labels))]


def edge_csv(net, with_distance):
    head = "source,target,n_ij,jaccard" + (",distance" if with_distance else "") + "\n"
    rows = []
    for (i, j) in sorted(net.edges):
        n_ij, u = net.edges[(i, j)]
        cells = [net.labels[i], net.labels[j], str(n_ij), half_up(Fraction(n_ij, u), 3)]
        if with_distance:
            cells.append(half_up(Fraction(u, n_ij), 6))
        rows.append(",".join(csv_cell(c) for c in cells) + "\n")
    return head + "".join(rows)


def graphml(net, metrics, with_distance):
    out = ['<?xml version="1.0" encoding="UTF-8"?>\n',
           '<graphml xmlns="http://graphml.graphdrawing.org/xmlns" '
           'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
           'xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns '
           'http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">\n']
    node_keys = [("occurrence", "int"), ("degree", "int"), ("betweenness", "double"),
                 ("modularity_class", "int"), ("component", "int")]
    edge_keys = [("n_ij", "int"), ("jaccard", "double")] + ([("distance", "double")] if with_distance else [])
    k = 0
    for name, kind in node_keys:
        out.append(f'  <key id="d{k}" for="node" attr.name="{name}" attr.type="{kind}"/>\n')
        k += 1
    first_edge = k
    for name, kind in edge_keys:
        out.append(f'  <key id="d{k}" for="edge" attr.name="{name}" attr.type="{kind}"/>\n')
        k += 1
    out.append('  <graph id="G" edgedefault="undirected">\n')
    for v, label in enumerate(net.labels):
        row = metrics[v]
        values = [str(net.occurrence[v]), str(row["degree"]), fixed6(row["betweenness"]), str(row["class"]),
                  str(row["component"])]
        out.append(f'    <node id="{label}">\n')
        out.extend(f'      <data key="d{i}">{x}</data>\n' for i, x in enumerate(values))
        out.append("    </node>\n")
    for idx, (i, j) in enumerate(sorted(net.edges)):
        n_ij, u = net.edges[(i, j)]
        values = [str(n_ij), half_up(Fraction(n_ij, u), 6)] + ([half_up(Fraction(u, n_ij), 6)] if with_distance else [])
        out.append(f'    <edge id="e{idx}" source="{net.labels[i]}" target="{net.labels[j]}">\n')
        out.extend(f'      <data key="d{first_edge + i2}">{x}</data>\n' for i2, x in enumerate(values))
        out.append("    </edge>\n")
    out.append("  </graph>\n</graphml>\n")
    return "".join(out)


def summary_block(title, level, net, sizes, communities):
    lines = [f"[{title}]", f"level: {level}", f"nodes: {len(net.labels)}", f"edges: {len(net.edges)}",
             f"components: {len(sizes)}", "component_sizes:" + "".join(f" {s}" for s in sizes)]
    if communities is not None:
        lines.append(f"communities: {communities}")
    edges = sorted(net.edges)

    def fmt(e):
        n_ij, u = net.edges[e]
        return f"  {net.labels[e[0]]} -- {net.labels[e[1]]} n_ij={n_ij} jaccard={half_up(Fraction(n_ij, u), 3)}"

    by_count = sorted(edges, key=lambda e: (-net.edges[e][0], -net.jaccard(e), e))
    by_jaccard = sorted(edges, key=lambda e: (-net.jaccard(e), -net.edges[e][0], e))
    lines.append("top_edges_by_cooccurrence:")
    lines.extend(fmt(e) for e in by_count[:TOP_K])
    lines.append("top_edges_by_jaccard:")
    lines.extend(fmt(e) for e in by_jaccard[:TOP_K])
    return "\n".join(lines) + "\n"


def network_files(records, level, threshold):
    full = build_network(records, level)
    mod = full.subset({e for e in full.edges if full.jaccard(e) >= threshold})
    classes, community_count, q = best_partition(mod)
    _, mod_sizes = components(mod)
    forest_edges, forest_total = spanning_forest(full)
    mst = full.subset(forest_edges)
    _, mst_sizes = components(mst)
    mod_metrics = metrics_of(mod, classes)
    mst_metrics = metrics_of(mst, classes)

    p = f"{level}_"
    out = {}
    out[p + "nodes.csv"] = "code,occurrence\n" + "".join(
        f"{csv_cell(l)},{o}\n" for l, o in zip(full.labels, full.occurrence))
    out[p + "modularity_edges.csv"] = edge_csv(mod, False)
    out[p + "mst_edges.csv"] = edge_csv(mst, True)

    order = sorted(range(len(full.labels)), key=lambda v: (-full.occurrence[v], v))
    rows = ["code,patents,modularity_class,degree,betweenness,mst_degree,mst_betweenness\n"]
    for v in order:
        a, b = mod_metrics[v], mst_metrics[v]
        rows.append(f"{csv_cell(full.labels[v])},{full.occurrence[v]},{a['class']},{a['degree']},"
                    f"{fixed6(a['betweenness'])},{b['degree']},{fixed6(b['betweenness'])}\n")
    out[p + "metrics.csv"] = "".join(rows)

    summary = [f"patents: {len(records)}", f"min_occurrence: {MIN_OCCURRENCE}",
               f"jaccard_threshold: {half_up(threshold, 3)}", ""]
    text = "\n".join(summary) + "\n"
    text += summary_block("modularity network", level, mod, mod_sizes, community_count)
    text += f"modularity: {fixed6(q)}\n\n"
    text += summary_block("mst network", level, mst, mst_sizes, None)
    text += f"forest_distance: {fixed6(forest_total)}\n"
    out[p + "summary.txt"] = text

    out[p + "modularity.graphml"] = graphml(mod, mod_metrics, False)
    out[p + "mst.graphml"] = graphml(mst, mst_metrics, True)
    return out, {"full": full, "mod": mod, "mst": mst, "communities": community_count,
                 "mod_sizes": mod_sizes, "mst_sizes": mst_sizes}


def fixture_manifest(records, report, facts):
    """A replication manifest whose expectations hold for the fixture."""
    checks = [{"id": "corpus.total", "kind": "corpus_total", "expected": len(records)}]
    offices = defaultdict(int)
    for r in records:
        offices[r["office"]] += 1
    for o, n in sorted(offices.items()):
        checks.append({"id": f"corpus.office.{o}", "kind": "office_count", "office": o, "expected": n})
    for level in ("subclass", "group"):
        f = facts[level]
        for network, net, sizes in (("modularity", f["mod"], f["mod_sizes"]), ("mst", f["mst"], f["mst_sizes"])):
            for metric, value in (("nodes", len(net.labels)), ("edges", len(net.edges)), ("components", len(sizes))):
                checks.append({"id": f"{level}.{network}.{metric}", "kind": "network_count", "level": level,
                               "network": network, "metric": metric, "expected": value})
            checks.append({"id": f"{level}.{network}.component_sizes", "kind": "component_sizes",
                           "level": level, "network": network, "expected": sizes})
        checks.append({"id": f"{level}.modularity.communities", "kind": "network_count", "level": level,
                       "network": "modularity", "metric": "communities", "expected": f["communities"]})
        full = f["full"]
        for v, label in enumerate(full.labels):
            checks.append({"id": f"{level}.{label}.occurrence", "kind": "node_occurrence", "level": level,
                           "code": label, "expected": full.occurrence[v]})
        for (i, j), (n_ij, u) in sorted(full.edges.items()):
            if Fraction(n_ij, u) >= Fraction(1, 20):
                checks.append({"id": f"{level}.edge.{full.labels[i]}--{full.labels[j]}", "kind": "edge",
                               "level": level, "network": "modularity", "source": full.labels[i],
                               "target": full.labels[j], "n_ij": n_ij, "jaccard": half_up(Fraction(n_ij, u), 3)})
    return json.dumps({"description": "Expected values for the 12-record test fixture.", "checks": checks},
                      indent=2) + "\n"


def generate():
    raw, report = load_fixture(FIXTURE)
    records = filtered(raw)
    files = {}
    files.update({f"stats/{k}": v for k, v in stats_files(records, report).items()})
    facts = {}
    for name, (level, threshold) in RUNS.items():
        out, f = network_files(records, level, threshold)
        if threshold == Fraction(1, 20):
            facts[level] = f
        files.update({f"{name}/{k}": v for k, v in out.items()})
    files["fixture_manifest.json"] = fixture_manifest(records, report, facts)
    return files


def main():
    ap = argparse.ArgumentParser()
    mode = ap.add_mutually_exclusive_group(required=True)
    mode.add_argument("--write", action="store_true")
    mode.add_argument("--check", action="store_true")
    ap.add_argument("--golden", type=Path, default=ROOT / "tests" / "golden")
    args = ap.parse_args()

    files = generate()
    if args.write:
        for rel, content in files.items():
            path = args.golden / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(content.encode("utf-8"))
        print(f"wrote {len(files)} golden files under {args.golden}")
        return 0

    stale = [rel for rel, content in sorted(files.items())
             if not (args.golden / rel).is_file()
             or (args.golden / rel).read_bytes().decode("utf-8") != content]
    for rel in stale:
        print(f"golden file out of date: {rel}")
    print(f"{len(files) - len(stale)}/{len(files)} golden files match the oracle")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
