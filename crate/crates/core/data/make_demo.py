"""Regenerates the bundled two-type demo graph (deterministic)."""
import random

rng = random.Random(20210101)
genes = [f"G{i:03d}" for i in range(80)]
diseases = [f"D{i:02d}" for i in range(20)]
edges = set()

# gene-gene interaction network: ring backbone plus random chords
for i, g in enumerate(genes):
    edges.add((g, genes[(i + 1) % len(genes)], "interacts"))
while len(edges) < 240:
    a, b = rng.sample(genes, 2)
    if (b, a, "interacts") not in edges:
        edges.add((a, b, "interacts"))

# each disease is associated with two or three genes
for d in diseases:
    for g in rng.sample(genes, rng.choice([2, 3])):
        edges.add((d, g, "associated"))

# a sparse disease similarity layer
for _ in range(10):
    a, b = rng.sample(diseases, 2)
    edges.add((a, b, "similar"))

with open("demo_edges.tsv", "w") as f:
    f.write("# two-type demo graph: genes and diseases\n")
    for a, b, t in sorted(edges):
        f.write(f"{a}\t{b}\t{t}\t{rng.choice([1, 1, 1, 2])}\n")

with open("demo_node_types.tsv", "w") as f:
    for g in genes:
        f.write(f"{g}\tgene\n")
    for d in diseases:
        f.write(f"{d}\tdisease\n")
