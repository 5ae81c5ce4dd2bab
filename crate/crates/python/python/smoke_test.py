"""Smoke test for the hetwalk_py extension module.

Build and install first, e.g. `maturin develop` from crates/python, then run
`python python/smoke_test.py`.
"""

import math
import pathlib
import tempfile

import hetwalk_py as hw

DATA = pathlib.Path(__file__).resolve().parents[2] / "core" / "data"


def check_graph():
    # triangle 0-1-2 plus a pendant 3, two node types, two edge types
    g = hw.Graph.from_edge_list(
        [0, 0, 1, 1],
        2,
        [(0, 1, 0, 1.0), (1, 2, 0, 2.0), (0, 2, 1, 1.0), (2, 3, 1, 1.0), (0, 1, 1, 0.5)],
    )
    assert g.node_count == 4
    assert sorted(n for n, _, _ in g.neighbors(1)) == [0, 0, 2]

    plain = hw.BiasParams()
    dist = hw.transition_distribution(g, plain, 0, 1, 2)
    assert math.isclose(sum(p for _, _, p in dist), 1.0, abs_tol=1e-12)
    total = sum(w for _, _, w in g.neighbors(2))
    for (node, etype, prob), (n2, t2, w) in zip(dist, g.neighbors(2)):
        assert (node, etype) == (n2, t2)
        assert math.isclose(prob, w / total, abs_tol=1e-12)

    biased = hw.BiasParams(2.0, 3.0, s=4.0, e=5.0)
    assert biased.gamma(2, 0, 1, 0, 1) == 1.0 / 60.0
    try:
        hw.BiasParams(s=2.0, s_matrix=[[1.0, 2.0], [2.0, 1.0]])
    except ValueError:
        pass
    else:
        raise AssertionError("conflicting switch models accepted")
    return g


def check_pipeline():
    g = hw.Graph.load(str(DATA / "demo_edges.tsv"), str(DATA / "demo_node_types.tsv"))
    disease = g.node_type_id("disease")
    fractions = []
    for s in (1.0, 0.1):
        params = hw.BiasParams(special_node_types=[disease], s_to=s, s_from=s)
        walks = hw.generate_walks(g, params, walk_length=40, num_walks=5, seed=7, threads=2)
        assert len(walks) == 5 * g.node_count
        stats = hw.walk_stats(g, walks)
        assert math.isclose(sum(stats["node_type_fraction"].values()), 1.0, abs_tol=1e-12)
        fractions.append(stats["node_type_fraction"]["disease"])
    assert fractions[1] > fractions[0], fractions

    again = hw.generate_walks(g, params, walk_length=40, num_walks=5, seed=7, threads=1)
    assert again == walks

    emb = hw.train_embeddings(walks, g.node_count, dims=16, epochs=2, window=5)
    assert (emb.rows, emb.dims) == (g.node_count, 16)
    nearest = emb.neighbors(0, top_k=3)
    assert len(nearest) == 3 and all(n != 0 for n, _ in nearest)

    with tempfile.TemporaryDirectory() as tmp:
        path = pathlib.Path(tmp) / "walks.txt"
        hw.write_walks(g, walks, str(path))
        assert hw.read_walks(g, str(path)) == walks
        out = pathlib.Path(tmp) / "emb.txt"
        emb.save(g, str(out))
        assert out.read_text().splitlines()[0] == f"{g.node_count} 16"


if __name__ == "__main__":
    print(check_graph())
    check_pipeline()
    print("hetwalk_py smoke test passed")
