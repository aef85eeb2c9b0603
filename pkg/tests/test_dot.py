import pytest

from dilatk.corpus import archetypes
from dilatk.dilation1 import standard_dilation
from dilatk.dot import export_dot, map_dot, quadruple_dot, wold_dot
from dilatk.endo import FinFunc
from dilatk.errors import TooLarge
from dilatk.symset import Elem, SymSet, TailAffineMap


def edges(text):
    return [ln for ln in text.splitlines() if "->" in ln]


def nodes(text):
    return {ln.split()[0] for ln in text.splitlines()
            if ln.startswith("  \"") and "->" not in ln}


def test_cycle():
    C = SymSet.of(("c", "cycle", 3))
    m = TailAffineMap.from_function(C, C, lambda x: Elem("c", (x.index + 1) % 3))
    text = map_dot(m, 3)
    assert text.startswith("digraph")
    assert len(edges(text)) == 3
    assert len(nodes(text)) == 3


def test_standard_dilation_graph():
    text = quadruple_dot(standard_dilation(FinFunc([1, 0])), 3)
    assert len(nodes(text)) == 8
    p_edges = [e for e in edges(text) if 'label="p"' in e]
    assert p_edges and all(e.split("->")[1].strip().startswith('"a0:0"') or
                           e.split("->")[1].strip().startswith('"a1:0"') for e in p_edges)


def test_wold_clusters():
    text = wold_dot(archetypes()["cycle, ray into line"], 3)
    assert "cluster_shift" in text and "cluster_bijective" in text


def test_export_dispatch_and_cap():
    assert export_dot(FinFunc([1, 1, 2])).startswith("digraph")
    with pytest.raises(TooLarge):
        export_dot(standard_dilation(FinFunc([0] * 50)), depth=20, max_nodes=100)
