"""Graphviz DOT rendering of network graphs and logical trees."""
from __future__ import annotations

from .graph import NetworkGraph
from .pcd import LogicalTree


def _q(v) -> str:
    return '"' + str(v).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _w(w: float) -> str:
    return format(w, ".6g")


def graph_to_dot(graph: NetworkGraph, name: str = "network") -> str:
    """Boundary vertices are double circles; edges are labelled with weights."""
    lines = [f"digraph {_q(name)} {{"]
    for v in graph.vertices:
        shape = "doublecircle" if v in graph.boundary_set else "circle"
        lines.append(f"  {_q(v)} [shape={shape}];")
    for (u, v), w in graph.edges.items():
        lines.append(f"  {_q(u)} -> {_q(v)} [label={_q(_w(w))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_dot(tree: LogicalTree, name: str | None = None) -> str:
    """Source trees point away from the root, receiver trees towards it."""
    name = name or f"{tree.kind}_{tree.root}"
    leaves = set(tree.leaves)
    lines = [f"digraph {_q(name)} {{"]
    for v in tree.depth:
        if v == tree.root or v in leaves:
            lines.append(f"  {_q(v)} [shape=doublecircle];")
        else:
            lines.append(f"  {_q(v)} [shape=point, xlabel={_q(_w(tree.depth[v]))}];")
    for par, child, w in tree.edges():
        a, b = (par, child) if tree.kind == "source" else (child, par)
        lines.append(f"  {_q(a)} -> {_q(b)} [label={_q(_w(w))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
