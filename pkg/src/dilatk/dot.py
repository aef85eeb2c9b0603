"""Graphviz DOT export of truncated functional graphs, dilations and Wold splits."""

from __future__ import annotations

from .dilation1 import DilationQuadruple
from .endo import FinFunc
from .errors import InvalidInput, TooLarge
from .symset import Elem, TailAffineMap, injectivity_report
from .wold import WoldSplit, wold_decompose

MAX_NODES = 500

COLORS = {"shift": "steelblue", "bijective": "darkorange", "base": "forestgreen"}


def _q(x) -> str:
    return '"' + str(x).replace('"', r'\"') + '"'


def _guard(nodes, max_nodes: int):
    if len(nodes) > max_nodes:
        raise TooLarge(f"{len(nodes)} nodes exceed the cap of {max_nodes}; lower --depth or raise --max-nodes")


def _finfunc_dot(h: FinFunc, name: str) -> list[str]:
    lines = [f"digraph {name} {{"]
    lines += [f"  {_q(a)};" for a in range(h.n)]
    lines += [f"  {_q(a)} -> {_q(h(a))};" for a in range(h.n)]
    return lines + ["}"]


def map_dot(m: TailAffineMap, depth: int, max_nodes: int = MAX_NODES, name: str = "map") -> str:
    """Functional graph on ``|index| <= depth``; edges leaving the truncation are dropped."""
    nodes = list(m.domain.elements(depth))
    _guard(nodes, max_nodes)
    kind = {}
    if m.is_endo and injectivity_report(m).injective:
        split = wold_decompose(m)
        kind = {x: "shift" if x in split.shift_part else "bijective" for x in nodes}
    present = set(nodes)
    lines = [f"digraph {name} {{"]
    for x in nodes:
        attr = f' [color={COLORS[kind[x]]}, tooltip="{kind[x]}"]' if x in kind else ""
        lines.append(f"  {_q(x)}{attr};")
    for x in nodes:
        y = m(x)
        if y in present:
            lines.append(f"  {_q(x)} -> {_q(y)};")
    lines.append("}")
    return "\n".join(lines)


def wold_dot(v: TailAffineMap, depth: int, max_nodes: int = MAX_NODES, split: WoldSplit | None = None) -> str:
    """Two clusters, ``shift`` and ``bijective``, with the wandering set outlined."""
    split = split or wold_decompose(v)
    nodes = list(v.domain.elements(depth))
    _guard(nodes, max_nodes)
    present = set(nodes)
    lines = ["digraph wold {"]
    for part, members in (("shift", split.shift_part), ("bijective", split.bijective_part)):
        lines.append(f"  subgraph cluster_{part} {{")
        lines.append(f'    label="{part}"; color={COLORS[part]};')
        for x in nodes:
            if x in members:
                extra = ", peripheries=2" if x in split.wandering else ""
                lines.append(f"    {_q(x)} [color={COLORS[part]}{extra}];")
        lines.append("  }")
    for x in nodes:
        y = v(x)
        if y in present:
            lines.append(f"  {_q(x)} -> {_q(y)};")
    lines.append("}")
    return "\n".join(lines)


def quadruple_dot(q: DilationQuadruple, depth: int, max_nodes: int = MAX_NODES) -> str:
    """Points of ``B`` up to ``depth``; ``i(A)`` double-circled, ``v`` solid, ``p`` dashed."""
    nodes = list(q.B.elements(depth))
    _guard(nodes, max_nodes)
    present = set(nodes)
    base = {q.i(Elem(c.id, k)) for c in q.A for k in c.indices(0)}
    lines = ["digraph dilation {"]
    for x in nodes:
        if x in base:
            lines.append(f"  {_q(x)} [peripheries=2, color={COLORS['base']}];")
        else:
            lines.append(f"  {_q(x)};")
    for x in nodes:
        y = q.v(x)
        if y in present:
            lines.append(f'  {_q(x)} -> {_q(y)} [style=solid, label="v"];')
    for x in nodes:
        y = q.p(x)
        if y in present and y != x:
            lines.append(f'  {_q(x)} -> {_q(y)} [style=dashed, color=gray40, label="p"];')
    lines.append("}")
    return "\n".join(lines)


def export_dot(obj, depth: int = 3, max_nodes: int = MAX_NODES) -> str:
    if isinstance(obj, DilationQuadruple):
        return quadruple_dot(obj, depth, max_nodes)
    if isinstance(obj, WoldSplit):
        raise InvalidInput("pass the map itself to render its Wold split")
    if isinstance(obj, TailAffineMap):
        return map_dot(obj, depth, max_nodes)
    if isinstance(obj, FinFunc):
        _guard(range(obj.n), max_nodes)
        return "\n".join(_finfunc_dot(obj, "function"))
    raise InvalidInput(f"cannot render {type(obj).__name__} as DOT")
