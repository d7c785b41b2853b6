"""Reading graphs from files: graph6 and plain edge lists.

The format is chosen by file extension alone; anything else is rejected
rather than sniffed, so a mislabeled file fails loudly.
"""

from __future__ import annotations

import os

import networkx as nx

from .errors import InputError
from .structures import Structure, graph


def _from_networkx(g: "nx.Graph") -> Structure:
    labels = sorted(g.nodes())
    index = {v: i for i, v in enumerate(labels)}
    return graph(len(labels), [(index[u], index[v]) for u, v in g.edges()])


def read_graph6(text: str) -> Structure:
    line = text.strip().splitlines()
    if len(line) != 1 or not line[0].strip():
        raise InputError("expected exactly one graph6 line")
    try:
        g = nx.from_graph6_bytes(line[0].strip().encode("ascii"))
    except (nx.NetworkXError, UnicodeEncodeError, ValueError) as exc:
        raise InputError(f"invalid graph6 data: {exc}") from None
    return _from_networkx(g)


def read_edgelist(text: str) -> Structure:
    """One edge per line as two vertex numbers; an optional first line
    with a single number fixes the vertex count (for isolated vertices)."""
    edges = []
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            nums = [int(f) for f in fields]
        except ValueError:
            raise InputError(f"line {lineno}: expected vertex numbers, "
                             f"got {line!r}") from None
        if len(nums) == 1 and lineno == 1 and not edges:
            n = nums[0]
            continue
        if len(nums) != 2:
            raise InputError(f"line {lineno}: expected two vertex numbers")
        u, v = nums
        if u < 0 or v < 0:
            raise InputError(f"line {lineno}: vertices must be non-negative")
        if u == v:
            raise InputError(f"line {lineno}: loops are not allowed")
        edges.append((u, v))
        n = max(n, u + 1, v + 1)
    return graph(n, edges)


def read_graph_file(path: str) -> Structure:
    ext = os.path.splitext(path)[1].lower()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if ext == ".g6":
        return read_graph6(text)
    if ext == ".edgelist":
        return read_edgelist(text)
    raise InputError(f"unrecognized graph file extension {ext or '(none)'}; "
                     "use .g6 or .edgelist")
