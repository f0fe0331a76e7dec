"""User-item bipartite graph over training interactions."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = ["Vertex", "BipartiteGraph", "build_graph", "neighbors"]

Kind = Literal["user", "item"]


@dataclass(frozen=True)
class Vertex:
    """A user or item vertex, indexed densely within its kind."""

    kind: Kind
    index: int


@dataclass(frozen=True)
class BipartiteGraph:
    """Adjacency over the union vertex set of users and items.

    An edge (u, i) exists iff the pair is a training interaction.  Lists
    are sorted and duplicate-free; isolated vertices are retained.
    """

    user_adj: list  # per-user sorted np.ndarray of item indices
    item_adj: list  # per-item sorted np.ndarray of user indices
    n_users: int
    n_items: int

    @property
    def n_edges(self):
        return int(sum(len(a) for a in self.user_adj))

    def degree(self, v: Vertex):
        adj = self.user_adj if v.kind == "user" else self.item_adj
        return len(adj[v.index])


def build_graph(train, n_users, n_items) -> BipartiteGraph:
    """Build the bipartite adjacency from (u, i) index pairs.

    Degree-0 vertices are kept so every index in [0, n_users) x [0, n_items)
    remains addressable.  Raises ValueError on out-of-range indices.
    """
    user_lists = [[] for _ in range(n_users)]
    item_lists = [[] for _ in range(n_items)]
    for u, i in train:
        if not (0 <= u < n_users and 0 <= i < n_items):
            raise ValueError(f"interaction ({u}, {i}) out of range {n_users}x{n_items}")
        user_lists[u].append(i)
        item_lists[i].append(u)
    user_adj = [np.unique(np.asarray(l, dtype=np.int64)) for l in user_lists]
    item_adj = [np.unique(np.asarray(l, dtype=np.int64)) for l in item_lists]
    return BipartiteGraph(user_adj, item_adj, n_users, n_items)


def neighbors(g: BipartiteGraph, v: Vertex):
    """Opposite-kind neighbors of v, sorted by index."""
    if v.kind == "user":
        if not 0 <= v.index < g.n_users:
            raise ValueError(f"user index {v.index} out of range")
        return [Vertex("item", int(i)) for i in g.user_adj[v.index]]
    if not 0 <= v.index < g.n_items:
        raise ValueError(f"item index {v.index} out of range")
    return [Vertex("user", int(u)) for u in g.item_adj[v.index]]
