"""Truncated uniform random walks over the bipartite graph."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import BipartiteGraph

__all__ = ["WalkConfig", "WalkCorpus", "generate_walks", "save_walks", "load_walks"]


@dataclass(frozen=True)
class WalkConfig:
    """Walk generation knobs: walks per vertex, walk length, seed."""

    beta: int = 10
    gamma: int = 80
    seed: int = 0

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")


@dataclass
class WalkCorpus:
    """Vertex sequences encoded globally: code < n_users is a user, else an item."""

    walks: list  # list of np.ndarray[int64], each of length gamma
    n_users: int
    n_items: int

    def validate(self, g: BipartiteGraph | None = None):
        """Check kind alternation along every walk, and edges when g is given."""
        m = self.n_users
        for w in self.walks:
            kinds = w < m
            if not np.all(kinds[1:] != kinds[:-1]):
                raise ValueError("walk does not alternate user/item vertices")
            if g is not None:
                for a, b in zip(w[:-1], w[1:]):
                    u, i = (int(a), int(b) - m) if a < m else (int(b), int(a) - m)
                    row = g.user_adj[u]
                    pos = np.searchsorted(row, i)
                    if pos >= len(row) or row[pos] != i:
                        raise ValueError(f"walk step ({a}, {b}) is not an edge")


def _walk_batch(codes, nbrs, beta, gamma, seed):
    "Generate the beta walks for each start code, in (code, walk index) order."
    out = []
    steps = gamma - 1
    for code in codes:
        for b in range(beta):
            rng = np.random.default_rng((seed, code, b))
            r = rng.random(steps)
            walk = np.empty(gamma, dtype=np.int64)
            walk[0] = cur = code
            for t in range(steps):
                row = nbrs[cur]
                cur = row[int(r[t] * len(row))]
                walk[t + 1] = cur
            out.append(walk)
    return out


def generate_walks(g: BipartiteGraph, cfg: WalkConfig, workers: int = 1) -> WalkCorpus:
    """Launch cfg.beta walks of cfg.gamma vertices from every non-isolated vertex.

    Each successor is drawn uniformly from the current vertex's neighbors.
    Every walk consumes its own random stream keyed by
    (seed, start vertex, walk index), so the corpus is identical for any
    worker count or scheduling.
    """
    m = g.n_users
    # global-coded neighbor lists; plain python lists for fast scalar stepping
    nbrs = [None] * (m + g.n_items)
    starts = []
    for u in range(m):
        row = g.user_adj[u]
        if len(row):
            nbrs[u] = (row + m).tolist()
            starts.append(u)
    for i in range(g.n_items):
        row = g.item_adj[i]
        if len(row):
            nbrs[m + i] = row.tolist()
            starts.append(m + i)

    if workers <= 1 or len(starts) < 2:
        walks = _walk_batch(starts, nbrs, cfg.beta, cfg.gamma, cfg.seed)
    else:
        chunks = np.array_split(np.asarray(starts), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                lambda c: _walk_batch(c.tolist(), nbrs, cfg.beta, cfg.gamma, cfg.seed),
                chunks,
            )
            walks = [w for part in parts for w in part]
    return WalkCorpus(walks, g.n_users, g.n_items)


def save_walks(corpus: WalkCorpus, path):
    """One walk per line, space-separated 'u<idx>' / 'i<idx>' tokens."""
    m = corpus.n_users
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        f.write(f"# users={corpus.n_users} items={corpus.n_items}\n")
        for w in corpus.walks:
            toks = [f"u{v}" if v < m else f"i{v - m}" for v in w]
            f.write(" ".join(toks) + "\n")


def load_walks(path) -> WalkCorpus:
    """Read a corpus written by save_walks."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith("# users="):
            raise ValueError(f"{path}: missing corpus header")
        fields = dict(part.split("=") for part in header[2:].split())
        m, n = int(fields["users"]), int(fields["items"])
        walks = []
        for lineno, line in enumerate(f, start=2):
            toks = line.split()
            if not toks:
                continue
            walk = np.empty(len(toks), dtype=np.int64)
            for j, tok in enumerate(toks):
                idx = int(tok[1:])
                if tok[0] == "u":
                    if idx >= m:
                        raise ValueError(f"{path}: line {lineno}: user {idx} out of range")
                    walk[j] = idx
                elif tok[0] == "i":
                    if idx >= n:
                        raise ValueError(f"{path}: line {lineno}: item {idx} out of range")
                    walk[j] = m + idx
                else:
                    raise ValueError(f"{path}: line {lineno}: bad token {tok!r}")
            walks.append(walk)
    return WalkCorpus(walks, m, n)
