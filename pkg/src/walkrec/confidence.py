"""Confidence scoring: turn pair counts into the sparse feedback matrix.

Two measures are supported.  "co" stores the raw co-occurrence count of
each pair.  "pmi" stores max(log(count * total / (user_count * item_count))
- log(shift_k), 0), dropping non-positive values, so a pair that never
co-occurs and a pair with weak association are both implicit zeros.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .pairs import PairCorpusStats

__all__ = ["ConfidenceMatrix", "co_matrix", "sppmi_matrix", "save_confidence", "load_confidence"]

MEASURES = ("co", "pmi")


@dataclass
class ConfidenceMatrix:
    """Sparse non-negative feedback matrix; absent entries are zeros."""

    matrix: sp.csr_matrix  # float64, n_users x n_items, stored entries > 0
    measure: str
    shift_k: float | None = None

    @property
    def n_users(self):
        return self.matrix.shape[0]

    @property
    def n_items(self):
        return self.matrix.shape[1]

    def validate(self):
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")
        if self.matrix.nnz and self.matrix.data.min() <= 0:
            raise ValueError("stored confidence entries must be positive")


def co_matrix(stats: PairCorpusStats) -> ConfidenceMatrix:
    """Confidence = raw pair count."""
    mat = stats.pair_count.astype(np.float64).tocsr()
    mat.eliminate_zeros()
    out = ConfidenceMatrix(mat, measure="co")
    out.validate()
    return out


def sppmi_matrix(stats: PairCorpusStats, shift_k: float = 1.0) -> ConfidenceMatrix:
    """Confidence = positive part of the shifted pointwise mutual information.

    Args:
        stats: pair counts with total > 0.
        shift_k: downshift constant, >= 1; the association score is reduced
            by log(shift_k) before clamping at zero.
    """
    shift_k = float(shift_k)
    if shift_k < 1.0:
        raise ValueError("shift_k must be >= 1")
    if stats.total <= 0:
        raise ValueError("cannot compute PMI over an empty pair corpus")

    coo = stats.pair_count.tocoo()
    cnt = coo.data.astype(np.float64)
    denom = stats.user_count[coo.row].astype(np.float64) * stats.item_count[
        coo.col
    ].astype(np.float64)
    score = np.log(cnt * float(stats.total) / denom) - math.log(shift_k)
    keep = score > 0.0
    mat = sp.coo_matrix(
        (score[keep], (coo.row[keep], coo.col[keep])), shape=coo.shape
    ).tocsr()
    out = ConfidenceMatrix(mat, measure="pmi", shift_k=shift_k)
    out.validate()
    return out


def save_confidence(conf: ConfidenceMatrix, path):
    """Write 'u<TAB>i<TAB>value' lines; values at 17 significant digits."""
    coo = conf.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    shift = "none" if conf.shift_k is None else f"{conf.shift_k:.17g}"
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        f.write(
            f"# users={conf.n_users} items={conf.n_items} "
            f"measure={conf.measure} shift_k={shift}\n"
        )
        for j in order:
            f.write(f"{coo.row[j]}\t{coo.col[j]}\t{coo.data[j]:.17g}\n")


def load_confidence(path) -> ConfidenceMatrix:
    """Read a matrix written by save_confidence; round-trip is bit exact."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith("# users="):
            raise ValueError(f"{path}: missing confidence header")
        fields = dict(part.split("=") for part in header[2:].split())
        m, n = int(fields["users"]), int(fields["items"])
        measure = fields["measure"]
        shift_k = None if fields["shift_k"] == "none" else float(fields["shift_k"])
        rows, cols, vals = [], [], []
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            u, i, v = line.split("\t")
            rows.append(int(u))
            cols.append(int(i))
            vals.append(float(v))
    mat = sp.coo_matrix(
        (np.asarray(vals, dtype=np.float64), (rows, cols)), shape=(m, n)
    ).tocsr()
    out = ConfidenceMatrix(mat, measure=measure, shift_k=shift_k)
    out.validate()
    return out
