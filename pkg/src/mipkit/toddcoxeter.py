"""HLT coset enumeration over the trivial subgroup.

Columns are ``2*k`` for generator ``k`` and ``2*k + 1`` for its inverse.
Coincidences are processed with a union-find on cosets, following the
procedure in Holt, Eick & O'Brien, *Handbook of CGT*, section 5.1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .presentation import Presentation

__all__ = ["CosetEnumerationError", "CosetTable", "enumerate_cosets", "relators_as_columns"]


class CosetEnumerationError(RuntimeError):
    """The enumeration exceeded its coset budget."""


@dataclass(frozen=True)
class CosetTable:
    """Completed table: ``rows[c, col]`` is the coset ``c * letter(col)``."""

    rows: np.ndarray

    @property
    def n_cosets(self) -> int:
        return self.rows.shape[0]


def relators_as_columns(p: Presentation) -> List[List[int]]:
    out = []
    for rel in p.relations:
        letters = rel.relator().letters()
        cols = [2 * g + (0 if s > 0 else 1) for g, s in letters]
        if cols:
            out.append(cols)
    return out


class _Enumerator:
    def __init__(self, n_gens: int, relators: Sequence[Sequence[int]], max_cosets: int):
        self.ncols = 2 * n_gens
        self.relators = relators
        self.max_cosets = max_cosets
        self.table: List[List[int]] = [[-1] * self.ncols]
        self.parent: List[int] = [0]
        self.live = 1

    def rep(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if self.live >= self.max_cosets:
            raise CosetEnumerationError(
                f"coset enumeration exceeded {self.max_cosets} cosets "
                "(group possibly infinite or above budget)")
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def merge(self, k: int, l: int, queue: List[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        self.live -= 1
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: List[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for x in range(self.ncols):
                f = row[x]
                if f < 0:
                    continue
                xi = x ^ 1
                if table[f][xi] == e:
                    table[f][xi] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][x] >= 0:
                    self.merge(f1, table[e1][x], queue)
                elif table[f1][xi] >= 0:
                    self.merge(e1, table[f1][xi], queue)
                else:
                    table[e1][x] = f1
                    table[f1][xi] = e1

    def scan_and_fill(self, c: int, w: Sequence[int]) -> None:
        table = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def run(self) -> np.ndarray:
        c = 0
        while c < len(self.table):
            for w in self.relators:
                if not self.alive(c):
                    break
                self.scan_and_fill(c, w)
            if self.alive(c):
                row = self.table[c]
                for x in range(self.ncols):
                    if row[x] < 0:
                        self.define(c, x)
            c += 1
        return self.standardize()

    def standardize(self) -> np.ndarray:
        """Renumber live cosets in breadth-first order from coset 0."""
        new_index = {0: 0}
        order = [0]
        k = 0
        while k < len(order):
            row = self.table[order[k]]
            for x in range(self.ncols):
                d = self.rep(row[x])
                if d not in new_index:
                    new_index[d] = len(order)
                    order.append(d)
            k += 1
        rows = np.empty((len(order), self.ncols), dtype=np.int64)
        for new, old in enumerate(order):
            rows[new] = [new_index[self.rep(d)] for d in self.table[old]]
        return rows


def enumerate_cosets(p: Presentation, max_cosets: int = 1 << 16) -> CosetTable:
    """Enumerate cosets of the trivial subgroup in the group presented by ``p``."""
    relators = sorted(relators_as_columns(p), key=len)
    rows = _Enumerator(len(p.generators), relators, max_cosets).run()
    return CosetTable(rows)
