"""Incremental row echelon bases over GF(p).

For p = 2 rows are Python ints used as bitsets (bit ``g`` is the coefficient
of coordinate ``g``); XOR on machine-word limbs does the elimination.  For odd
p rows are numpy int64 vectors reduced mod p.  Pivots are the highest set bit
(p = 2) or the first nonzero coordinate (odd p); rows stay in echelon form and
are fully reduced only when a canonical RREF is requested.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional

import numpy as np

__all__ = ["Echelon", "pack_bits", "unpack_bits", "pack_rows"]


def pack_bits(vec: np.ndarray) -> int:
    """0/1 vector -> int with bit ``g`` set for ``vec[g] == 1``."""
    return int.from_bytes(np.packbits(vec.astype(np.uint8) & 1, bitorder="little").tobytes(), "little")


def pack_rows(mat: np.ndarray) -> List[int]:
    packed = np.packbits(mat.astype(np.uint8) & 1, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def unpack_bits(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(np.int64)


class Echelon:
    """Growing echelon basis of a subspace of ``GF(p)^n``."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.rows: Dict[int, object] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    # -- p = 2 -------------------------------------------------------------
    def _reduce2(self, v: int):
        rows = self.rows
        while v:
            h = v.bit_length() - 1
            r = rows.get(h)
            if r is None:
                return v, h
            v ^= r
        return 0, -1

    # -- odd p -------------------------------------------------------------
    def _reduce_p(self, v: np.ndarray):
        p = self.p
        v = v % p
        while True:
            nz = np.flatnonzero(v)
            if nz.size == 0:
                return v, -1
            h = int(nz[0])
            r = self.rows.get(h)
            if r is None:
                return v, h
            v = (v - v[h] * r) % p

    def _coerce(self, v):
        if self.p == 2:
            return v if isinstance(v, int) else pack_bits(np.asarray(v))
        return np.asarray(v, dtype=np.int64)

    def add(self, v) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        v = self._coerce(v)
        if self.p == 2:
            v, h = self._reduce2(v)
            if h < 0:
                return False
            self.rows[h] = v
            return True
        v, h = self._reduce_p(v)
        if h < 0:
            return False
        self.rows[h] = (v * pow(int(v[h]), -1, self.p)) % self.p
        return True

    def extend(self, vectors: Iterable) -> List:
        """Insert many vectors; return the reduced forms that were new."""
        added = []
        for v in vectors:
            v = self._coerce(v)
            if self.p == 2:
                r, h = self._reduce2(v)
                if h >= 0:
                    self.rows[h] = r
                    added.append(r)
            else:
                r, h = self._reduce_p(v)
                if h >= 0:
                    r = (r * pow(int(r[h]), -1, self.p)) % self.p
                    self.rows[h] = r
                    added.append(r)
        return added

    def contains(self, v) -> bool:
        v = self._coerce(v)
        if self.p == 2:
            return self._reduce2(v)[1] < 0
        return self._reduce_p(v)[1] < 0

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def copy(self) -> "Echelon":
        out = Echelon(self.p, self.n)
        out.rows = dict(self.rows)
        return out

    def vectors(self) -> List:
        return list(self.rows.values())

    def rref(self) -> np.ndarray:
        """Canonical fully reduced basis, one row per pivot in ascending pivot order.

        Pivots are the highest set coordinate for p = 2 and the lowest for odd p;
        either way each pivot column is zero outside its own row.
        """
        if self.p == 2:
            pivots = sorted(self.rows)
            done: Dict[int, int] = {}
            for h in pivots:
                v = self.rows[h]
                # clear every lower pivot column from this row
                for h2 in sorted(done, reverse=True):
                    if (v >> h2) & 1:
                        v ^= done[h2]
                done[h] = v
            mat = np.array([unpack_bits(done[h], self.n) for h in pivots],
                           dtype=np.int64).reshape(len(pivots), self.n)
            return mat
        pivots = sorted(self.rows)
        done_p: Dict[int, np.ndarray] = {}
        for h in sorted(pivots, reverse=True):
            v = self.rows[h].copy()
            for h2, r in done_p.items():
                if v[h2]:
                    v = (v - v[h2] * r) % self.p
            done_p[h] = v
        return np.array([done_p[h] for h in pivots], dtype=np.int64).reshape(len(pivots), self.n)

    def subspace_of(self, other: "Echelon") -> bool:
        return all(other.contains(v) for v in self.rows.values())

    def same_span(self, other: "Echelon") -> bool:
        return self.dim == other.dim and self.subspace_of(other)


def rank(p: int, vectors: Iterable, n: Optional[int] = None) -> int:
    e = Echelon(p, n or 0)
    e.extend(vectors)
    return e.dim
