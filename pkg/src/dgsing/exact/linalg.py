"""
Exact linear algebra over QQ and GF(p).

Matrices are stored column-wise as sparse dicts (column j is the image of the
j-th source basis vector). Over QQ all elimination is fraction-free: rows are
kept as primitive integer vectors. Pivots are picked by smallest bit-length.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm

from .fields import QQ, PrimeField

DENSE_CUTOFF = 64


class SparseMatrix:
    """Immutable ``nrows x ncols`` matrix; ``columns[j]`` maps row index -> entry."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows, ncols, columns=None):
        self.nrows = nrows
        self.ncols = ncols
        if columns is None:
            columns = [{} for _ in range(ncols)]
        if len(columns) != ncols:
            raise ValueError("column count mismatch")
        self.columns = tuple({i: v for i, v in col.items() if v} for col in columns)

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{j: 1} for j in range(n)])

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def rows(self):
        """Row-wise sparse view: list of dicts column -> entry."""
        out = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self):
        return sum(len(c) for c in self.columns)

    def is_zero(self):
        return all(not c for c in self.columns)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for col in other.columns:
            acc = {}
            for k, b in col.items():
                for i, a in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            cols.append(acc)
        return SparseMatrix(self.nrows, other.ncols, cols)

    def __neg__(self):
        return SparseMatrix(self.nrows, self.ncols, [{i: -v for i, v in c.items()} for c in self.columns])

    def __sub__(self, other):
        return self + (-other)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self.columns, other.columns):
            acc = dict(a)
            for i, v in b.items():
                acc[i] = acc.get(i, 0) + v
            cols.append(acc)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def scaled(self, c):
        return SparseMatrix(self.nrows, self.ncols, [{i: c * v for i, v in col.items()} for col in self.columns])

    def apply(self, vec: dict) -> dict:
        """Multiply a sparse vector (dict index -> value)."""
        acc = {}
        for j, x in vec.items():
            for i, a in self.columns[j].items():
                acc[i] = acc.get(i, 0) + a * x
        return {i: v for i, v in acc.items() if v}

    def equals(self, other, field=QQ):
        if self.shape != other.shape:
            return False
        diff = self - other
        return all(not field(v) for col in diff.columns for v in col.values())

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def block_matrix(blocks, row_sizes, col_sizes):
    """Assemble from a dict ``(bi, bj) -> SparseMatrix``; missing blocks are zero."""
    row_off = [sum(row_sizes[:k]) for k in range(len(row_sizes))]
    col_off = [sum(col_sizes[:k]) for k in range(len(col_sizes))]
    cols = [{} for _ in range(sum(col_sizes))]
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {m.shape}")
        for j, col in enumerate(m.columns):
            target = cols[col_off[bj] + j]
            for i, v in col.items():
                target[row_off[bi] + i] = v
    return SparseMatrix(sum(row_sizes), sum(col_sizes), cols)


def _bitlen(v):
    if type(v) is Fraction:
        return abs(v.numerator).bit_length() + v.denominator.bit_length()
    return abs(v).bit_length()


def _integral(vec: dict) -> dict:
    """Clear denominators and divide out the content of a rational vector."""
    dens = [v.denominator for v in vec.values() if type(v) is Fraction and v.denominator != 1]
    if dens:
        m = lcm(*dens)
        vec = {k: int(v * m) for k, v in vec.items()}
    else:
        vec = {k: int(v) for k, v in vec.items()}
    return _primitive(vec)


def _primitive(vec: dict) -> dict:
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        return {k: v // g for k, v in vec.items()}
    return vec


class Echelon:
    """Incrementally built echelon basis of a subspace of ``field^n``.

    Rows are stored in insertion order; each new row is reduced against every
    earlier pivot before its own pivot is chosen, so one ordered pass reduces
    any vector.
    """

    def __init__(self, field=QQ):
        self.field = field
        self.modular = isinstance(field, PrimeField)
        self._rows = []  # (pivot, row)
        self._pos = {}  # pivot column -> position in _rows

    @property
    def rank(self):
        return len(self._rows)

    def _coerce(self, vec: dict) -> dict:
        if self.modular:
            f = self.field
            out = {k: f(v) for k, v in vec.items()}
            return {k: v for k, v in out.items() if v}
        vec = {k: v for k, v in vec.items() if v}
        return _integral(vec) if vec else vec

    def _reduce(self, v: dict) -> dict:
        # Rows must be applied in insertion order: row i is already reduced
        # against rows < i, so eliminating with it only creates entries on
        # pivots of later rows. A heap of positions visits just those.
        pos = self._pos
        heap = [pos[k] for k in v if k in pos]
        if not heap:
            return v
        heapq.heapify(heap)
        rows = self._rows
        modular = self.modular
        p = self.field.p if modular else 0
        last = -1
        while heap:
            i = heapq.heappop(heap)
            if i == last:
                continue
            last = i
            piv, row = rows[i]
            a = v.get(piv)
            if not a:
                continue
            if modular:
                for k, r in row.items():
                    nv = (v.get(k, 0) - a * r) % p
                    if nv:
                        if k not in v:
                            j = pos.get(k)
                            if j is not None and j > i:
                                heapq.heappush(heap, j)
                        v[k] = nv
                    else:
                        v.pop(k, None)
                continue
            b = row[piv]
            g = gcd(a, b)
            ma, mb = b // g, a // g
            if ma != 1:
                v = {k: ma * x for k, x in v.items()}
            for k, r in row.items():
                x = v.get(k, 0) - mb * r
                if x:
                    if k not in v:
                        j = pos.get(k)
                        if j is not None and j > i:
                            heapq.heappush(heap, j)
                    v[k] = x
                else:
                    v.pop(k, None)
            if ma != 1 and v:
                v = _primitive(v)
        return v

    def reduce(self, vec: dict) -> dict:
        """Return a representative of ``vec`` modulo the span (zero dict if inside).

        Over QQ the result is only defined up to a nonzero scalar.
        """
        return self._reduce(self._coerce(vec))

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True iff it was independent of the span."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = _choose_pivot(v)
        if self.modular:
            inv = pow(v[piv], -1, self.field.p)
            v = {k: x * inv % self.field.p for k, x in v.items()}
        self._pos[piv] = len(self._rows)
        self._rows.append((piv, v))
        return True


def _choose_pivot(v: dict):
    """A unit entry if there is one (first in iteration order), else the shortest entry."""
    for k, x in v.items():
        if x == 1 or x == -1:
            return k
    return min(v, key=lambda k: (_bitlen(v[k]), k))


def _dense_rank_qq(rows):
    """Bareiss fraction-free elimination on a small dense integer matrix."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    rank = 0
    prev = 1
    for c in range(nc):
        cand = [i for i in range(rank, nr) if m[i][c]]
        if not cand:
            continue
        p = min(cand, key=lambda i: _bitlen(m[i][c]))
        m[rank], m[p] = m[p], m[rank]
        piv = m[rank][c]
        for i in range(rank + 1, nr):
            a = m[i][c]
            row = m[i]
            prow = m[rank]
            for k in range(c, nc):
                row[k] = (piv * row[k] - a * prow[k]) // prev
        prev = piv
        rank += 1
        if rank == nr:
            break
    return rank


def _dense_rank_fp(rows, p):
    m = [[x % p for x in r] for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        prow = [x * inv % p for x in m[rank]]
        m[rank] = prow
        for i in range(rank + 1, nr):
            a = m[i][c]
            if a:
                m[i] = [(x - a * y) % p for x, y in zip(m[i], prow)]
        rank += 1
        if rank == nr:
            break
    return rank


def components(matrix: SparseMatrix):
    """Split the columns into groups that share no row; returns lists of column indices."""
    parent = list(range(matrix.ncols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner = {}
    for j, col in enumerate(matrix.columns):
        for i in col:
            k = owner.setdefault(i, j)
            if k != j:
                a, b = find(k), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups = {}
    for j, col in enumerate(matrix.columns):
        if col:
            groups.setdefault(find(j), []).append(j)
    return list(groups.values())


def rank(matrix: SparseMatrix, field=QQ) -> int:
    """Exact rank, computed block by block; small blocks go dense, larger ones sparse."""
    if matrix.nrows == 0 or matrix.ncols == 0:
        return 0
    if matrix.ncols < DENSE_CUTOFF and matrix.nrows < DENSE_CUTOFF:
        return _block_rank(matrix, field)
    total = 0
    for cols in components(matrix):
        if len(cols) == 1:
            total += 1
            continue
        rows = sorted({i for j in cols for i in matrix.columns[j]})
        where = {i: k for k, i in enumerate(rows)}
        sub = SparseMatrix(len(rows), len(cols), [{where[i]: v for i, v in matrix.columns[j].items()} for j in cols])
        total += _block_rank(sub, field)
    return total


def _block_rank(matrix: SparseMatrix, field) -> int:
    if matrix.nrows < DENSE_CUTOFF and matrix.ncols < DENSE_CUTOFF:
        if isinstance(field, PrimeField):
            rows = [[field(x) for x in r] for r in matrix.to_dense()]
            return _dense_rank_fp(rows, field.p)
        rows = []
        for r in matrix.rows():
            if not r:
                continue
            if any(type(v) is not int for v in r.values()):
                r = _integral(r)
            dense = [0] * matrix.ncols
            for k, v in r.items():
                dense[k] = v
            rows.append(dense)
        return _dense_rank_qq(rows)
    return sparse_rank(matrix, field)


def sparse_rank(matrix: SparseMatrix, field=QQ) -> int:
    ech = Echelon(field)
    # eliminate along the shorter side
    vectors = matrix.columns if matrix.ncols <= matrix.nrows else matrix.rows()
    for vec in sorted(vectors, key=len):
        if vec:
            ech.add(vec)
    return ech.rank


def rank_and_kernel(matrix: SparseMatrix, field=QQ):
    """Return ``(rank, kernel_basis)``; kernel vectors are dense lists of field elements.

    Gauss-Jordan on the rows; every kernel vector is checked against the matrix.
    """
    n = matrix.ncols
    modular = isinstance(field, PrimeField)
    rows = []  # (pivot, row) fully reduced
    for r in matrix.rows():
        if not r:
            continue
        v = {k: field(x) for k, x in r.items()}
        v = {k: x for k, x in v.items() if x}
        for piv, row in rows:
            a = v.get(piv)
            if a:
                for k, x in row.items():
                    nv = v.get(k, 0) - a * x
                    if modular:
                        nv %= field.p
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        if not v:
            continue
        piv = min(v, key=lambda k: (_bitlen(v[k]), k))
        c = v[piv]
        if modular:
            inv = pow(c, -1, field.p)
            v = {k: x * inv % field.p for k, x in v.items()}
        else:
            v = {k: x / c for k, x in v.items()}
        for i, (p2, row) in enumerate(rows):
            a = row.get(piv)
            if a:
                for k, x in v.items():
                    nv = row.get(k, 0) - a * x
                    if modular:
                        nv %= field.p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        rows.append((piv, v))
    pivots = {piv for piv, _ in rows}
    kernel = []
    for f in range(n):
        if f in pivots:
            continue
        vec = [field(0)] * n
        vec[f] = field(1)
        for piv, row in rows:
            a = row.get(f)
            if a:
                vec[piv] = field(-a)
        kernel.append(vec)
    for vec in kernel:
        image = matrix.apply({j: x for j, x in enumerate(vec) if x})
        if any(field(x) for x in image.values()):
            raise ArithmeticError("kernel vector not annihilated; elimination bug")
    return len(rows), kernel


class ReducedEchelon:
    """Fully reduced row echelon form over a field, pivots on the leftmost column.

    Unlike :class:`Echelon` this gives canonical normal forms: ``normal_form``
    returns the unique representative supported off the pivot columns.
    """

    def __init__(self, vectors, field=QQ):
        self.field = field
        self.modular = isinstance(field, PrimeField)
        rows = {}  # pivot -> row, pivot entry 1
        for vec in vectors:
            v = self._reduce_against(self._coerce(vec), rows)
            if not v:
                continue
            piv = min(v)
            inv = self._inv(v[piv])
            v = {k: self._norm(x * inv) for k, x in v.items()}
            for p, row in rows.items():
                a = row.get(piv)
                if a:
                    rows[p] = self._axpy(row, v, a)
            rows[piv] = v
        self.rows = dict(sorted(rows.items()))

    def _coerce(self, vec):
        out = {k: self.field(x) for k, x in vec.items()}
        return {k: x for k, x in out.items() if x}

    def _inv(self, x):
        return pow(x, -1, self.field.p) if self.modular else 1 / x

    def _norm(self, x):
        return x % self.field.p if self.modular else x

    def _axpy(self, v, row, a):
        """``v - a * row``."""
        out = dict(v)
        for k, x in row.items():
            nv = self._norm(out.get(k, 0) - a * x)
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return out

    def _reduce_against(self, v, rows):
        for p in sorted(rows):
            a = v.get(p)
            if a:
                v = self._axpy(v, rows[p], a)
        return v

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return list(self.rows)

    def normal_form(self, vec: dict) -> dict:
        return self._reduce_against(self._coerce(vec), self.rows)
