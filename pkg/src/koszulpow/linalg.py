"""Exact linear algebra: dense field routines, sparse rank, Smith normal form.

Two regimes.  Small matrices (kernels, solving, membership) use dense
reduced row echelon over a field with Fraction or mod-p scalars.  Large
graded slices only need rank, so those go through a sparse dict-of-columns
elimination that stays in integers (denominators cleared up front, rows
renormalized by gcd) to avoid Fraction overhead.

Matrices are lists of rows; a row is a list of scalars (dense) or a dict
col->scalar with no stored zeros (sparse).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .poly import Domain, QQ


# ---------------------------------------------------------------------------
# Dense routines over a field.

def _require_field(dom: Domain):
    if not dom.is_field:
        raise ValueError(f"need a field, got {dom}")


def rref(matrix: list[list], n_cols: int, dom: Domain):
    """Reduced row echelon form. Returns (rows, pivot_cols), zero rows dropped."""
    _require_field(dom)
    zero, one = dom.zero(), dom.one()
    rows = [[dom.coerce(x) for x in r] for r in matrix]
    for r in rows:
        if len(r) != n_cols:
            raise ValueError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != zero), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        if pv != one:
            rows[r] = [dom.div(x, pv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [dom.sub(x, dom.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_dense(matrix: list[list], n_cols: int, dom: Domain) -> int:
    return len(rref(matrix, n_cols, dom)[1])


def kernel_basis(matrix: list[list], n_cols: int, dom: Domain) -> list[list]:
    """Basis of the right kernel {v : M v = 0}, one vector per free column.

    Deterministic: free columns are taken in increasing order and each
    basis vector has a 1 in its free column, so the result is the reduced
    echelon kernel basis.
    """
    red, pivots = rref(matrix, n_cols, dom)
    zero, one = dom.zero(), dom.one()
    pivot_set = set(pivots)
    basis = []
    for c in range(n_cols):
        if c in pivot_set:
            continue
        v = [zero] * n_cols
        v[c] = one
        for r, pc in enumerate(pivots):
            v[pc] = dom.neg(red[r][c])
        basis.append(v)
    return basis


def solve(matrix: list[list], rhs: list, dom: Domain):
    """One solution of M x = rhs, or None if inconsistent."""
    _require_field(dom)
    if not matrix:
        return [] if all(dom.coerce(b) == dom.zero() for b in rhs) else None
    n_cols = len(matrix[0])
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    red, pivots = rref(aug, n_cols + 1, dom)
    if n_cols in pivots:
        return None
    x = [dom.zero()] * n_cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n_cols]
    return x


def in_span(vectors: list[list], target: list, dom: Domain) -> bool:
    """Is target a linear combination of the given vectors?"""
    if not vectors:
        return all(dom.coerce(t) == dom.zero() for t in target)
    cols = list(zip(*vectors))  # matrix whose columns are the vectors
    return solve([list(c) for c in cols], target, dom) is not None


def mat_vec(matrix: list[list], v: list, dom: Domain) -> list:
    return [sum((dom.mul(a, b) for a, b in zip(row, v)),
                start=dom.zero()) for row in matrix]


def mat_mul(a: list[list], b: list[list], dom: Domain) -> list[list]:
    if not a or not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[sum((dom.mul(x, y) for x, y in zip(row, col)), start=dom.zero())
             for col in bt] for row in a]


def identity_matrix(n: int, dom: Domain) -> list[list]:
    one, zero = dom.one(), dom.zero()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


class Echelon:
    """Incrementally built reduced echelon basis of a subspace.

    Rows are kept fully reduced (Gauss-Jordan), so reduce() returns the
    canonical residue of a vector modulo the span: unique, with zeros in
    every pivot position.
    """

    def __init__(self, dom: Domain):
        _require_field(dom)
        self.dom = dom
        self.rows: list[tuple[int, list]] = []   # (pivot_col, normalized row)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: list) -> list:
        dom = self.dom
        zero = dom.zero()
        v = [dom.coerce(x) for x in v]
        for pc, row in self.rows:
            f = v[pc]
            if f != zero:
                v = [dom.sub(x, dom.mul(f, y)) for x, y in zip(v, row)]
        return v

    def insert(self, v: list) -> bool:
        """Add v to the span. True if it enlarged the space."""
        dom = self.dom
        zero = dom.zero()
        r = self.reduce(v)
        pc = next((i for i, x in enumerate(r) if x != zero), None)
        if pc is None:
            return False
        pv = r[pc]
        r = [dom.div(x, pv) for x in r]
        self.rows = [(p, [dom.sub(x, dom.mul(row[pc], y)) for x, y in zip(row, r)])
                     for p, row in self.rows]
        self.rows.append((pc, r))
        self.rows.sort(key=lambda t: t[0])
        return True

    def contains(self, v: list) -> bool:
        zero = self.dom.zero()
        return all(x == zero for x in self.reduce(v))


# ---------------------------------------------------------------------------
# Sparse rank.

def _clear_row(row: dict[int, Fraction]) -> dict[int, int]:
    mult = lcm(*(f.denominator for f in row.values())) if row else 1
    out = {c: int(f * mult) for c, f in row.items()}
    g = gcd(*out.values()) if out else 1
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def sparse_rank(rows: list[dict[int, object]], dom: Domain = QQ) -> int:
    """Rank of a sparse matrix given as row dicts (col -> nonzero scalar).

    Over Q/Z the elimination is fraction-free: each update is
    pivot*row - entry*pivot_row followed by a gcd renormalization, so all
    intermediate values stay integers.  Over F_p arithmetic is mod p.
    Input dicts are not mutated.
    """
    modp = dom.p if dom.kind == "Fp" else None
    if modp is None:
        work = [_clear_row({c: Fraction(v) for c, v in r.items()}) for r in rows]
    else:
        work = [{c: dom.coerce(v) for c, v in r.items()} for r in rows]
    work = [{c: v for c, v in r.items() if v} for r in work]
    work = [r for r in work if r]
    rank = 0
    while work:
        col = min(min(r) for r in work)
        cands = [i for i, r in enumerate(work) if col in r]
        # sparsest pivot row limits fill-in; index tie-break keeps it stable
        pi = min(cands, key=lambda i: (len(work[i]), i))
        piv = work.pop(pi)
        pv = piv[col]
        rank += 1
        if modp is not None:
            inv = pow(pv, -1, modp)
            nxt = []
            for r in work:
                if col not in r:
                    nxt.append(r)
                    continue
                f = r[col] * inv % modp
                out = {c: v for c, v in r.items() if c != col}
                for c, v in piv.items():
                    if c == col:
                        continue
                    w = (out.get(c, 0) - f * v) % modp
                    if w:
                        out[c] = w
                    else:
                        out.pop(c, None)
                if out:
                    nxt.append(out)
            work = nxt
        else:
            nxt = []
            for r in work:
                if col not in r:
                    nxt.append(r)
                    continue
                f = r[col]
                out = {c: pv * v for c, v in r.items() if c != col}
                for c, v in piv.items():
                    if c == col:
                        continue
                    w = out.get(c, 0) - f * v
                    if w:
                        out[c] = w
                    else:
                        out.pop(c, None)
                if out:
                    g = gcd(*out.values())
                    if g > 1:
                        out = {c: v // g for c, v in out.items()}
                    nxt.append(out)
            work = nxt
    return rank


# ---------------------------------------------------------------------------
# Smith normal form over the integers.

@dataclass(frozen=True)
class SmithForm:
    """Nonzero elementary divisors of an integer matrix, d1 | d2 | ... ."""

    diagonal: tuple[int, ...]
    rank: int

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)


def _snf_pivot(m: list[list[int]], t: int, nr: int, nc: int):
    """Smallest-magnitude nonzero entry of the trailing submatrix, scanning
    rows then columns so ties resolve deterministically."""
    best = None
    for i in range(t, nr):
        row = m[i]
        for j in range(t, nc):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best[1], best[2]
    return (best[1], best[2]) if best else None


def smith_normal_form(matrix: list[list[int]]) -> SmithForm:
    """Standard SNF via Euclidean row/column reduction.

    Returns the nonzero divisors only; rank equals their count.  Transform
    matrices are not tracked (nothing downstream needs them).
    """
    m = [[int(x) for x in row] for row in matrix]
    nr = len(m)
    nc = len(m[0]) if m else 0
    for row in m:
        if len(row) != nc:
            raise ValueError("ragged matrix")
    diag: list[int] = []
    t = 0
    while t < min(nr, nc):
        loc = _snf_pivot(m, t, nr, nc)
        if loc is None:
            break
        i, j = loc
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        while True:
            # knock down the pivot column, then the pivot row
            reduced = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    if q:
                        m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                        reduced = True
                    if m[i][t]:          # remainder smaller than pivot: swap up
                        m[t], m[i] = m[i], m[t]
                        reduced = True
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    if q:
                        for row in m:
                            row[j] -= q * row[t]
                        reduced = True
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        reduced = True
            if not reduced:
                break
        piv = abs(m[t][t])
        # pivot must divide the rest of the submatrix; fold in a bad row
        bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                    if m[i][j] % piv), None)
        if bad is not None:
            m[t] = [a + b for a, b in zip(m[t], m[bad[0]])]
            continue
        diag.append(piv)
        t += 1
    return SmithForm(tuple(diag), len(diag))


def merge_divisor_chains(chains: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Divisor chain of a block-diagonal matrix from the chains of its blocks.

    diag(a) + diag(b) has the same cokernel as diag(gcd(a,b), lcm(a,b)), so
    pairwise gcd/lcm exchanges converge to the merged chain.
    """
    ds = sorted(d for ch in chains for d in ch)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if ds[j] % ds[i]:
                    g = gcd(ds[i], ds[j])
                    ds[i], ds[j] = g, ds[i] * ds[j] // g
                    changed = True
        ds.sort()
    return tuple(ds)
