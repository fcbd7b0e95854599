"""Independent Tor oracle, sharing no code with the package under test.

Route: resolve the base quotient by the exterior-algebra complex, tensor
with the power quotient, and take slice-by-slice homology with a local
Gaussian elimination.  The package computes the same ranks from a
resolution of the power quotient instead, so agreement between the two
routes is a genuine cross-check, not a replay of the same computation.

Scope is the variables regime (the ideal generated by all variables):
every graded slice then has a monomial basis and the base quotient is the
ground field, so Tor ranks are plain slice-homology dimensions.
"""

from fractions import Fraction
from itertools import combinations


def monomials(n_vars: int, d: int) -> list[tuple[int, ...]]:
    if d < 0:
        return []
    if n_vars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(n_vars - 1, d - first):
            out.append((first,) + rest)
    return out


def rank(mat: list[list]) -> int:
    """Gaussian elimination over the rationals, local on purpose."""
    rows = [[Fraction(x) for x in r] for r in mat]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for i in range(rk, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        prow = rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col] / prow[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rk += 1
    return rk


def _slice_basis(n_vars: int, s: int, p: int, d: int):
    """Pairs (wedge subset, monomial) spanning the degree-d slice of the
    p-th term of (exterior complex) tensor (power quotient)."""
    if not 0 <= p <= n_vars:
        return []
    return [(S, m)
            for S in combinations(range(1, n_vars + 1), p)
            for m in monomials(n_vars, d - p)
            if sum(m) <= s - 1]


def _diff_matrix(n_vars: int, s: int, p: int, d: int) -> list[list]:
    """Slice of the p-th differential: drop a wedge index, multiply the
    monomial by that variable, kill anything landing in the power."""
    cols = _slice_basis(n_vars, s, p, d)
    rows = _slice_basis(n_vars, s, p - 1, d)
    idx = {key: i for i, key in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, (S, m) in enumerate(cols):
        for k, i in enumerate(S):
            bumped = tuple(e + 1 if v == i - 1 else e
                           for v, e in enumerate(m))
            if sum(bumped) <= s - 1:
                key = (tuple(x for x in S if x != i), bumped)
                mat[idx[key]][j] += (-1) ** k
    return mat


def tor_ranks(n_vars: int, s: int) -> tuple[int, ...]:
    """Tor of the base quotient against the power quotient, by homological
    degree.  Internal degrees above n_vars + s - 1 carry nothing."""
    top_d = n_vars + s - 1
    out = []
    for p in range(n_vars + 1):
        total = 0
        for d in range(top_d + 1):
            dim = len(_slice_basis(n_vars, s, p, d))
            if dim == 0:
                continue
            r_out = rank(_diff_matrix(n_vars, s, p, d))
            r_in = rank(_diff_matrix(n_vars, s, p + 1, d))
            total += dim - r_out - r_in
        out.append(total)
    return tuple(out)
