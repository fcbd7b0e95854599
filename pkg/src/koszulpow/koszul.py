"""The exterior-algebra resolution, its tag-twisted companions, and the
transfer maps that move a wedge factor into the tag.

For a sequence u_1..u_n, the base complex has basis {e_S} over increasing
subsets S with boundary e_S -> sum (-1)^(k-1) u_{ik} e_{S\\ik}.  Tensoring
with the free module on length-s tags gives the complex resolving the
s-th graded piece I^s/I^(s+1): same boundary, tags inert.  The transfer
map lowers exterior degree by one while appending the removed index to
the tag, with the same alternating sign but coefficient 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .poly import Polynomial, RegularSequenceSpec, binomial
from .ideals import tags_of_length
from .chain import (Label, make_label, FreeModule, SparseMap, ChainComplex,
                    zero_map, compose, EMPTY_MODULE)


def exterior_subsets(n: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(1, n + 1), p))


def q_module(spec: RegularSequenceSpec, s: int, p: int) -> FreeModule:
    """Free module with basis {e_S t_m : |S| = p, |m| = s}, tag-major order."""
    if p < 0 or p > spec.n_gens or s < 0:
        return EMPTY_MODULE
    labels = [make_label(spec, ext, tag)
              for tag in tags_of_length(spec.n_gens, s)
              for ext in exterior_subsets(spec.n_gens, p)]
    labels.sort(key=lambda g: g.sort_key)
    return FreeModule(tuple(labels))


def boundary_entries(spec: RegularSequenceSpec, source: FreeModule) -> dict:
    """Koszul boundary on the exterior part; tags ride along unchanged."""
    ent = {}
    for src in source:
        for k, i in enumerate(src.exterior):
            rest = src.exterior[:k] + src.exterior[k + 1:]
            tgt = make_label(spec, rest, src.tag)
            ent[(tgt, src)] = spec.gens[i - 1].scale((-1) ** k)
    return ent


def transfer_entries(spec: RegularSequenceSpec, source: FreeModule) -> dict:
    """Move one wedge factor into the tag: e_S t_m -> sum of signed
    e_{S\\i} t_{sort(m+i)}; all matrix entries are +-1."""
    one = Polynomial.one(spec.n_vars, spec.domain)
    ent = {}
    for src in source:
        for k, i in enumerate(src.exterior):
            rest = src.exterior[:k] + src.exterior[k + 1:]
            tag = tuple(sorted(src.tag + (i,)))
            tgt = make_label(spec, rest, tag)
            ent[(tgt, src)] = one.scale((-1) ** k)
    return ent


def q_complex(spec: RegularSequenceSpec, s: int,
              n_max: int | None = None) -> ChainComplex:
    """The tag-twisted complex: boundary acts on e only.  s=0 is the plain
    exterior-algebra complex."""
    n = spec.n_gens
    top = n if n_max is None else min(n_max, n)
    modules = {p: q_module(spec, s, p) for p in range(top + 1)}
    diffs = {}
    for p in range(1, top + 1):
        ent = boundary_entries(spec, modules[p])
        diffs[p] = SparseMap(modules[p], modules[p - 1], ent,
                             spec.n_vars, spec.domain)
    return ChainComplex(spec.n_vars, spec.domain, modules, diffs)


def koszul_complex(spec: RegularSequenceSpec,
                   n_max: int | None = None) -> ChainComplex:
    return q_complex(spec, 0, n_max)


def del_map(spec: RegularSequenceSpec, s: int) -> dict[int, SparseMap]:
    """The transfer family out of tag-level s: homological degree p maps
    to degree p-1 at tag-level s+1, for p = 1..n."""
    if s < 0:
        raise ValueError("tag level must be >= 0")
    out = {}
    for p in range(1, spec.n_gens + 1):
        src = q_module(spec, s, p)
        tgt = q_module(spec, s + 1, p - 1)
        out[p] = SparseMap(src, tgt, transfer_entries(spec, src),
                           spec.n_vars, spec.domain)
    return out


@dataclass
class IdentityReport:
    ok: bool
    checked: int
    failures: list  # (identity name, tag level, degree, witness Label)

    def summary(self) -> str:
        if self.ok:
            return f"identities ok ({self.checked} compositions checked)"
        name, r, p, w = self.failures[0]
        return f"{name} fails at tag level {r}, degree {p}, witness {w}"


def verify_identities(spec: RegularSequenceSpec, s_max: int) -> IdentityReport:
    """Check, symbolically, that the transfer anticommutes with the
    boundary and squares to zero across tag levels below s_max."""
    failures = []
    checked = 0
    n = spec.n_gens
    dels = {r: del_map(spec, r) for r in range(s_max + 1)}
    bnds = {r: q_complex(spec, r) for r in range(s_max + 2)}

    def del_at(r: int, p: int) -> SparseMap:
        f = dels.get(r, {}).get(p)
        if f is not None:
            return f
        return zero_map(q_module(spec, r, p), q_module(spec, r + 1, p - 1),
                        spec.n_vars, spec.domain)

    for r in range(s_max):
        for p in range(1, n + 1):
            # boundary after transfer + transfer after boundary = 0
            lhs = compose(bnds[r + 1].differential(p - 1), del_at(r, p))
            rhs = compose(del_at(r, p - 1), bnds[r].differential(p))
            acc = lhs + rhs
            checked += 1
            if not acc.is_zero():
                witness = min(s for (_, s) in acc.entries)
                failures.append(("anticommute", r, p, witness))
            # transfer composed with transfer = 0  (source at tag level r)
            sq = compose(del_at(r + 1, p - 1), del_at(r, p))
            checked += 1
            if not sq.is_zero():
                witness = min(s for (_, s) in sq.entries)
                failures.append(("square-zero", r, p, witness))
    return IdentityReport(not failures, checked, failures)


def q_dims_formula(spec: RegularSequenceSpec, s: int) -> tuple[int, ...]:
    """Predicted dims C(n,p)*C(n+s-1,s) per homological degree."""
    n = spec.n_gens
    return tuple(binomial(n, p) * binomial(n + s - 1, s) for p in range(n + 1))
