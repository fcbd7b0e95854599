"""Labeled free modules, sparse polynomial matrices, chain complexes, and
finite graded slices.

A generator label has an exterior part (strictly increasing indices, the
wedge factors) and a tag part (weakly increasing indices, a monomial in
the sequence generators); either may be empty.  Homological degree of a
generator is its exterior length; the internal (polynomial) degree is
stored on the label.  Maps are sparse associations (target, source) ->
polynomial, kept homogeneous.  Dense matrices appear only in GradedSlice,
where one internal degree of a map is expanded over monomial bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import (Polynomial, Domain, QQ, monomials_of_degree, mono_mul,
                   RegularSequenceSpec)
from .linalg import sparse_rank

Element = dict  # Label -> nonzero Polynomial


@dataclass(frozen=True)
class Label:
    """A free-module generator e_S t_m with its internal degree."""

    exterior: tuple[int, ...]
    tag: tuple[int, ...]
    ideg: int

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.exterior, self.exterior[1:])) or \
                any(i < 1 for i in self.exterior):
            raise ValueError(f"exterior indices not strictly increasing: {self.exterior}")
        if any(a > b for a, b in zip(self.tag, self.tag[1:])) or \
                any(i < 1 for i in self.tag):
            raise ValueError(f"tag indices not weakly increasing: {self.tag}")

    @property
    def hom_degree(self) -> int:
        return len(self.exterior)

    @property
    def sort_key(self):
        return (len(self.tag), self.tag, self.exterior)

    def __lt__(self, other: Label):
        return self.sort_key < other.sort_key

    def __str__(self):
        parts = []
        if self.exterior:
            parts.append("e{" + ",".join(map(str, self.exterior)) + "}")
        if self.tag:
            parts.append("t(" + ",".join(map(str, self.tag)) + ")")
        return "".join(parts) if parts else "1"

    def __repr__(self):
        return f"Label({self})"


def make_label(spec: RegularSequenceSpec, exterior: tuple[int, ...],
               tag: tuple[int, ...]) -> Label:
    ideg = sum(spec.degrees[i - 1] for i in exterior) + \
        sum(spec.degrees[i - 1] for i in tag)
    return Label(tuple(exterior), tuple(tag), ideg)


@dataclass(frozen=True)
class FreeModule:
    labels: tuple[Label, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate generator labels")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index_of(self, label: Label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"label {label} not in module") from None

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label: Label) -> bool:
        return label in self.labels


EMPTY_MODULE = FreeModule(())


class SparseMap:
    """A map of free modules as a sparse polynomial matrix.

    entries: (target_label, source_label) -> nonzero homogeneous
    Polynomial of degree ideg(source) - ideg(target), so the map preserves
    internal degree.
    """

    __slots__ = ("source", "target", "entries", "n_vars", "domain", "_cols")

    def __init__(self, source: FreeModule, target: FreeModule,
                 entries: dict, n_vars: int, domain: Domain):
        self.source = source
        self.target = target
        self.n_vars = n_vars
        self.domain = domain
        clean = {}
        src_set, tgt_set = set(source.labels), set(target.labels)
        for (tgt, src), p in entries.items():
            if p.is_zero():
                continue
            if src not in src_set:
                raise ValueError(f"entry source {src} not a source generator")
            if tgt not in tgt_set:
                raise ValueError(f"entry target {tgt} not a target generator")
            if p.n_vars != n_vars or p.domain != domain:
                raise ValueError("entry polynomial in the wrong ring")
            if p.homogeneous_degree() != src.ideg - tgt.ideg:
                raise ValueError(
                    f"entry {tgt} <- {src} : {p} breaks internal degree "
                    f"({src.ideg} - {tgt.ideg} expected)")
            clean[(tgt, src)] = p
        self.entries = clean
        self._cols = None

    def is_zero(self) -> bool:
        return not self.entries

    def columns(self) -> dict:
        """source label -> list of (target label, polynomial)."""
        if self._cols is None:
            cols: dict = {g: [] for g in self.source.labels}
            for (tgt, src), p in self.entries.items():
                cols[src].append((tgt, p))
            self._cols = cols
        return self._cols

    def apply(self, elt: Element) -> Element:
        out: Element = {}
        cols = self.columns()
        for src, coeff in elt.items():
            for tgt, p in cols[src]:
                q = out.get(tgt)
                q = p * coeff if q is None else q + p * coeff
                if q.is_zero():
                    out.pop(tgt, None)
                else:
                    out[tgt] = q
        return out

    def __add__(self, other: SparseMap) -> SparseMap:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("shape mismatch in map sum")
        ent = dict(self.entries)
        for k, p in other.entries.items():
            q = ent.get(k)
            ent[k] = p if q is None else q + p
        return SparseMap(self.source, self.target, ent, self.n_vars, self.domain)

    def __neg__(self) -> SparseMap:
        return SparseMap(self.source, self.target,
                         {k: -p for k, p in self.entries.items()},
                         self.n_vars, self.domain)

    def scale(self, c) -> SparseMap:
        return SparseMap(self.source, self.target,
                         {k: p.scale(c) for k, p in self.entries.items()},
                         self.n_vars, self.domain)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMap)
                and self.source == other.source and self.target == other.target
                and self.entries == other.entries)

    def entry_lines(self) -> list[str]:
        items = sorted(self.entries.items(),
                       key=lambda kv: (self.source.index_of(kv[0][1]),
                                       self.target.index_of(kv[0][0])))
        return [f"{tgt} <- {src} : {p}" for (tgt, src), p in items]


def zero_map(source: FreeModule, target: FreeModule, n_vars: int,
             domain: Domain) -> SparseMap:
    return SparseMap(source, target, {}, n_vars, domain)


def compose(f: SparseMap, g: SparseMap) -> SparseMap:
    """f after g."""
    if g.target != f.source:
        raise ValueError("compose shape mismatch: target(g) != source(f)")
    ent: dict = {}
    f_cols = f.columns()
    for (mid, src), p in g.entries.items():
        for tgt, q in f_cols[mid]:
            key = (tgt, src)
            r = ent.get(key)
            ent[key] = q * p if r is None else r + q * p
    return SparseMap(g.source, f.target, ent, f.n_vars, f.domain)


# -- elements ---------------------------------------------------------------

def element_add(a: Element, b: Element) -> Element:
    out = dict(a)
    for g, p in b.items():
        q = out.get(g)
        q = p if q is None else q + p
        if q.is_zero():
            out.pop(g, None)
        else:
            out[g] = q
    return out


def element_scale(a: Element, c) -> Element:
    out = {}
    for g, p in a.items():
        q = p.scale(c)
        if not q.is_zero():
            out[g] = q
    return out


def element_neg(a: Element) -> Element:
    return {g: -p for g, p in a.items()}


def element_str(a: Element) -> str:
    if not a:
        return "0"
    parts = []
    for g in sorted(a):
        parts.append(f"({a[g]})*{g}")
    return " + ".join(parts)


# -- complexes --------------------------------------------------------------

class ChainComplex:
    """Nonnegatively graded complex of labeled free modules.

    modules: degree n -> FreeModule (missing means zero); diffs: degree
    n -> SparseMap C_n -> C_{n-1}.  Treated as immutable once built.
    """

    def __init__(self, n_vars: int, domain: Domain,
                 modules: dict[int, FreeModule], diffs: dict[int, SparseMap]):
        self.n_vars = n_vars
        self.domain = domain
        self.modules = {n: m for n, m in modules.items() if m.dim > 0}
        if any(n < 0 for n in self.modules):
            raise ValueError("negative homological degree")
        self.diffs = {}
        for n, f in diffs.items():
            if f.source != self.module(n) or f.target != self.module(n - 1):
                raise ValueError(f"differential at {n} has wrong shape")
            if not f.is_zero():
                self.diffs[n] = f

    def module(self, n: int) -> FreeModule:
        return self.modules.get(n, EMPTY_MODULE)

    def differential(self, n: int) -> SparseMap:
        f = self.diffs.get(n)
        if f is not None:
            return f
        return zero_map(self.module(n), self.module(n - 1),
                        self.n_vars, self.domain)

    @property
    def max_degree(self) -> int:
        return max(self.modules, default=-1)

    def dims(self) -> tuple[int, ...]:
        return tuple(self.module(n).dim for n in range(self.max_degree + 1))

    def max_internal_degree(self) -> int:
        return max((g.ideg for m in self.modules.values() for g in m),
                   default=0)

    def same_shape_as(self, other: ChainComplex) -> bool:
        return self.modules == other.modules

    def equal_maps(self, other: ChainComplex) -> bool:
        """Label-for-label, entry-for-entry equality of the differentials."""
        if self.modules != other.modules:
            return False
        degs = set(self.diffs) | set(other.diffs)
        return all(self.differential(n) == other.differential(n) for n in degs)

    def report_lines(self) -> list[str]:
        lines = []
        for n in range(self.max_degree + 1):
            mod = self.module(n)
            gens = ", ".join(f"{g}(deg {g.ideg})" for g in mod)
            lines.append(f"degree {n}: dim {mod.dim}: {gens}")
        for n in range(1, self.max_degree + 1):
            f = self.differential(n)
            if f.is_zero():
                continue
            lines.append(f"d_{n}:")
            lines.extend("  " + s for s in f.entry_lines())
        return lines


@dataclass
class ComplexReport:
    ok: bool
    failing_degree: int | None = None
    witness: Label | None = None
    detail: str = ""


def verify_complex(c: ChainComplex) -> ComplexReport:
    """Check d_n composed with d_{n+1} vanishes, symbolically."""
    for n in sorted(c.modules):
        f, g = c.differential(n), c.differential(n + 1)
        if f.is_zero() or g.is_zero():
            continue
        h = compose(f, g)
        if not h.is_zero():
            src = min(s for (_, s) in h.entries)
            return ComplexReport(False, n + 1, src,
                                 f"d∘d nonzero on {src} at degree {n + 1}")
    return ComplexReport(True)


def suspend(c: ChainComplex, k: int) -> ChainComplex:
    """Degree shift: result_n = C_{n-k}; differential negated for odd k."""
    modules = {n + k: m for n, m in c.modules.items()}
    if any(n < 0 for n in modules):
        raise ValueError("suspension would push modules below degree 0")
    diffs = {}
    for n, f in c.diffs.items():
        diffs[n + k] = f if k % 2 == 0 else -f
    return ChainComplex(c.n_vars, c.domain, modules, diffs)


def tensor_mod_I(c: ChainComplex, spec: RegularSequenceSpec) -> ChainComplex:
    """Apply R/I tensor: entries c0 + sum c_i u_i collapse to the constant c0.

    Every system-built differential entry is an integer combination of 1
    and the generators u_i; anything else raises.  The output has constant
    polynomial entries on the same labels.
    """
    from .linalg import solve

    dom = c.domain
    fdom = dom if dom.is_field else QQ
    gens = [Polynomial(c.n_vars, dom, dict(u.terms)) for u in spec.gens]

    def reduce_entry(p: Polynomial) -> Polynomial:
        const = p.constant_value()
        rest = p - Polynomial.constant(c.n_vars, dom, const)
        if rest.is_zero():
            return Polynomial.constant(c.n_vars, dom, const)
        # rest must be a domain-linear combination of the u_i
        monos = sorted({m for u in gens for m in u.terms} | set(rest.terms))
        cols = [[fdom.coerce(u.terms.get(m, 0)) for m in monos] for u in gens]
        rhs = [fdom.coerce(rest.terms.get(m, 0)) for m in monos]
        sol = solve([list(r) for r in zip(*cols)], rhs, fdom)
        if sol is None:
            raise ValueError(f"entry {p} is not 'constant + combination of "
                             f"the sequence generators'")
        if dom.kind != "Fp" and any(x.denominator != 1 for x in sol):
            raise ValueError(f"entry {p} needs fractional generator "
                             f"coefficients; not an integer combination")
        return Polynomial.constant(c.n_vars, dom, const)

    diffs = {}
    for n, f in c.diffs.items():
        ent = {k: reduce_entry(p) for k, p in f.entries.items()}
        diffs[n] = SparseMap(f.source, f.target, ent, c.n_vars, dom)
    return ChainComplex(c.n_vars, dom, dict(c.modules), diffs)


def constant_matrix(f: SparseMap) -> list[list[int]]:
    """Integer matrix of a map whose entries are all integer constants
    (tensored differentials, transfer maps).  Rows follow target label
    order, columns source label order."""
    rows = [[0] * f.source.dim for _ in range(f.target.dim)]
    for (tgt, src), p in f.entries.items():
        if not p.is_constant():
            raise ValueError(f"non-constant entry {p} at {tgt} <- {src}")
        v = p.constant_value()
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError(f"non-integer entry {p} at {tgt} <- {src}")
            v = v.numerator
        rows[f.target.index_of(tgt)][f.source.index_of(src)] = int(v)
    return rows


# -- graded slices ----------------------------------------------------------

@dataclass
class GradedSlice:
    """One internal degree of a map, as a dense scalar matrix.

    Rows and columns are labeled by (generator, complementary monomial)
    pairs: generator g of internal degree e contributes the columns
    {(g, mu) : deg mu = d - e}.  Ordering is module label order, then the
    monomial enumeration order within a generator.
    """

    hom_degree: int | None
    internal_degree: int
    row_basis: list[tuple[Label, tuple[int, ...]]]
    col_basis: list[tuple[Label, tuple[int, ...]]]
    rows: list[list]
    domain: Domain

    @property
    def n_rows(self) -> int:
        return len(self.row_basis)

    @property
    def n_cols(self) -> int:
        return len(self.col_basis)

    def sparse_rows(self) -> list[dict[int, object]]:
        return [{j: v for j, v in enumerate(r) if v != self.domain.zero()}
                for r in self.rows]

    def rank(self) -> int:
        dom = self.domain if self.domain.is_field else QQ
        return sparse_rank(self.sparse_rows(), dom)


def slice_basis(mod: FreeModule, n_vars: int, d: int):
    out = []
    for g in mod:
        for mu in monomials_of_degree(n_vars, d - g.ideg):
            out.append((g, mu))
    return out


def map_slice(f: SparseMap, d: int, hom_degree: int | None = None) -> GradedSlice:
    """Dense matrix of f restricted to internal degree d."""
    dom = f.domain
    row_basis = slice_basis(f.target, f.n_vars, d)
    col_basis = slice_basis(f.source, f.n_vars, d)
    row_index = {rc: i for i, rc in enumerate(row_basis)}
    zero = dom.zero()
    cols: list[dict[int, object]] = []
    f_cols = f.columns()
    for g, mu in col_basis:
        col: dict[int, object] = {}
        for tgt, p in f_cols[g]:
            for mon, cval in p.terms.items():
                i = row_index[(tgt, mono_mul(mon, mu))]
                col[i] = dom.add(col.get(i, zero), cval)
        cols.append(col)
    rows = [[zero] * len(col_basis) for _ in range(len(row_basis))]
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v != zero:
                rows[i][j] = v
    return GradedSlice(hom_degree, d, row_basis, col_basis, rows, dom)


def graded_slice(c: ChainComplex, n: int, d: int) -> GradedSlice:
    """Slice of the differential C_n -> C_{n-1} at internal degree d."""
    return map_slice(c.differential(n), d, hom_degree=n)


def slice_dim(c: ChainComplex, n: int, d: int) -> int:
    return len(slice_basis(c.module(n), c.n_vars, d))


# -- chain maps -------------------------------------------------------------

class ChainMap:
    """Degree-preserving map of complexes: components f_n: C_n -> D_n."""

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 components: dict[int, SparseMap]):
        self.source = source
        self.target = target
        self.components = {}
        for n, f in components.items():
            if f.source != source.module(n) or f.target != target.module(n):
                raise ValueError(f"component at {n} has wrong shape")
            self.components[n] = f

    def component(self, n: int) -> SparseMap:
        f = self.components.get(n)
        if f is not None:
            return f
        return zero_map(self.source.module(n), self.target.module(n),
                        self.source.n_vars, self.source.domain)

    def verify(self) -> ComplexReport:
        """Chain property: d_target after f equals f after d_source."""
        top = max(self.source.max_degree, self.target.max_degree)
        for n in range(1, top + 1):
            lhs = compose(self.target.differential(n), self.component(n))
            rhs = compose(self.component(n - 1), self.source.differential(n))
            diff = lhs + (-rhs)
            if not diff.is_zero():
                src = min(s for (_, s) in diff.entries)
                return ComplexReport(False, n, src,
                                     f"chain property fails on {src} at degree {n}")
        return ComplexReport(True)
