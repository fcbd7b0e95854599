"""Homology of the tensored resolution: Tor with explicit generators,
torsion certificates, product triviality, freeness, and induced maps.

After applying R/I the differentials become integer matrices on the
generator labels (every polynomial entry is a constant plus a combination
of the sequence generators).  All Tor accounting happens on that integer
skeleton: ranks and kernels over the rationals, torsion via Smith normal
form, and base change to any coefficient field is legitimate exactly when
the elementary divisors are units, which freeness_check certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .poly import Polynomial, QQ, GF, RegularSequenceSpec, binomial
from .linalg import (smith_normal_form, SmithForm, kernel_basis, rank_dense,
                     sparse_rank, solve, Echelon)
from .chain import (ChainComplex, ChainMap, Element, constant_matrix,
                    element_str, element_add, map_slice, tensor_mod_I)
from .koszul import koszul_complex, del_map
from .resolution import (build_k_ris, reduction_chain_map, dga_multiply,
                         homology_slice_dims, default_internal_bound)


def tensored_matrices(t: ChainComplex) -> dict[int, list[list[int]]]:
    """Integer differential matrices of a tensored complex, per degree."""
    return {n: constant_matrix(t.differential(n))
            for n in range(1, t.max_degree + 1)}


def _coeff_field(dom):
    """Field used for rank work on the constant skeleton: the domain itself
    for F_p coefficients (entries are residues), the rationals otherwise."""
    return dom if dom.kind == "Fp" else QQ


def homology_ranks(t: ChainComplex) -> list[tuple[int, tuple[int, ...]]]:
    """Per homological degree: (free rank, torsion divisors > 1).

    Input must have constant integer entries (the tensored complexes).
    Rank from rank-nullity; torsion from the Smith normal form of the
    incoming differential (skipped over F_p, where every divisor is a unit).
    """
    mats = tensored_matrices(t)
    fd = _coeff_field(t.domain)
    out = []
    for n in range(t.max_degree + 1):
        dim = t.module(n).dim
        m_out = mats.get(n)
        m_in = mats.get(n + 1)
        r_out = rank_dense(m_out, dim, fd) if m_out else 0
        r_in = rank_dense(m_in, t.module(n + 1).dim, fd) if m_in else 0
        if m_in and fd.kind != "Fp":
            torsion = smith_normal_form(m_in).torsion
        else:
            torsion = ()
        out.append((dim - r_out - r_in, torsion))
    return out


# ---------------------------------------------------------------------------
# Tor with explicit generators.

@dataclass
class ProductTable:
    gens: list[tuple[int, int]]          # (homological degree, index)
    entries: dict                        # (i, j) -> residue Element
    all_zero: bool

    def lines(self) -> list[str]:
        out = []
        for (i, j), res in sorted(self.entries.items()):
            tag = "0" if not res else element_str(res)
            out.append(f"g{i} * g{j} = {tag}")
        return out


@dataclass
class TorReport:
    s: int
    n_gens: int
    ranks: tuple[int, ...]
    generators: list[list[Element]]      # per homological degree
    torsion: tuple[tuple[int, ...], ...]
    routes: dict[str, tuple[int, ...]]
    products: ProductTable | None = None
    induced_reduction: dict | None = None

    @property
    def routes_agree(self) -> bool:
        return len(set(self.routes.values())) == 1

    def generator_strings(self) -> list[list[str]]:
        return [[element_str(g) for g in gens] for gens in self.generators]


def _primitive_int_vector(v: list[Fraction]) -> list[int]:
    mult = lcm(*(x.denominator for x in v)) if v else 1
    w = [int(x * mult) for x in v]
    g = gcd(*w) if any(w) else 1
    if g > 1:
        w = [x // g for x in w]
    return w


def _cycle_generators(t: ChainComplex, n: int) -> list[list[int]]:
    """Homology generators at degree n: reduced-echelon kernel basis
    vectors of d_n that are independent modulo the image of d_{n+1},
    taken in column order.  Deterministic."""
    dim = t.module(n).dim
    if dim == 0:
        return []
    fd = _coeff_field(t.domain)
    m_out = constant_matrix(t.differential(n))
    kb = kernel_basis(m_out, dim, fd)
    ech = Echelon(fd)
    m_in = t.differential(n + 1)
    if not m_in.is_zero():
        cols = constant_matrix(m_in)
        for j in range(t.module(n + 1).dim):
            ech.insert([row[j] for row in cols])
    out = []
    for v in kb:
        if ech.insert(v):
            if fd.kind == "Fp":
                out.append([int(x) for x in v])
            else:
                out.append(_primitive_int_vector(v))
    return out


def _vector_to_element(t: ChainComplex, n: int, v: list[int]) -> Element:
    one = Polynomial.one(t.n_vars, t.domain)
    out: Element = {}
    for g, c in zip(t.module(n).labels, v):
        if c:
            out[g] = one.scale(c)
    return out


def _element_to_vector(t: ChainComplex, n: int, elt: Element) -> list:
    fd = _coeff_field(t.domain)
    v = [fd.zero()] * t.module(n).dim
    for g, p in elt.items():
        if not p.is_constant():
            raise ValueError(f"non-constant coefficient {p} in tensored element")
        v[t.module(n).index_of(g)] = fd.coerce(p.constant_value())
    return v


def coker_transfer_ranks(spec: RegularSequenceSpec, s: int) -> tuple[int, ...]:
    """Tor ranks via the cokernel of the last transfer map.

    Positive-degree Tor at homological degree n is the cokernel of the
    integer transfer matrix from (tag level s-2, exterior degree n+1) into
    (tag level s-1, exterior degree n); degree 0 contributes the unit.
    For s=1 the source is empty and the ranks are the binomials.
    """
    n_g = spec.n_gens
    fd = _coeff_field(spec.domain)
    ranks = [1]
    for n in range(1, n_g + 1):
        target_dim = binomial(n_g, n) * binomial(n_g + s - 2, s - 1)
        r = 0
        if s >= 2 and n + 1 <= n_g:
            f = del_map(spec, s - 2)[n + 1]
            m = constant_matrix(f)
            r = rank_dense(m, f.source.dim, fd) if m else 0
        ranks.append(target_dim - r)
    return tuple(ranks)


def tor(spec: RegularSequenceSpec, s: int, with_products: bool = True,
        with_reduction: bool | None = None,
        cross_check: bool = True) -> TorReport:
    """Tor of (R/I, R/I^s): ranks, explicit generator cycles, torsion.

    Ranks are cross-checked against two independent routes: the cokernel
    formula for the last transfer map and the rank-2 page of the column
    filtration (cross_check=False skips those).
    """
    if s < 1:
        raise ValueError("power must be >= 1")
    if with_reduction is None:
        with_reduction = s >= 2
    t = tensor_mod_I_complex(spec, s)
    hr = homology_ranks(t)
    ranks = tuple(r for r, _ in hr)
    torsion = tuple(tor_ for _, tor_ in hr)
    generators = []
    for n in range(t.max_degree + 1):
        vecs = _cycle_generators(t, n)
        generators.append([_vector_to_element(t, n, v) for v in vecs])
    routes = {"direct": ranks}
    if cross_check:
        routes["transfer-cokernel"] = coker_transfer_ranks(spec, s)
        from .spectral import e2_page
        page = e2_page(spec, s)
        routes["page2"] = tuple(
            sum(r for (p, q), r in page.cells.items() if q == n)
            for n in range(t.max_degree + 1))
    report = TorReport(s, spec.n_gens, ranks, generators, torsion, routes)
    if with_products:
        report.products = tor_products(spec, s, report=report)
    if with_reduction and s >= 2:
        report.induced_reduction = induced_tor_map(
            reduction_chain_map(spec, s))
    return report


def tensor_mod_I_complex(spec: RegularSequenceSpec, s: int) -> ChainComplex:
    return tensor_mod_I(build_k_ris(spec, s), spec)


def tor_products(spec: RegularSequenceSpec, s: int,
                 report: TorReport | None = None) -> ProductTable:
    """Pairwise products of positive-degree Tor generators, reduced
    modulo boundaries.  All zero for s >= 2; genuinely nonzero for s=1."""
    if report is None:
        report = tor(spec, s, with_products=False, with_reduction=False,
                     cross_check=False)
    kris = build_k_ris(spec, s)
    t = tensor_mod_I_complex(spec, s)
    fd = _coeff_field(t.domain)
    fone = Polynomial.one(t.n_vars, fd)
    flat = [(n, i) for n in range(1, len(report.generators))
            for i in range(len(report.generators[n]))]
    # one boundary echelon per result degree
    echelons: dict[int, Echelon] = {}

    def boundary_echelon(n: int) -> Echelon:
        if n not in echelons:
            ech = Echelon(fd)
            f = t.differential(n + 1)
            if not f.is_zero():
                cols = constant_matrix(f)
                for j in range(t.module(n + 1).dim):
                    ech.insert([row[j] for row in cols])
            echelons[n] = ech
        return echelons[n]

    entries = {}
    all_zero = True
    for ai, (na, ia) in enumerate(flat):
        for bi, (nb, ib) in enumerate(flat):
            a = report.generators[na][ia]
            b = report.generators[nb][ib]
            prod = dga_multiply(kris, a, b)
            nd = na + nb
            if nd > t.max_degree or not prod:
                entries[(ai, bi)] = {}
                continue
            v = _element_to_vector(t, nd, prod)
            resid = boundary_echelon(nd).reduce(v)
            relt: Element = {g: fone.scale(c) for g, c in
                             zip(t.module(nd).labels, resid) if c != fd.zero()}
            entries[(ai, bi)] = relt
            if relt:
                all_zero = False
    return ProductTable(flat, entries, all_zero)


# ---------------------------------------------------------------------------
# Freeness and induced maps.

@dataclass
class FreenessReport:
    ok: bool
    divisors: dict                       # degree -> SNF divisors
    rank_by_field: dict                  # field name -> per-degree ranks
    offending: list[str]

    def summary(self) -> str:
        if self.ok:
            return "all elementary divisors are units; ranks field-independent"
        return "; ".join(self.offending)


def divisor_report(matrices: dict[int, list[list[int]]],
                   probe_primes=(2, 3, 5)) -> FreenessReport:
    divisors = {}
    rank_by_field: dict = {"QQ": {}}
    offending = []
    for p in probe_primes:
        rank_by_field[f"F{p}"] = {}
    for n, m in sorted(matrices.items()):
        snf = smith_normal_form(m) if m else SmithForm((), 0)
        divisors[n] = snf.diagonal
        for d in snf.torsion:
            offending.append(f"degree {n}: elementary divisor {d} != 1")
        rows_q = [{j: v for j, v in enumerate(r) if v} for r in m] if m else []
        rank_by_field["QQ"][n] = snf.rank
        for p in probe_primes:
            rp = sparse_rank(rows_q, GF(p))
            rank_by_field[f"F{p}"][n] = rp
            if rp != snf.rank:
                offending.append(
                    f"degree {n}: rank drops from {snf.rank} to {rp} mod {p}")
    return FreenessReport(not offending, divisors, rank_by_field, offending)


def freeness_check(spec: RegularSequenceSpec, s: int) -> FreenessReport:
    """Certify Tor is a free R/I-module: every elementary divisor of every
    tensored differential is 1, so images are direct summands and ranks
    survive base change to any field."""
    if spec.domain.kind == "Fp":
        raise ValueError("freeness certificate needs a characteristic-0 domain")
    t = tensor_mod_I_complex(spec, s)
    return divisor_report(tensored_matrices(t))


def induced_tor_map(f: ChainMap) -> dict[int, list[list]]:
    """Matrices of the map induced on Tor by a chain map of resolutions.

    Both complexes must carry their construction parameters.  Rows index
    target Tor generators, columns source generators, in the deterministic
    generator bases of tor().
    """
    src_c, tgt_c = f.source, f.target
    for c in (src_c, tgt_c):
        if not hasattr(c, "spec"):
            raise ValueError("induced map needs system-built complexes")
    chain_ok = f.verify()
    if not chain_ok.ok:
        raise ValueError(f"not a chain map: {chain_ok.detail}")
    src_rep = tor(src_c.spec, src_c.s, with_products=False,
                  with_reduction=False, cross_check=False)
    tgt_rep = tor(tgt_c.spec, tgt_c.s, with_products=False,
                  with_reduction=False, cross_check=False)
    src_t = tensor_mod_I_complex(src_c.spec, src_c.s)
    tgt_t = tensor_mod_I_complex(tgt_c.spec, tgt_c.s)
    fd = _coeff_field(tgt_t.domain)
    out = {}
    top = max(len(src_rep.ranks), len(tgt_rep.ranks)) - 1
    for n in range(top + 1):
        src_gens = src_rep.generators[n] if n < len(src_rep.generators) else []
        tgt_gens = tgt_rep.generators[n] if n < len(tgt_rep.generators) else []
        comp = constant_matrix(f.component(n)) if f.component(n).entries else None
        tdim = tgt_t.module(n).dim
        cols = []
        for g in src_gens:
            v = _element_to_vector(src_t, n, g)
            img = [sum((fd.mul(fd.coerce(comp[i][j]), v[j])
                        for j in range(len(v))), start=fd.zero())
                   for i in range(tdim)] if comp else [fd.zero()] * tdim
            cols.append(_express_in_homology(tgt_t, n, tgt_gens, img))
        out[n] = [[cols[j][i] for j in range(len(src_gens))]
                  for i in range(len(tgt_gens))]
    return out


def _express_in_homology(t: ChainComplex, n: int, gens: list[Element],
                         vec: list) -> list:
    """Coordinates of a cycle's class in the chosen generator basis."""
    fd = _coeff_field(t.domain)
    gv = [_element_to_vector(t, n, g) for g in gens]
    bd = []
    f = t.differential(n + 1)
    if not f.is_zero():
        cols = constant_matrix(f)
        bd = [[fd.coerce(row[j]) for row in cols]
              for j in range(t.module(n + 1).dim)]
    basis = gv + bd
    if not basis:
        if any(x != fd.zero() for x in vec):
            raise ValueError("cycle not expressible: empty basis")
        return []
    cols_m = [list(c) for c in zip(*basis)]
    sol = solve(cols_m, vec, fd)
    if sol is None:
        raise ValueError("cycle class not in generator span")
    coords = sol[:len(gens)]
    return [int(x) if x.denominator == 1 else x for x in coords]


# ---------------------------------------------------------------------------
# Regularity probe.

@dataclass
class ProbeReport:
    ok: bool
    max_internal: int
    failures: list                       # (homological degree, internal degree)
    witness: str | None = None

    def summary(self) -> str:
        if self.ok:
            return (f"no positive-degree homology up to internal degree "
                    f"{self.max_internal}: consistent with a regular sequence")
        n, d = self.failures[0]
        return (f"homology detected at degree {n}, internal degree {d} "
                f"(witness {self.witness}): sequence is NOT regular")


def koszul_regularity_probe(spec: RegularSequenceSpec,
                            max_internal: int | None = None) -> ProbeReport:
    """Necessary condition for regularity: the exterior-algebra complex on
    the sequence has no homology in positive degrees.  A clean pass is
    evidence (not proof); any failure certifies non-regularity."""
    if max_internal is None:
        max_internal = default_internal_bound(spec, 1)
    rspec = spec if spec.domain.is_field else spec.with_domain(QQ)
    c = koszul_complex(rspec)
    dims = homology_slice_dims(c, max_internal)
    failures = [(n, d) for (n, d), h in sorted(dims.items())
                if n >= 1 and h != 0]
    witness = None
    if failures:
        witness = _slice_homology_witness(c, *failures[0])
    return ProbeReport(not failures, max_internal, failures, witness)


def _slice_homology_witness(c: ChainComplex, n: int, d: int) -> str:
    """A cycle at slice (n, d) that is not a boundary, as printable text."""
    sl = map_slice(c.differential(n), d)
    dom = c.domain
    kb = kernel_basis(sl.rows, sl.n_cols, dom)
    ech = Echelon(dom)
    up = map_slice(c.differential(n + 1), d)
    for j in range(up.n_cols):
        ech.insert([row[j] for row in up.rows])
    for v in kb:
        if ech.insert(v):
            elt: Element = {}
            for (g, mono), coeff in zip(sl.col_basis, v):
                if coeff != dom.zero():
                    term = Polynomial(c.n_vars, dom, {mono: coeff})
                    elt = element_add(elt, {g: term})
            return element_str(elt)
    return "(none)"
