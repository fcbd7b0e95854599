import pytest

from koszulpow.poly import QQ, ZZ, GF, RegularSequenceSpec, parse_poly, Polynomial, binomial
from koszulpow.chain import SparseMap, ChainMap
from koszulpow.koszul import koszul_complex
from koszulpow.resolution import build_k_ris, reduction_chain_map
from koszulpow.homology import (tensored_matrices, homology_ranks,
                                tensor_mod_I_complex, tor, coker_transfer_ranks,
                                tor_products, freeness_check, divisor_report,
                                induced_tor_map, koszul_regularity_probe)


def P(text, n=2):
    return parse_poly(text, n, QQ)


SPEC1 = RegularSequenceSpec.variables(1)
SPEC2 = RegularSequenceSpec.variables(2)
SPEC3 = RegularSequenceSpec.variables(3)


class TestHomologyRanks:
    def test_tensored_koszul_three_vars(self):
        ranks = homology_ranks(tensor_mod_I_complex(SPEC3, 1))
        assert ranks == [(1, ()), (3, ()), (3, ()), (1, ())]

    def test_square_power_two_vars(self):
        ranks = homology_ranks(tensor_mod_I_complex(SPEC2, 2))
        assert ranks == [(1, ()), (3, ()), (2, ())]

    def test_cube_power_two_vars(self):
        ranks = homology_ranks(tensor_mod_I_complex(SPEC2, 3))
        assert ranks == [(1, ()), (4, ()), (3, ())]

    def test_rank_nullity_budget(self):
        # free rank + both incident ranks account for every generator
        from koszulpow.linalg import rank_dense
        t = tensor_mod_I_complex(SPEC3, 2)
        mats = tensored_matrices(t)
        ranks = homology_ranks(t)
        for n in range(t.max_degree + 1):
            r_out = rank_dense(mats[n], t.module(n).dim, QQ) if n >= 1 else 0
            r_in = (rank_dense(mats[n + 1], t.module(n + 1).dim, QQ)
                    if n + 1 in mats else 0)
            assert t.module(n).dim == ranks[n][0] + r_out + r_in

    def test_untensored_entries_rejected(self):
        with pytest.raises(ValueError):
            homology_ranks(build_k_ris(SPEC2, 2))


class TestTor:
    def test_exterior_case_two_vars(self):
        rep = tor(SPEC2, 1)
        assert rep.ranks == (1, 2, 1)
        assert rep.generator_strings() == [
            ["(1)*1"], ["(1)*e{1}", "(1)*e{2}"], ["(1)*e{1,2}"]]

    def test_square_power_two_vars(self):
        rep = tor(SPEC2, 2)
        assert rep.ranks == (1, 3, 2)
        # every positive-degree generator sits at tag length one
        for n in (1, 2):
            for g in rep.generators[n]:
                assert all(len(lbl.tag) == 1 for lbl in g)

    def test_square_power_one_var(self):
        assert tor(SPEC1, 2).ranks == (1, 1)

    def test_unit_class_at_degree_zero(self):
        for s in (1, 2, 3):
            rep = tor(SPEC2, s, with_products=False, with_reduction=False,
                      cross_check=False)
            assert rep.ranks[0] == 1
            assert rep.generator_strings()[0] == ["(1)*1"]

    def test_routes_agree_grid(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                rep = tor(spec, s, with_products=False, with_reduction=False)
                assert len(rep.routes) == 3
                assert rep.routes_agree, (n, s, rep.routes)

    def test_exterior_ranks_are_binomials(self):
        for n in (1, 2, 3, 4):
            spec = RegularSequenceSpec.variables(n)
            rep = tor(spec, 1, with_products=False, cross_check=False)
            assert rep.ranks == tuple(binomial(n, k) for k in range(n + 1))

    def test_first_tor_rank_formula(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                rep = tor(spec, s, with_products=False, with_reduction=False,
                          cross_check=False)
                assert rep.ranks[1] == binomial(n + s - 1, s)

    def test_no_torsion_anywhere(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                rep = tor(spec, s, with_products=False, with_reduction=False,
                          cross_check=False)
                assert all(t == () for t in rep.torsion)

    def test_heterogeneous_degrees(self):
        spec = RegularSequenceSpec.variable_powers((2, 3))
        rep = tor(spec, 2, with_products=False, with_reduction=False)
        assert rep.ranks == (1, 3, 2)
        assert rep.routes_agree

    def test_integer_coefficients(self):
        spec = RegularSequenceSpec.variables(2, ZZ)
        assert tor(spec, 2, with_products=False,
                   with_reduction=False).ranks == (1, 3, 2)

    def test_prime_fields(self):
        for p in (2, 5):
            spec = RegularSequenceSpec.variables(2, GF(p))
            rep = tor(spec, 2, with_products=False, with_reduction=False)
            assert rep.ranks == (1, 3, 2)
            assert rep.routes_agree

    def test_bad_power(self):
        with pytest.raises(ValueError):
            tor(SPEC2, 0)


class TestCokerRoute:
    def test_exterior_case(self):
        assert coker_transfer_ranks(SPEC2, 1) == (1, 2, 1)
        assert coker_transfer_ranks(SPEC3, 1) == (1, 3, 3, 1)

    def test_matches_direct(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (2, 3, 4):
                direct = tor(spec, s, with_products=False,
                             with_reduction=False, cross_check=False).ranks
                assert coker_transfer_ranks(spec, s) == direct


class TestProducts:
    def test_all_zero_square_two_vars(self):
        table = tor(SPEC2, 2).products
        assert len(table.gens) == 5
        assert table.all_zero
        assert all(res == {} for res in table.entries.values())

    def test_all_zero_square_three_vars(self):
        assert tor(SPEC3, 2, with_reduction=False).products.all_zero

    def test_all_zero_cube_two_vars(self):
        assert tor(SPEC2, 3, with_reduction=False).products.all_zero

    def test_exterior_control_not_zero(self):
        table = tor(SPEC2, 1).products
        assert not table.all_zero
        # e1 * e2 = e1^e2 survives, with antisymmetry
        prod = table.entries[(0, 1)]
        anti = table.entries[(1, 0)]
        assert [str(lbl) for lbl in prod] == ["e{1,2}"]
        assert [str(lbl) for lbl in anti] == ["e{1,2}"]
        assert next(iter(prod.values())) == -next(iter(anti.values()))

    def test_lines_format(self):
        lines = tor(SPEC2, 1).products.lines()
        assert "g0 * g1 = (1)*e{1,2}" in lines
        assert "g0 * g0 = 0" in lines


class TestFreeness:
    def test_unit_divisors_grid(self):
        for n in (1, 2, 3, 4):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                rep = freeness_check(spec, s)
                assert rep.ok, (n, s, rep.offending)
                assert all(d == 1 for ds in rep.divisors.values() for d in ds)

    def test_rank_stable_across_fields(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                rep = freeness_check(spec, s)
                assert rep.rank_by_field["QQ"] == rep.rank_by_field["F2"]
                assert rep.rank_by_field["QQ"] == rep.rank_by_field["F3"]

    def test_control_divisor_flagged(self):
        rep = divisor_report({0: [[2]]})
        assert not rep.ok
        assert any("divisor 2" in line for line in rep.offending)
        assert any("mod 2" in line for line in rep.offending)
        assert rep.rank_by_field["F2"][0] == 0
        assert rep.rank_by_field["QQ"][0] == 1

    def test_summary_strings(self):
        assert "units" in freeness_check(SPEC2, 2).summary()
        assert "divisor 2" in divisor_report({0: [[2]]}).summary()

    def test_prime_field_rejected(self):
        with pytest.raises(ValueError):
            freeness_check(RegularSequenceSpec.variables(2, GF(3)), 2)


def identity_chain_map(c):
    one = Polynomial.one(c.n_vars, c.domain)
    comps = {}
    for n in range(c.max_degree + 1):
        m = c.module(n)
        comps[n] = SparseMap(m, m, {(g, g): one for g in m}, c.n_vars, c.domain)
    return ChainMap(c, c, comps)


class TestInducedMap:
    def test_reduction_square_to_exterior(self):
        mats = induced_tor_map(reduction_chain_map(SPEC2, 2))
        assert mats[0] == [[1]]
        assert mats[1] == [[0, 0, 0], [0, 0, 0]]
        assert mats[2] == [[0, 0]]

    def test_reduction_cube_to_square(self):
        mats = induced_tor_map(reduction_chain_map(SPEC2, 3))
        assert mats[0] == [[1]]
        for n in (1, 2):
            assert all(v == 0 for row in mats[n] for v in row)

    def test_reduction_three_vars(self):
        mats = induced_tor_map(reduction_chain_map(SPEC3, 2))
        assert mats[0] == [[1]]
        for n in (1, 2, 3):
            assert all(v == 0 for row in mats[n] for v in row)

    def test_identity_map(self):
        c = build_k_ris(SPEC2, 2)
        mats = induced_tor_map(identity_chain_map(c))
        assert mats[0] == [[1]]
        assert mats[1] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert mats[2] == [[1, 0], [0, 1]]

    def test_non_chain_map_rejected(self):
        c = build_k_ris(SPEC2, 2)
        f = identity_chain_map(c)
        broken = dict(f.components)
        broken[1] = broken[1].scale(2)
        with pytest.raises(ValueError):
            induced_tor_map(ChainMap(c, c, broken))

    def test_plain_complex_rejected(self):
        c = koszul_complex(SPEC2)
        with pytest.raises(ValueError):
            induced_tor_map(identity_chain_map(c))


class TestRegularityProbe:
    def test_repeated_variable_flagged(self):
        bad = RegularSequenceSpec.explicit([P("x1"), P("x1")])
        rep = koszul_regularity_probe(bad)
        assert not rep.ok
        assert rep.failures[0] == (1, 1)
        assert "e{1}" in rep.witness and "e{2}" in rep.witness
        assert "NOT regular" in rep.summary()

    def test_variables_pass(self):
        rep = koszul_regularity_probe(SPEC3)
        assert rep.ok
        assert "consistent" in rep.summary()

    def test_symmetric_pair_passes(self):
        spec = RegularSequenceSpec.explicit([P("x1 + x2"), P("x1*x2")])
        assert koszul_regularity_probe(spec, max_internal=10).ok

    def test_integer_domain_lifts(self):
        assert koszul_regularity_probe(RegularSequenceSpec.variables(2, ZZ)).ok

    def test_dependent_pair_flagged(self):
        bad = RegularSequenceSpec.explicit([P("x1"), P("x1*x2")])
        # x2 * u1 - u2 = 0 gives a degree-2 cycle
        rep = koszul_regularity_probe(bad)
        assert not rep.ok
        assert rep.failures[0][0] == 1
