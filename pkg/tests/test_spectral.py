import pytest

from koszulpow.poly import QQ, GF, RegularSequenceSpec, parse_poly
from koszulpow.chain import SparseMap, constant_matrix, make_label
from koszulpow.koszul import koszul_complex, del_map
from koszulpow.resolution import build_k_ris
from koszulpow.spectral import (DoubleComplex, build_double_complex,
                                verify_double_complex, total_complex,
                                e1_page, e1_rank_formula, e2_page,
                                off_support_cells, collapse_check,
                                support_blocks, label_support)


def P(text, n=2):
    return parse_poly(text, n, QQ)


SPEC2 = RegularSequenceSpec.variables(2)
SPEC3 = RegularSequenceSpec.variables(3)


class TestDoubleComplex:
    def test_cell_dims_two_vars_square(self):
        dc = build_double_complex(SPEC2, 2)
        dims = {k: m.dim for k, m in dc.cells.items()}
        assert dims == {(0, 0): 1, (0, 1): 2, (0, 2): 1,
                        (1, 0): 2, (1, 1): 4, (1, 2): 2}

    def test_squares_and_anticommute(self):
        for spec, s in ((SPEC2, 2), (SPEC2, 4), (SPEC3, 3),
                        (RegularSequenceSpec.variable_powers((2, 3)), 3)):
            rep = verify_double_complex(build_double_complex(spec, s))
            assert rep.ok, rep.summary()
            assert rep.checked > 0

    def test_total_equals_glued_resolution(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                tot = total_complex(build_double_complex(spec, s))
                assert tot.equal_maps(build_k_ris(spec, s))

    def test_total_dims_two_vars_square(self):
        assert total_complex(build_double_complex(SPEC2, 2)).dims() == (3, 6, 3)

    def test_single_column_is_exterior_complex(self):
        tot = total_complex(build_double_complex(SPEC2, 1))
        assert tot.equal_maps(koszul_complex(SPEC2))

    def test_bad_power(self):
        with pytest.raises(ValueError):
            build_double_complex(SPEC2, 0)

    def test_sign_corruption_caught(self):
        dc = build_double_complex(SPEC2, 2)
        horiz = dict(dc.horizontal)
        horiz[(0, 2)] = horiz[(0, 2)].scale(-1)
        broken = DoubleComplex(dc.spec, dc.s, dc.cells, dc.vertical, horiz)
        rep = verify_double_complex(broken)
        assert not rep.ok
        assert rep.failures[0][0] == "anticommute"
        assert "anticommute" in rep.summary()


class TestPageOne:
    def test_binomial_formula_grid(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3):
                page = e1_page(spec, s)
                for p in range(s):
                    for q in range(n + 1):
                        assert page.rank(p, q) == e1_rank_formula(n, p, q)

    def test_columns_two_vars_square(self):
        page = e1_page(SPEC2, 2)
        assert [page.rank(0, q) for q in range(3)] == [1, 2, 1]
        assert [page.rank(1, q) for q in range(3)] == [2, 4, 2]

    def test_first_transfer_is_identity(self):
        page = e1_page(SPEC2, 2)
        assert constant_matrix(page.d1[(0, 1)]) == [[1, 0], [0, 1]]

    def test_last_column_three_vars(self):
        page = e1_page(SPEC3, 3)
        for q in range(4):
            assert page.rank(2, q) == e1_rank_formula(3, 2, q) == \
                6 * [1, 3, 3, 1][q]

    def test_transfer_entries_are_unit_constants(self):
        page = e1_page(SPEC3, 3)
        for f in page.d1.values():
            for poly in f.entries.values():
                assert poly.is_constant()
                assert poly.constant_value() in (1, -1)

    def test_no_transfer_out_of_last_column(self):
        page = e1_page(SPEC2, 3)
        assert all(p < 2 for (p, q) in page.d1)

    def test_grid_lines(self):
        lines = e1_page(SPEC2, 2).grid_lines()
        assert lines[0] == "page 1, s=2, 2 generators"
        assert any("q=0" in line for line in lines)


class TestPageTwo:
    def test_two_vars_square(self):
        page = e2_page(SPEC2, 2)
        nonzero = {k: v for k, v in page.cells.items() if v}
        assert nonzero == {(0, 0): 1, (1, 1): 3, (1, 2): 2}

    def test_support_structure_grid(self):
        for n in (1, 2, 3, 4):
            spec = RegularSequenceSpec.variables(n)
            for s in (1, 2, 3, 4):
                assert off_support_cells(e2_page(spec, s)) == [], (n, s)

    def test_intermediate_columns_vanish(self):
        for n in (1, 2, 3):
            spec = RegularSequenceSpec.variables(n)
            page = e2_page(spec, 3)
            for q in range(n + 1):
                assert page.rank(1, q) == 0

    def test_single_column_equals_page_one(self):
        p1 = e1_page(SPEC2, 1)
        p2 = e2_page(SPEC2, 1)
        assert p1.cells == p2.cells

    def test_unit_cell_survives(self):
        for s in (1, 2, 3):
            assert e2_page(SPEC2, s).rank(0, 0) == 1


class TestCollapse:
    def test_two_vars_square(self):
        rep = collapse_check(SPEC2, 2)
        assert rep.ok
        assert rep.page_ranks == (1, 3, 2)
        assert rep.tor_ranks == (1, 3, 2)
        assert "collapse: ok" in rep.lines()

    def test_three_vars(self):
        assert collapse_check(SPEC3, 2).ok
        assert collapse_check(SPEC3, 3).ok

    def test_single_column(self):
        rep = collapse_check(SPEC2, 1)
        assert rep.ok
        assert rep.page_ranks == (1, 2, 1)

    def test_heterogeneous_degrees(self):
        spec = RegularSequenceSpec.variable_powers((2, 3))
        assert collapse_check(spec, 2).ok

    def test_prime_field(self):
        assert collapse_check(RegularSequenceSpec.variables(2, GF(2)), 2).ok


class TestSupportBlocks:
    def test_supports_two_vars(self):
        rep = support_blocks(del_map(SPEC2, 1)[1])
        assert [b.support for b in rep.blocks] == [(1,), (1, 2), (2,)]

    def test_blockwise_equals_global_grid(self):
        for p in (0, 1, 2):
            for q in (1, 2, 3):
                rep = support_blocks(del_map(SPEC3, p)[q])
                assert rep.ok, (p, q)
                assert rep.global_divisors == rep.merged_divisors

    def test_partition_covers_everything(self):
        f = del_map(SPEC3, 1)[2]
        rep = support_blocks(f)
        assert sum(b.shape[0] for b in rep.blocks) == f.target.dim
        assert sum(b.shape[1] for b in rep.blocks) == f.source.dim
        total = sum(sum(1 for row in b.matrix for v in row if v)
                    for b in rep.blocks)
        assert total == len(f.entries)

    def test_label_support(self):
        g = make_label(SPEC3, (1, 3), (2, 3))
        assert label_support(g) == (1, 2, 3)

    def test_crossing_entry_rejected(self):
        src = make_label(SPEC2, (1,), (1,))
        tgt = make_label(SPEC2, (), (2, 2))
        from koszulpow.chain import FreeModule
        f = SparseMap(FreeModule((src,)), FreeModule((tgt,)),
                      {(tgt, src): P("1")}, 2, QQ)
        with pytest.raises(ValueError):
            support_blocks(f)

    def test_unit_divisors_on_transfer_maps(self):
        # every transfer block has unit elementary divisors
        for p in (0, 1):
            for q in (1, 2):
                rep = support_blocks(del_map(SPEC2, p)[q])
                assert all(d == 1 for d in rep.global_divisors)
