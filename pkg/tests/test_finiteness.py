import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kfl.covers import Branch, MonodromyRep, make_kfold
from kfl.equivalence import decide_canonical
from kfl.errors import InvalidInputError
from kfl.finiteness import (
    ProductFibration,
    build_phi,
    build_psi,
    classify_products,
    finiteness_report,
    is_surjective,
    product_violations,
    summarize_factor,
)
from kfl.homology import H1Map, canonical_form
from kfl.matrices import Matrix
from kfl.perm import parse_cycle_string


def twisted_torus_factor():
    """Unbranched double cover with an alpha twist: genus 1, image 2Z x Z."""
    return MonodromyRep(
        degree=2,
        sigma_alpha=parse_cycle_string("(0 1)", 2),
        sigma_beta=parse_cycle_string("id", 2),
        branches=(),
    )


def composed_factor():
    """Degree-4 genus-3 cover through an unramified double: image 2Z x Z."""
    return MonodromyRep(
        degree=4,
        sigma_alpha=parse_cycle_string("(0 2)(1 3)", 4),
        sigma_beta=parse_cycle_string("id", 4),
        branches=(
            Branch("b1", parse_cycle_string("(0 1)(2 3)", 4)),
            Branch("b2", parse_cycle_string("(0 1)(2 3)", 4)),
        ),
    )


def zero_factor(g=2, t=2):
    return H1Map(g=g, target_rank=t, matrix=Matrix.zeros(t, 2 * g))


class TestBuilders:
    def test_phi_factors(self):
        p = build_phi([2, 2, 2])
        assert p.r == 3 and p.target_rank == 2
        for f in p.factors:
            assert summarize_factor(f).k == 2

    def test_psi_factors(self):
        p = build_psi([2, 3, 4])
        assert [summarize_factor(f).k for f in p.factors] == [2, 3, 4]
        assert [summarize_factor(f).genus for f in p.factors] == [2, 3, 4]

    def test_phi_psi_coincide_at_genus_two(self):
        assert build_phi([2]).factors == build_psi([2]).factors

    def test_genus_below_two_rejected(self):
        with pytest.raises(InvalidInputError):
            build_phi([2, 1, 2])


class TestSurjectivity:
    def test_psi_products_surjective(self):
        assert is_surjective(build_psi([2, 2, 2]))

    def test_single_canonical_factor(self):
        p = ProductFibration(2, (canonical_form(2, 1),))
        assert is_surjective(p)

    def test_two_twisted_factors_not_surjective(self):
        p = ProductFibration(2, (composed_factor(), composed_factor()))
        assert not is_surjective(p)
        q = ProductFibration(2, (twisted_torus_factor(), twisted_torus_factor()))
        assert not is_surjective(q)

    def test_twisted_plus_full_is_surjective(self):
        p = ProductFibration(2, (composed_factor(), make_kfold(2, 2)))
        assert is_surjective(p)

    def test_algebraic_rank3_target(self):
        full = H1Map(g=2, target_rank=3, matrix=Matrix((
            (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))))
        assert is_surjective(ProductFibration(3, (full,)))
        short = H1Map(g=2, target_rank=3, matrix=Matrix((
            (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 2, 0))))
        assert not is_surjective(ProductFibration(3, (short,)))


class TestFinitenessReport:
    def test_phi_222(self):
        rep = finiteness_report(build_phi([2, 2, 2]))
        assert rep.f_lower and rep.f_upper
        assert rep.statement() == "kernel is of type F_2 and not of type F_3"

    def test_psi_2222(self):
        rep = finiteness_report(build_psi([2, 2, 2, 2]))
        assert rep.f_lower and rep.f_upper
        assert rep.statement() == "kernel is of type F_3 and not of type F_4"

    def test_r2_gate(self):
        rep = finiteness_report(build_psi([2, 2]))
        assert not rep.f_upper and not rep.f_lower
        assert any("r >= 3" in m or ">= 3" in m for m in rep.missing_upper)

    def test_zeroed_factor_gate(self):
        p = ProductFibration(2, (make_kfold(2, 2), make_kfold(2, 2), zero_factor()))
        rep = finiteness_report(p)
        assert not rep.f_upper
        assert any("non-trivial" in m for m in rep.missing_upper)

    def test_algebraic_factors_block_lower_only(self):
        p = ProductFibration(
            2, (canonical_form(2, 2), canonical_form(2, 2), canonical_form(2, 2))
        )
        rep = finiteness_report(p)
        assert rep.f_upper
        assert not rep.f_lower
        assert any("branched-cover realization" in m for m in rep.missing_lower)

    def test_nonsurjective_blocks_lower(self):
        p = ProductFibration(2, (composed_factor(), composed_factor(), composed_factor()))
        rep = finiteness_report(p)
        assert rep.f_upper  # maps are non-trivial and genus 3
        assert not rep.f_lower
        assert any("surjective" in m for m in rep.missing_lower)

    def test_genus_one_gate(self):
        p = ProductFibration(
            2, (twisted_torus_factor(), make_kfold(2, 2), make_kfold(2, 2))
        )
        rep = finiteness_report(p)
        assert not rep.f_upper
        assert any("genus >= 2" in m for m in rep.missing_upper)

    def test_rank3_algebraic_product(self):
        f = H1Map(g=2, target_rank=3, matrix=Matrix((
            (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))))
        rep = finiteness_report(ProductFibration(3, (f, f, f)))
        assert rep.f_upper
        assert not rep.f_lower


class TestProductValidation:
    def test_mixed_target_rank(self):
        p = ProductFibration(3, (make_kfold(2, 2),))
        v = product_violations(p)
        assert any("target_rank mismatch" in x for x in v)

    def test_disconnected_factor(self):
        rep = MonodromyRep(
            degree=2,
            sigma_alpha=parse_cycle_string("id", 2),
            sigma_beta=parse_cycle_string("id", 2),
            branches=(),
        )
        v = product_violations(ProductFibration(2, (rep,)))
        assert any("disconnected" in x for x in v)

    def test_report_raises_on_invalid(self):
        with pytest.raises(InvalidInputError):
            finiteness_report(ProductFibration(2, ()))


class TestClassification:
    def test_psi_vs_phi_genus_two(self):
        v = classify_products(build_psi([2, 2, 2]), build_phi([2, 2, 2]))
        assert v.answer == "YES"
        assert v.invariant_left == v.invariant_right == ((2, 2), (2, 2), (2, 2))

    def test_psi_vs_phi_genus_three(self):
        v = classify_products(build_psi([3, 3, 3]), build_phi([3, 3, 3]))
        assert v.answer == "NO"
        assert v.invariant_left == ((3, 3), (3, 3), (3, 3))
        assert v.invariant_right == ((3, 2), (3, 2), (3, 2))

    def test_permutation_invariance(self):
        v = classify_products(build_psi([2, 3, 4]), build_psi([4, 3, 2]))
        assert v.answer == "YES"

    def test_reflexive_symmetric(self):
        p = build_psi([2, 3, 5])
        q = build_phi([2, 3, 5])
        assert classify_products(p, p).answer == "YES"
        assert classify_products(p, q).answer == classify_products(q, p).answer

    def test_r2_unknown(self):
        v = classify_products(build_psi([2, 2]), build_psi([2, 2]))
        assert v.answer == "UNKNOWN"
        assert "r, s >= 3" in v.note

    def test_non_purely_branched_unknown(self):
        p = ProductFibration(2, (composed_factor(), make_kfold(2, 2), make_kfold(2, 2)))
        v = classify_products(p, build_psi([2, 2, 2]))
        assert v.answer == "UNKNOWN"
        assert "search_witness" in v.note

    @pytest.mark.parametrize("genera", [(2, 3, 4), (2, 2, 3, 4), (2, 3, 3, 4, 5)])
    def test_agrees_with_per_factor_oracle_matching(self, genera):
        # classify says YES exactly when some perfect matching of factors is
        # pairwise YES under the closed-form oracle
        r = len(genera)
        choices = [(2, g) if g > 2 else (2,) for g in genera]
        for left_ks in itertools.product(*choices):
            for right_ks in itertools.product(*choices):
                p = ProductFibration(
                    2, tuple(make_kfold(g, k) for g, k in zip(genera, left_ks))
                )
                q = ProductFibration(
                    2, tuple(make_kfold(g, k) for g, k in zip(genera, right_ks))
                )
                verdict = classify_products(p, q).answer
                matched = any(
                    all(
                        decide_canonical(
                            genera[i], left_ks[i], genera[pi[i]], right_ks[pi[i]]
                        ).answer
                        == "YES"
                        for i in range(r)
                    )
                    for pi in itertools.permutations(range(r))
                )
                assert (verdict == "YES") == matched


@given(st.lists(st.integers(2, 5), min_size=3, max_size=5))
@settings(max_examples=30, deadline=None)
def test_phi_psi_reports_always_flag_for_r_at_least_3(genera):
    for build in (build_phi, build_psi):
        rep = finiteness_report(build(genera))
        assert rep.f_lower and rep.f_upper
