import numpy as np
import pytest

from trusskit import (
    AbGroup,
    ConsistencyError,
    Truss,
    ValidationError,
    heap_from_group,
    inverse_in,
    is_brace_type,
    is_normal_paragon,
    is_paragon,
    is_ring_type,
    lambda_q,
    odd_multiple_check,
    opposite_truss,
    quotient_truss,
    rho_q,
    truss_from_ring,
    truss_isomorphism,
    truss_law_report,
    units,
    units_paragon_report,
    za_truss,
    zn_ring,
    zn_truss,
)
from trusskit.catalog import left_translation_truss


class TestConstruction:
    def test_z4_truss(self):
        t = zn_truss(4)
        assert t.identity == 1 and t.absorber == 0
        assert is_ring_type(t) and not is_brace_type(t)

    def test_zero_ring(self):
        t = truss_from_ring(AbGroup.cyclic(2), [[0, 0], [0, 0]])
        assert t.absorber == 0 and t.identity is None

    def test_componentwise_ring(self):
        # Z2 x Z2 with componentwise multiplication
        def mul(a, b):
            return ((a >> 1) & (b >> 1)) << 1 | (a & b & 1)

        add = AbGroup([[a ^ b for b in range(4)] for a in range(4)])
        t = truss_from_ring(add, [[mul(a, b) for b in range(4)] for a in range(4)])
        assert t.order == 4 and t.identity == 3

    def test_ring_law_violation_witnessed(self):
        mul = [[(a * b) % 4 for b in range(4)] for a in range(4)]
        mul[2][3] = 1
        with pytest.raises(ValidationError) as err:
            truss_from_ring(AbGroup.cyclic(4), mul)
        assert err.value.law.startswith("ring.")

    def test_constant_multiplication_is_a_truss(self):
        t = Truss(heap_from_group(AbGroup.cyclic(4)), np.full((4, 4), 2))
        assert truss_law_report(t).ok

    def test_subtraction_fails_associativity(self):
        sub = [[(a - b) % 4 for b in range(4)] for a in range(4)]
        with pytest.raises(ValidationError) as err:
            Truss(heap_from_group(AbGroup.cyclic(4)), sub)
        assert err.value.law == "truss.associative"

    def test_left_truss_skips_right_distributivity(self):
        t = left_translation_truss()
        rep = truss_law_report(t)
        assert rep.ok
        assert not any(c.name == "truss.right_distributive" for c in rep.checks)
        # and right distributivity genuinely fails on it
        br = t.bracket
        failing = [
            (a, b, c, d)
            for a in range(4)
            for b in range(4)
            for c in range(4)
            for d in range(4)
            if t.mul[br(b, c, d), a] != br(t.mul[b, a], t.mul[c, a], t.mul[d, a])
        ]
        assert failing

    def test_sampled_validation_above_cutoff(self):
        t = zn_truss(65)
        assert t.identity == 1


class TestTranslates:
    def test_lambda_value_in_z4(self):
        t = zn_truss(4)
        # [2*3, 2*1, 1] = [2, 2, 1] = 1
        assert lambda_q(t, 2, 3, 1) == 1

    def test_lambda_at_q_is_q(self):
        t = zn_truss(6)
        for x in range(6):
            for q in range(6):
                assert lambda_q(t, x, q, q) == q

    def test_rho_with_identity_is_p(self):
        t = zn_truss(6)
        for p in range(6):
            for q in range(6):
                assert rho_q(t, p, t.identity, q) == p


class TestParagons:
    def test_units_of_z4_two_sided(self):
        r = is_paragon(zn_truss(4), [1, 3])
        assert r.kind == "two-sided" and r.is_paragon

    def test_even_ideal(self):
        assert is_paragon(zn_truss(4), [0, 2]).kind == "ideal"

    def test_non_subheap_witnessed(self):
        r = is_paragon(zn_truss(4), [1, 2])
        assert r.kind == "none"
        assert r.failures["subheap"] == (1, 2, 1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            is_paragon(zn_truss(4), [])

    def test_every_ideal_is_a_paragon(self):
        t = zn_truss(12)
        for d in (2, 3, 4, 6):
            members = list(range(0, 12, d))
            assert is_paragon(t, members).kind == "ideal"

    def test_left_truss_classification(self):
        t = left_translation_truss()
        # {0, 2} is a sub-heap; lambda closure: x.s = s + g(x) in {0+g, 2+g}
        r = is_paragon(t, [0, 2])
        assert r.kind in ("left", "none")

    def test_normal_in_commutative(self):
        t = zn_truss(4)
        assert is_normal_paragon(t, [1, 3])


class TestQuotients:
    def test_z4_mod_units(self):
        t = zn_truss(4)
        q, proj = quotient_truss(t, [1, 3])
        assert q.order == 2
        assert truss_isomorphism(q, zn_truss(2)) is not None
        assert list(proj) == [0, 1, 0, 1]

    def test_quotient_by_self(self):
        t = zn_truss(4)
        q, _ = quotient_truss(t, range(4))
        assert q.order == 1

    def test_z8_mod_units(self):
        q, _ = quotient_truss(zn_truss(8), [1, 3, 5, 7])
        assert truss_isomorphism(q, zn_truss(2)) is not None

    def test_left_truss_rejected(self):
        t = left_translation_truss()
        with pytest.raises(ValueError, match="two-sided"):
            quotient_truss(t, [0, 2])

    def test_projection_multiplicative(self):
        t = zn_truss(9)
        q, proj = quotient_truss(t, [0, 3, 6])
        for a in range(9):
            for b in range(9):
                assert proj[t.mul[a, b]] == q.mul[proj[a], proj[b]]

    def test_kernel_fibers_are_paragons_subtruss_iff_idempotent(self):
        t = zn_truss(9)
        q, proj = quotient_truss(t, [0, 3, 6])
        for cls in range(q.order):
            fiber = [int(v) for v in np.flatnonzero(proj == cls)]
            assert is_paragon(t, fiber).is_paragon
            farr = np.array(fiber)
            closed = bool(np.isin(t.mul[np.ix_(farr, farr)], farr).all())
            idempotent = int(q.mul[cls, cls]) == cls
            assert closed == idempotent

    def test_quotient_by_ideal_is_ring_type(self):
        q, _ = quotient_truss(zn_truss(12), list(range(0, 12, 3)))
        assert q.absorber is not None


class TestUnits:
    def test_unit_sets(self):
        assert units(zn_truss(4)) == (1, 3)
        assert units(zn_truss(2)) == (1,)
        assert units(zn_truss(12)) == (1, 5, 7, 11)

    def test_inverse_in(self):
        t = zn_truss(12)
        assert inverse_in(t, 5) == 5
        assert inverse_in(t, 7) == 7
        assert inverse_in(t, 2) is None

    def test_no_identity_error(self):
        zero_ring = truss_from_ring(AbGroup.cyclic(2), [[0, 0], [0, 0]])
        with pytest.raises(ValueError):
            units(zero_ring)


class TestUnitsParagonReport:
    def test_z4(self):
        rep = units_paragon_report(zn_truss(4))
        assert rep.is_paragon and rep.unit_or_one_minus_unit
        assert rep.quotient_is_mod2 and rep.quotient_char2

    def test_z6_fails_with_three(self):
        t = zn_truss(6)
        rep = units_paragon_report(t)
        assert not rep.is_paragon and not rep.unit_or_one_minus_unit
        # witness: r = 3 is not a unit and 1 - 3 = 4 is not a unit
        one_minus_three = t.bracket(1, 3, 0)
        assert one_minus_three == 4
        assert 3 not in rep.units and 4 not in rep.units

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
    def test_powers_of_two(self, k):
        rep = units_paragon_report(zn_truss(2 ** k))
        assert rep.is_paragon and rep.quotient_is_mod2

    def test_odd_prime_square_not_subheap_but_cover_holds(self):
        # mod 9 every non-unit r has 1-r a unit, yet U is not a sub-heap:
        # the exactly-one predicate is what separates the two situations.
        rep = units_paragon_report(zn_truss(9))
        assert not rep.is_subheap
        assert not rep.unit_or_one_minus_unit

    def test_requires_ring_type(self):
        with pytest.raises(ValueError):
            units_paragon_report(za_truss(2, 4))

    def test_difference_of_units_never_a_unit(self):
        # holds whenever the units form a paragon
        for n in (2, 4, 8, 16, 32):
            t = zn_truss(n)
            rep = units_paragon_report(t)
            assert rep.is_paragon
            us = set(rep.units)
            for a in us:
                for b in us:
                    assert t.bracket(a, b, t.absorber) not in us


class TestOddMultiples:
    def test_z4_and_z8(self):
        assert odd_multiple_check(zn_truss(4))
        assert odd_multiple_check(zn_truss(8))

    def test_requires_paragon(self):
        with pytest.raises(ValueError):
            odd_multiple_check(zn_truss(6))


class TestIsomorphismSearch:
    def test_not_isomorphic_different_unit_counts(self):
        assert truss_isomorphism(zn_truss(4), za_truss(2, 4)) is None

    def test_relabelled_truss_found(self):
        t = za_truss(2, 4)
        # relabel through the anchor-change of its own heap: shift by 1
        perm = [(x + 1) % 4 for x in range(4)]
        inv = [perm.index(i) for i in range(4)]
        add = [[perm[(inv[a] + inv[b]) % 4] for b in range(4)] for a in range(4)]
        mul = [[perm[t.mul[inv[a], inv[b]]] for b in range(4)] for a in range(4)]
        t2 = Truss(heap_from_group(AbGroup(add)), mul)
        phi = truss_isomorphism(t, t2)
        assert phi is not None
        for a in range(4):
            for b in range(4):
                assert phi[t.mul[a, b]] == t2.mul[phi[a], phi[b]]

    def test_opposite_of_commutative(self):
        t = zn_truss(6)
        assert opposite_truss(t) == t

    def test_opposite_rejects_left(self):
        with pytest.raises(ValueError):
            opposite_truss(left_translation_truss())
