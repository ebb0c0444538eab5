from fractions import Fraction

import pytest

from lbochner.falgebra import LElement, ToleranceConfig
from lbochner.lmodule import (
    Functional,
    ModuleSpace,
    ModuleVector,
    NormKind,
    ShapeMismatch,
    apply,
    check_norm_axioms,
    dual_kind,
    dual_norm,
    norm,
    operator_norm_sample_lower_bound,
    value_intervals,
)
from lbochner.sampling import (
    random_functional,
    random_lelement,
    random_module_vector,
    rng_for,
)


def L(*coords):
    return LElement(list(coords))


def vec(space, *entries):
    return ModuleVector(space, tuple(entries))


SUP2 = ModuleSpace(2, 2, NormKind.SUP)
ONE2 = ModuleSpace(2, 2, NormKind.ONE)
TWO2 = ModuleSpace(2, 2, NormKind.TWO)


class TestNorm:
    def test_sup_example(self):
        assert norm(vec(SUP2, L(1, 2), L(3, 1))) == L(3, 2)

    def test_one_example(self):
        assert norm(vec(ONE2, L(1, 2), L(3, 1))) == L(4, 3)

    def test_two_perfect_square(self):
        # 3**2 + 4**2 = 25 per first coordinate
        got = norm(vec(TWO2, L(3, 0), L(4, 0)))
        assert got == L(5, 0)

    def test_two_irrational_is_bracketed(self):
        import decimal
        with decimal.localcontext() as ctx:
            ctx.prec = 50
            sqrt2 = Fraction(decimal.Decimal(2).sqrt())
        got = norm(vec(TWO2, L(1, 1), L(1, 1)))
        for iv in value_intervals(got):
            assert iv[0] <= sqrt2 <= iv[1]
            assert iv[1] - iv[0] <= 2 * ToleranceConfig().root_tol

    def test_shape_guards(self):
        with pytest.raises(ShapeMismatch):
            vec(SUP2, L(1, 2))
        with pytest.raises(Exception):
            vec(SUP2, L(1), L(2))


class TestNormAxioms:
    @pytest.mark.parametrize("kind", list(NormKind))
    def test_500_seeded_samples(self, kind):
        rng = rng_for(99, 1)
        space = ModuleSpace(2, 2, kind)
        samples = []
        for _ in range(500):
            lam = random_lelement(rng, 2)
            samples.append((lam, random_module_vector(rng, space),
                            random_module_vector(rng, space)))
        report = check_norm_axioms(space, samples)
        assert report.passed, (report.witness1, report.witness2, report.witness3)

    def test_zero_vector_has_zero_norm(self):
        assert norm(SUP2.zero()) == LElement.zero(2)
        assert norm(TWO2.zero()) == LElement.zero(2)

    def test_unit_scalar_is_identity(self):
        x = vec(SUP2, L(1, -2), L("7/3", 5))
        assert norm(x.scale(LElement.unit(2))) == norm(x)


class TestApply:
    def test_example(self):
        space = ModuleSpace(2, 2, NormKind.SUP)
        phi = Functional(space, (L(1, 0), L(0, 1)))
        x = vec(space, L(2, 3), L(4, 5))
        assert apply(phi, x) == L(2, 5)

    def test_zero_functional(self):
        space = ModuleSpace(2, 2, NormKind.SUP)
        phi = Functional(space, (L(0, 0), L(0, 0)))
        rng = rng_for(4, 2)
        for _ in range(10):
            assert apply(phi, random_module_vector(rng, space)) == L(0, 0)

    def test_identity_coefficient(self):
        space = ModuleSpace(1, 2, NormKind.SUP)
        phi = Functional(space, (L(1, 1),))
        x = vec(space, L("3/7", -2))
        assert apply(phi, x) == L("3/7", -2)

    def test_shape_mismatch(self):
        phi = Functional(ModuleSpace(2, 2, NormKind.SUP), (L(1, 0), L(0, 1)))
        with pytest.raises(ShapeMismatch):
            apply(phi, vec(ModuleSpace(1, 2, NormKind.SUP), L(1, 1)))


class TestDualNorm:
    def test_examples(self):
        space = ModuleSpace(2, 2, NormKind.SUP)
        phi = Functional(space, (L(1, 2), L(3, 1)))
        assert dual_norm(phi, NormKind.SUP) == L(4, 3)
        assert dual_norm(phi, NormKind.ONE) == L(3, 2)
        zero = Functional(space, (L(0, 0), L(0, 0)))
        assert dual_norm(zero, NormKind.SUP) == L(0, 0)

    def test_dual_kind_involution(self):
        assert dual_kind(NormKind.SUP) is NormKind.ONE
        assert dual_kind(NormKind.ONE) is NormKind.SUP
        assert dual_kind(NormKind.TWO) is NormKind.TWO

    @pytest.mark.parametrize("kind", [NormKind.SUP, NormKind.ONE])
    def test_bound_is_valid_exact(self, kind):
        rng = rng_for(7, int(kind is NormKind.ONE))
        space = ModuleSpace(3, 2, kind)
        for _ in range(1000):
            phi = random_functional(rng, space)
            x = random_module_vector(rng, space)
            bound = dual_norm(phi, kind)
            assert abs(apply(phi, x)) <= bound * norm(x)

    def test_bound_is_valid_two_norm(self):
        cfg = ToleranceConfig()
        rng = rng_for(8, 3)
        space = ModuleSpace(3, 2, NormKind.TWO)
        for _ in range(300):
            phi = random_functional(rng, space)
            x = random_module_vector(rng, space)
            lhs = abs(apply(phi, x))
            bound = value_intervals(dual_norm(phi, NormKind.TWO))
            nx = value_intervals(norm(x))
            for j in range(2):
                rhs_hi = bound[j][1] * nx[j][1]
                assert lhs[j] <= rhs_hi + cfg.compare_tol

    @pytest.mark.parametrize("kind", [NormKind.SUP, NormKind.ONE])
    def test_attained_by_alignment(self, kind):
        from lbochner.lmodule import alignment_vector
        rng = rng_for(9, int(kind is NormKind.ONE))
        space = ModuleSpace(3, 2, kind)
        for _ in range(200):
            phi = random_functional(rng, space)
            x_star = alignment_vector(phi, kind)
            assert abs(apply(phi, x_star)) == dual_norm(phi, kind) * norm(x_star)

    def test_double_dual_consistency(self):
        # the one-norm dual of a coefficient tuple reproduces its sup norm
        rng = rng_for(10, 5)
        space_sup = ModuleSpace(3, 2, NormKind.SUP)
        for _ in range(200):
            x = random_module_vector(rng, space_sup)
            phi = Functional(space_sup, x.entries)
            assert dual_norm(phi, NormKind.ONE) == norm(x)


class TestSampledLowerBound:
    @pytest.mark.parametrize("kind", [NormKind.SUP, NormKind.ONE])
    def test_alignment_makes_it_exact(self, kind):
        rng = rng_for(11, int(kind is NormKind.ONE))
        space = ModuleSpace(3, 2, kind)
        for _ in range(50):
            phi = random_functional(rng, space)
            got = operator_norm_sample_lower_bound(phi, kind, trials=3, seed=5)
            assert got == dual_norm(phi, kind)

    def test_zero_functional(self):
        space = ModuleSpace(2, 2, NormKind.SUP)
        phi = Functional(space, (L(0, 0), L(0, 0)))
        assert operator_norm_sample_lower_bound(phi, NormKind.SUP, 5, 1) == L(0, 0)

    def test_always_below_closed_form_two_norm(self):
        cfg = ToleranceConfig()
        rng = rng_for(12, 6)
        space = ModuleSpace(3, 2, NormKind.TWO)
        for _ in range(200):
            phi = random_functional(rng, space)
            lower = operator_norm_sample_lower_bound(phi, NormKind.TWO, 5, 21)
            upper = value_intervals(dual_norm(phi, NormKind.TWO))
            for j in range(2):
                assert lower[j] <= upper[j][1]
                assert upper[j][1] - lower[j] <= cfg.compare_tol
