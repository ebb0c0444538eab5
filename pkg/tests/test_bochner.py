import decimal
from fractions import Fraction

import pytest

from lbochner.bochner import (
    INF,
    DominatorViolation,
    LFunction,
    LpHandle,
    TruncatedSequenceSpec,
    check_chebyshev_step,
    check_holder,
    check_minkowski,
    conjugate_exponent,
    integrate,
    integrate_over,
    is_conjugate_pair,
    lp_norm,
    run_completeness_harness,
    run_dct_experiment,
    simple_approximation,
    verify_sup_representation,
)
from lbochner.falgebra import LElement, ToleranceConfig
from lbochner.lmodule import ModuleSpace, ModuleVector, NormKind, value_intervals
from lbochner.measure import MeasureSpace
from lbochner.sampling import random_module_vector, rng_for


def L(*coords):
    return LElement(list(coords))


def dec_sqrt(q: Fraction) -> Fraction:
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        return Fraction((decimal.Decimal(q.numerator)
                         / decimal.Decimal(q.denominator)).sqrt())


MOD = ModuleSpace(1, 2, NormKind.SUP)


def fn(space, *vectors):
    return LFunction(space, MOD, tuple(
        ModuleVector(MOD, (v,)) for v in vectors))


@pytest.fixture
def base():
    # d=2, k=1, S={a,b}, mu=(1,2), f(a)=(1,2), f(b)=(3,1)
    space = MeasureSpace.build(["a", "b"], [1, 2])
    return space, fn(space, L(1, 2), L(3, 1))


class TestExponents:
    def test_conjugates(self):
        assert conjugate_exponent(Fraction(1)) is INF
        assert conjugate_exponent(INF) == 1
        assert conjugate_exponent(Fraction(2)) == 2
        assert conjugate_exponent(Fraction(3)) == Fraction(3, 2)
        assert is_conjugate_pair(Fraction(3), Fraction(3, 2))
        assert not is_conjugate_pair(Fraction(2), Fraction(3))


class TestIntegrate:
    def test_example(self, base):
        space, f = base
        assert integrate(f).entries[0] == L(7, 4)

    def test_zero_function(self, base):
        space, _ = base
        assert integrate(LFunction.zero(space, MOD)).entries[0] == L(0, 0)

    def test_indicator_scaling(self, base):
        space, _ = base
        f = LFunction.indicator_times(
            ModuleVector(MOD, (L(3, 1),)), space.subset_of_names(["b"]))
        assert integrate(f).entries[0] == L(6, 2)

    def test_integrate_over(self, base):
        space, f = base
        assert integrate_over(f, space.full_set()) == integrate(f)
        assert integrate_over(f, space.empty_set()).entries[0] == L(0, 0)
        assert integrate_over(f, space.subset_of_names(["a"])).entries[0] == L(1, 2)

    def test_linearity_random(self):
        rng = rng_for(31, 1)
        space = MeasureSpace.build(["a", "b", "c"], [1, "1/3", 2])
        codomain = ModuleSpace(2, 2, NormKind.SUP)
        for _ in range(100):
            from lbochner.sampling import random_lelement
            f = LFunction(space, codomain, tuple(
                random_module_vector(rng, codomain) for _ in range(3)))
            g = LFunction(space, codomain, tuple(
                random_module_vector(rng, codomain) for _ in range(3)))
            alpha = random_lelement(rng, 2)
            lhs = integrate(f.scale(alpha) + g)
            rhs_f = integrate(f)
            rhs = ModuleVector(codomain, tuple(
                alpha * e for e in rhs_f.entries)) + integrate(g)
            assert lhs == rhs

    def test_triangle_bound_exact(self):
        from lbochner.lmodule import norm
        rng = rng_for(32, 2)
        space = MeasureSpace.build(["a", "b", "c"], [1, "1/3", 2])
        for kind in (NormKind.SUP, NormKind.ONE):
            codomain = ModuleSpace(2, 2, kind)
            handle = LpHandle(Fraction(1), space, codomain)
            for _ in range(100):
                f = LFunction(space, codomain, tuple(
                    random_module_vector(rng, codomain) for _ in range(3)))
                assert norm(integrate(f)) <= lp_norm(f, handle)


class TestLpNorm:
    def test_p1_equals_integral_of_modulus(self, base):
        space, f = base
        handle = LpHandle(Fraction(1), space, MOD)
        assert lp_norm(f, handle) == L(7, 4)

    def test_p2_example_against_sqrt_oracle(self, base):
        space, f = base
        handle = LpHandle(Fraction(2), space, MOD)
        got = value_intervals(lp_norm(f, handle))
        for iv, target in zip(got, (Fraction(19), Fraction(6))):
            true = dec_sqrt(target)
            assert iv[0] <= true <= iv[1]

    def test_ess_sup_excludes_null_atoms(self):
        space = MeasureSpace.build(["a", "b", "c"], [1, 2, 0])
        f = fn(space, L(1, 1), L(2, 5), L(9, 9))
        handle = LpHandle(INF, space, MOD)
        assert lp_norm(f, handle) == L(2, 5)

    def test_homogeneity_exact_p1(self):
        space = MeasureSpace.build(["a", "b"], [1, "2/3"])
        f = fn(space, L(1, -2), L("4/7", 3))
        handle = LpHandle(Fraction(1), space, MOD)
        doubled = f.scale_rational(Fraction(-2))
        assert lp_norm(doubled, handle) == lp_norm(f, handle).scale(2)


class TestSupRepresentation:
    def test_exhaustive_max_at_full_space(self, base):
        space, f = base
        rep = verify_sup_representation(f, LpHandle(Fraction(2), space, MOD))
        assert rep.passed
        assert rep.details["subsets"] == 4
        assert rep.details["max_at_full_space"] == L(19, 6)

    def test_zero_function(self, base):
        space, _ = base
        rep = verify_sup_representation(
            LFunction.zero(space, MOD), LpHandle(Fraction(1), space, MOD))
        assert rep.passed
        assert rep.details["max_at_full_space"] == L(0, 0)

    def test_single_atom_support(self):
        space = MeasureSpace.build(["a", "b", "c"], [1, 1, 1])
        f = fn(space, L(0, 0), L(2, 3), L(0, 0))
        rep = verify_sup_representation(f, LpHandle(Fraction(1), space, MOD))
        assert rep.passed

    def test_m10_exhaustive(self):
        rng = rng_for(33, 3)
        space = MeasureSpace.build([f"a{i}" for i in range(10)],
                                   [Fraction(i + 1, 7) for i in range(10)])
        f = LFunction(space, MOD, tuple(
            random_module_vector(rng, MOD) for _ in range(10)))
        rep = verify_sup_representation(f, LpHandle(Fraction(2), space, MOD))
        assert rep.passed
        assert rep.details["subsets"] == 1024


class TestHolder:
    def test_p2_example_with_componentwise_oracle(self, base):
        # u as in the base fixture, v constant (1,1): the right side is
        # (sqrt(19)*sqrt(3), sqrt(6)*sqrt(3)) componentwise
        space, u = base
        v = fn(space, L(1, 1), L(1, 1))
        rep = check_holder(u, v, Fraction(2), Fraction(2))
        assert rep.passed
        lhs = value_intervals(rep.details["lhs"])
        rhs = value_intervals(rep.details["rhs"])
        assert lhs[0][0] == 7 and lhs[1][0] == 4
        for iv, prod in zip(rhs, (Fraction(57), Fraction(18))):
            true = dec_sqrt(prod)
            assert iv[0] <= true <= iv[1]

    def test_p1_with_unit_v_is_equality(self, base):
        space, u = base
        v = fn(space, L(1, 1), L(1, 1))
        rep = check_holder(u, v, Fraction(1), INF)
        assert rep.passed
        assert all(s == 0 for s in rep.details["slack"])

    def test_zero_function(self, base):
        space, u = base
        zero = LFunction.zero(space, MOD)
        rep = check_holder(u, zero, Fraction(2), Fraction(2))
        assert rep.passed
        assert value_intervals(rep.details["lhs"])[0] == (0, 0)

    def test_non_conjugate_rejected(self, base):
        space, u = base
        with pytest.raises(ValueError):
            check_holder(u, u, Fraction(2), Fraction(3))

    def test_tight_for_aligned_pairs(self):
        # v = |u| sign-aligned at p = q = 2, rank one: equality up to brackets
        cfg = ToleranceConfig()
        rng = rng_for(34, 4)
        space = MeasureSpace.build(["a", "b", "c"], [1, "1/2", 2])
        for _ in range(50):
            u = LFunction(space, MOD, tuple(
                random_module_vector(rng, MOD) for _ in range(3)))
            from lbochner.falgebra import sgn
            v = LFunction(space, MOD, tuple(
                ModuleVector(MOD, (abs(val.entries[0]) * sgn(val.entries[0]),))
                for val in u.values))
            rep = check_holder(u, v, Fraction(2), Fraction(2))
            assert rep.passed
            for s in rep.details["slack"]:
                assert abs(s) <= cfg.compare_tol

    def test_k2_uses_dual_norm_for_second_factor(self):
        # sup-normed u with all-ones entries: the pairing hits k, which
        # exceeds ||u|| ||v|| unless v is measured in the one-norm dual
        space = MeasureSpace.build(["a"], [1])
        codomain = ModuleSpace(2, 1, NormKind.SUP)
        ones = ModuleVector(codomain, (L(1), L(1)))
        u = LFunction(space, codomain, (ones,))
        rep = check_holder(u, u, Fraction(1), INF)
        assert rep.passed


class TestMinkowski:
    def test_v_equals_minus_u(self, base):
        space, u = base
        rep = check_minkowski(u, u.scale_rational(-1), Fraction(2))
        assert rep.passed
        assert value_intervals(rep.details["lhs"])[0] == (0, 0)

    def test_v_equals_u_is_equality(self, base):
        space, u = base
        rep = check_minkowski(u, u, Fraction(3))
        assert rep.passed

    @pytest.mark.parametrize("p", [Fraction(1), Fraction(2), Fraction(3)])
    def test_seeded_random_pairs(self, p):
        rng = rng_for(35, int(p))
        space = MeasureSpace.build(["a", "b", "c"], [1, "1/3", 2])
        for _ in range(100):
            u = LFunction(space, MOD, tuple(
                random_module_vector(rng, MOD) for _ in range(3)))
            v = LFunction(space, MOD, tuple(
                random_module_vector(rng, MOD) for _ in range(3)))
            assert check_minkowski(u, v, p).passed


class TestChebyshev:
    def test_spec_example(self):
        # d=1: mu=(1,1), differences (1/2, 1/20), gamma=1/10
        space = MeasureSpace.build(["a", "b"], [1, 1])
        mod1 = ModuleSpace(1, 1, NormKind.SUP)
        h = LFunction.zero(space, mod1)
        hn = LFunction(space, mod1, (
            ModuleVector(mod1, (L("1/2"),)),
            ModuleVector(mod1, (L("1/20"),)),
        ))
        rep = check_chebyshev_step([hn], h, Fraction(1, 10))
        assert rep.passed
        row = rep.series[0]
        assert row["level_measure"] == 1       # A = {a}
        assert row["integral"] == Fraction(11, 20)

    def test_equal_functions(self):
        space = MeasureSpace.build(["a", "b"], [1, 1])
        mod1 = ModuleSpace(1, 1, NormKind.SUP)
        h = LFunction.zero(space, mod1)
        rep = check_chebyshev_step([h], h, Fraction(1, 10))
        assert rep.passed
        assert rep.series[0]["level_measure"] == 0

    def test_constant_gamma_is_tight(self):
        space = MeasureSpace.build(["a", "b", "c"], [1, 2, "1/2"])
        mod1 = ModuleSpace(1, 1, NormKind.SUP)
        h = LFunction.zero(space, mod1)
        gamma = Fraction(3, 7)
        hn = LFunction(space, mod1, tuple(
            ModuleVector(mod1, (LElement([gamma]),)) for _ in range(3)))
        rep = check_chebyshev_step([hn], h, gamma)
        assert rep.passed
        assert rep.series[0]["slack"] == 0  # equality gamma*mu(S) = integral


def geometric_spec(seed, levels):
    from lbochner.cli import _dct_spec
    return _dct_spec(seed, levels)


class TestDct:
    def test_truncation_family_bound(self):
        spec = geometric_spec(5, 16)
        rep = run_dct_experiment(spec, 12)
        assert rep.passed
        # tail of the geometric masses: e_n <= 2**-n
        for row in rep.series:
            n = row["n"]
            for coord in row["error"]:
                assert coord <= Fraction(1, 2 ** n)

    def test_constant_sequence_zero_error(self):
        spec = geometric_spec(6, 10)
        stable = TruncatedSequenceSpec(
            space=spec.space, codomain=spec.codomain,
            term=lambda n, t: spec.limit.values[t],
            limit=spec.limit, dominator=spec.dominator,
            scalar_bound=spec.scalar_bound, tail_mass=spec.tail_mass)
        rep = run_dct_experiment(stable, 6)
        assert rep.passed
        for row in rep.series:
            assert all(c == 0 for c in row["error"])

    def test_dominator_violation_raises_with_witness(self):
        spec = geometric_spec(7, 8)
        small = TruncatedSequenceSpec(
            space=spec.space, codomain=spec.codomain, term=spec.term,
            limit=spec.limit,
            dominator=tuple(LElement(["1/1000", "1/1000"])
                            for _ in range(8)),
            scalar_bound=spec.scalar_bound, tail_mass=spec.tail_mass)
        with pytest.raises(DominatorViolation) as err:
            run_dct_experiment(small, 6)
        assert err.value.n >= 0 and err.value.t >= 0


class TestCompleteness:
    def test_exact_residuals_p1(self):
        space = MeasureSpace.build(["a", "b", "c"],
                                   [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
        handle = LpHandle(Fraction(1), space, ModuleSpace(2, 2, NormKind.SUP))
        rep = run_completeness_harness(handle, seed=11, n_terms=8)
        assert rep.passed
        norm_w = rep.details["norm_w"]
        for row in rep.series:
            n = row["n"]
            expected = [q / 2 ** n for q in norm_w.coords]
            assert row["residual"] == expected

    def test_zero_direction_constant_sequence(self):
        # engineered via a harness-equivalent check: w = 0 means all terms
        # coincide, so every residual is zero
        space = MeasureSpace.build(["a"], [1])
        codomain = ModuleSpace(1, 1, NormKind.SUP)
        u_star = LFunction(space, codomain,
                           (ModuleVector(codomain, (L(3),)),))
        zero = LFunction.zero(space, codomain)
        terms = [u_star + zero.scale_rational(Fraction(1, 2 ** n))
                 for n in range(1, 5)]
        handle = LpHandle(Fraction(1), space, codomain)
        for t in terms:
            assert lp_norm(u_star - t, handle) == LElement.zero(1)


class TestLpNormAxioms:
    """The p-norm makes the function space a normed module: definiteness up
    to null atoms, homogeneity under scalar-algebra multiples, triangle."""

    def test_axioms_sampled_p1_exact(self):
        rng = rng_for(36, 1)
        space = MeasureSpace.build(["a", "b", "c"], [1, "1/2", 2])
        codomain = ModuleSpace(2, 2, NormKind.SUP)
        handle = LpHandle(Fraction(1), space, codomain)
        from lbochner.sampling import random_lelement
        for _ in range(200):
            u = LFunction(space, codomain, tuple(
                random_module_vector(rng, codomain) for _ in range(3)))
            v = LFunction(space, codomain, tuple(
                random_module_vector(rng, codomain) for _ in range(3)))
            lam = random_lelement(rng, 2)
            assert lp_norm(u.scale(lam), handle) == \
                abs(lam) * lp_norm(u, handle)
            assert lp_norm(u + v, handle) <= \
                lp_norm(u, handle) + lp_norm(v, handle)
        assert lp_norm(LFunction.zero(space, codomain), handle) \
            == LElement.zero(2)

    def test_definiteness_up_to_null_atoms(self):
        space = MeasureSpace.build(["a", "b"], [1, 0])
        codomain = ModuleSpace(1, 2, NormKind.SUP)
        handle = LpHandle(Fraction(1), space, codomain)
        supported_on_null = LFunction(space, codomain, (
            codomain.zero(),
            ModuleVector(codomain, (L(5, 5),)),
        ))
        # vanishes almost everywhere, so the norm is zero
        assert lp_norm(supported_on_null, handle) == LElement.zero(2)
        somewhere = LFunction(space, codomain, (
            ModuleVector(codomain, (L(0, 3),)),
            codomain.zero(),
        ))
        assert lp_norm(somewhere, handle) != LElement.zero(2)

    def test_axioms_sampled_p2_toleranced(self):
        from lbochner import certified
        cfg = ToleranceConfig()
        rng = rng_for(36, 2)
        space = MeasureSpace.build(["a", "b"], [1, "1/2"])
        codomain = ModuleSpace(1, 2, NormKind.TWO)
        handle = LpHandle(Fraction(2), space, codomain)
        from lbochner.sampling import random_lelement
        for _ in range(100):
            u = LFunction(space, codomain, tuple(
                random_module_vector(rng, codomain) for _ in range(2)))
            lam = random_lelement(rng, 2)
            lhs = value_intervals(lp_norm(u.scale(lam), handle))
            base = value_intervals(lp_norm(u, handle))
            alam = abs(lam)
            for j in range(2):
                rhs = certified.iscale(base[j], alam[j])
                ok, _ = certified.eq_within(lhs[j], rhs, cfg.compare_tol)
                assert ok


class TestSimpleApproximation:
    def test_full_and_empty(self, base):
        space, f = base
        assert simple_approximation(f, 2).values == f.values
        assert simple_approximation(f, 5).values == f.values
        g0 = simple_approximation(f, 0)
        assert all(v.is_zero() for v in g0.values)

    def test_residual_is_tail_sum(self):
        space = MeasureSpace.build(["a", "b", "c"], ["1/2", "1/4", "1/8"])
        f = fn(space, L(2, 1), L(4, 4), L(8, 0))
        handle = LpHandle(Fraction(1), space, MOD)
        for n in range(4):
            residual = lp_norm(simple_approximation(f, n) - f, handle)
            tail = LElement.zero(2)
            for t in range(n, 3):
                tail = tail + abs(f.values[t].entries[0]).scale(space.masses[t])
            assert residual == tail
