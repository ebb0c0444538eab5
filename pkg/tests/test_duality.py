from fractions import Fraction

import pytest

from lbochner.bochner import INF, LFunction, LpHandle, lp_norm
from lbochner.duality import (
    DualFunction,
    LpOperator,
    ZeroNorm,
    bootstrap_lower_bound,
    build_F,
    dual_lp_norm,
    ess_sup_lower_bound,
    isometry_check,
    operator_norm,
    operator_norm_certified,
    pairing,
    represent,
    roundtrip_check,
)
from lbochner.falgebra import LElement, ToleranceConfig
from lbochner.lmodule import (
    Functional,
    ModuleSpace,
    ModuleVector,
    NormKind,
    value_intervals,
)
from lbochner.measure import MeasureSpace
from lbochner.sampling import (
    random_functional,
    random_lelement,
    random_measure_space,
    random_module_vector,
    rng_for,
)
from lbochner.vecmeasure import NotAbsolutelyContinuous


def L(*coords):
    return LElement(list(coords))


PRIMAL = ModuleSpace(1, 2, NormKind.SUP)


def dual_fn(space, *coeff_elements):
    return DualFunction(space, tuple(
        Functional(PRIMAL, (c,)) for c in coeff_elements))


@pytest.fixture
def two_atoms():
    return MeasureSpace.build(["a", "b"], [1, 1])


class TestPairing:
    def test_example(self, two_atoms):
        u = LFunction(two_atoms, PRIMAL, (
            ModuleVector(PRIMAL, (L(1, 0),)),
            ModuleVector(PRIMAL, (L(0, 1),)),
        ))
        v = dual_fn(two_atoms, L(2, 3), L(2, 3))
        assert pairing(u, v) == L(2, 3)

    def test_zero_dual(self, two_atoms):
        rng = rng_for(51, 1)
        v = dual_fn(two_atoms, L(0, 0), L(0, 0))
        for _ in range(10):
            u = LFunction(two_atoms, PRIMAL, tuple(
                random_module_vector(rng, PRIMAL) for _ in range(2)))
            assert pairing(u, v) == L(0, 0)

    def test_indicator_consistency_with_measure(self, two_atoms):
        # pairing against x * 1_F equals the induced set function at F
        rng = rng_for(52, 2)
        v = dual_fn(two_atoms, random_lelement(rng, 2), random_lelement(rng, 2))
        x = ModuleVector(PRIMAL, (random_lelement(rng, 2),))
        for F in two_atoms.all_subsets():
            u = LFunction.indicator_times(x, F)
            expected = LElement.zero(2)
            for t in sorted(F.members):
                from lbochner.lmodule import apply
                expected = expected + apply(v.values[t], x).scale(
                    two_atoms.masses[t])
            assert pairing(u, v) == expected


class TestBuildF:
    def test_agrees_with_pairing_on_seeded_inputs(self, two_atoms):
        rng = rng_for(53, 3)
        v = dual_fn(two_atoms, random_lelement(rng, 2), random_lelement(rng, 2))
        H = build_F(v, Fraction(1))
        for _ in range(100):
            u = LFunction(two_atoms, PRIMAL, tuple(
                random_module_vector(rng, PRIMAL) for _ in range(2)))
            assert H(u) == pairing(u, v)

    def test_zero_dual_gives_zero_operator(self, two_atoms):
        v = dual_fn(two_atoms, L(0, 0), L(0, 0))
        H = build_F(v, Fraction(2))
        assert all(c.is_zero() for row in H.basis_action for c in row)

    def test_single_atom_action(self):
        space = MeasureSpace.build(["a"], ["2/3"])
        v = dual_fn(space, L(3, -6))
        H = build_F(v, Fraction(1))
        assert H.basis_action[0][0] == L(2, -4)


class TestOperatorNorm:
    def test_p1_example(self, two_atoms):
        v = dual_fn(two_atoms, L(3, 1), L(4, 1))
        H = build_F(v, Fraction(1))
        assert operator_norm(H) == L(4, 1)

    def test_zero_operator(self, two_atoms):
        v = dual_fn(two_atoms, L(0, 0), L(0, 0))
        H = build_F(v, Fraction(2))
        assert operator_norm(H) == L(0, 0)

    def test_p2_single_atom_cauchy_schwarz(self):
        space = MeasureSpace.build(["a"], [1])
        v = dual_fn(space, L(2, -3))
        H = build_F(v, Fraction(2))
        assert operator_norm(H) == L(2, 3)

    def test_certified_interval_narrow(self, two_atoms):
        cfg = ToleranceConfig()
        rng = rng_for(54, 4)
        for p in (Fraction(1), Fraction(2)):
            for _ in range(50):
                v = dual_fn(two_atoms, random_lelement(rng, 2),
                            random_lelement(rng, 2))
                H = build_F(v, p)
                _, cert = operator_norm_certified(H, trials=4, seed=9)
                assert cert.passed, cert.witness

    def test_null_atom_charge_rejected(self):
        space = MeasureSpace.build(["a", "b"], [1, 0])
        H = LpOperator(space, PRIMAL,
                       ((L(1, 1),), (L(1, 0),)), Fraction(1))
        with pytest.raises(NotAbsolutelyContinuous):
            operator_norm(H)


class TestIsometry:
    def test_p1_example(self, two_atoms):
        v = dual_fn(two_atoms, L(3, 1), L(4, 1))
        rep = isometry_check(v, Fraction(1), INF)
        assert rep.passed
        assert rep.fv_norm == L(4, 1)
        assert rep.v_norm == L(4, 1)
        assert all(g == 0 for g in rep.per_coordinate_gap)

    def test_zero_dual(self, two_atoms):
        v = dual_fn(two_atoms, L(0, 0), L(0, 0))
        rep = isometry_check(v, Fraction(1), INF)
        assert rep.passed

    def test_p2_single_atom(self):
        space = MeasureSpace.build(["a"], [1])
        v = dual_fn(space, L(3, 4))
        rep = isometry_check(v, Fraction(2), Fraction(2))
        assert rep.passed
        for iv in value_intervals(rep.fv_norm):
            assert iv[0] <= 3 or iv[0] <= 4  # brackets around |coefficient|
        assert len(rep.bootstrap_trace) > 0

    def test_exactness_p1_sup_and_one(self):
        rng = rng_for(55, 5)
        for kind in (NormKind.SUP, NormKind.ONE):
            primal = ModuleSpace(2, 2, kind)
            for _ in range(100):
                space = random_measure_space(rng, 3)
                v = DualFunction(space, tuple(
                    random_functional(rng, primal) for _ in range(3)))
                rep = isometry_check(v, Fraction(1), INF)
                assert rep.passed
                assert all(g == 0 for g in rep.per_coordinate_gap)


class TestBootstrap:
    def test_single_atom_constant(self):
        space = MeasureSpace.build(["a"], [1])
        mod1 = ModuleSpace(1, 1, NormKind.SUP)
        v = DualFunction(space, (Functional(mod1, (L(2),)),))
        rep = bootstrap_lower_bound(v, Fraction(2), 20)
        assert rep.passed
        # equality throughout: lhs_n = 2**s_n = rhs_n
        for row in rep.series:
            assert row["lhs"] == row["rhs"]

    def test_constant_norm_consistency(self):
        # constant atom norms c: the q-norm is c * mu(S)**(1/q)
        space = MeasureSpace.build(["a", "b"], ["1/2", "1/2"])
        mod1 = ModuleSpace(1, 1, NormKind.SUP)
        v = DualFunction(space, (Functional(mod1, (L("3/2"),)),
                                 Functional(mod1, (L("-3/2"),))))
        rep = bootstrap_lower_bound(v, Fraction(2), 20)
        assert rep.passed
        target = value_intervals(rep.details["target_norm"])[0]
        assert target[0] <= Fraction(3, 2) <= target[1]

    def test_n0_is_single_holder_step(self, two_atoms):
        v = dual_fn(two_atoms, L(1, 2), L(3, "1/2"))
        rep = bootstrap_lower_bound(v, Fraction(2), 0,
                                    limit_tol=Fraction(10))  # limit vacuous
        assert rep.passed
        assert len(rep.series) == 1

    def test_zero_norm_atom_rejected(self, two_atoms):
        v = dual_fn(two_atoms, L(1, 0), L(1, 1))
        with pytest.raises(ZeroNorm):
            bootstrap_lower_bound(v, Fraction(2), 3)

    def test_chain_holds_to_n20_with_tight_limit(self):
        from lbochner.cli import _bootstrap_dual
        for seed in range(5):
            v = _bootstrap_dual(seed, 3, 2)
            rep = bootstrap_lower_bound(v, Fraction(2), 20)
            assert rep.passed
            for gap in rep.details["limit_gaps"]:
                assert gap <= Fraction(1, 2 ** 20)


class TestEssSup:
    def test_no_exceedance(self, two_atoms):
        v = dual_fn(two_atoms, L(3, 1), L(4, 1))
        rep = ess_sup_lower_bound(v, [Fraction(1, 10), Fraction(1, 100)])
        assert rep.passed
        assert all(row["mu"] == 0 for row in rep.series)

    def test_constant_dual(self, two_atoms):
        v = dual_fn(two_atoms, L(2, 2), L(2, 2))
        rep = ess_sup_lower_bound(v, [Fraction(1, 7)])
        assert rep.passed

    def test_corrupted_norm_is_flagged(self, two_atoms):
        v = dual_fn(two_atoms, L(3, 1), L(4, 1))
        lowered = L(1, "1/2")
        rep = ess_sup_lower_bound(v, [Fraction(1, 10)],
                                  fv_norm_override=lowered)
        assert not rep.passed
        assert rep.witness["mu"] > 0


class TestRepresent:
    def test_roundtrip_oracle(self, two_atoms):
        rng = rng_for(56, 6)
        v = dual_fn(two_atoms, random_lelement(rng, 2), random_lelement(rng, 2))
        H = build_F(v, Fraction(1))
        back = represent(H)
        for t in range(2):
            assert back.values[t].coeffs == v.values[t].coeffs

    def test_zero_operator(self, two_atoms):
        H = LpOperator(two_atoms, PRIMAL,
                       ((L(0, 0),), (L(0, 0),)), Fraction(1))
        v = represent(H)
        assert all(f.is_zero() for f in v.values)

    def test_null_atom_concentration_rejected(self):
        space = MeasureSpace.build(["a", "b"], [1, 0])
        H = LpOperator(space, PRIMAL,
                       ((L(0, 0),), (L(1, 0),)), Fraction(1))
        with pytest.raises(NotAbsolutelyContinuous):
            represent(H)


class TestRoundtrip:
    def test_p1_sup_exact(self):
        rep = roundtrip_check(Fraction(1), INF, trials=30, seed=77)
        assert rep.passed
        for row in rep.series:
            assert all(g == 0 for g in row["gap"])

    def test_p2_within_tolerance(self):
        cfg = ToleranceConfig()
        rep = roundtrip_check(Fraction(2), Fraction(2), trials=30, seed=78)
        assert rep.passed
        for row in rep.series:
            assert all(g <= cfg.compare_tol for g in row["gap"])

    def test_trivial_space_scalar_duality(self):
        # one atom, rank one, scalar dimension one: |F_v| = |v|
        rep = roundtrip_check(Fraction(1), INF, trials=10, seed=79,
                              m=1, rank=1, scalar_dim=1, null_atoms=0)
        assert rep.passed


class TestLinearity:
    def test_pairing_linear_in_dual(self, two_atoms):
        rng = rng_for(57, 7)
        for _ in range(100):
            v = dual_fn(two_atoms, random_lelement(rng, 2),
                        random_lelement(rng, 2))
            w = dual_fn(two_atoms, random_lelement(rng, 2),
                        random_lelement(rng, 2))
            alpha = random_lelement(rng, 2)
            u = LFunction(two_atoms, PRIMAL, tuple(
                random_module_vector(rng, PRIMAL) for _ in range(2)))
            lhs = pairing(u, v.scale(alpha) + w)
            rhs = alpha * pairing(u, v) + pairing(u, w)
            assert lhs == rhs


class TestBoundedness:
    @pytest.mark.parametrize("p,q", [(Fraction(1), INF),
                                     (Fraction(2), Fraction(2)),
                                     (INF, Fraction(1))])
    def test_pairing_bounded_by_norm_product(self, p, q):
        cfg = ToleranceConfig()
        rng = rng_for(58, 0 if p is INF else int(p))
        primal = ModuleSpace(1, 2, NormKind.SUP)
        for _ in range(300):
            space = random_measure_space(rng, 3)
            u = LFunction(space, primal, tuple(
                random_module_vector(rng, primal) for _ in range(3)))
            v = DualFunction(space, tuple(
                random_functional(rng, primal) for _ in range(3)))
            lhs = abs(pairing(u, v))
            handle = LpHandle(p, space, primal)
            nu = value_intervals(lp_norm(u, handle))
            nv = value_intervals(dual_lp_norm(v, q))
            for j in range(2):
                bound_hi = nu[j][1] * nv[j][1]
                tol = 0 if (nu[j][0] == nu[j][1] and nv[j][0] == nv[j][1]) \
                    else cfg.compare_tol
                assert lhs[j] <= bound_hi + tol
