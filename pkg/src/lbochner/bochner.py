"""Simple functions on finite atomic spaces, their integrals, and the
p-norm calculus: Hölder/Minkowski checkers, the subset-supremum norm
representation, the Chebyshev step, the dominated-convergence experiment on
truncated countable spaces, and the completeness harness.

On a finite atomic space every function is simple and the integral is the
mass-weighted sum, so everything here is exact except for p-th roots, which
carry certified brackets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from . import certified
from .certified import Interval
from .falgebra import (
    DEFAULT_TOLERANCES,
    LElement,
    ToleranceConfig,
    axpy,
    check_order_convergence,
)
from .lmodule import ModuleSpace, ModuleVector, NormKind, norm_intervals, collapse_intervals, NormValue
from .measure import MeasurableSet, MeasureSpace, SpaceMismatch
from .reports import CheckReport
from .sampling import random_module_vector, rng_for

INF = None  # exponent marker for the essential-sup norm

Exponent = Optional[Fraction]


def conjugate_exponent(p: Exponent) -> Exponent:
    if p is INF:
        return Fraction(1)
    if p == 1:
        return INF
    return p / (p - 1)


def is_conjugate_pair(p: Exponent, q: Exponent) -> bool:
    inv_p = Fraction(0) if p is INF else Fraction(1) / p
    inv_q = Fraction(0) if q is INF else Fraction(1) / q
    return inv_p + inv_q == 1


@dataclass(frozen=True)
class LFunction:
    """A total map atom -> module vector; the representation of a member of
    the p-norm function space."""

    space: MeasureSpace
    codomain: ModuleSpace
    values: Tuple[ModuleVector, ...]

    def __post_init__(self):
        if len(self.values) != self.space.size:
            raise ValueError("one value per atom required")
        for v in self.values:
            if v.space != self.codomain:
                raise SpaceMismatch("value outside the declared codomain")

    @classmethod
    def indicator_times(cls, x: ModuleVector, F: MeasurableSet) -> "LFunction":
        vals = tuple(x if i in F.members else x.space.zero()
                     for i in range(F.space.size))
        return cls(F.space, x.space, vals)

    @classmethod
    def zero(cls, space: MeasureSpace, codomain: ModuleSpace) -> "LFunction":
        return cls(space, codomain, (codomain.zero(),) * space.size)

    def __add__(self, other: "LFunction") -> "LFunction":
        self._check(other)
        return LFunction(self.space, self.codomain, tuple(
            a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "LFunction") -> "LFunction":
        self._check(other)
        return LFunction(self.space, self.codomain, tuple(
            a - b for a, b in zip(self.values, other.values)))

    def scale(self, lam: LElement) -> "LFunction":
        return LFunction(self.space, self.codomain,
                         tuple(v.scale(lam) for v in self.values))

    def scale_rational(self, c) -> "LFunction":
        return LFunction(self.space, self.codomain,
                         tuple(v.scale_rational(c) for v in self.values))

    def restrict(self, E: MeasurableSet) -> "LFunction":
        if E.space != self.space:
            raise SpaceMismatch("set on a different measure space")
        return LFunction(self.space, self.codomain, tuple(
            v if i in E.members else self.codomain.zero()
            for i, v in enumerate(self.values)))

    def _check(self, other: "LFunction") -> None:
        if self.space != other.space or self.codomain != other.codomain:
            raise SpaceMismatch("functions on different spaces")

    def _check_pairable(self, other: "LFunction") -> None:
        # same base space and vector shape; norm kinds may differ
        if (self.space != other.space
                or self.codomain.rank != other.codomain.rank
                or self.codomain.scalar_dim != other.codomain.scalar_dim):
            raise SpaceMismatch("functions cannot be paired")


@dataclass(frozen=True)
class LpHandle:
    p: Exponent  # None marks the essential-sup norm
    base: MeasureSpace
    codomain: ModuleSpace

    def __post_init__(self):
        if self.p is not INF and self.p < 1:
            raise ValueError("exponent must be >= 1 or INF")

    @property
    def is_inf(self) -> bool:
        return self.p is INF

    @property
    def q(self) -> Exponent:
        return conjugate_exponent(self.p)


def integrate(f: LFunction) -> ModuleVector:
    acc = list(f.codomain.zero().entries)
    for t, mass in enumerate(f.space.masses):
        if mass == 0:
            continue
        val = f.values[t]
        for i in range(f.codomain.rank):
            acc[i] = axpy(acc[i], mass, val.entries[i])
    return ModuleVector(f.codomain, tuple(acc))


def integrate_over(f: LFunction, E: MeasurableSet) -> ModuleVector:
    if E.space != f.space:
        raise SpaceMismatch("set on a different measure space")
    acc = list(f.codomain.zero().entries)
    for t in sorted(E.members):
        mass = f.space.masses[t]
        if mass == 0:
            continue
        val = f.values[t]
        for i in range(f.codomain.rank):
            acc[i] = axpy(acc[i], mass, val.entries[i])
    return ModuleVector(f.codomain, tuple(acc))


def _atom_norm_intervals(f: LFunction, kind: NormKind,
                         cfg: ToleranceConfig) -> List[List[Interval]]:
    return [norm_intervals(v.entries, kind, cfg) for v in f.values]


def _atom_norm_p(f: LFunction, p: Fraction, kind: NormKind,
                 cfg: ToleranceConfig) -> List[List[Interval]]:
    """Per atom, per scalar coordinate: certified bracket of ||f(t)||**p."""
    bits = cfg.root_bits + 2
    out = []
    for norms in _atom_norm_intervals(f, kind, cfg):
        out.append([certified.ipow_frac(iv, p, bits) for iv in norms])
    return out


def _lp_norm_intervals(f: LFunction, p: Exponent, kind: NormKind,
                       cfg: ToleranceConfig) -> List[Interval]:
    d = f.codomain.scalar_dim
    if p is INF:
        out = [certified.exact(Fraction(0))] * d
        for t, norms in enumerate(_atom_norm_intervals(f, kind, cfg)):
            if f.space.masses[t] == 0:
                continue
            out = [certified.imax(a, b) for a, b in zip(out, norms)]
        return out
    bits = cfg.root_bits + 2
    total = [certified.exact(Fraction(0))] * d
    for t, powers in enumerate(_atom_norm_p(f, p, kind, cfg)):
        mass = f.space.masses[t]
        if mass == 0:
            continue
        total = [certified.iadd(a, certified.iscale(b, mass))
                 for a, b in zip(total, powers)]
    inv_p = Fraction(1) / p
    return [certified.ipow_frac(iv, inv_p, bits) for iv in total]


def lp_norm(f: LFunction, handle: LpHandle,
            cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> NormValue:
    if handle.base != f.space or handle.codomain != f.codomain:
        raise SpaceMismatch("handle does not match the function")
    return collapse_intervals(
        _lp_norm_intervals(f, handle.p, f.codomain.norm_kind, cfg))


def _tol_for(cfg: ToleranceConfig, *interval_lists: Sequence[Interval]) -> Fraction:
    for ivs in interval_lists:
        for iv in ivs:
            if not certified.is_exact(iv):
                return cfg.compare_tol
    return Fraction(0)


def verify_sup_representation(f: LFunction, handle: LpHandle,
                              cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
    """Exhaustively checks that E -> integral over E of ||f||**p is monotone
    under inclusion and attains its supremum at the whole space."""
    if handle.is_inf:
        raise ValueError("sup representation needs a finite exponent")
    m = f.space.size
    d = f.codomain.scalar_dim
    powers = _atom_norm_p(f, handle.p, f.codomain.norm_kind, cfg)
    weighted = [[certified.iscale(powers[t][j], f.space.masses[t])
                 for j in range(d)] for t in range(m)]

    # subset sums by dynamic programming over bitmasks
    sums: List[List[Interval]] = [[certified.exact(Fraction(0))] * d
                                  for _ in range(1 << m)]
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        prev = sums[mask ^ (1 << low)]
        sums[mask] = [certified.iadd(prev[j], weighted[low][j])
                      for j in range(d)]

    tol = _tol_for(cfg, *(powers[t] for t in range(m)))
    full = (1 << m) - 1
    passed = True
    witness = None

    for mask in range(1 << m):
        for j in range(d):
            ok, _ = certified.leq_with_slack(sums[mask][j], sums[full][j], tol)
            if not ok:
                passed = False
                witness = {"subset_mask": mask, "coordinate": j}
                break
        if not passed:
            break

    # single-atom extensions certify monotonicity along every chain
    if passed:
        for mask in range(1 << m):
            for t in range(m):
                if (mask >> t) & 1:
                    continue
                bigger = mask | (1 << t)
                for j in range(d):
                    ok, _ = certified.leq_with_slack(
                        sums[mask][j], sums[bigger][j], tol)
                    if not ok:
                        passed = False
                        witness = {"subset_mask": mask, "atom": t,
                                   "coordinate": j}
                        break

    # exhaustive pair check at small sizes
    pairs_checked = 0
    if passed and m <= 6:
        for mask in range(1 << m):
            sub = mask
            while True:
                for j in range(d):
                    ok, _ = certified.leq_with_slack(
                        sums[sub][j], sums[mask][j], tol)
                    if not ok:
                        passed = False
                        witness = {"subset_mask": sub, "superset_mask": mask,
                                   "coordinate": j}
                pairs_checked += 1
                if sub == 0:
                    break
                sub = (sub - 1) & mask
            if not passed:
                break

    return CheckReport(
        name="sup-representation",
        passed=passed,
        details={
            "subsets": 1 << m,
            "pairs_checked": pairs_checked,
            "max_at_full_space": collapse_intervals(sums[full]),
        },
        witness=witness,
    )


def _pairing_abs(u: ModuleVector, v: ModuleVector) -> LElement:
    acc = LElement.zero(u.space.scalar_dim)
    for a, b in zip(u.entries, v.entries):
        acc = acc + a * b
    return abs(acc)


def check_holder(u: LFunction, v: LFunction, p: Exponent, q: Exponent,
                 cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
    """Integral of |<u, v>| against ||u||_p * ||v||_q.

    The second factor is measured in the dual of u's codomain norm (for
    rank one all kinds coincide with the modulus, so this is invisible
    there); that is the pairing for which the bound is a theorem.
    """
    if not is_conjugate_pair(p, q):
        raise ValueError("non-conjugate exponents")
    u._check_pairable(v)
    d = u.codomain.scalar_dim
    lhs = [certified.exact(Fraction(0))] * d
    for t, mass in enumerate(u.space.masses):
        if mass == 0:
            continue
        val = _pairing_abs(u.values[t], v.values[t])
        lhs = [certified.iadd(lhs[j], certified.exact(val[j] * mass))
               for j in range(d)]

    from .lmodule import dual_kind
    nu = _lp_norm_intervals(u, p, u.codomain.norm_kind, cfg)
    nv = _lp_norm_intervals(v, q, dual_kind(u.codomain.norm_kind), cfg)
    rhs = [certified.imul(a, b) for a, b in zip(nu, nv)]
    tol = _tol_for(cfg, nu, nv)

    passed = True
    witness = None
    slack = []
    for j in range(d):
        ok, s = certified.leq_with_slack(lhs[j], rhs[j], tol)
        slack.append(s)
        if not ok and passed:
            passed = False
            witness = {"coordinate": j, "lhs": certified.mid(lhs[j]),
                       "rhs": certified.mid(rhs[j])}
    return CheckReport(
        name="holder",
        passed=passed,
        details={"lhs": collapse_intervals(lhs), "rhs": collapse_intervals(rhs),
                 "slack": slack, "tolerance": tol},
        witness=witness,
    )


def check_minkowski(u: LFunction, v: LFunction, p: Fraction,
                    cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
    if p is INF or p < 1:
        raise ValueError("need 1 <= p < infinity")
    u._check(v)
    kind = u.codomain.norm_kind
    d = u.codomain.scalar_dim
    ns = _lp_norm_intervals(u + v, p, kind, cfg)
    nu = _lp_norm_intervals(u, p, kind, cfg)
    nv = _lp_norm_intervals(v, p, kind, cfg)
    rhs = [certified.iadd(a, b) for a, b in zip(nu, nv)]
    tol = _tol_for(cfg, ns, nu, nv)

    passed = True
    witness = None
    slack = []
    for j in range(d):
        ok, s = certified.leq_with_slack(ns[j], rhs[j], tol)
        slack.append(s)
        if not ok and passed:
            passed = False
            witness = {"coordinate": j}
    return CheckReport(
        name="minkowski",
        passed=passed,
        details={"lhs": collapse_intervals(ns), "rhs": collapse_intervals(rhs),
                 "slack": slack, "tolerance": tol},
        witness=witness,
    )


def check_chebyshev_step(hs: Sequence[LFunction], h: LFunction, gamma: Fraction,
                         cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
    """Per coordinate and per term: gamma * mu([||h_n - h|| >= gamma]) is at
    most the integral of ||h_n - h||; also reports whether the level-set
    measure must vanish once the integrals drop below gamma times the
    smallest positive atom mass."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    kind = h.codomain.norm_kind
    d = h.codomain.scalar_dim
    min_mass = min((mass for mass in h.space.masses if mass > 0))
    passed = True
    witness = None
    series = []
    for n, hn in enumerate(hs):
        hn._check(h)
        norms = _atom_norm_intervals(hn - h, kind, cfg)
        for j in range(d):
            level = [t for t in range(h.space.size)
                     if norms[t][j][0] >= gamma]  # certified members only
            mu_level = sum((h.space.masses[t] for t in level), Fraction(0))
            total = certified.exact(Fraction(0))
            for t, mass in enumerate(h.space.masses):
                if mass == 0:
                    continue
                total = certified.iadd(total, certified.iscale(norms[t][j], mass))
            ok, slack = certified.leq_with_slack(
                certified.exact(gamma * mu_level), total, Fraction(0))
            vanishes = total[1] < gamma * min_mass
            if vanishes and mu_level != 0:
                ok = False
            series.append({"n": n, "coordinate": j, "level_measure": mu_level,
                           "integral": certified.mid(total), "slack": slack})
            if not ok and passed:
                passed = False
                witness = {"n": n, "coordinate": j, "level_measure": mu_level}
    return CheckReport(
        name="chebyshev-step",
        passed=passed,
        details={"gamma": gamma, "terms": len(hs)},
        witness=witness,
        series=series,
    )


@dataclass
class TruncatedSequenceSpec:
    """A dominated approximating sequence on a truncated countable space.

    ``term(n, t)`` gives the n-th function's value at atom t; the dominator
    bounds every term's norm atomwise, the scalar bound caps the dominator,
    and tail_mass is the mass cut off by the truncation."""

    space: MeasureSpace
    codomain: ModuleSpace
    term: Callable[[int, int], ModuleVector]
    limit: LFunction
    dominator: Tuple[LElement, ...]
    scalar_bound: Fraction
    tail_mass: Fraction


class DominatorViolation(ValueError):
    def __init__(self, n: int, t: int):
        super().__init__(f"dominator violated at term {n}, atom {t}")
        self.n = n
        self.t = t


def _term_function(spec: TruncatedSequenceSpec, n: int) -> LFunction:
    return LFunction(spec.space, spec.codomain, tuple(
        spec.term(n, t) for t in range(spec.space.size)))


def run_dct_experiment(spec: TruncatedSequenceSpec, n_max: int,
                       cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
    """Tracks e_n = ||integral(g_n) - integral(g)|| against the computable
    bound integral of ||g_n - g|| plus twice the truncated tail allowance."""
    kind = spec.codomain.norm_kind
    d = spec.codomain.scalar_dim
    m = spec.space.size
    phi = spec.scalar_bound
    unit_bound = LElement.constant(phi, d)
    for t in range(m):
        if not (spec.dominator[t] <= unit_bound):
            raise ValueError(f"dominator exceeds the scalar bound at atom {t}")
    lim_integral = integrate(spec.limit)
    tail_term = 2 * phi * spec.tail_mass

    passed = True
    witness = None
    series = []
    prev_bound: Optional[List[Interval]] = None
    for n in range(n_max + 1):
        gn = _term_function(spec, n)
        norms = _atom_norm_intervals(gn, kind, cfg)
        for t in range(m):
            for j in range(d):
                if norms[t][j][0] > spec.dominator[t][j]:
                    raise DominatorViolation(n, t)
        err = norm_intervals((integrate(gn) - lim_integral).entries, kind, cfg)
        diff_norms = _atom_norm_intervals(gn - spec.limit, kind, cfg)
        bound = []
        for j in range(d):
            total = certified.exact(tail_term)
            for t, mass in enumerate(spec.space.masses):
                if mass == 0:
                    continue
                total = certified.iadd(total, certified.iscale(diff_norms[t][j], mass))
            bound.append(total)
        tol = _tol_for(cfg, err, bound)
        for j in range(d):
            ok, _ = certified.leq_with_slack(err[j], bound[j], tol)
            if not ok and passed:
                passed = False
                witness = {"n": n, "coordinate": j}
        if prev_bound is not None:
            for j in range(d):
                ok, _ = certified.leq_with_slack(bound[j], prev_bound[j], tol)
                if not ok and passed:
                    passed = False
                    witness = {"n": n, "coordinate": j, "bound_not_monotone": True}
        prev_bound = bound
        series.append({"n": n,
                       "error": [certified.mid(iv) for iv in err],
                       "bound": [certified.mid(iv) for iv in bound]})
    return CheckReport(
        name="dominated-convergence",
        passed=passed,
        details={"n_max": n_max, "tail_mass": spec.tail_mass,
                 "scalar_bound": phi},
        witness=witness,
        series=series,
    )


def simple_approximation(f: LFunction, n: int) -> LFunction:
    """Truncation to the first n atoms (zero beyond); the canonical simple
    approximating sequence on a truncated countable space."""
    vals = tuple(f.values[t] if t < n else f.codomain.zero()
                 for t in range(f.space.size))
    return LFunction(f.space, f.codomain, vals)


def run_completeness_harness(handle: LpHandle, seed: int, n_terms: int,
                             cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
    """Synthesizes u_n = u* + 2**-n w and replays the completeness proof's
    estimates: the pairwise envelope bound, the pointwise limit, and the
    closing norm estimate with the exact residual 2**-n ||w||_p."""
    if handle.is_inf:
        raise ValueError("harness needs a finite exponent")
    rng = rng_for(seed)
    space, codomain, p = handle.base, handle.codomain, handle.p
    kind = codomain.norm_kind
    d = codomain.scalar_dim
    u_star = LFunction(space, codomain, tuple(
        random_module_vector(rng, codomain) for _ in range(space.size)))
    w = LFunction(space, codomain, tuple(
        random_module_vector(rng, codomain) for _ in range(space.size)))
    terms = [u_star + w.scale_rational(Fraction(1, 2 ** n))
             for n in range(1, n_terms + 1)]
    norm_w = _lp_norm_intervals(w, p, kind, cfg)
    tol = _tol_for(cfg, norm_w)

    passed = True
    witness = None

    # pairwise envelope: ||u_n - u_m||_p <= 2**(1-k) ||w||_p for n, m >= k
    for k in range(1, n_terms + 1):
        eps = [certified.iscale(iv, Fraction(2, 2 ** k)) for iv in norm_w]
        for a in range(k, n_terms + 1):
            for b in range(a, n_terms + 1):
                diff = _lp_norm_intervals(terms[a - 1] - terms[b - 1], p, kind, cfg)
                for j in range(d):
                    ok, _ = certified.leq_with_slack(diff[j], eps[j], tol)
                    if not ok and passed:
                        passed = False
                        witness = {"stage": "pairwise", "k": k, "n": a, "m": b,
                                   "coordinate": j}

    # pointwise limit: per atom and entry, an envelope certificate
    for t in range(space.size):
        for i in range(codomain.rank):
            seq = [terms[n - 1].values[t].entries[i] for n in range(1, n_terms + 1)]
            wt = abs(w.values[t].entries[i])
            envelope = [(wt.scale(Fraction(1, 2 ** n)), n - 1)
                        for n in range(1, n_terms + 1)]
            cert = check_order_convergence(seq, u_star.values[t].entries[i], envelope)
            if not cert.passed and passed:
                passed = False
                witness = {"stage": "pointwise", "atom": t, "entry": i,
                           "violation": cert.first_violation}

    # closing estimate and exact residual
    mu_root = certified.pow_bracket(space.total_mass,
                                    Fraction(1) / p, cfg.root_bits + 2)
    series = []
    for n in range(1, n_terms + 1):
        resid = _lp_norm_intervals(u_star - terms[n - 1], p, kind, cfg)
        expected = [certified.iscale(iv, Fraction(1, 2 ** n)) for iv in norm_w]
        bound = [certified.imul(certified.iscale(iv, Fraction(2, 2 ** n)), mu_root)
                 for iv in norm_w]
        for j in range(d):
            if certified.is_exact(resid[j]) and certified.is_exact(expected[j]):
                ok_eq = resid[j] == expected[j]
                gap = abs(resid[j][0] - expected[j][0])
            else:
                ok_eq, gap = certified.eq_within(resid[j], expected[j],
                                                 cfg.compare_tol)
            le_tol = Fraction(0) if certified.is_exact(bound[j]) else cfg.compare_tol
            ok_le, _ = certified.leq_with_slack(resid[j], bound[j], le_tol)
            if (not ok_eq or not ok_le) and passed:
                passed = False
                witness = {"stage": "closing", "n": n, "coordinate": j,
                           "gap": gap}
        series.append({"n": n,
                       "residual": [certified.mid(iv) for iv in resid],
                       "expected": [certified.mid(iv) for iv in expected]})

    return CheckReport(
        name="completeness-harness",
        passed=passed,
        details={"terms": n_terms, "p": p,
                 "norm_w": collapse_intervals(norm_w)},
        witness=witness,
        series=series,
    )
