import random
from fractions import Fraction

import pytest

from germnf.exactnum import DomainError, GaussianRational as GR
from germnf.germ import Family, Germ, compose_germ, conjugate, invert_germ
from germnf.normalform import (
    division_check,
    echelonized_span,
    extract_integrable_certificate,
    first_integrals,
    generate_integrable_nf,
    poincare_dulac_normalize,
    pushforward_leading,
    verify_first_integral_support,
    verify_pd_nf,
)
from germnf.resonance import EigenData, enumerate_omega, relation_lattice
from germnf.series import TruncatedSeries as TS, UsageError

from helpers import (
    example_13_family,
    example_34_family,
    random_tangent_identity,
)


def _simple_fixture(degree=4):
    # (2x + y^2, 3y)
    return Family(
        [Germ([TS.monomial((1, 0), 2, degree) + TS.monomial((0, 2), 1, degree),
               TS.monomial((0, 1), 3, degree)])]
    )


class TestNormalize:
    def test_single_resonance_gap(self):
        res = poincare_dulac_normalize(_simple_fixture())
        assert res.normalized.germs[0] == Germ.from_linear_diag([GR(2), GR(3)], 4)
        expected_psi = Germ(
            [TS.variable(0, 2, 4) + TS.monomial((0, 2), Fraction(1, 7), 4), TS.variable(1, 2, 4)]
        )
        assert res.psi == expected_psi
        assert len(res.eliminations) == 1
        rec = res.eliminations[0]
        assert rec.divisor == GR(7) and rec.coefficient == GR(1)

    def test_example_34_already_normal(self):
        fam = example_34_family(4)
        res = poincare_dulac_normalize(fam)
        assert res.normalized == fam
        assert res.psi == Germ.identity(2, 4)
        assert res.eliminations == ()

    def test_identity_family(self):
        fam = Family([Germ.identity(2, 4)])
        res = poincare_dulac_normalize(fam)
        assert res.normalized == fam and res.psi == Germ.identity(2, 4)

    def test_per_monomial_agrees_with_batched(self):
        rng = random.Random(8)
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 5, seed=5)
        psi = random_tangent_identity(rng, 2, 5)
        fam = Family([conjugate(g, psi) for g in nf.germs])
        batched = poincare_dulac_normalize(fam)
        stepped = poincare_dulac_normalize(fam, per_monomial=True)
        assert batched.normalized == stepped.normalized
        assert batched.psi == stepped.psi

    def test_nondiagonal_rejected(self):
        rot = Germ.from_linear_matrix([[GR(0), GR(-1)], [GR(1), GR(0)]], 3)
        with pytest.raises(UsageError):
            poincare_dulac_normalize(Family([rot]))

    def test_elimination_log_remultiplies(self):
        rng = random.Random(9)
        eigen = EigenData.from_rows([["2", "1/4"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 5, seed=11)
        psi = random_tangent_identity(rng, 2, 5)
        fam = Family([conjugate(g, psi) for g in nf.germs])
        res = poincare_dulac_normalize(fam)
        assert res.eliminations
        for rec in res.eliminations:
            assert not rec.divisor.is_zero()
            assert rec.homological_coefficient() * rec.divisor == rec.coefficient


class TestVerifyPdNf:
    def test_cases(self):
        assert verify_pd_nf(example_34_family(4)) is None
        assert verify_pd_nf(_simple_fixture()) == (1, 1, (0, 2))
        assert verify_pd_nf(Family([Germ.from_linear_diag([GR(5), GR(7)], 3)])) is None


class TestFirstIntegrals:
    def test_example_13(self):
        basis = first_integrals(example_13_family(4), 4)
        assert basis == [TS.monomial((2, 2), 1, 4)]

    def test_rotation(self):
        fam = Family([Germ.from_linear_diag([GR(0, 1), GR(0, -1)], 2)])
        assert first_integrals(fam, 2) == [TS.monomial((1, 1), 1, 2)]

    def test_empty(self):
        fam = Family([Germ.from_linear_diag([GR(2), GR(3)], 5)])
        assert first_integrals(fam, 5) == []

    def test_nonlinear_family(self):
        # x^2 y^2 remains an integral of the generated nonlinear normal form
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 5, seed=3)
        basis = first_integrals(nf, 4)
        assert basis == [TS.monomial((2, 2), 1, 4)]

    def test_transport_under_normalization(self):
        rng = random.Random(12)
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 4, seed=21)
        psi = random_tangent_identity(rng, 2, 4)
        fam = Family([conjugate(g, psi) for g in nf.germs])
        res = poincare_dulac_normalize(fam)
        original_basis = first_integrals(fam, 4)
        transported = [f.compose(list(res.psi.components)) for f in original_basis]
        assert echelonized_span(transported) == echelonized_span(first_integrals(res.normalized, 4))

    def test_support_checks(self):
        fam = example_13_family(4)
        assert verify_first_integral_support(fam, TS.monomial((2, 2), 1, 4)) is None
        bad = TS.monomial((1, 0), 1, 4) + TS.monomial((2, 2), 1, 4)
        assert verify_first_integral_support(fam, bad) == (1, 0)
        with pytest.raises(UsageError):
            verify_first_integral_support(_simple_fixture(), TS.monomial((2, 2), 1, 4))


class TestDivisionAndCertificates:
    def test_example_34_division_fails(self):
        report = division_check(example_34_family(4))
        assert not report.ok
        assert report.first_failure() == (1, 2, (2, 0))

    def test_divisible_form_passes(self):
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 5, seed=2)
        assert division_check(nf).ok

    def test_certificate_on_linear_family(self):
        eigen = EigenData.from_rows([["2", "3"]])
        lat = relation_lattice(eigen)
        fam = Family([Germ.from_linear_diag([GR(2), GR(3)], 4)])
        cert = extract_integrable_certificate(fam, lat)
        assert cert.ok
        assert all(s.is_zero() for row in cert.phi for s in row)

    def test_certificate_round_trip(self):
        eigen = EigenData.from_rows([["2", "1/2", "-1"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 5, seed=31)
        cert = extract_integrable_certificate(nf, lat)
        assert cert.ok

    def test_example_34_certificate_errors(self):
        eigen = EigenData.from_family(example_34_family(4))
        lat = relation_lattice(eigen)
        with pytest.raises(DomainError):
            extract_integrable_certificate(example_34_family(4), lat)


class TestGenerate:
    def test_zero_seed_linear(self):
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        fam = generate_integrable_nf(eigen, lat, 5, seed=0)
        assert fam.germs[0] == Germ.from_linear_diag([GR(-2), GR(Fraction(1, 2))], 5)

    def test_kernel_structure(self):
        # kernel of (2,2) is spanned by (1,-1): w = (t G, -t G)
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        fam = generate_integrable_nf(eigen, lat, 6, seed=9)
        g = fam.germs[0]
        c1 = g.components[0].coeff((3, 2))  # -2 x * t x^2 y^2
        c2 = g.components[1].coeff((2, 3))
        assert c1 / GR(-2) == -(c2 / GR(Fraction(1, 2)))

    def test_p2_round_trip(self):
        eigen = EigenData.from_rows([["2", "1/2"], ["3", "1/3"]])
        lat = relation_lattice(eigen)
        fam = generate_integrable_nf(eigen, lat, 5, seed=13)
        assert extract_integrable_certificate(fam, lat).ok


class TestPushforward:
    def test_formula_vs_composition(self):
        # f = (2x(1+xy), y/2): component quadratic parts drive the identity
        f = Germ([
            TS.monomial((1, 0), 2, 6) + TS.monomial((2, 1), 2, 6),
            TS.monomial((0, 1), Fraction(1, 2), 6),
        ])
        got = pushforward_leading((1, 1), f)
        direct = TS.monomial((1, 1), 1, 6).compose(list(f.components)).homogeneous_part(3)
        assert got == direct

    def test_linear_germ_zero(self):
        f = Germ.from_linear_diag([GR(2), GR(Fraction(1, 2))], 6)
        assert pushforward_leading((1, 1), f).is_zero()

    def test_division_failure_rejected(self):
        with pytest.raises(DomainError):
            pushforward_leading((1, 1), example_34_family(4).germs[0])

    def test_random_division_passing_germs(self):
        rng = random.Random(55)
        for _ in range(25):
            n = rng.randint(2, 3)
            d = rng.randint(3, 6)
            comps = []
            for m in range(n):
                comp = TS.variable(m, n, d).scale(GR(rng.randint(1, 4)))
                # add terms divisible by x_m, quadratic and higher
                for _ in range(2):
                    exp = [0] * n
                    exp[m] = 1
                    exp[rng.randrange(n)] += 1
                    if rng.random() < 0.5:
                        exp[rng.randrange(n)] += 1
                    comp = comp + TS.monomial(tuple(exp), GR(rng.randint(-3, 3)), d)
                comps.append(comp)
            f = Germ(comps)
            exps = [e for e in range(n)]
            ell = tuple(rng.randint(0, 1) for _ in range(n))
            if sum(ell) == 0 or sum(ell) + 1 > d:
                continue
            got = pushforward_leading(ell, f)
            direct = TS.monomial(ell, 1, d).compose(list(f.components)).homogeneous_part(sum(ell) + 1)
            assert got == direct

    def test_omega_monomial_on_generated_nf(self):
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        nf = generate_integrable_nf(eigen, lat, 6, seed=17)
        got = pushforward_leading((2, 2), nf.germs[0])
        direct = TS.monomial((2, 2), 1, 6).compose(list(nf.germs[0].components)).homogeneous_part(5)
        assert got == direct


class TestProp32Property:
    def test_invariance_on_normalized_families(self):
        rng = random.Random(61)
        eigen = EigenData.from_rows([["-2", "1/2"]])
        lat = relation_lattice(eigen)
        for seed in (1, 2, 3):
            nf = generate_integrable_nf(eigen, lat, 6, seed=seed)
            psi = random_tangent_identity(rng, 2, 6)
            fam = Family([conjugate(g, psi) for g in nf.germs])
            res = poincare_dulac_normalize(fam)
            for pt in enumerate_omega(eigen, 3, lat).points:
                G = TS.monomial(pt, 1, 6)
                for g in res.normalized.germs:
                    assert G.compose(list(g.components)) == G
