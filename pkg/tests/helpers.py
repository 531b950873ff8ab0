"""Shared oracles and fixture builders for the test suite.

Oracles here are deliberately independent of the library paths they check:
Omega and resonant sets by brute-force scans of N^n with direct exact
products, compositions by direct substitution, and so on.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from germnf.exactnum import GaussianRational as GR
from germnf.germ import Family, Germ, conjugate
from germnf.linalg import field_kernel
from germnf.resonance import EigenData, enumerate_omega, relation_lattice
from germnf.series import TruncatedSeries


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def all_exponents(n: int, max_degree: int, min_degree: int = 0):
    for exp in itertools.product(range(max_degree + 1), repeat=n):
        if min_degree <= sum(exp) <= max_degree:
            yield exp


def brute_force_omega(eigen: EigenData, bound: int) -> list[tuple[int, ...]]:
    out = []
    for exp in all_exponents(eigen.n, bound, min_degree=1):
        if eigen.satisfies_relation(exp):
            out.append(exp)
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def brute_force_resonant(eigen: EigenData, m: int, bound: int) -> list[tuple[int, ...]]:
    out = []
    for exp in all_exponents(eigen.n, bound, min_degree=2):
        if all(eigen.product(i, exp) == eigen.mu[i][m - 1] for i in range(eigen.p)):
            out.append(exp)
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


# ---------------------------------------------------------------------------
# random values
# ---------------------------------------------------------------------------


def random_fraction(rng: random.Random, height: int = 8, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if value or not nonzero:
            return value


def random_gaussian(rng: random.Random, height: int = 8, nonzero: bool = False) -> GR:
    while True:
        z = GR(random_fraction(rng, height), random_fraction(rng, height))
        if not z.is_zero() or not nonzero:
            return z


def random_series(rng: random.Random, n: int, degree: int, terms: int = 4,
                  zero_constant: bool = True) -> TruncatedSeries:
    pool = list(all_exponents(n, degree, min_degree=1 if zero_constant else 0))
    data = {}
    for _ in range(terms):
        exp = pool[rng.randrange(len(pool))]
        data[exp] = random_gaussian(rng, 4)
    return TruncatedSeries(n, degree, data)


def random_tangent_identity(rng: random.Random, n: int, degree: int,
                            extra_terms: int = 2, real: bool = False) -> Germ:
    pool = list(all_exponents(n, degree, min_degree=2))
    comps = [TruncatedSeries.variable(j, n, degree) for j in range(n)]
    for _ in range(extra_terms):
        j = rng.randrange(n)
        exp = pool[rng.randrange(len(pool))]
        coeff = (
            GR(random_fraction(rng, 4, nonzero=True))
            if real
            else random_gaussian(rng, 4, nonzero=True)
        )
        comps[j] = comps[j] + TruncatedSeries.monomial(exp, coeff, degree)
    return Germ(comps)


# ---------------------------------------------------------------------------
# rho-equivariant integrable normal forms (for the real-case suite)
# ---------------------------------------------------------------------------


def rho_equivariant_nf(eigen: EigenData, sigma: tuple[int, ...], degree: int,
                       rng: random.Random) -> Family:
    """Random family mu_im x_m exp(w_im) with the w's satisfying both the
    lattice kernel conditions (commutativity + product relations) and the
    conjugation pairing w_{sigma(k)}(G o sigma) = conj(w_k(G))."""
    n = eigen.n
    lat = relation_lattice(eigen)
    omega_pts = list(enumerate_omega(eigen, max(degree - 1, 1), lat).points) if degree >= 2 else []
    if not omega_pts:
        return Family([Germ.from_linear_diag(row, degree) for row in eigen.mu])
    # real unknowns re[k, G], im[k, G]
    slots = [(k, pt) for k in range(n) for pt in omega_pts]
    pos = {slot: 2 * j for j, slot in enumerate(slots)}
    width = 2 * len(slots)
    rows = []
    for gamma in lat.basis:
        for pt in omega_pts:
            for part in (0, 1):
                row = [Fraction(0)] * width
                for k in range(n):
                    if gamma[k]:
                        row[pos[(k, pt)] + part] += Fraction(gamma[k])
                rows.append(row)
    for k in range(n):
        for pt in omega_pts:
            mirrored = tuple(pt[sigma[j]] for j in range(n))
            row_re = [Fraction(0)] * width
            row_re[pos[(sigma[k], mirrored)]] += 1
            row_re[pos[(k, pt)]] -= 1
            rows.append(row_re)
            row_im = [Fraction(0)] * width
            row_im[pos[(sigma[k], mirrored)] + 1] += 1
            row_im[pos[(k, pt)] + 1] += 1
            rows.append(row_im)
    basis = field_kernel(rows, width, Fraction(1), Fraction(0))
    germs = []
    for i in range(eigen.p):
        vec = [Fraction(0)] * width
        for kernel_vec in basis:
            t = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
            for j in range(width):
                vec[j] += t * kernel_vec[j]
        w = [TruncatedSeries.zero(n, degree) for _ in range(n)]
        for k in range(n):
            for pt in omega_pts:
                c = GR(vec[pos[(k, pt)]], vec[pos[(k, pt)] + 1])
                if not c.is_zero():
                    w[k] = w[k] + TruncatedSeries.monomial(pt, c, degree)
        comps = []
        for m in range(n):
            x_m = TruncatedSeries.variable(m, n, degree)
            comps.append(x_m.scale(eigen.mu[i][m]) * w[m].exp0())
        germs.append(Germ(comps))
    return Family(germs)


PYTHAGOREAN_UNITS = [
    GR(Fraction(3, 5), Fraction(4, 5)),
    GR(Fraction(5, 13), Fraction(12, 13)),
    GR(0, 1),
]


def random_real_block_family(rng: random.Random, blocks: int, tail: list, p: int,
                             degree: int):
    """(real input family, its sigma) built by conjugating a realified
    rho-equivariant normal form with a random real tangent-to-identity germ."""
    from germnf.normalform import realify_normal_form

    rows = []
    for _ in range(p):
        row = []
        for _ in range(blocks):
            u = PYTHAGOREAN_UNITS[rng.randrange(len(PYTHAGOREAN_UNITS))]
            row.extend([u, u.conjugate()])
        row.extend(GR(t) for t in tail)
        rows.append(tuple(row))
    eigen = EigenData(tuple(rows))
    n = eigen.n
    sigma = list(range(n))
    for b in range(blocks):
        sigma[2 * b], sigma[2 * b + 1] = 2 * b + 1, 2 * b
    sigma = tuple(sigma)
    nf = rho_equivariant_nf(eigen, sigma, degree, rng)
    real_nf = realify_normal_form(nf, sigma)
    psi = random_tangent_identity(rng, n, degree, extra_terms=2, real=True)
    input_family = Family([conjugate(g, psi) for g in real_nf.germs])
    return input_family, sigma


# standard paper fixtures ----------------------------------------------------


def example_13_family(degree: int = 4) -> Family:
    return Family([Germ.from_linear_diag([GR(-2), GR(Fraction(1, 2))], degree)])


def example_34_family(degree: int = 4) -> Family:
    phi1 = Germ([
        TruncatedSeries.monomial((1, 0), 2, degree),
        TruncatedSeries.monomial((0, 1), 4, degree)
        + TruncatedSeries.monomial((2, 0), 1, degree),
    ])
    phi2 = Germ.from_linear_diag([GR(-3), GR(9)], degree)
    return Family([phi1, phi2])


def i_minus_i_family(degree: int = 4) -> Family:
    return Family([Germ.from_linear_diag([GR(0, 1), GR(0, -1)], degree)])
