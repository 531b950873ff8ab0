"""Simultaneous Poincare-Dulac normalization and integrability certificates.

The normalizer eliminates non-resonant monomials degree by degree with
exact homological coefficients h = c / (mu^gamma - mu_m), conjugating the
whole family and asserting that each term vanished from every germ (the
exact-arithmetic form of the simultaneity argument for commuting
families; a surviving term means the input did not commute and the run
fails loudly).

Eliminations are batched per degree by default: within one degree the
homological corrections do not interact, so a single conjugation per
degree realizes the same result as one conjugation per monomial.  The
per-monomial mode is retained behind a flag and tested to agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import DomainError, GaussianRational, ONE, ZERO
from .germ import Family, Germ, compose_germ, conjugate, invert_germ
from .linalg import field_kernel, field_rref, kernel_basis
from .resonance import EigenData, RelationLattice, enumerate_omega, is_resonant_exponent
from .series import MultiIndex, TruncatedSeries, UsageError, grlex_key


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EliminationRecord:
    degree: int
    component: int  # 1-based
    exponents: MultiIndex
    coefficient: GaussianRational
    divisor: GaussianRational
    germ_index: int  # 1-based: the i* whose resonance gap was used

    def homological_coefficient(self) -> GaussianRational:
        return self.coefficient / self.divisor

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "component": self.component,
            "exponents": list(self.exponents),
            "coefficient": str(self.coefficient),
            "divisor": str(self.divisor),
            "germ": self.germ_index,
        }


@dataclass
class NormalizationResult:
    normalized: Family
    psi: Germ
    eliminations: tuple[EliminationRecord, ...]

    def to_json(self) -> dict:
        from .germ import family_to_json, germ_to_json

        return {
            "normalized": family_to_json(self.normalized),
            "psi": germ_to_json(self.psi),
            "eliminations": [rec.to_json() for rec in self.eliminations],
        }


def _pairing_involution(pairing, n: int) -> tuple[int, ...]:
    sigma = tuple(pairing)
    if sorted(sigma) != list(range(n)):
        raise UsageError("pairing must be a permutation of 0..n-1")
    for m in range(n):
        if sigma[sigma[m]] != m:
            raise UsageError("pairing must be an involution")
    return sigma


def _permute_exponents(exp: MultiIndex, sigma: tuple[int, ...]) -> MultiIndex:
    return tuple(exp[sigma[j]] for j in range(len(exp)))


def rho_equivariance_offense(fam: Family, sigma: tuple[int, ...]):
    """First witness (germ_1based, component_1based, exponents) violating
    coeff(m, gamma) = conj(coeff(sigma(m), gamma o sigma)), or None."""
    for i, g in enumerate(fam.germs):
        for m in range(fam.n):
            partner = g.components[sigma[m]]
            for exp, c in g.components[m].items():
                if c != partner.coeff(_permute_exponents(exp, sigma)).conjugate():
                    return (i + 1, m + 1, exp)
            # terms present only on the partner side violate the pairing too
            for exp, c in partner.items():
                if g.components[m].coeff(_permute_exponents(exp, sigma)).conjugate() != c:
                    return (i + 1, sigma[m] + 1, exp)
    return None


def _scan_nonresonant(work: list[Germ], eigen: EigenData, ell: int) -> list[tuple[int, MultiIndex]]:
    found: list[tuple[int, MultiIndex]] = []
    for m in range(eigen.n):
        exps = set()
        for g in work:
            for exp, _ in g.components[m].items():
                if sum(exp) == ell:
                    exps.add(exp)
        for exp in exps:
            if not is_resonant_exponent(eigen, m + 1, exp):
                found.append((m, exp))
    found.sort(key=lambda t: (t[0], grlex_key(t[1])))
    return found


def _conjugate_family(work: list[Germ], step: Germ) -> list[Germ]:
    step_inv = invert_germ(step)
    return [compose_germ(step_inv, compose_germ(g, step)) for g in work]


def poincare_dulac_normalize(
    fam: Family,
    rho_pairing=None,
    per_monomial: bool = False,
) -> NormalizationResult:
    """Conjugate a commuting family with diagonal linear parts into
    Poincare-Dulac normal form up to the truncation degree.

    Order of elimination: degree ascending, then component, then graded-lex
    monomial; the germ index used for each divisor is the smallest one whose
    resonance gap is nonzero.  With rho_pairing set (an involution of the
    coordinates), sigma-paired monomials are eliminated with conjugated
    coefficients in the same step, so the transformation commutes with the
    anti-holomorphic involution rho.
    """
    if not fam.is_diagonal_linear():
        raise UsageError("normalization requires diagonal linear parts")
    eigen = EigenData.from_family(fam)
    n, degree = fam.n, fam.degree
    sigma = None
    if rho_pairing is not None:
        sigma = _pairing_involution(rho_pairing, n)
        offense = rho_equivariance_offense(fam, sigma)
        if offense is not None:
            raise DomainError(f"input family is not rho-equivariant: offending term {offense}")
        for i in range(fam.p):
            diag = fam.germs[i].linear_diag()
            for m in range(n):
                if diag[sigma[m]] != diag[m].conjugate():
                    raise DomainError("linear part is not rho-equivariant under the pairing")
    work = list(fam.germs)
    psi = Germ.identity(n, degree)
    log: list[EliminationRecord] = []

    def homological(m: int, exp: MultiIndex):
        i_star = None
        divisor = None
        for i in range(fam.p):
            gap = eigen.product(i, exp) - eigen.mu[i][m]
            if not gap.is_zero():
                i_star, divisor = i, gap
                break
        if i_star is None:
            raise AssertionError("non-resonant monomial with zero divisors everywhere")
        c = work[i_star].components[m].coeff(exp)
        return i_star, divisor, c

    for ell in range(2, degree + 1):
        candidates = _scan_nonresonant(work, eigen, ell)
        if not candidates:
            continue
        if per_monomial:
            done: set[tuple[int, MultiIndex]] = set()
            for m, exp in candidates:
                if (m, exp) in done:
                    continue
                i_star, divisor, c = homological(m, exp)
                if c.is_zero() and all(g.components[m].coeff(exp).is_zero() for g in work):
                    continue  # removed by an earlier paired elimination
                h = c / divisor
                step_terms = {(m, exp): h}
                log.append(EliminationRecord(ell, m + 1, exp, c, divisor, i_star + 1))
                done.add((m, exp))
                if sigma is not None:
                    pm, pexp = sigma[m], _permute_exponents(exp, sigma)
                    if (pm, pexp) != (m, exp):
                        pi_star, pdiv, pc = homological(pm, pexp)
                        step_terms[(pm, pexp)] = pc / pdiv
                        log.append(EliminationRecord(ell, pm + 1, pexp, pc, pdiv, pi_star + 1))
                        done.add((pm, pexp))
                step = _step_germ(step_terms, n, degree)
                psi = compose_germ(psi, step)
                work = _conjugate_family(work, step)
                for tm, texp in step_terms:
                    for g in work:
                        if not g.components[tm].coeff(texp).is_zero():
                            raise AssertionError(
                                f"term {texp} survived elimination in component {tm + 1}: "
                                "commutativity assumption violated"
                            )
        else:
            step_terms = {}
            for m, exp in candidates:
                i_star, divisor, c = homological(m, exp)
                if c.is_zero():
                    # compatible commuting input forces the term to be absent
                    # from every germ; fail loudly below if it is not
                    if any(not g.components[m].coeff(exp).is_zero() for g in work):
                        raise AssertionError(
                            f"inconsistent degree-{ell} term {exp}: zero in the pivot germ "
                            "but present elsewhere (input cannot commute)"
                        )
                    continue
                step_terms[(m, exp)] = c / divisor
                log.append(EliminationRecord(ell, m + 1, exp, c, divisor, i_star + 1))
            if not step_terms:
                continue
            step = _step_germ(step_terms, n, degree)
            psi = compose_germ(psi, step)
            work = _conjugate_family(work, step)
        remaining = _scan_nonresonant(work, eigen, ell)
        if remaining:
            raise AssertionError(
                f"non-resonant terms survived degree {ell}: {remaining[:3]} "
                "(commutativity assumption violated)"
            )

    normalized = Family(work, check_commuting=True)
    # soundness: the recorded psi really conjugates the input to the output
    psi_inv = invert_germ(psi)
    for original, result in zip(fam.germs, work):
        if compose_germ(psi_inv, compose_germ(original, psi)) != result:
            raise AssertionError("normalizing transformation failed verification")
    if sigma is not None:
        for m in range(n):
            partner = psi.components[sigma[m]]
            for exp, c in psi.components[m].items():
                if partner.coeff(_permute_exponents(exp, sigma)) != c.conjugate():
                    raise AssertionError("psi is not rho-equivariant")
    return NormalizationResult(normalized, psi, tuple(log))


def _step_germ(step_terms: dict, n: int, degree: int) -> Germ:
    comps = [TruncatedSeries.variable(j, n, degree) for j in range(n)]
    for (m, exp), h in step_terms.items():
        comps[m] = comps[m] + TruncatedSeries.monomial(exp, h, degree)
    return Germ(comps)


def verify_pd_nf(fam: Family):
    """None when every nonlinear monomial of component m of every germ is
    resonant for component m; otherwise the first offender as
    (germ_1based, component_1based, exponents)."""
    if not fam.is_diagonal_linear():
        raise UsageError("PD-NF verification requires diagonal linear parts")
    eigen = EigenData.from_family(fam)
    for i, g in enumerate(fam.germs):
        for m in range(fam.n):
            for exp, _ in g.components[m].items():
                if sum(exp) < 2:
                    continue
                if not is_resonant_exponent(eigen, m + 1, exp):
                    return (i + 1, m + 1, exp)
    return None


# ---------------------------------------------------------------------------
# First integrals
# ---------------------------------------------------------------------------


def _monomial_columns(n: int, degree: int) -> list[MultiIndex]:
    out: list[MultiIndex] = []

    def rec(prefix, remaining):
        if len(prefix) == n:
            if sum(prefix) >= 1:
                out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e)

    rec([], degree)
    out.sort(key=grlex_key)
    return out


def first_integrals(fam: Family, degree: int | None = None) -> list[TruncatedSeries]:
    """Echelonized basis (graded-lex pivots, no constant term) of polynomial
    first integrals F with F o Phi_i = F for all i, up to the degree."""
    d = degree if degree is not None else fam.degree
    if d > fam.degree:
        raise UsageError("first-integral degree exceeds the family's jet degree")
    columns = _monomial_columns(fam.n, d)
    col_index = {exp: j for j, exp in enumerate(columns)}
    rows: list[list[GaussianRational]] = []
    for g in fam.germs:
        composed = {}
        cache: list[dict[int, TruncatedSeries]] = [
            {0: TruncatedSeries.constant(1, fam.n, d)} for _ in range(fam.n)
        ]
        comps = [c.truncate(d) if d < fam.degree else c for c in g.components]

        def power(k: int, e: int) -> TruncatedSeries:
            slot = cache[k]
            if e not in slot:
                top = max(slot)
                acc = slot[top]
                for step in range(top + 1, e + 1):
                    acc = acc * comps[k]
                    slot[step] = acc
            return slot[e]

        for exp in columns:
            term = TruncatedSeries.constant(1, fam.n, d)
            for k, e in enumerate(exp):
                if e:
                    term = term * power(k, e)
                    if term.is_zero():
                        break
            composed[exp] = term
        # rows indexed by target monomial delta: sum_gamma c_gamma
        # (coeff_delta(x^gamma o Phi) - [gamma == delta]) = 0
        row_map: dict[MultiIndex, list[GaussianRational]] = {}
        for j, gamma in enumerate(columns):
            diff = composed[gamma] - TruncatedSeries.monomial(gamma, 1, d)
            for delta, coeff in diff.items():
                if delta not in row_map:
                    row_map[delta] = [ZERO] * len(columns)
                row_map[delta][j] = coeff
        rows.extend(row_map[delta] for delta in sorted(row_map, key=grlex_key))
    kernel = field_kernel(rows, len(columns), ONE, ZERO)
    if not kernel:
        return []
    echelon, _ = field_rref(kernel, len(columns))
    basis = []
    for vec in echelon:
        terms = {columns[j]: c for j, c in enumerate(vec) if not c.is_zero()}
        basis.append(TruncatedSeries(fam.n, d, terms))
    return basis


def verify_first_integral_support(fam: Family, integral: TruncatedSeries):
    """None when every monomial of the integral lies in Omega (exact product
    checks); otherwise the first offending exponent.  Requires the family to
    be in PD normal form."""
    offender = verify_pd_nf(fam)
    if offender is not None:
        raise UsageError(f"family is not in PD normal form: offending term {offender}")
    eigen = EigenData.from_family(fam)
    for exp, _ in integral.items():
        if sum(exp) == 0:
            continue
        if not eigen.satisfies_relation(exp):
            return exp
    return None


def echelonized_span(series_list: list[TruncatedSeries]) -> list[TruncatedSeries]:
    """Canonical reduced echelon basis of the span; equality of spans is
    equality of these lists."""
    if not series_list:
        return []
    n, d = series_list[0].n, series_list[0].degree
    columns = _monomial_columns(n, d)
    rows = [[s.coeff(exp) for exp in columns] for s in series_list]
    echelon, _ = field_rref(rows, len(columns))
    out = []
    for vec in echelon:
        terms = {columns[j]: c for j, c in enumerate(vec) if not c.is_zero()}
        out.append(TruncatedSeries(n, d, terms))
    return out


# ---------------------------------------------------------------------------
# Division, integrable certificates, fixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisionReport:
    """Per-(germ, component) divisibility of phi_im by x_m."""

    offenders: tuple[tuple[int, int, MultiIndex], ...]  # (germ_1b, comp_1b, exp)

    @property
    def ok(self) -> bool:
        return not self.offenders

    def first_failure(self):
        return self.offenders[0] if self.offenders else None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "offenders": [
                {"germ": i, "component": m, "exponents": list(exp)}
                for i, m, exp in self.offenders
            ],
        }


def division_check(fam: Family) -> DivisionReport:
    offenders = []
    for i, g in enumerate(fam.germs):
        for m in range(fam.n):
            for exp, _ in g.components[m].items():
                if exp[m] < 1:
                    offenders.append((i + 1, m + 1, exp))
                    break
    return DivisionReport(tuple(offenders))


@dataclass
class IntegrableNFCertificate:
    """phi matrix with exact support and product-relation residuals.

    ok only when normalized_im = mu_im x_m (1 + phi_im) exactly, every
    phi_im is supported on Omega exponents, and each lattice basis relation
    prod (1 + phi_ik)^{gamma_k} = 1 holds over the verified range (checked
    in cleared-denominator form).

    The verified range is degree D - 1: a degree-D jet of the family pins
    phi down only to degree D - 1 (its degree-D terms sit at degree D + 1
    inside the components), so a degree-D product check would report
    truncation loss as spurious violations.  The bound is recorded."""

    phi: tuple[tuple[TruncatedSeries, ...], ...]
    omega_generators: tuple[tuple[int, ...], ...]
    support_offenders: tuple[tuple[int, int, MultiIndex], ...]
    residuals: tuple[dict, ...]
    verified_to_degree: int

    @property
    def ok(self) -> bool:
        return not self.support_offenders and all(r["zero"] for r in self.residuals)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "verified_to_degree": self.verified_to_degree,
            "omega_generators": [list(g) for g in self.omega_generators],
            "support_offenders": [
                {"germ": i, "component": m, "exponents": list(exp)}
                for i, m, exp in self.support_offenders
            ],
            "residuals": list(self.residuals),
            "phi": [
                [s.to_term_list() for s in row]
                for row in self.phi
            ],
        }


def extract_integrable_certificate(fam: Family, lattice: RelationLattice) -> IntegrableNFCertificate:
    """Divide out mu_im x_m from each component and verify the integrable
    normal-form relations; division failures propagate as DomainError."""
    report = division_check(fam)
    if not report.ok:
        i, m, exp = report.first_failure()
        raise DomainError(
            f"component {m} of germ {i} is not divisible by its variable: term {exp}"
        )
    eigen = EigenData.from_family(fam)
    n, degree = fam.n, fam.degree
    one = TruncatedSeries.constant(1, n, degree)
    phi_rows = []
    support_offenders = []
    for i, g in enumerate(fam.germs):
        row = []
        for m in range(n):
            quotient = g.components[m].divide_by_variable(m).scale(ONE / eigen.mu[i][m])
            phi = quotient - one
            if not phi.constant_term().is_zero():
                raise AssertionError("phi has a constant term after division")
            row.append(phi)
            for exp, _ in phi.items():
                if not eigen.satisfies_relation(exp):
                    support_offenders.append((i + 1, m + 1, exp))
                    break
        phi_rows.append(tuple(row))
    verified_to = degree - 1
    residuals = []
    for i in range(fam.p):
        for gamma in lattice.basis:
            lhs = TruncatedSeries.constant(1, n, degree)
            rhs = TruncatedSeries.constant(1, n, degree)
            for k, e in enumerate(gamma):
                factor = one + phi_rows[i][k]
                if e > 0:
                    lhs = lhs * factor**e
                elif e < 0:
                    rhs = rhs * factor ** (-e)
            diff = (lhs - rhs).part_up_to(verified_to)
            entry = {"germ": i + 1, "gamma": list(gamma), "zero": diff.is_zero()}
            if not diff.is_zero():
                exp, coeff = diff.items()[0]
                entry["offending"] = {"exponents": list(exp), "coeff": str(coeff)}
            residuals.append(entry)
    return IntegrableNFCertificate(
        tuple(phi_rows),
        tuple(lattice.basis),
        tuple(support_offenders),
        tuple(residuals),
        verified_to,
    )


def generate_integrable_nf(
    eigen: EigenData,
    lattice: RelationLattice,
    degree: int,
    seed: int,
) -> Family:
    """Deterministic fixture generator realizing the integrable normal-form
    class: components mu_im x_m exp(w_im) with the w coefficient vectors in
    the rational kernel of the lattice basis matrix, so the product
    relations hold exactly and the family commutes up to D.

    seed = 0 means zero degrees of freedom: the linear family."""
    n = eigen.n
    omega = enumerate_omega(eigen, max(degree - 1, 1), lattice) if degree >= 2 else None
    kernel = kernel_basis([list(r) for r in lattice.basis], ncols=n)
    germs = []
    rng = random.Random(seed)
    for i in range(eigen.p):
        w = [TruncatedSeries.zero(n, degree) for _ in range(n)]
        if seed != 0 and omega is not None and kernel:
            for pt in omega.points:
                vec = [Fraction(0)] * n
                for basis_vec in kernel:
                    t = Fraction(rng.randint(-16, 16), rng.randint(1, 16))
                    for k in range(n):
                        vec[k] += t * basis_vec[k]
                for k in range(n):
                    if vec[k]:
                        w[k] = w[k] + TruncatedSeries.monomial(pt, vec[k], degree)
        comps = []
        for m in range(n):
            x_m = TruncatedSeries.variable(m, n, degree)
            comps.append(x_m.scale(eigen.mu[i][m]) * w[m].exp0())
        germs.append(Germ(comps))
    return Family(germs, check_commuting=True)


def pushforward_leading(exponents: MultiIndex, f: Germ) -> TruncatedSeries:
    """Homogeneous part of degree |l| + 1 of x^l o f by the closed formula
    (prod mu^l) * x^l * sum_m l_m phi_m^(2) / (mu_m x_m).

    The eigenvalue-product factor is 1 exactly when x^l is invariant under
    the linear part (the case the theory uses); keeping it makes the
    identity with direct composition exact for every division-passing germ.
    """
    report = division_check(Family([f], check_commuting=False))
    if not report.ok:
        raise DomainError(f"division fails: {report.first_failure()}")
    ell = sum(exponents)
    if ell + 1 > f.degree:
        raise UsageError("need |l| + 1 <= D to extract the leading part")
    diag = f.linear_diag()
    acc = TruncatedSeries.zero(f.n, f.degree)
    for m, e in enumerate(exponents):
        if not e:
            continue
        quad = f.components[m].homogeneous_part(2)
        if quad.is_zero():
            continue
        acc = acc + quad.divide_by_variable(m).scale(GaussianRational(e) / diag[m])
    scale = ONE
    for m, e in enumerate(exponents):
        if e:
            scale = scale * diag[m] ** e
    return acc.shift_monomial(exponents, scale)


# ---------------------------------------------------------------------------
# Real case: complexification and realification
# ---------------------------------------------------------------------------


def _require_real(fam: Family):
    for i, g in enumerate(fam.germs):
        for m, comp in enumerate(g.components):
            for exp, c in comp.items():
                if c.im != 0:
                    raise DomainError(
                        f"germ {i + 1} component {m + 1} term {exp} has imaginary coefficient {c}"
                    )


def detect_block_structure(fam: Family) -> list[tuple[int, ...]]:
    """Partition coordinates into rotation-scaling 2x2 blocks and real tail
    slots, validating the shape across all germs.  Returns a list of (a, b)
    pairs and (t,) singletons, in coordinate order."""
    mats = [g.linear_matrix() for g in fam.germs]
    n = fam.n
    structure: list[tuple[int, ...]] = []
    t = 0
    while t < n:
        has_off = t + 1 < n and any(
            not mats[i][t][t + 1].is_zero() or not mats[i][t + 1][t].is_zero()
            for i in range(fam.p)
        )
        if has_off:
            for i in range(fam.p):
                u, mv = mats[i][t][t], mats[i][t][t + 1]
                v, u2 = mats[i][t + 1][t], mats[i][t + 1][t + 1]
                if u != u2 or mv != -v:
                    raise DomainError(
                        f"germ {i + 1} rows {t + 1},{t + 2} are not a rotation-scaling block"
                    )
            structure.append((t, t + 1))
            t += 2
        else:
            structure.append((t,))
            t += 1
    # entries outside the detected blocks must vanish
    allowed = set()
    for block in structure:
        for a in block:
            for b in block:
                allowed.add((a, b))
    for i in range(fam.p):
        for a in range(n):
            for b in range(n):
                if (a, b) not in allowed and not mats[i][a][b].is_zero():
                    raise DomainError(
                        f"germ {i + 1} has a linear entry at ({a + 1},{b + 1}) outside the block structure"
                    )
    return structure


def _pairing_from_structure(structure: list[tuple[int, ...]], n: int) -> tuple[int, ...]:
    sigma = list(range(n))
    for block in structure:
        if len(block) == 2:
            a, b = block
            sigma[a], sigma[b] = b, a
    return tuple(sigma)


def _block_p_germ(structure: list[tuple[int, ...]], n: int, degree: int) -> Germ:
    half = GaussianRational(Fraction(1, 2))
    mihalf = GaussianRational(0, Fraction(-1, 2))
    ihalf = GaussianRational(0, Fraction(1, 2))
    mat = [[ZERO for _ in range(n)] for _ in range(n)]
    for block in structure:
        if len(block) == 2:
            a, b = block
            mat[a][a], mat[a][b] = half, half
            mat[b][a], mat[b][b] = mihalf, ihalf
        else:
            (a,) = block
            mat[a][a] = ONE
    return Germ.from_linear_matrix(mat, degree)


def complexify_real_family(fam: Family):
    """Conjugate a real block family by the block transformation P into a
    family with diagonal linear parts; returns (complex family, P germ,
    pairing sigma swapping each block's two slots)."""
    _require_real(fam)
    structure = detect_block_structure(fam)
    if all(len(b) == 1 for b in structure):
        raise DomainError("no rotation-scaling blocks found; family is already diagonal")
    sigma = _pairing_from_structure(structure, fam.n)
    p_germ = _block_p_germ(structure, fam.n, fam.degree)
    complex_germs = [conjugate(g, p_germ) for g in fam.germs]
    complex_fam = Family(complex_germs, check_commuting=True)
    if not complex_fam.is_diagonal_linear():
        raise AssertionError("complexified family is not diagonal")
    offense = rho_equivariance_offense(complex_fam, sigma)
    if offense is not None:
        raise AssertionError(f"complexified family is not rho-equivariant: {offense}")
    return complex_fam, p_germ, sigma


def realify_normal_form(fam: Family, sigma) -> Family:
    """Push a rho-equivariant complex family back to real coordinates via
    the block transformation; every output coefficient is verified to have
    exactly zero imaginary part."""
    sigma = _pairing_involution(sigma, fam.n)
    offense = rho_equivariance_offense(fam, sigma)
    if offense is not None:
        raise DomainError(f"family is not rho-equivariant: offending term {offense}")
    structure: list[tuple[int, ...]] = []
    m = 0
    while m < fam.n:
        if sigma[m] == m + 1:
            structure.append((m, m + 1))
            m += 2
        elif sigma[m] == m:
            structure.append((m,))
            m += 1
        else:
            raise UsageError("pairing must swap adjacent coordinates")
    p_germ = _block_p_germ(structure, fam.n, fam.degree)
    real_germs = [conjugate(g, invert_germ(p_germ)) for g in fam.germs]
    for i, g in enumerate(real_germs):
        for mm, comp in enumerate(g.components):
            for exp, c in comp.items():
                if c.im != 0:
                    raise AssertionError(
                        f"realified germ {i + 1} component {mm + 1} kept an imaginary part at {exp}"
                    )
    return Family(real_germs, check_commuting=True)
