"""Diffeomorphism germs fixing the origin, and commuting families.

A germ is stored as its degree-D jet: one TruncatedSeries per component,
all with zero constant term and an invertible linear part.  The germ
algebra accepts arbitrary invertible linear parts; the normalizer imposes
diagonality separately (eigen-decomposition over Q(i) is out of scope).

Composition convention: compose_germ(f, g) is f after g, and
conjugate(f, psi) = psi^{-1} o f o psi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .exactnum import GaussianRational, ZERO, ONE
from .linalg import field_inverse
from .series import MultiIndex, TruncatedSeries, UsageError, grlex_key


class CommutationError(ValueError):
    """A family constructor found two germs that do not commute up to D."""

    def __init__(self, i: int, j: int, witness):
        self.pair = (i, j)
        self.witness = witness
        degree, component, exp, coeff = witness
        super().__init__(
            f"germs {i + 1} and {j + 1} do not commute: defect at degree {degree}, "
            f"component {component}, monomial {exp}, coefficient {coeff}"
        )


class Germ:
    """Jet of a diffeomorphism germ fixing 0 in K^n, K = Q(i)."""

    __slots__ = ("n", "degree", "components")

    def __init__(self, components: list[TruncatedSeries]):
        comps = tuple(components)
        if not comps:
            raise UsageError("a germ needs at least one component")
        n = comps[0].n
        degree = comps[0].degree
        if len(comps) != n:
            raise UsageError(f"expected {n} components, got {len(comps)}")
        for c in comps:
            if c.n != n or c.degree != degree:
                raise UsageError("component dimension/degree mismatch")
            if not c.constant_term().is_zero():
                raise UsageError("germ components must vanish at the origin")
        self.n = n
        self.degree = degree
        self.components = comps
        if _det(self.linear_matrix()).is_zero():
            raise UsageError("linear part is singular; not a diffeomorphism germ")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int, degree: int) -> "Germ":
        return Germ([TruncatedSeries.variable(j, n, degree) for j in range(n)])

    @staticmethod
    def from_linear_diag(diag, degree: int) -> "Germ":
        n = len(diag)
        comps = []
        for j, mu in enumerate(diag):
            exp = tuple(1 if k == j else 0 for k in range(n))
            comps.append(TruncatedSeries.monomial(exp, mu, degree))
        return Germ(comps)

    @staticmethod
    def from_linear_matrix(matrix, degree: int) -> "Germ":
        n = len(matrix)
        comps = []
        for row in matrix:
            terms = {}
            for j, a in enumerate(row):
                exp = tuple(1 if k == j else 0 for k in range(n))
                terms[exp] = a
            comps.append(TruncatedSeries(n, degree, terms))
        return Germ(comps)

    # -- linear part --------------------------------------------------------

    def linear_matrix(self) -> list[list[GaussianRational]]:
        mat = []
        for comp in self.components:
            row = []
            for j in range(self.n):
                exp = tuple(1 if k == j else 0 for k in range(self.n))
                row.append(comp.coeff(exp))
            mat.append(row)
        return mat

    def is_diagonal_linear(self) -> bool:
        mat = self.linear_matrix()
        return all(mat[i][j].is_zero() for i in range(self.n) for j in range(self.n) if i != j)

    def linear_diag(self) -> tuple[GaussianRational, ...]:
        if not self.is_diagonal_linear():
            raise UsageError("linear part is not diagonal")
        mat = self.linear_matrix()
        return tuple(mat[j][j] for j in range(self.n))

    def is_tangent_to_identity(self) -> bool:
        mat = self.linear_matrix()
        for i in range(self.n):
            for j in range(self.n):
                want = ONE if i == j else ZERO
                if mat[i][j] != want:
                    return False
        return True

    def nonlinear_part(self) -> list[TruncatedSeries]:
        lin = Germ.from_linear_matrix(self.linear_matrix(), self.degree)
        return [c - l for c, l in zip(self.components, lin.components)]

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"<Germ n={self.n} D={self.degree} {self}>"


def _det(matrix) -> GaussianRational:
    # fraction-free not needed: exact field arithmetic, n is tiny
    n = len(matrix)
    a = [row[:] for row in matrix]
    det = ONE
    for c in range(n):
        pivot = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det = det * a[c][c]
        inv = ONE / a[c][c]
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def compose_germ(f: Germ, g: Germ) -> Germ:
    """f o g (f after g), truncated at the shared degree."""
    if f.n != g.n or f.degree != g.degree:
        raise UsageError("germ composition dimension/degree mismatch")
    return Germ([comp.compose(g.components) for comp in f.components])


def invert_germ(f: Germ) -> Germ:
    """Two-sided inverse of f modulo degree > D, by degree-recursive
    substitution g <- L^{-1}(id - N o g) where f = L + N."""
    lin = f.linear_matrix()
    lin_inv = field_inverse(lin, ONE, ZERO)
    nonlin = f.nonlinear_part()
    identity = Germ.identity(f.n, f.degree)

    def apply_linear(mat, comps):
        out = []
        for row in mat:
            acc = TruncatedSeries.zero(f.n, f.degree)
            for a, comp in zip(row, comps):
                if not a.is_zero():
                    acc = acc + comp.scale(a)
            out.append(acc)
        return out

    g = apply_linear(lin_inv, identity.components)
    for _ in range(f.degree):
        correction = [identity.components[j] - nonlin[j].compose(g) for j in range(f.n)]
        new_g = apply_linear(lin_inv, correction)
        if new_g == g:
            break
        g = new_g
    inverse = Germ(new_g if f.degree else g)
    check = compose_germ(f, inverse)
    if check != identity:
        raise AssertionError("germ inversion failed verification")
    return inverse


def conjugate(f: Germ, psi: Germ) -> Germ:
    """psi^{-1} o f o psi."""
    return compose_germ(invert_germ(psi), compose_germ(f, psi))


def commutativity_defect(f: Germ, g: Germ):
    """None when f o g = g o f up to D; otherwise the first witness term in
    (degree, component, graded-lex) order as (degree, component_1based,
    exponents, coefficient of fog - gof)."""
    fg = compose_germ(f, g)
    gf = compose_germ(g, f)
    worst = None
    for m in range(f.n):
        diff = fg.components[m] - gf.components[m]
        for exp, coeff in diff.items():
            key = (sum(exp), m, grlex_key(exp))
            if worst is None or key < worst[0]:
                worst = (key, (sum(exp), m + 1, exp, coeff))
            break  # items() is sorted, first term is this component's minimum
    return worst[1] if worst else None


class Family:
    """p pairwise commuting germs sharing (n, D); commutativity is checked
    at construction, not assumed."""

    __slots__ = ("p", "n", "degree", "germs")

    def __init__(self, germs: list[Germ], check_commuting: bool = True):
        members = tuple(germs)
        if not members:
            raise UsageError("a family needs at least one germ")
        n, degree = members[0].n, members[0].degree
        for g in members:
            if g.n != n or g.degree != degree:
                raise UsageError("family members must share dimension and degree")
        if len(members) > n:
            raise UsageError("family has more germs than the ambient dimension")
        if check_commuting:
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    defect = commutativity_defect(members[i], members[j])
                    if defect is not None:
                        raise CommutationError(i, j, defect)
        self.p = len(members)
        self.n = n
        self.degree = degree
        self.germs = members

    @property
    def declared_type(self) -> tuple[int, int]:
        return (self.p, self.n - self.p)

    def linear_diags(self) -> list[tuple[GaussianRational, ...]]:
        return [g.linear_diag() for g in self.germs]

    def is_diagonal_linear(self) -> bool:
        return all(g.is_diagonal_linear() for g in self.germs)

    def __eq__(self, other):
        if not isinstance(other, Family):
            return NotImplemented
        return self.germs == other.germs

    def __iter__(self):
        return iter(self.germs)


# ---------------------------------------------------------------------------
# JSON wire format (schema 1)
# ---------------------------------------------------------------------------


def germ_to_json(g: Germ) -> dict:
    entry: dict = {}
    if g.is_diagonal_linear():
        entry["linear_diag"] = [str(mu) for mu in g.linear_diag()]
    else:
        entry["linear_matrix"] = [[str(a) for a in row] for row in g.linear_matrix()]
    terms = []
    for m, comp in enumerate(g.nonlinear_part()):
        for exp, coeff in comp.items():
            terms.append({"component": m + 1, "exponents": list(exp), "coeff": str(coeff)})
    terms.sort(key=lambda t: (t["component"], grlex_key(tuple(t["exponents"]))))
    entry["terms"] = terms
    return entry


def germ_from_json(entry: dict, n: int, degree: int) -> Germ:
    if "linear_diag" in entry:
        diag = [GaussianRational.parse(s) for s in entry["linear_diag"]]
        if len(diag) != n:
            raise UsageError("linear_diag length does not match n")
        base = Germ.from_linear_diag(diag, degree)
    elif "linear_matrix" in entry:
        mat = [[GaussianRational.parse(s) for s in row] for row in entry["linear_matrix"]]
        if len(mat) != n or any(len(r) != n for r in mat):
            raise UsageError("linear_matrix shape does not match n")
        base = Germ.from_linear_matrix(mat, degree)
    else:
        raise UsageError("map entry needs linear_diag or linear_matrix")
    comps = list(base.components)
    for term in entry.get("terms", []):
        m = term["component"]
        if not 1 <= m <= n:
            raise UsageError(f"component {m} out of range 1..{n}")
        exp = tuple(term["exponents"])
        if len(exp) != n:
            raise UsageError(f"exponents {exp} have wrong arity")
        if sum(exp) < 2:
            raise UsageError(f"terms must have degree >= 2 (linear part is separate): {exp}")
        coeff = GaussianRational.parse(term["coeff"])
        comps[m - 1] = comps[m - 1] + TruncatedSeries.monomial(exp, coeff, degree)
    return Germ(comps)


def family_to_json(fam: Family) -> dict:
    return {
        "schema": 1,
        "n": fam.n,
        "p": fam.p,
        "degree": fam.degree,
        "maps": [germ_to_json(g) for g in fam.germs],
    }


def family_from_json(data: dict, check_commuting: bool = True) -> Family:
    if data.get("schema") != 1:
        raise UsageError("missing or unsupported schema field (expected 1)")
    for key in data:
        if key not in {"schema", "n", "p", "degree", "maps", "pairing"}:
            raise UsageError(f"unknown field {key!r} in family input")
    n = int(data["n"])
    degree = int(data["degree"])
    if degree < 2:
        raise UsageError("degree must be >= 2")
    maps = data["maps"]
    if "p" in data and int(data["p"]) != len(maps):
        raise UsageError("declared p does not match the number of maps")
    germs = [germ_from_json(entry, n, degree) for entry in maps]
    return Family(germs, check_commuting=check_commuting)


def family_from_path(path: str, check_commuting: bool = True) -> Family:
    with open(path, "r", encoding="utf-8") as fh:
        return family_from_json(json.load(fh), check_commuting=check_commuting)
