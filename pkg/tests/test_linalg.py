import itertools
import random
from fractions import Fraction

from germnf.linalg import (
    field_inverse,
    field_kernel,
    field_rref,
    fraction_rank,
    hnf_with_transform,
    integer_rank,
    kernel_basis,
    lattice_points,
    rational_feasible,
    row_hnf,
    solve_integer,
)


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _int_det(m):
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for s in range(n):
            if seen[s]:
                continue
            ln, j = 0, s
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        prod = sign
        for i in range(n):
            prod *= m[i][perm[i]]
        total += prod
    return total


def test_hnf_transform_is_unimodular():
    rng = random.Random(3)
    for _ in range(40):
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(rng.randint(1, 4))]
        h, u = hnf_with_transform(rows)
        assert _mat_mul(u, rows) == h
        assert abs(_int_det(u)) == 1


def test_hnf_shape():
    h = row_hnf([[0, 4], [1, 1]])
    assert h == [[1, 1], [0, 4]]
    # pivots positive, entries above pivots reduced
    h2 = row_hnf([[2, 2], [4, 0]])
    assert h2 == [[2, 2], [0, 4]]


def test_kernel_basis_annihilates_and_is_complete():
    rng = random.Random(9)
    for _ in range(40):
        m = rng.randint(1, 3)
        c = rng.randint(1, 4)
        rows = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(m)]
        kern = kernel_basis(rows, ncols=c)
        for vec in kern:
            assert all(sum(rows[i][j] * vec[j] for j in range(c)) == 0 for i in range(m))
        # completeness on a small box: every kernel point in the span
        span = row_hnf(kern) if kern else []
        for x in itertools.product(range(-2, 3), repeat=c):
            if all(sum(rows[i][j] * x[j] for j in range(c)) == 0 for i in range(m)):
                if not any(x):
                    continue
                assert solve_integer(
                    [[span[k][j] for k in range(len(span))] for j in range(c)], list(x)
                ) is not None


def test_solve_integer():
    assert solve_integer([[2, 4]], [6]) is not None
    assert solve_integer([[2, 4]], [3]) is None
    x = solve_integer([[1, 2, 3], [0, 1, 1]], [5, 2])
    assert x is not None and x[0] + 2 * x[1] + 3 * x[2] == 5 and x[1] + x[2] == 2


def test_rank():
    assert integer_rank([[1, 2], [2, 4]]) == 1
    assert integer_rank([[1, 0], [0, 1]]) == 2
    assert fraction_rank([[Fraction(1, 2), Fraction(1)], [Fraction(1, 4), Fraction(1, 2)]]) == 1


def test_lattice_points_against_brute_force():
    rng = random.Random(21)
    for _ in range(25):
        n = rng.randint(1, 3)
        gens = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, n))]
        basis = row_hnf(gens)
        bound = rng.randint(1, 5)
        got = sorted(lattice_points(basis, [0] * n, [bound] * n))
        # brute force over combination coefficients large enough to cover the box
        brute = set()
        if not basis:
            brute.add(tuple([0] * n))
        else:
            reach = 3 * bound + 6
            for coeffs in itertools.product(range(-reach, reach + 1), repeat=len(basis)):
                pt = tuple(
                    sum(coeffs[i] * basis[i][j] for i in range(len(basis))) for j in range(n)
                )
                if all(0 <= v <= bound for v in pt):
                    brute.add(pt)
        assert got == sorted(brute)


def test_lattice_points_signed_box_with_offset():
    basis = row_hnf([[2, -1]])
    pts = sorted(lattice_points(basis, [-4, -4], [4, 4], offset=[1, 0]))
    assert pts == sorted(
        (1 + 2 * t, -t) for t in range(-3, 4) if -4 <= 1 + 2 * t <= 4 and -4 <= -t <= 4
    )


def test_rational_feasible():
    # x + y = 1, x - y = 0 -> (1/2, 1/2)
    point = rational_feasible(
        [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]],
        [Fraction(1), Fraction(0)],
    )
    assert point == [Fraction(1, 2), Fraction(1, 2)]
    # x + y = 1 with x + 2y = 3 forces y = 2, x = -1 < 0: infeasible
    assert rational_feasible(
        [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(2)]],
        [Fraction(1), Fraction(3)],
    ) is None
    # lambda1 + 2 lambda2 = 0, sum = 1 over nonnegatives: infeasible
    assert rational_feasible(
        [[Fraction(1), Fraction(2)], [Fraction(1), Fraction(1)]],
        [Fraction(0), Fraction(1)],
    ) is None


def test_field_routines():
    one, zero = Fraction(1), Fraction(0)
    kern = field_kernel([[one, one, zero]], 3, one, zero)
    assert len(kern) == 2
    for vec in kern:
        assert vec[0] + vec[1] == 0
    inv = field_inverse([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]], one, zero)
    assert inv == [[Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    rref, pivots = field_rref([[zero, one], [one, zero]], 2)
    assert pivots == [0, 1] and rref == [[one, zero], [zero, one]]
