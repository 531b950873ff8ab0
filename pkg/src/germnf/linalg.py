"""Exact linear algebra: integer lattices and field elimination.

Integer routines use row-style Hermite normal form with positive pivots,
which makes every lattice basis in the engine canonical and reports
diffable.  Field routines run over any of the exact coefficient types
(Fraction, GaussianRational) that support +, -, *, / and == 0 comparison
via an `is_zero`-style predicate supplied by the caller.
"""

from __future__ import annotations

from fractions import Fraction


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf_with_transform(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row HNF with unimodular transform: returns (H, U) with U*A = H.

    H keeps its zero rows (at the bottom) so U rows stay aligned; pivots are
    positive and entries above each pivot are reduced into [0, pivot).
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        pivot_row = None
        for i in range(r, m):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        u[r], u[pivot_row] = u[pivot_row], u[r]
        for i in range(r + 1, m):
            if not a[i][c]:
                continue
            g, s, t = _ext_gcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            row_r, row_i = a[r], a[i]
            urow_r, urow_i = u[r], u[i]
            a[r] = [s * x + t * y for x, y in zip(row_r, row_i)]
            a[i] = [p * y - q * x for x, y in zip(row_r, row_i)]
            u[r] = [s * x + t * y for x, y in zip(urow_r, urow_i)]
            u[i] = [p * y - q * x for x, y in zip(urow_r, urow_i)]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return a, u


def row_hnf(rows: list[list[int]]) -> list[list[int]]:
    """Canonical HNF basis of the lattice spanned by the rows (zero rows dropped)."""
    h, _ = hnf_with_transform(rows)
    return [r for r in h if any(r)]


def integer_rank(rows: list[list[int]]) -> int:
    return len(row_hnf(rows))


def fraction_rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q of a matrix with Fraction entries."""
    cleared = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        cleared.append([int(x * den) for x in row])
    return integer_rank(cleared)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


def kernel_basis(rows: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """Canonical basis of {x in Z^c : A x = 0} for integer A given by rows."""
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if m else 0)
    if n == 0:
        return []
    if m == 0:
        return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    transpose = [[rows[i][j] for i in range(m)] for j in range(n)]
    h, u = hnf_with_transform(transpose)
    kernel = [u[i] for i in range(n) if not any(h[i])]
    return row_hnf(kernel)


def solve_integer(rows: list[list[int]], rhs: list[int]) -> list[int] | None:
    """One integer solution x of A x = b, or None when none exists."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m != len(rhs):
        raise ValueError("rhs length mismatch")
    if m == 0:
        return [0] * n
    transpose = [[rows[i][j] for i in range(m)] for j in range(n)]
    h, u = hnf_with_transform(transpose)  # A * U^T = H^T
    residual = list(rhs)
    y = [0] * n
    for j in range(n):
        col = h[j]
        if not any(col):
            break
        p = next(i for i, v in enumerate(col) if v)
        if residual[p] % col[p]:
            return None
        y[j] = residual[p] // col[p]
        for i in range(m):
            residual[i] -= y[j] * col[i]
    if any(residual):
        return None
    x = [0] * n
    for j in range(n):
        if y[j]:
            for c in range(n):
                x[c] += y[j] * u[j][c]
    for i in range(m):
        if sum(rows[i][c] * x[c] for c in range(n)) != rhs[i]:
            raise AssertionError("integer solve verification failed")
    return x


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def lattice_points(
    basis: list[list[int]],
    lower: list[int],
    upper: list[int],
    offset: list[int] | None = None,
):
    """All points offset + Z-combinations of basis rows inside the box
    [lower, upper] (componentwise).  basis must be in row HNF; the pivot
    structure bounds each coefficient, and non-pivot coordinates are
    filtered at the leaves.  Yields tuples in a deterministic order."""
    n = len(lower)
    base = list(offset) if offset is not None else [0] * n
    if not basis:
        if all(lower[j] <= base[j] <= upper[j] for j in range(n)):
            yield tuple(base)
        return
    pivots = []
    for row in basis:
        p = next(i for i, v in enumerate(row) if v)
        if row[p] <= 0:
            raise ValueError("basis must be in row HNF with positive pivots")
        pivots.append(p)
    k = len(basis)

    def rec(level: int, current: list[int]):
        if level == k:
            if all(lower[j] <= current[j] <= upper[j] for j in range(n)):
                yield tuple(current)
            return
        p = pivots[level]
        piv = basis[level][p]
        lo = _ceil_div(lower[p] - current[p], piv)
        hi = (upper[p] - current[p]) // piv
        for a in range(lo, hi + 1):
            nxt = [current[j] + a * basis[level][j] for j in range(n)]
            yield from rec(level + 1, nxt)

    yield from rec(0, base)


# ---------------------------------------------------------------------------
# Field elimination (works for Fraction and GaussianRational alike)
# ---------------------------------------------------------------------------


def _nonzero(x) -> bool:
    if hasattr(x, "is_zero"):
        return not x.is_zero()
    return x != 0


def field_rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field; returns (rref rows, pivot cols)."""
    a = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(a)):
            if _nonzero(a[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(len(a)):
            if i != r and _nonzero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def field_kernel(rows: list[list], ncols: int, one, zero) -> list[list]:
    """Basis of the right kernel over the coefficient field.

    `one`/`zero` supply the field constants (e.g. Fraction(1)/Fraction(0)).
    Each basis vector has a 1 in its free column.
    """
    rref, pivots = field_rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = zero - rref[r][fc]
        basis.append(vec)
    return basis


def field_inverse(matrix: list[list], one, zero) -> list[list]:
    """Inverse of a square matrix over a field; raises ValueError if singular."""
    n = len(matrix)
    aug = [list(matrix[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    rref, pivots = field_rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rref) < n:
        raise ValueError("singular matrix")
    return [row[n:] for row in rref[:n]]


# ---------------------------------------------------------------------------
# Exact rational feasibility (phase-1 simplex)
# ---------------------------------------------------------------------------


def rational_feasible(eq_rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve {x >= 0 : A x = b} exactly over Q.

    Phase-1 simplex with Bland's rule on Fractions; returns one feasible
    point or None.  Sizes here are tiny (convex-hull membership tests), so
    no effort is spent on performance.
    """
    m = len(eq_rows)
    n = len(eq_rows[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    a = [list(map(Fraction, row)) for row in eq_rows]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # tableau with artificial basis; minimize sum of artificials
    tab = [a[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= tab[i][j]
    for j in range(n, n + m):
        cost[j] += Fraction(1)
    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (tab[i][-1] / tab[i][enter], i)
            for i in range(m)
            if tab[i][enter] > 0
        ]
        if not ratios:
            raise AssertionError("phase-1 objective unbounded")
        _, leave = min(ratios, key=lambda t: (t[0], basis[t[1]]))
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter
    if -cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
        elif tab[i][-1] != 0:
            return None  # artificial stuck at positive level
    for i in range(m):
        acc = sum((eq_rows[i][j] * x[j] for j in range(n)), Fraction(0))
        if acc != rhs[i]:
            raise AssertionError("simplex verification failed")
    return x
