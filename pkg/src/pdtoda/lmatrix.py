"""Matrices over bivariate Laurent polynomials, exact determinants, signed
minors and Sylvester resultants.

Determinants use two strategies:

* fraction-free Bareiss elimination over x-polynomials when every entry is
  free of y (divisions are exact by the Bareiss identity), and
* dynamic-programming expansion by minors over column subsets otherwise,
  which avoids Laurent division entirely and costs O(2^n n) multiplications.

Resultants are Sylvester-matrix determinants.  The convention is

    res(p, q) = lead(p)^deg(q) * prod q(root of p),

equivalently the determinant of the Sylvester matrix whose first deg(q)
rows carry the coefficients of p.  For speed the determinant in y with
x-polynomial entries is computed by evaluation at integer points followed
by exact interpolation; a direct expansion is kept for cross-checking.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .bilaurent import BiLaurent
from .errors import DimensionError, PdTodaError
from .rationals import ONE, ZERO, as_q
from .unipoly import UniPoly, lagrange_interpolate


class LaurentMatrix:
    """Immutable rectangular matrix with BiLaurent entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = []
        width = None
        for row in entries:
            cells = tuple(c if isinstance(c, BiLaurent) else BiLaurent.const(c) for c in row)
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise DimensionError("ragged rows")
            rows.append(cells)
        if not rows or width == 0:
            raise DimensionError("empty matrix")
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls(
            [[BiLaurent.one() if i == j else BiLaurent.zero() for j in range(n)] for i in range(n)]
        )

    @classmethod
    def build(cls, rows: int, cols: int, fill: Callable[[int, int], BiLaurent]) -> "LaurentMatrix":
        """Construct from a 1-based entry function."""
        return cls([[fill(i, j) for j in range(1, cols + 1)] for i in range(1, rows + 1)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def entry(self, i: int, j: int) -> BiLaurent:
        """1-based access."""
        return self.entries[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentMatrix):
            return self.entries == other.entries
        return NotImplemented

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = BiLaurent.zero()
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return LaurentMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return LaurentMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def scale(self, c) -> "LaurentMatrix":
        return LaurentMatrix([[e * c for e in row] for row in self.entries])

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(
            [[self.entries[j][i] for j in range(self.rows)] for i in range(self.cols)]
        )

    def submatrix(self, drop_row: int, drop_col: int) -> "LaurentMatrix":
        """Delete 1-based row and column."""
        return LaurentMatrix(
            [
                [self.entries[i][j] for j in range(self.cols) if j != drop_col - 1]
                for i in range(self.rows)
                if i != drop_row - 1
            ]
        )

    def is_y_free(self) -> bool:
        return all(e.is_y_free() for row in self.entries for e in row)

    def eval(self, xv, yv):
        """Floating evaluation to a list-of-lists of complex numbers."""
        return [[e.eval(xv, yv) for e in row] for row in self.entries]


def antitranspose(m: LaurentMatrix) -> LaurentMatrix:
    """Reflection about the antidiagonal: J m^T J with J the reversal matrix."""
    if m.rows != m.cols:
        raise DimensionError("antitranspose requires a square matrix")
    n = m.rows
    return LaurentMatrix(
        [[m.entries[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)]
    )


def det(m: LaurentMatrix) -> BiLaurent:
    """Exact determinant.

    Square matrices only; intended scale is dimension <= 12.
    """
    if m.rows != m.cols:
        raise DimensionError(f"determinant of {m.rows}x{m.cols} matrix")
    if m.is_y_free():
        return BiLaurent.from_unipoly(_det_bareiss([[e.as_unipoly() for e in row] for row in m.entries]))
    return _det_subsets(m.entries)


def det_cofactor(m: LaurentMatrix) -> BiLaurent:
    """Naive recursive Laplace expansion; the independent oracle for det."""
    if m.rows != m.cols:
        raise DimensionError("determinant of non-square matrix")
    return _det_laplace(m.entries)


def _det_laplace(rows) -> BiLaurent:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = BiLaurent.zero()
    for j in range(n):
        if not rows[0][j].terms:
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * _det_laplace(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det_subsets(rows) -> BiLaurent:
    """Expansion by minors with memoization on column subsets.

    det over rows 0..k-1 and a column set S (|S| = k) is built bottom up;
    O(2^n) subproblems instead of n! cofactor paths.
    """
    n = len(rows)
    current = {0: BiLaurent.one()}  # bitmask of used columns -> minor det
    for i in range(n):
        nxt = {}
        for mask, sub in current.items():
            if not sub.terms:
                continue
            # walking columns from the top keeps `parity` equal to the
            # number of already-used columns above j: the inversions the
            # permutation gains by placing row i in column j
            parity = 0
            for j in range(n - 1, -1, -1):
                bit = 1 << j
                if mask & bit:
                    parity ^= 1
                    continue
                a = rows[i][j]
                if a.terms:
                    term = sub * a
                    key = mask | bit
                    prev = nxt.get(key)
                    if parity:
                        term = -term
                    nxt[key] = term if prev is None else prev + term
        current = nxt
        if not current:
            return BiLaurent.zero()
    return current.get((1 << n) - 1, BiLaurent.zero())


def _det_bareiss(a) -> UniPoly:
    """Fraction-free Bareiss determinant over UniPoly (exact divisions)."""
    n = len(a)
    a = [row[:] for row in a]
    sign = 1
    prev = UniPoly.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            # pivot search
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return UniPoly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
            a[i][k] = UniPoly()
        prev = a[k][k]
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result


def minor_signed(m: LaurentMatrix, i: int, j: int) -> BiLaurent:
    """(-1)^(i+j) times the (i, j) minor (1-based); the empty minor of a
    1x1 matrix is 1."""
    if m.rows != m.cols:
        raise DimensionError("signed minor of non-square matrix")
    if not (1 <= i <= m.rows and 1 <= j <= m.cols):
        raise PdTodaError(f"minor index ({i}, {j}) out of range for {m.rows}x{m.cols}")
    if m.rows == 1:
        return BiLaurent.one()
    value = det(m.submatrix(i, j))
    return value if (i + j) % 2 == 0 else -value


# ---------------------------------------------------------------------------
# Sylvester resultants
# ---------------------------------------------------------------------------


def _y_poly(p: BiLaurent):
    """View p as a polynomial in y: list of UniPoly, lowest y-degree first."""
    if p.is_zero():
        raise PdTodaError("resultant of the zero polynomial")
    if p.y_min() < 0:
        raise PdTodaError("resultant_y requires nonnegative y-degrees; clear y first")
    degs = p.y_coefficients()
    top = max(degs)
    return [degs.get(j, UniPoly()) for j in range(top + 1)]


def _sylvester(pc, qc):
    """Sylvester matrix rows (UniPoly entries) for coefficient lists in y."""
    dp = len(pc) - 1
    dq = len(qc) - 1
    n = dp + dq
    rows = []
    prow = list(reversed(pc))  # descending degree
    qrow = list(reversed(qc))
    for k in range(dq):
        rows.append([UniPoly()] * k + prow + [UniPoly()] * (n - dp - 1 - k))
    for k in range(dp):
        rows.append([UniPoly()] * k + qrow + [UniPoly()] * (n - dq - 1 - k))
    return rows


def resultant_y(p: BiLaurent, q: BiLaurent) -> UniPoly:
    """Resultant in y of two polynomials with nonnegative y-degrees.

    Computed as the Sylvester determinant via evaluation at integer x and
    exact interpolation; equals lead(p)^deg(q) * prod_i q(y_i) over the
    y-roots of p.
    """
    pc = _y_poly(p)
    qc = _y_poly(q)
    dp, dq = len(pc) - 1, len(qc) - 1
    if dp == 0 and dq == 0:
        return UniPoly.one()
    if dq == 0:
        return qc[0] ** dp
    if dp == 0:
        sign = -1 if (dp * dq) % 2 else 1
        out = pc[0] ** dq
        return out if sign == 1 else -out
    rows = _sylvester(pc, qc)
    bound = sum(max(e.degree for e in row) for row in rows)
    if bound <= 0:
        return _det_bareiss(rows)
    samples = []
    for s in range(bound + 1):
        xs = as_q(s)
        mat = [[e(xs) for e in row] for row in rows]
        samples.append((xs, _scalar_det(mat)))
    return lagrange_interpolate(samples)


def resultant_y_direct(p: BiLaurent, q: BiLaurent) -> UniPoly:
    """Sylvester determinant expanded directly over UniPoly (oracle path)."""
    pc = _y_poly(p)
    qc = _y_poly(q)
    if len(pc) == 1 and len(qc) == 1:
        return UniPoly.one()
    if len(qc) == 1:
        return qc[0] ** (len(pc) - 1)
    if len(pc) == 1:
        return pc[0] ** (len(qc) - 1)
    return _det_bareiss(_sylvester(pc, qc))


def resultant_x(p: BiLaurent, q: BiLaurent) -> BiLaurent:
    """Resultant in x (used by the smoothness probe).  Both arguments are
    reinterpreted with the roles of x and y swapped; the result is a
    polynomial in y alone, returned as a BiLaurent."""
    swapped_p = _swap_vars(p)
    swapped_q = _swap_vars(q)
    res = resultant_y(swapped_p, swapped_q)
    return _swap_vars(BiLaurent.from_unipoly(res))


def _swap_vars(p: BiLaurent) -> BiLaurent:
    if p.is_zero():
        return p
    if any(j < 0 for _, j in p.terms):
        p = p.clear_y()
    return BiLaurent({(j, i): c for (i, j), c in p.terms.items()})


def _scalar_det(mat):
    """Gaussian elimination over the rationals with partial pivot by nonzero."""
    n = len(mat)
    a = [row[:] for row in mat]
    sign = 1
    out = ONE
    for k in range(n):
        pivot = None
        for r in range(k, n):
            if a[r][k] != 0:
                pivot = r
                break
        if pivot is None:
            return ZERO
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        pk = a[k][k]
        out *= pk
        inv = 1 / pk
        for i in range(k + 1, n):
            factor = a[i][k] * inv
            if factor != 0:
                for j in range(k + 1, n):
                    a[i][j] -= factor * a[k][j]
        # entries left of the pivot are no longer read
    return out if sign == 1 else -out
