"""Lax matrices, the spectral polynomial and its structural checks.

The lattice dynamics is equivalent to the matrix refactorization
L' R'_(M-1) = R_(0) L over Laurent matrices in y, where L carries the
V-variables (unit diagonal, V subdiagonal, V_N/y corner) and R_(k) carries
the k-th I-row (diagonal I, unit superdiagonal, y corner).  The product

    X = L R_(M-1) ... R_(1) R_(0)

evolves by conjugation, so its characteristic polynomial

    phi(x, y) = det(X(y) - x E)
              = A_0(x) y^M + A_1(x) y^(M-1) + ... + A_M(x) + A_(M+1)(x)/y

is conserved.  This module builds these objects exactly and implements the
structural facts as executable checks: the degree/leading-coefficient
profile of the A_j, the genus count, the banded shape of X for M < N, the
Bloch vector recurrence, and the (M+1)x(M+1) one-step transfer determinant
identity det H = (-1)^(M+1) I_1 x.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd

from .bilaurent import BiLaurent, newton_interior
from .errors import PdTodaError
from .lmatrix import LaurentMatrix, det
from .rationals import ONE, as_q, q_str
from .toda import TodaState, conserved_products, evolve, require_valid
from .unipoly import UniPoly


def l_matrix(state: TodaState) -> LaurentMatrix:
    """The V-factor: unit diagonal, V_1..V_(N-1) subdiagonal, V_N/y corner.
    For N = 1 the diagonal and corner coincide and the single entry is
    1 + V_1/y."""
    N = state.N
    if N == 1:
        return LaurentMatrix([[BiLaurent.one() + BiLaurent.term(state.V[0], 0, -1)]])

    def fill(i, j):
        if i == j:
            return BiLaurent.one()
        if i == j + 1:
            return BiLaurent.const(state.V[j - 1])
        if i == 1 and j == N:
            return BiLaurent.term(state.V[N - 1], 0, -1)
        return BiLaurent.zero()

    return LaurentMatrix.build(N, N, fill)


def r_matrix(state: TodaState, layer: int = 0) -> LaurentMatrix:
    """The I-factor for one layer: diagonal I-row, unit superdiagonal,
    y in the lower-left corner.  For N = 1 the entry is I_1 + y."""
    if not 0 <= layer < state.M:
        raise PdTodaError(f"layer {layer} out of range for M={state.M}")
    row = state.I[layer]
    N = state.N
    if N == 1:
        return LaurentMatrix([[BiLaurent.const(row[0]) + BiLaurent.y()]])

    def fill(i, j):
        if i == j:
            return BiLaurent.const(row[i - 1])
        if j == i + 1:
            return BiLaurent.one()
        if i == N and j == 1:
            return BiLaurent.y()
        return BiLaurent.zero()

    return LaurentMatrix.build(N, N, fill)


def transfer_matrix(state: TodaState) -> LaurentMatrix:
    """X = L R_(M-1) ... R_(1) R_(0), the conserved-spectrum operator."""
    out = l_matrix(state)
    for layer in range(state.M - 1, -1, -1):
        out = out @ r_matrix(state, layer)
    return out


def genus(N: int, M: int) -> int:
    """Genus of the spectral curve: ((N-1)(M+1) - gcd(N,M) + 1) / 2."""
    if N < 1 or M < 1:
        raise PdTodaError("N and M must be >= 1")
    num = (N - 1) * (M + 1) - gcd(N, M) + 1
    if num % 2:
        raise PdTodaError(f"genus formula gives non-integer for N={N}, M={M}")
    return num // 2


@dataclass(frozen=True)
class SpectralData:
    """The spectral polynomial and its coefficient layout."""

    N: int
    M: int
    m: int
    N1: int
    M1: int
    g: int
    phi: BiLaurent          # det(X - xE), Laurent in y
    A: tuple                # A_0..A_(M+1), polynomials in x

    @property
    def phi_cleared(self) -> BiLaurent:
        """y * phi, an ordinary polynomial in y (degree M+1)."""
        return self.phi.mul_y(1)


def char_poly(X: LaurentMatrix, N: int, M: int) -> SpectralData:
    """Characteristic polynomial det(X - xE) with coefficients extracted
    into the layout A_0 y^M + ... + A_M + A_(M+1)/y."""
    if X.rows != X.cols or X.rows != N:
        raise PdTodaError("transfer matrix must be N x N")
    xE = LaurentMatrix.identity(N).scale(BiLaurent.x())
    phi = det(X - xE)
    by_y = phi.y_coefficients()
    if any(j < -1 or j > M for j in by_y):
        raise PdTodaError(f"unexpected y-degrees {sorted(by_y)} in spectral polynomial")
    A = tuple(phi.y_coeff(M - j) for j in range(M + 1)) + (phi.y_coeff(-1),)
    if A[M + 1].degree > 0:
        raise PdTodaError("the 1/y coefficient must be constant in x")
    m = gcd(N, M)
    return SpectralData(N=N, M=M, m=m, N1=N // m, M1=M // m, g=genus(N, M), phi=phi, A=A)


def spectral_data(state: TodaState) -> SpectralData:
    require_valid(state)
    return char_poly(transfer_matrix(state), state.N, state.M)


def degree_profile(sd: SpectralData):
    """[(j, deg A_j, leading coefficient)] for j = 0..M+1."""
    out = []
    for j, a in enumerate(sd.A):
        out.append((j, a.degree, a.lead if not a.is_zero() else None))
    return out


def check_degree_profile(sd: SpectralData):
    """Degree bounds deg A_j <= jN/M with equality exactly at the integer
    points j = r*M1, where the leading coefficient must be
    (-1)^(M(N-M)+r) * C(m, r) * x^(r*N1).  Returns a list of violations
    (empty when the profile is as expected for generic data)."""
    N, M, m, N1, M1 = sd.N, sd.M, sd.m, sd.N1, sd.M1
    problems = []
    for j in range(M + 1):
        a = sd.A[j]
        k_j = a.degree
        if j % M1 == 0:
            r = j // M1
            expected_deg = r * N1
            expected_lead = as_q((-1) ** ((M * (N - M) + r) % 2) * comb(m, r))
            if k_j != expected_deg:
                problems.append(f"deg A_{j} = {k_j}, expected {expected_deg}")
            elif a.lead != expected_lead:
                problems.append(
                    f"lead A_{j} = {q_str(a.lead)}, expected {q_str(expected_lead)}"
                )
        else:
            # j*N/M is not an integer here, so the bound must be strict
            if k_j * M >= j * N:
                problems.append(f"deg A_{j} = {k_j} not < {j}*{N}/{M}")
    if sd.A[M + 1].degree > 0:
        problems.append("A_(M+1) is not constant")
    return problems


def det_x_factorization_check(state: TodaState):
    """det X(y) = y^-1 (y - e*prodV) * prod_k (prodI_k - e*y) with
    e = (-1)^N.  (The sign alternates with the parity of N because the
    corner entries of L and R enter the determinant through an (N-1)-cycle.)
    Returns (ok, detX, expected)."""
    X = transfer_matrix(state)
    d = det(X)
    eps = -1 if state.N % 2 else 1
    products = conserved_products(state)
    expected = BiLaurent.y() - BiLaurent.const(eps * products[0])
    for pi in products[1:]:
        expected = expected * (BiLaurent.const(pi) - BiLaurent.term(eps, 0, 1))
    expected = expected.mul_y(-1)
    return d == expected, d, expected


def refactorization_check(state: TodaState):
    """The one-step matrix identity L' R'_(M-1) = R_(0) L, with the primed
    factors built from the evolved state.  Returns (ok, evolved_state)."""
    nxt = evolve(state)
    lhs = l_matrix(nxt) @ r_matrix(nxt, state.M - 1)
    rhs = r_matrix(state, 0) @ l_matrix(state)
    return lhs == rhs, nxt


# ---------------------------------------------------------------------------
# banded form (M < N): band coefficients, Bloch vectors, one-step transfer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandParams:
    """Coefficients of the banded form of X for M < N.

    ``alpha[k][j]`` is the weight of the k-th band (k = 1..M) in column j
    (1-based), ``beta[j]`` the subdiagonal weight; bands wrap cyclically
    with a factor y (downward) or 1/y (the single upper corner).
    """

    N: int
    M: int
    alpha: tuple  # alpha[k-1][j-1]
    beta: tuple   # beta[j-1]

    def a(self, k: int, j: int):
        """alpha^(k)_j with cyclic column index."""
        return self.alpha[k - 1][(j - 1) % self.N]

    def b(self, j: int):
        return self.beta[(j - 1) % self.N]


def band_params(state: TodaState, X: LaurentMatrix | None = None) -> BandParams:
    """Read the band coefficients off the built X by position and verify
    that X matches the banded template exactly (the template is a check,
    never the constructor)."""
    if X is None:
        X = transfer_matrix(state)
    return band_params_of_matrix(X, state.N, state.M)


def band_params_of_matrix(X: LaurentMatrix, N: int, M: int) -> BandParams:
    """Band coefficients of any matrix in the banded family (M < N)."""
    if not M < N:
        raise PdTodaError("banded form requires M < N")

    def read(offset: int, j: int):
        i = j - offset
        if i >= 1:
            return X.entry(i, j).coeff(0, 0)
        return X.entry(i + N, j).coeff(0, 1)

    alpha = tuple(
        tuple(read(k - 1, j) for j in range(1, N + 1)) for k in range(1, M + 1)
    )
    beta = tuple(
        X.entry(j + 1, j).coeff(0, 0) if j < N else X.entry(1, N).coeff(0, -1)
        for j in range(1, N + 1)
    )
    params = BandParams(N=N, M=M, alpha=alpha, beta=beta)
    template = banded_template(params)
    if template != X:
        raise PdTodaError("transfer matrix does not match the banded template")
    return params


def banded_template(params: BandParams) -> LaurentMatrix:
    """Rebuild X from band coefficients: offsets -1 (beta), 0..M-1 (alpha),
    M (ones), wrapped entries picking up y (down) or 1/y (up)."""
    N, M = params.N, params.M
    cells = [[BiLaurent.zero() for _ in range(N)] for _ in range(N)]
    for offset in range(-1, M + 1):
        for j in range(1, N + 1):
            if offset == -1:
                coeff = params.beta[j - 1]
            elif offset == M:
                coeff = ONE
            else:
                coeff = params.alpha[offset][j - 1]
            i = j - offset
            if i > N:
                i -= N
                w = -1
            elif i < 1:
                i += N
                w = 1
            else:
                w = 0
            cells[i - 1][j - 1] = cells[i - 1][j - 1] + BiLaurent.term(coeff, 0, w)
    return LaurentMatrix(cells)


@dataclass(frozen=True)
class BlochBasis:
    """The M+1 formal eigenvector windows, extended by the band recurrence.

    ``vectors[j-1][n-1]`` is component n of the j-th basis vector as a
    polynomial in the spectral parameter x; the first M+1 components form
    the identity pattern.
    """

    N: int
    M: int
    vectors: tuple


def bloch_basis(state: TodaState, upto: int | None = None, params: BandParams | None = None) -> BlochBasis:
    """Extend the M+1 identity windows with the three-term-band recurrence

        v_(n+M) = x v_n - beta_(n-1) v_(n-1) - sum_k alpha^(k)_(n+k-1) v_(n+k-1),

    starting at n = 2; unit leading coefficient makes this division-free."""
    N, M = state.N, state.M
    if params is None:
        params = band_params(state)
    if upto is None:
        upto = M + 2
    if upto < M + 1:
        raise PdTodaError("window must cover the first M+1 components")
    x = UniPoly.x()
    vectors = []
    for j in range(1, M + 2):
        comp = [UniPoly.one() if n == j else UniPoly() for n in range(1, M + 2)]
        for n in range(2, upto - M + 1):
            new = x * comp[n - 1] - params.b(n - 1) * comp[n - 2]
            for k in range(1, M + 1):
                new = new - params.a(k, n + k - 1) * comp[n + k - 2]
            comp.append(new)
        vectors.append(tuple(comp))
    return BlochBasis(N=N, M=M, vectors=tuple(vectors))


def time_step_matrix(state: TodaState, basis: BlochBasis | None = None) -> LaurentMatrix:
    """The (M+1)x(M+1) matrix propagating Bloch coefficients one time step:
    diagonal I_1..I_M with a unit superdiagonal, and the last row built
    from the (M+2)-nd components of the basis vectors."""
    M = state.M
    if basis is None:
        basis = bloch_basis(state, upto=M + 2)
    if len(basis.vectors[0]) < M + 2:
        raise PdTodaError("basis must extend to component M+2")

    def poly_entry(p: UniPoly) -> BiLaurent:
        return BiLaurent({(i, 0): c for i, c in enumerate(p.coeffs) if c != 0})

    cells = [[BiLaurent.zero() for _ in range(M + 1)] for _ in range(M + 1)]
    for i in range(1, M + 1):
        cells[i - 1][i - 1] = BiLaurent.const(state.i(i))
        cells[i - 1][i] = BiLaurent.one()
    for j in range(1, M + 2):
        cells[M][j - 1] = poly_entry(basis.vectors[j - 1][M + 1])
    cells[M][M] = cells[M][M] + BiLaurent.const(state.i(M + 1))
    return LaurentMatrix(cells)


def time_step_det_check(state: TodaState):
    """det H = (-1)^(M+1) I_1 x, symbolically in x.
    Returns (ok, det, expected)."""
    H = time_step_matrix(state)
    d = det(H)
    sign = -1 if state.M % 2 == 0 else 1
    expected = BiLaurent.term(sign * state.i(1), 1, 0)
    return d == expected, d, expected


def spectral_report(sd: SpectralData) -> dict:
    """JSON-ready summary of the spectral polynomial."""
    return {
        "A": [[q_str(c) for c in a.coeffs] for a in sd.A],
        "degrees": [a.degree for a in sd.A],
        "genus": sd.g,
        "m": sd.m,
    }


def newton_genus_check(sd: SpectralData):
    """Interior lattice points of the exponent polygon versus the genus
    formula; equal on generic data."""
    interior = newton_interior(sd.phi)
    return interior == sd.g, interior
