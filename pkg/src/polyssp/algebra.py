"""Exact integer matrix arithmetic and spectral quantities of unimodular matrices.

Vectors are plain tuples of Python ints (``IntVector`` adds ``norm_sq``);
matrices are immutable :class:`IntMatrix` values.  Every inequality that
affects instance validity is decided on exact squared norms; floats only
appear in the spectral radius and the norm-growth polynomial ``p(k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

INT64_MAX = 2**63 - 1


class AlgebraError(ValueError):
    """Shape, dimension or unimodularity violation."""


class SpectralError(ArithmeticError):
    def __init__(self, message: str, tol_out: float):
        super().__init__(message)
        self.tol_out = tol_out


class IntVector(tuple):
    """Integer vector; a tuple with an exact squared Euclidean norm."""

    @classmethod
    def basis(cls, n: int, j: int) -> "IntVector":
        """Standard basis vector e_j, 0-based ``j``."""
        return cls(1 if i == j else 0 for i in range(n))

    @classmethod
    def zero(cls, n: int) -> "IntVector":
        return cls((0,) * n)

    @property
    def norm_sq(self) -> int:
        return sum(x * x for x in self)


def _bareiss_det(rows: tuple[tuple[int, ...], ...]) -> int:
    n = len(rows)
    a = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]
    det_abs: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise AlgebraError("matrix must be square and non-empty")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "det_abs", abs(_bareiss_det(rows)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def is_unimodular(self) -> bool:
        return self.det_abs == 1

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if other.n != self.n:
            raise AlgebraError("dimension mismatch")
        cols = list(zip(*other.entries))
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries)
        )

    def apply(self, v: Sequence[int]) -> IntVector:
        """Matrix-vector product ``X v``."""
        if len(v) != self.n:
            raise AlgebraError("dimension mismatch")
        return IntVector(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def column(self, j: int) -> IntVector:
        return IntVector(r[j] for r in self.entries)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(self.n))

    def max_bits(self) -> int:
        return max(abs(x).bit_length() for r in self.entries for x in r)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[x if abs(x) <= INT64_MAX else str(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntMatrix":
        try:
            rows = [[int(x) for x in r] for r in obj["entries"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise AlgebraError(f"malformed matrix JSON: {exc}") from None
        m = cls.from_rows(rows)
        if "n" in obj and int(obj["n"]) != m.n:
            raise AlgebraError(f"declared n={obj['n']} but entries are {m.n}x{m.n}")
        return m

    def __str__(self) -> str:
        return str([list(r) for r in self.entries])


# --------------------------------------------------------------------------
# powers, characteristic polynomial, inverse


def _faddeev(X: IntMatrix) -> tuple[list[int], IntMatrix]:
    """Faddeev-LeVerrier: (char poly, highest degree first; M_n with X M_n = -c_0 I)."""
    n = X.n
    coeffs = [1]
    M = IntMatrix(tuple((0,) * n for _ in range(n)))
    for k in range(1, n + 1):
        XM = X @ M
        M = IntMatrix(
            tuple(
                tuple(XM.entries[i][j] + (coeffs[-1] if i == j else 0) for j in range(n))
                for i in range(n)
            )
        )
        tr = (X @ M).trace()
        if tr % k:
            raise AssertionError("Faddeev-LeVerrier produced a non-integral coefficient")
        coeffs.append(-tr // k)
    return coeffs, M


@lru_cache(maxsize=256)
def char_poly(X: IntMatrix) -> tuple[int, ...]:
    """Monic characteristic polynomial, coefficients highest degree first."""
    return tuple(_faddeev(X)[0])


@lru_cache(maxsize=256)
def mat_inverse(X: IntMatrix) -> IntMatrix:
    if X.det_abs != 1:
        raise AlgebraError(f"matrix is not unimodular (|det| = {X.det_abs})")
    coeffs, M = _faddeev(X)
    c0 = coeffs[-1]
    return IntMatrix(tuple(tuple(-x * c0 for x in r) for r in M.entries))


def mat_pow(X: IntMatrix, k: int) -> IntMatrix:
    """Exact ``X**k``; negative ``k`` requires ``|det X| = 1``."""
    if k < 0:
        return _pow_cached(mat_inverse(X), -k)
    return _pow_cached(X, k)


@lru_cache(maxsize=4096)
def _pow_cached(X: IntMatrix, k: int) -> IntMatrix:
    if k == 0:
        return IntMatrix.identity(X.n)
    if k == 1:
        return X
    half = _pow_cached(X, k // 2)
    sq = half @ half
    return sq @ X if k % 2 else sq


def column_norms_sq(X: IntMatrix, k: int) -> tuple[int, ...]:
    """Exact ``||X^k e_j||^2`` for every j."""
    P = mat_pow(X, k)
    return tuple(sum(P.entries[i][j] ** 2 for i in range(X.n)) for j in range(X.n))


def random_unimodular(n: int, rng, steps: int = 12, max_entry: int = 40) -> IntMatrix:
    """Random GL_n(Z) matrix as a product of elementary transvections."""
    while True:
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(steps):
            i, j = rng.sample(range(n), 2)
            s = rng.choice((-1, 1))
            for col in range(n):
                rows[i][col] += s * rows[j][col]
        m = IntMatrix.from_rows(rows)
        if m.max_bits() <= max_entry.bit_length():
            return m


# --------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, highest degree first)


def _strip(p: list) -> list:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _strip([Fraction(x) for x in b])
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], _strip(a)
    steps = len(a) - len(b) + 1
    q = [Fraction(0)] * steps
    r = list(a)
    for i in range(steps):
        coef = r[i] / b[0]
        q[i] = coef
        for j, bj in enumerate(b):
            r[i + j] -= coef * bj
    return _strip(q), _strip(r[steps:] or [Fraction(0)])


def poly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a, b = _strip([Fraction(x) for x in a]), _strip([Fraction(x) for x in b])
    while not (len(b) == 1 and b[0] == 0):
        a, b = b, poly_divmod(a, b)[1]
    return [x / a[0] for x in a]


def poly_derivative(p: Sequence) -> list:
    d = len(p) - 1
    return _strip([c * (d - i) for i, c in enumerate(p[:-1])]) or [0]


def _to_primitive_int(p: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(Fraction(x).denominator for x in p))
    ints = [int(Fraction(x) * den) for x in p]
    g = math.gcd(*ints) or 1
    if ints[0] < 0:
        g = -g
    return [x // g for x in ints]


def squarefree_part(p: Sequence[int]) -> list[int]:
    g = poly_gcd(p, poly_derivative(list(p)))
    q, r = poly_divmod(p, g)
    assert r == [0]
    return _to_primitive_int(q)


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial."""
    num = [1] + [0] * (m - 1) + [-1]
    for d in range(1, m):
        if m % d == 0:
            q, r = poly_divmod(num, cyclotomic(d))
            assert r == [0]
            num = q
    return tuple(int(x) for x in num)


def _euler_phi(m: int) -> int:
    return sum(1 for i in range(1, m + 1) if math.gcd(i, m) == 1)


def strip_cyclotomic(p: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide out every cyclotomic factor; returns (remainder, orders removed)."""
    rest = [int(x) for x in p]
    removed = []
    deg = len(rest) - 1
    # phi(m) >= sqrt(m/2), so orders beyond 2*deg^2 cannot divide
    for m in range(1, 2 * deg * deg + 3):
        phi_m = cyclotomic(m)
        if len(phi_m) - 1 > len(rest) - 1:
            continue
        while len(rest) > 1:
            q, r = poly_divmod(rest, phi_m)
            if r != [0]:
                break
            rest = [int(x) for x in q]
            removed.append(m)
    return rest, removed


# --------------------------------------------------------------------------
# spectral radius


@dataclass(frozen=True)
class SpectralReport:
    char_poly: tuple[int, ...]
    alpha: float
    alpha_tol: float
    quasi_unipotent: bool


def aberth_roots(coeffs: Sequence[complex], tol: float = 1e-15, max_iter: int = 1000) -> np.ndarray:
    """All complex roots of a polynomial (highest degree first) by Aberth iteration."""
    p = np.asarray(coeffs, dtype=complex)
    d = len(p) - 1
    if d < 1:
        return np.empty(0, dtype=complex)
    dp = np.polyder(p)
    radius = 1.0 + float(np.max(np.abs(p[1:] / p[0])))
    z = 0.5 * radius * np.exp(2j * np.pi * (np.arange(d) + 0.25) / d)
    for _ in range(max_iter):
        pv = np.polyval(p, z)
        dv = np.polyval(dp, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dv != 0, pv / dv, pv)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= tol * np.maximum(1.0, np.abs(z))):
            break
    return z


def _polish(q: Sequence[int], z: complex) -> tuple[complex, float]:
    """Newton-polish a simple root at high precision; return (root, error bound)."""
    d = len(q) - 1
    with mpmath.workdps(60):
        x = mpmath.mpc(z)
        dq = poly_derivative(list(q))
        for _ in range(8):
            fx = mpmath.polyval(list(q), x)
            dfx = mpmath.polyval(dq, x)
            if dfx == 0:
                break
            x = x - fx / dfx
        fx = mpmath.polyval(list(q), x)
        dfx = mpmath.polyval(dq, x)
        bound = float(d * abs(fx) / abs(dfx)) if dfx != 0 else math.inf
        return complex(x), bound


def spectral_radius(X: IntMatrix, tol: float = 1e-9) -> tuple[float, float]:
    """Max eigenvalue modulus of ``X`` and an absolute error bound ``tol_out <= tol``.

    Repeated and cyclotomic factors are removed exactly before root finding,
    so the iteration only ever sees simple roots off the unit circle.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = list(char_poly(X))
    q = squarefree_part(p)
    q, removed = strip_cyclotomic(q)
    alpha, tol_out = (1.0 if removed else 0.0), 0.0
    if len(q) > 1:
        roots = aberth_roots(q)
        hi = lo = alpha
        for z in roots:
            z, err = _polish(q, complex(z))
            hi = max(hi, abs(z) + err)
            lo = max(lo, abs(z) - err)
            alpha = max(alpha, abs(z))
        tol_out = max(hi - alpha, alpha - lo) + 4 * math.ulp(alpha)
    _power_sanity_check(X, alpha, tol_out)
    if tol_out > tol:
        raise SpectralError(f"root finder reached only {tol_out:.3g} (asked {tol:.3g})", tol_out)
    return alpha, tol_out


def _power_sanity_check(X: IntMatrix, alpha: float, tol_out: float, k: int = 64) -> None:
    # rho(X) <= ||X^k||_F^(1/k); the ratio ||X^2k|| / ||X^k|| tracks alpha^k up to polynomial factors
    fk = sum(x * x for r in mat_pow(X, k).entries for x in r)
    f2k = sum(x * x for r in mat_pow(X, 2 * k).entries for x in r)
    if fk == 0 or f2k == 0:
        return
    upper = math.exp(math.log(fk) / (2 * k))
    if alpha > upper * (1 + 1e-12) + tol_out:
        raise SpectralError(f"spectral radius {alpha} exceeds power bound {upper}", tol_out)
    estimate = math.exp((math.log(f2k) - math.log(fk)) / (2 * k))
    if abs(estimate - alpha) > 0.1 * max(alpha, 1.0):
        raise SpectralError(f"spectral radius {alpha} disagrees with power estimate {estimate}", tol_out)


def is_quasi_unipotent(X: IntMatrix) -> bool:
    """True iff every eigenvalue of ``X`` is a root of unity (Kronecker)."""
    if X.det_abs != 1:
        raise AlgebraError(f"matrix is not unimodular (|det| = {X.det_abs})")
    rest, _ = strip_cyclotomic(char_poly(X))
    return rest == [1]


@lru_cache(maxsize=256)
def spectral_report(X: IntMatrix, tol: float = 1e-9) -> SpectralReport:
    alpha, tol_out = spectral_radius(X, tol)
    qu = is_quasi_unipotent(X) if X.det_abs == 1 else False
    return SpectralReport(char_poly(X), alpha, tol_out, qu)


# --------------------------------------------------------------------------
# norm growth polynomial p(k)


@lru_cache(maxsize=256)
def norm_constant(X: IntMatrix) -> float:
    """A valid constant C_X for ||X^k v|| <= C_X * sum_i C(k,i) alpha^(k-i) ||v||.

    Twice the ceiling of the condition number of a (numerical) Jordan basis;
    not canonical.  Checked against exact column norms for k <= 64 and
    doubled if float error undershot.
    """
    p = list(char_poly(X))
    if len(squarefree_part(p)) == len(p):
        _, V = np.linalg.eig(np.array(X.entries, dtype=float))
        cond = np.linalg.cond(V)
    else:
        import sympy

        P, _ = sympy.Matrix(X.entries).jordan_form()
        cond = np.linalg.cond(np.array(P.evalf(30).tolist(), dtype=complex))
    if not math.isfinite(cond):
        raise SpectralError("eigenbasis is numerically singular", math.inf)
    C = 2.0 * math.ceil(cond)
    alpha = spectral_report(X).alpha
    for k in range(65):
        worst = max(column_norms_sq(X, k))
        while math.log(worst) / 2 > math.log(_p(C, alpha, X.n, k)) + k * math.log(alpha) + 1e-9:
            C *= 2
    return C


def _p(C: float, alpha: float, n: int, k: int) -> float:
    return C * sum(math.comb(k, i) / alpha**i for i in range(n + 1))


def norm_bound_p(X: IntMatrix, k: int) -> float:
    """``p(k) = C_X (1 + C(k,1)/alpha + ... + C(k,n)/alpha^n)``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _p(norm_constant(X), spectral_report(X).alpha, X.n, k)
