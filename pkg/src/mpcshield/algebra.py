"""Exact arithmetic over a prime field Z_p.

Field elements, polynomials (low degree first) and small dense matrices.
Everything is immutable once built. Hot loops work on plain Python ints and
only wrap results in :class:`FieldElement` at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import (
    DivisionByZeroPolynomial,
    DuplicateAbscissa,
    IndexOutOfRange,
    ModulusMismatch,
    NonSquare,
    SingularSystem,
    ZeroInverse,
)

MAX_MODULUS = 2**31 - 1
NEG_INF = -math.inf

# Deterministic Miller-Rabin witnesses, valid for every n < 3_215_031_751.
_MR_BASES = (2, 3, 5, 7)


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A prime p with 2 < p <= 2**31 - 1."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError(f"modulus must be an int, got {self.p!r}")
        if not 2 < self.p <= MAX_MODULUS:
            raise ValueError(f"modulus must satisfy 2 < p <= 2**31 - 1, got {self.p}")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    def __int__(self) -> int:
        return self.p

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self) for v in range(self.p)]


Coercible = Union["FieldElement", int]


class FieldElement:
    """A residue in [0, p). Mixing moduli raises :class:`ModulusMismatch`."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: PrimeModulus):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", int(value) % modulus.p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot combine elements of Z_{self.modulus.p} and Z_{other.modulus.p}"
                )
            return other.value
        if isinstance(other, int):
            return other % self.modulus.p
        return NotImplemented

    def _new(self, value: int) -> FieldElement:
        return FieldElement(value, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * mod_inverse(self._new(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o) * mod_inverse(self)

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return mod_inverse(self) ** (-exponent)
        return self._new(pow(self.value, exponent, self.modulus.p))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.modulus.p})"

    def __str__(self):
        return str(self.value)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse modulo {p}")
    _, x, _ = _egcd(a, p)
    return x % p


def mod_inverse(a: FieldElement) -> FieldElement:
    """Multiplicative inverse by the extended Euclidean algorithm."""
    return FieldElement(_inv(a.value, a.modulus.p), a.modulus)


def _check_same(modulus: PrimeModulus, other: PrimeModulus) -> None:
    if modulus != other:
        raise ModulusMismatch(f"Z_{modulus.p} vs Z_{other.p}")


def _as_int(v: Coercible, modulus: PrimeModulus) -> int:
    if isinstance(v, FieldElement):
        _check_same(modulus, v.modulus)
        return v.value
    return int(v) % modulus.p


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Polynomial over Z_p, coefficients stored low degree first.

    Trailing zeros are stripped, so two polynomials are equal exactly when
    their coefficient tuples match. The zero polynomial has no coefficients
    and degree ``-inf``.
    """

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coefficients: Iterable[Coercible], modulus: PrimeModulus):
        cs = [_as_int(c, modulus) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, modulus: PrimeModulus) -> Polynomial:
        return cls((), modulus)

    @classmethod
    def monomial(cls, degree: int, modulus: PrimeModulus, coefficient: Coercible = 1) -> Polynomial:
        return cls([0] * degree + [coefficient], modulus)

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(c, self.modulus) for c in self.coeffs)

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> FieldElement:
        v = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        return FieldElement(v, self.modulus)

    def _other(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            _check_same(self.modulus, other.modulus)
            return other
        return Polynomial([other], self.modulus)

    def __add__(self, other):
        o = self._other(other)
        p = self.modulus.p
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Polynomial(out, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.modulus)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        return Polynomial(_poly_mul(self.coeffs, o.coeffs, self.modulus.p), self.modulus)

    __rmul__ = __mul__

    def __divmod__(self, other):
        return poly_divide(self, self._other(other))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: Coercible) -> FieldElement:
        if isinstance(x, int):
            x = FieldElement(x, self.modulus)
        return poly_eval(self, x)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.modulus == other.modulus and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.modulus.p))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)}, p={self.modulus.p})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _horner(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def poly_eval(P: Polynomial, x: FieldElement) -> FieldElement:
    """Evaluate ``P`` at ``x`` with Horner's scheme."""
    _check_same(P.modulus, x.modulus)
    return FieldElement(_horner(P.coeffs, x.value, P.modulus.p), P.modulus)


def poly_divide(N: Polynomial, D: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Long division: returns (q, r) with N = D*q + r and deg r < deg D."""
    _check_same(N.modulus, D.modulus)
    if D.is_zero():
        raise DivisionByZeroPolynomial("division by the zero polynomial")
    p = N.modulus.p
    rem = list(N.coeffs)
    dd = len(D.coeffs) - 1
    lead_inv = _inv(D.coeffs[-1], p)
    if len(rem) <= dd:
        return Polynomial.zero(N.modulus), N
    quot = [0] * (len(rem) - dd)
    for shift in range(len(rem) - 1 - dd, -1, -1):
        c = rem[shift + dd] * lead_inv % p
        quot[shift] = c
        if c:
            for j, dc in enumerate(D.coeffs):
                rem[shift + j] = (rem[shift + j] - c * dc) % p
    return Polynomial(quot, N.modulus), Polynomial(rem[:dd], N.modulus)


def _points_as_ints(points, modulus: PrimeModulus) -> tuple[list[int], list[int]]:
    xs, ys = [], []
    for x, y in points:
        xs.append(_as_int(x, modulus))
        ys.append(_as_int(y, modulus))
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa(f"repeated x-coordinate among {xs}")
    return xs, ys


def _infer_modulus(points) -> PrimeModulus:
    for pt in points:
        for v in pt:
            if isinstance(v, FieldElement):
                return v.modulus
    raise TypeError("cannot infer the modulus: pass FieldElements or modulus=")


def lagrange_interpolate(
    points: Sequence[tuple[Coercible, Coercible]], modulus: PrimeModulus | None = None
) -> Polynomial:
    """Return the unique polynomial of degree < len(points) through ``points``.

    Runs in O(m^2): builds prod(x - x_j) once and peels off each linear
    factor by synthetic division.
    """
    if not points:
        raise ValueError("need at least one point")
    modulus = modulus or _infer_modulus(points)
    p = modulus.p
    xs, ys = _points_as_ints(points, modulus)
    m = len(xs)

    master = [1]
    for xj in xs:
        master = _poly_mul(master, [-xj % p, 1], p)

    result = [0] * m
    for xi, yi in zip(xs, ys):
        if yi == 0:
            continue
        # master / (x - xi), high to low
        basis = [0] * m
        carry = 0
        for deg in range(m, 0, -1):
            carry = (master[deg] + carry * xi) % p
            basis[deg - 1] = carry
        denom = _horner(basis, xi, p)
        scale = yi * _inv(denom, p) % p
        for d in range(m):
            result[d] = (result[d] + scale * basis[d]) % p
    return Polynomial(result, modulus)


def lagrange_evaluate(
    points: Sequence[tuple[Coercible, Coercible]],
    x: Coercible,
    modulus: PrimeModulus | None = None,
) -> FieldElement:
    """Value at ``x`` of the interpolant through ``points``, without building it."""
    if not points:
        raise ValueError("need at least one point")
    modulus = modulus or _infer_modulus(points)
    p = modulus.p
    xs, ys = _points_as_ints(points, modulus)
    x0 = _as_int(x, modulus)
    total = 0
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * (x0 - xj) % p
                den = den * (xi - xj) % p
        total = (total + yi * num * _inv(den, p)) % p
    return FieldElement(total, modulus)


# ---------------------------------------------------------------------------
# matrices


class MatrixZp:
    """Dense row-major matrix over Z_p."""

    __slots__ = ("rows", "cols", "entries", "modulus")

    def __init__(self, rows: int, cols: int, entries: Iterable[Coercible], modulus: PrimeModulus):
        data = tuple(_as_int(e, modulus) for e in entries)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixZp is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Coercible]], modulus: PrimeModulus) -> MatrixZp:
        if not rows:
            return cls(0, 0, (), modulus)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, (e for r in rows for e in r), modulus)

    @classmethod
    def identity(cls, n: int, modulus: PrimeModulus) -> MatrixZp:
        return cls(n, n, (int(i == j) for i in range(n) for j in range(n)), modulus)

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexOutOfRange(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return FieldElement(self.entries[i * self.cols + j], self.modulus)

    def int_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(v, self.modulus) for v in self.int_rows()[i])

    def with_column(self, j: int, column: Sequence[Coercible]) -> MatrixZp:
        if len(column) != self.rows:
            raise ValueError("column length does not match row count")
        rows = self.int_rows()
        for r, v in zip(rows, column):
            r[j] = _as_int(v, self.modulus)
        return MatrixZp.from_rows(rows, self.modulus)

    def __eq__(self, other):
        if isinstance(other, MatrixZp):
            return (self.rows, self.cols, self.entries, self.modulus) == (
                other.rows, other.cols, other.entries, other.modulus
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries, self.modulus.p))

    def __repr__(self):
        return f"MatrixZp({self.int_rows()}, p={self.modulus.p})"


def _det_ints(rows: list[list[int]], p: int) -> int:
    """Determinant of a square int matrix mod p; ``rows`` is consumed."""
    n = len(rows)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        prow = rows[col]
        pv = prow[col]
        det = det * pv % p
        inv = _inv(pv, p)
        for r in range(col + 1, n):
            row = rows[r]
            f = row[col] * inv % p
            if f:
                rows[r] = [(a - f * b) % p for a, b in zip(row, prow)]
    return det % p


def determinant(A: MatrixZp) -> FieldElement:
    """Determinant by Gaussian elimination with row pivoting; 0 when singular."""
    if A.rows != A.cols:
        raise NonSquare(f"determinant of a {A.rows}x{A.cols} matrix")
    return FieldElement(_det_ints(A.int_rows(), A.modulus.p), A.modulus)


def minor_determinant(A: MatrixZp, drop_row: int, drop_col: int) -> FieldElement:
    """Determinant of ``A`` without row ``drop_row`` and column ``drop_col``.

    Indices are 1-based, so ``drop_row`` lines up with the player id.
    """
    if A.rows != A.cols:
        raise NonSquare(f"minor of a {A.rows}x{A.cols} matrix")
    n = A.rows
    if not (1 <= drop_row <= n and 1 <= drop_col <= n):
        raise IndexOutOfRange(f"minor ({drop_row}, {drop_col}) of a {n}x{n} matrix")
    rows = [
        [v for j, v in enumerate(r) if j != drop_col - 1]
        for i, r in enumerate(A.int_rows())
        if i != drop_row - 1
    ]
    return FieldElement(_det_ints(rows, A.modulus.p), A.modulus)


def _rref(aug: list[list[int]], ncols: int, p: int) -> list[int]:
    """Reduce ``aug`` in place over the first ``ncols`` columns; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(aug)
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = _inv(aug[r][c], p)
        aug[r] = [v * inv % p for v in aug[r]]
        prow = aug[r]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def _solve(A: MatrixZp, b: Sequence[Coercible]) -> tuple[list[int], bool, bool]:
    """Particular solution (free variables 0), plus (consistent, unique) flags."""
    if len(b) != A.rows:
        raise ValueError(f"rhs has {len(b)} entries for {A.rows} rows")
    p = A.modulus.p
    aug = [r + [_as_int(v, A.modulus)] for r, v in zip(A.int_rows(), b)]
    pivots = _rref(aug, A.cols, p)
    consistent = all(row[-1] == 0 for row in aug[len(pivots):])
    x = [0] * A.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][-1]
    return x, consistent, len(pivots) == A.cols


def solve_linear_system(A: MatrixZp, b: Sequence[Coercible]) -> list[FieldElement]:
    """Unique solution of the square system A x = b.

    Raises :class:`SingularSystem` when A is singular; its ``inconsistent``
    flag tells an empty solution set apart from an underdetermined one.
    """
    if A.rows != A.cols:
        raise NonSquare(f"solve with a {A.rows}x{A.cols} matrix")
    x, consistent, unique = _solve(A, b)
    if not consistent:
        raise SingularSystem("singular system with no solution", inconsistent=True)
    if not unique:
        raise SingularSystem("singular system with infinitely many solutions", inconsistent=False)
    return [FieldElement(v, A.modulus) for v in x]


def solve_any(A: MatrixZp, b: Sequence[Coercible]) -> list[FieldElement]:
    """One solution of a possibly rectangular or rank-deficient system.

    Free variables are set to 0. Raises ``SingularSystem(inconsistent=True)``
    if the system has no solution.
    """
    x, consistent, _ = _solve(A, b)
    if not consistent:
        raise SingularSystem("system has no solution", inconsistent=True)
    return [FieldElement(v, A.modulus) for v in x]


def vandermonde_rows(nodes: Iterable[int], width: int, modulus: PrimeModulus) -> list[list[int]]:
    """Rows [1, x, x^2, ..., x^(width-1)] reduced mod p, one per node."""
    p = modulus.p
    out = []
    for x in nodes:
        row, acc = [], 1
        for _ in range(width):
            row.append(acc)
            acc = acc * x % p
        out.append(row)
    return out
