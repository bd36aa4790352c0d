"""Reed-Solomon codes over Z_p with a Berlekamp-Welch decoder.

Evaluation points are always 1, 2, ..., n. The decoder is centralized: it
sees the whole received word, and serves as the reference the distributed
detection protocol is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    Coercible,
    FieldElement,
    MatrixZp,
    Polynomial,
    PrimeModulus,
    _as_int,
    lagrange_interpolate,
    poly_divide,
    solve_any,
    vandermonde_rows,
)
from .errors import InvalidParams, LengthMismatch, SingularSystem, Undecodable


@dataclass(frozen=True)
class RsParams:
    """RS(n, k) over Z_p; corrects up to ``e = (n - k) // 2`` errors."""

    n: int
    k: int
    modulus: PrimeModulus

    def __post_init__(self):
        # points 1..n stay distinct mod p as long as n <= p
        if not 1 <= self.k <= self.n <= self.modulus.p:
            raise InvalidParams(
                f"need 1 <= k <= n <= p, got k={self.k} n={self.n} p={self.modulus.p}"
            )

    @property
    def e(self) -> int:
        return (self.n - self.k) // 2

    @property
    def p(self) -> int:
        return self.modulus.p


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[FieldElement, ...]

    @classmethod
    def of(cls, values: Sequence[Coercible], modulus: PrimeModulus) -> Codeword:
        return cls(tuple(FieldElement(_as_int(v, modulus), modulus) for v in values))

    @property
    def values(self) -> list[int]:
        return [s.value for s in self.symbols]

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]


@dataclass(frozen=True)
class DecodeResult:
    message_poly: Polynomial
    error_positions: frozenset[int]
    corrected: Codeword
    quotient: Polynomial
    locator: Polynomial

    @property
    def message(self) -> list[FieldElement]:
        return list(self.message_poly.coefficients)


def _check_word(r: Codeword, params: RsParams) -> None:
    if len(r) != params.n:
        raise LengthMismatch(f"word has {len(r)} symbols, expected n={params.n}")


def rs_encode(message: Sequence[Coercible], params: RsParams) -> Codeword:
    """Evaluate the message polynomial m_0 + m_1 x + ... at x = 1..n."""
    if len(message) != params.k:
        raise LengthMismatch(f"message has {len(message)} symbols, expected k={params.k}")
    P = Polynomial(message, params.modulus)
    return Codeword(tuple(P(i) for i in range(1, params.n + 1)))


def is_codeword(r: Codeword, params: RsParams) -> bool:
    _check_word(r, params)
    P = lagrange_interpolate([(i, r[i - 1]) for i in range(1, params.k + 1)], params.modulus)
    return all(P(i) == r[i - 1] for i in range(params.k + 1, params.n + 1))


def bw_decode(r: Codeword, params: RsParams, e: int | None = None) -> DecodeResult:
    """Berlekamp-Welch decoding of ``r`` assuming at most ``e`` errors.

    Solves Q(i) = r_i E(i) for i = 1..n with E monic of degree e and
    deg Q <= k + e - 1. Fewer than e real errors leave the system
    underdetermined; free unknowns are then set to 0, which still yields a
    valid (Q, E) pair whenever n >= k + 2e.
    """
    _check_word(r, params)
    n, k, modulus = params.n, params.k, params.modulus
    p = modulus.p
    e = params.e if e is None else e
    if e < 0 or n < k + 2 * e:
        raise InvalidParams(f"cannot correct e={e} errors with n={n}, k={k}")

    nq = k + e
    rows, rhs = [], []
    for i, ri in enumerate(r.values, start=1):
        powers = vandermonde_rows([i], nq + 1, modulus)[0]
        rows.append(powers[:nq] + [(-ri * powers[j]) % p for j in range(e)])
        rhs.append(ri * powers[e] % p)
    try:
        sol = solve_any(MatrixZp.from_rows(rows, modulus), rhs)
    except SingularSystem as exc:
        raise Undecodable("key equation has no solution") from exc

    Q = Polynomial(sol[:nq], modulus)
    E = Polynomial(list(sol[nq:]) + [1], modulus)
    P, rem = poly_divide(Q, E)
    if not rem.is_zero():
        raise Undecodable("E does not divide Q")
    if P.degree >= k:
        raise Undecodable(f"decoded polynomial has degree {P.degree} >= k={k}")

    corrected = Codeword(tuple(P(i) for i in range(1, n + 1)))
    errors = frozenset(i for i in range(1, n + 1) if corrected[i - 1] != r[i - 1])
    if len(errors) > e:
        raise Undecodable(f"{len(errors)} disagreements exceed e={e}")
    return DecodeResult(P, errors, corrected, Q, E)
