"""Shamir (t, n) sharing, additive splitting and Lagrange recombination."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from .algebra import (
    Coercible,
    FieldElement,
    Polynomial,
    PrimeModulus,
    _as_int,
    _inv,
    lagrange_interpolate,
)
from .errors import (
    DuplicateHelper,
    DuplicateOwner,
    InsufficientShares,
    InvalidParams,
    TargetInHelperSet,
)


@dataclass(frozen=True)
class SharingParams:
    """Threshold ``t`` (polynomial degree t - 1) among ``n`` players."""

    t: int
    n: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 1 <= self.t <= self.n <= self.modulus.p - 1:
            raise InvalidParams(
                f"need 1 <= t <= n <= p - 1, got t={self.t} n={self.n} p={self.modulus.p}"
            )


@dataclass(frozen=True)
class Share:
    owner: int
    value: FieldElement

    def __post_init__(self):
        if self.owner < 1:
            raise InvalidParams(f"player ids start at 1, got {self.owner}")


def player_rng(seed: int, stream: int) -> random.Random:
    """Independent generator for one player; stream 0 is the dealer."""
    return random.Random(f"mpcshield:{seed}:{stream}")


def sharing_polynomial(
    secret: Coercible, t: int, modulus: PrimeModulus, rng: random.Random
) -> Polynomial:
    """Degree t - 1 polynomial with constant term ``secret``, other terms random."""
    p = modulus.p
    coeffs = [_as_int(secret, modulus)] + [rng.randrange(p) for _ in range(t - 1)]
    return Polynomial(coeffs, modulus)


def shamir_share(secret: Coercible, params: SharingParams, rng: random.Random) -> list[Share]:
    P = sharing_polynomial(secret, params.t, params.modulus, rng)
    return [Share(i, P(i)) for i in range(1, params.n + 1)]


def shamir_reconstruct(shares: Collection[Share], params: SharingParams) -> FieldElement:
    owners = [s.owner for s in shares]
    if len(set(owners)) != len(owners):
        raise DuplicateOwner(f"repeated owner among {sorted(owners)}")
    if len(shares) < params.t:
        raise InsufficientShares(f"{len(shares)} shares, threshold is {params.t}")
    P = lagrange_interpolate([(s.owner, s.value) for s in shares], params.modulus)
    return P.coefficient(0)


def lagrange_constant(
    i: int, helpers: Iterable[int], target: int, modulus: PrimeModulus
) -> FieldElement:
    """gamma_i = prod over j in helpers, j != i, of (target - j) / (i - j).

    With these weights sum(gamma_i * P(i)) == P(target) for any P of degree
    below len(helpers).
    """
    helpers = list(helpers)
    if len(set(helpers)) != len(helpers):
        raise DuplicateHelper(f"repeated helper among {helpers}")
    if target in helpers:
        raise TargetInHelperSet(f"target {target} is one of the helpers")
    if i not in helpers:
        raise InvalidParams(f"player {i} is not a helper")
    p = modulus.p
    num, den = 1, 1
    for j in helpers:
        if j != i:
            num = num * (target - j) % p
            den = den * (i - j) % p
    return FieldElement(num * _inv(den, p), modulus)


def additive_split(v: FieldElement, t: int, rng: random.Random) -> list[FieldElement]:
    """``t`` portions summing to ``v``; the last one balances the random rest."""
    if t < 1:
        raise InvalidParams(f"cannot split into {t} portions")
    p = v.modulus.p
    parts = [rng.randrange(p) for _ in range(t - 1)]
    parts.append((v.value - sum(parts)) % p)
    return [FieldElement(x, v.modulus) for x in parts]


def shares_as_values(shares: Sequence[Share]) -> list[int]:
    return [s.value.value for s in sorted(shares, key=lambda s: s.owner)]
