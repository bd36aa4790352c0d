import random

from mpcshield.algebra import PrimeModulus
from mpcshield.protocol import make_players
from mpcshield.sharing import SharingParams

from oracles import evaluate


def dealt(p, n, t, rng, seed=0, coeffs=None):
    """Players holding shares of a random degree t-1 polynomial, plus its coefficients."""
    m = PrimeModulus(p)
    if coeffs is None:
        coeffs = [rng.randrange(p) for _ in range(t)]
    values = [evaluate(coeffs, i, p) for i in range(1, n + 1)]
    return coeffs, make_players(values, SharingParams(t, n, m), seed)


def corrupt_value(original, p, rng):
    return (original + rng.randrange(1, p)) % p


def random_scenario(rng: random.Random, primes=(7, 101), ns=range(4, 9)):
    while True:
        p = rng.choice(primes)
        n = rng.choice(list(ns))
        if n <= p - 1:
            return p, n
