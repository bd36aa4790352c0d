"""Distributed single-error localization and share recovery.

Detection: each player i holds one row of the key equation for E(x) = x + b0,

    a_0 + a_1 i + ... + a_{n-2} i^{n-2} - alpha_i b0 = i alpha_i

Only the last column of the coefficient matrix is secret, so expanding
det(A1) and det(A2) along it needs just the public minors M_i. Each player
multiplies its share into its cofactor term, Shamir-shares the product,
and the sums are opened by interpolation. b0 = d1 / d2 and the corrupted
player is the root of x + b0.

Correction: t helpers each weight their share by a Lagrange constant for the
target, split the product additively among the helpers, sum what they
receive and send the sums to the target, which adds them up.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Collection, NamedTuple, Sequence

from .algebra import (
    FieldElement,
    MatrixZp,
    PrimeModulus,
    lagrange_evaluate,
    minor_determinant,
    vandermonde_rows,
)
from .errors import (
    BadHelperSet,
    InsufficientHelpers,
    MissingPortion,
    MissingSigma,
    ProtocolAbort,
    TooFewPlayers,
)
from .sharing import (
    Share,
    SharingParams,
    additive_split,
    lagrange_constant,
    player_rng,
    shamir_share,
)
from .simnet import (
    BROADCAST,
    DET_OPEN,
    DET_SUBSHARE,
    MINOR_BROADCAST,
    PORTION,
    SIGMA,
    Envelope,
    Network,
)

DETECTION = "detection"
CORRECTION = "correction"
MIN_PLAYERS = 4  # 3e + 1 with e = 1


class Verdict(enum.Enum):
    ERROR_AT = "error_at"
    NO_ERROR = "none"
    UNDECODABLE = "undecodable"


@dataclass(frozen=True)
class DetectionOutcome:
    d1: FieldElement
    d2: FieldElement
    b0: FieldElement | None
    verdict: Verdict
    location: int | None = None

    def describe(self) -> str:
        if self.verdict is Verdict.ERROR_AT:
            return f"location={self.location}"
        return self.verdict.value


@dataclass(frozen=True)
class DetContribution:
    owner: int
    u: FieldElement
    v: FieldElement


class PlayerEquation(NamedTuple):
    row: tuple[FieldElement, ...]
    b0_coefficient: FieldElement
    rhs: FieldElement


@dataclass
class PlayerState:
    id: int
    share: Share
    params: SharingParams
    rng: random.Random
    minors: tuple[FieldElement, ...] | None = None
    subshares: dict[int, tuple[int, int]] = field(default_factory=dict)
    openings: dict[int, tuple[int, int]] = field(default_factory=dict)
    portions: dict[int, int] = field(default_factory=dict)
    sigmas: dict[int, int] = field(default_factory=dict)
    outcome: DetectionOutcome | None = None
    history: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def alpha(self) -> FieldElement:
        return self.share.value

    @property
    def modulus(self) -> PrimeModulus:
        return self.params.modulus

    def overwrite_share(self, value, reason: str) -> None:
        old = self.share.value.value
        self.share = Share(self.id, FieldElement(int(value), self.modulus))
        self.history.append((reason, old, self.share.value.value))

    def reset_scratch(self) -> None:
        self.minors = None
        self.subshares.clear()
        self.openings.clear()
        self.portions.clear()
        self.sigmas.clear()


def make_players(values: Sequence[int], params: SharingParams, seed: int) -> list[PlayerState]:
    """One PlayerState per share value, player i holding ``values[i - 1]``."""
    if len(values) != params.n:
        raise ValueError(f"{len(values)} shares for {params.n} players")
    m = params.modulus
    return [
        PlayerState(i, Share(i, FieldElement(v, m)), params, player_rng(seed, i))
        for i, v in enumerate(values, start=1)
    ]


# ---------------------------------------------------------------------------
# detection steps


def build_player_equation(id: int, alpha: FieldElement, n: int) -> PlayerEquation:
    """Player ``id``'s row of the key-equation system."""
    m = alpha.modulus
    row = vandermonde_rows([id], n - 1, m)[0]
    return PlayerEquation(
        tuple(FieldElement(v, m) for v in row),
        -alpha,
        alpha * id,
    )


def public_matrix(n: int, modulus: PrimeModulus) -> MatrixZp:
    """The n x n system matrix with its secret last column zeroed."""
    rows = [r + [0] for r in vandermonde_rows(range(1, n + 1), n - 1, modulus)]
    return MatrixZp.from_rows(rows, modulus)


def key_equation_matrices(alphas: Sequence[FieldElement]) -> tuple[MatrixZp, MatrixZp]:
    """(A1, A2): last column i*alpha_i and -alpha_i respectively."""
    m = alphas[0].modulus
    A = public_matrix(len(alphas), m)
    n = len(alphas)
    A1 = A.with_column(n - 1, [a * i for i, a in enumerate(alphas, start=1)])
    A2 = A.with_column(n - 1, [-a for a in alphas])
    return A1, A2


def compute_public_minors(n: int, modulus: PrimeModulus) -> list[FieldElement]:
    """M_i for i = 1..n: the system matrix without row i and the last column.

    A1 and A2 differ only in that column, so one set of minors serves both.
    """
    if n < MIN_PLAYERS:
        raise TooFewPlayers(f"single-error detection needs n >= {MIN_PLAYERS}, got {n}")
    A = public_matrix(n, modulus)
    return [minor_determinant(A, i, n) for i in range(1, n + 1)]


def local_det_contribution(id: int, alpha: FieldElement, minor: FieldElement, n: int) -> DetContribution:
    sign = 1 if (id + n) % 2 == 0 else -1
    return DetContribution(id, alpha * id * minor * sign, -alpha * minor * sign)


def locate_error(d1: FieldElement, d2: FieldElement, n: int) -> DetectionOutcome:
    if d2.value == 0:
        verdict = Verdict.NO_ERROR if d1.value == 0 else Verdict.UNDECODABLE
        return DetectionOutcome(d1, d2, None, verdict)
    b0 = d1 / d2
    loc = (-b0).value
    if 1 <= loc <= n:
        return DetectionOutcome(d1, d2, b0, Verdict.ERROR_AT, loc)
    return DetectionOutcome(d1, d2, b0, Verdict.UNDECODABLE)


def _expect(inbox: list[Envelope], kind: str, senders: Collection[int], who: int) -> dict[int, Envelope]:
    got = {env.sender: env for env in inbox if env.kind == kind}
    missing = set(senders) - set(got)
    if missing:
        raise ProtocolAbort(
            f"player {who} timed out waiting for {kind} from {sorted(missing)}"
        )
    return got


def run_detection(players: Sequence[PlayerState], net: Network) -> DetectionOutcome:
    """Three rounds: minor broadcast, sub-share exchange, opening.

    Every player ends with its own copy of the outcome; disagreement aborts.
    """
    players = sorted(players, key=lambda pl: pl.id)
    n = len(players)
    ids = [pl.id for pl in players]
    if n < MIN_PLAYERS:
        raise TooFewPlayers(f"single-error detection needs n >= {MIN_PLAYERS}, got {n}")
    modulus = players[0].modulus
    params = players[0].params
    net.begin_phase(DETECTION)
    for pl in players:
        pl.reset_scratch()
        pl.outcome = None

    # round 1: the lowest id volunteers the public minors
    volunteer = players[0]
    rnd = net.next_round()
    minors = compute_public_minors(n, modulus)
    inboxes = net.deliver_round(
        [Envelope(rnd, volunteer.id, BROADCAST, MINOR_BROADCAST, tuple(m.value for m in minors))]
    )
    for pl in players:
        env = _expect(inboxes[pl.id], MINOR_BROADCAST, [volunteer.id], pl.id)[volunteer.id]
        pl.minors = tuple(FieldElement(v, modulus) for v in env.payload)

    # round 2: each player shares its cofactor terms for d1 and d2
    rnd = net.next_round()
    outbox = []
    for pl in players:
        c = local_det_contribution(pl.id, pl.alpha, pl.minors[pl.id - 1], n)
        u_shares = shamir_share(c.u, params, pl.rng)
        v_shares = shamir_share(c.v, params, pl.rng)
        for us, vs in zip(u_shares, v_shares):
            outbox.append(Envelope(rnd, pl.id, us.owner, DET_SUBSHARE, (us.value.value, vs.value.value)))
    inboxes = net.deliver_round(outbox)
    for pl in players:
        got = _expect(inboxes[pl.id], DET_SUBSHARE, ids, pl.id)
        pl.subshares = {j: env.payload for j, env in got.items()}

    # round 3: open s_i = sum of received sub-shares
    rnd = net.next_round()
    p = modulus.p
    outbox = []
    for pl in players:
        s1 = sum(v[0] for v in pl.subshares.values()) % p
        s2 = sum(v[1] for v in pl.subshares.values()) % p
        outbox.append(Envelope(rnd, pl.id, BROADCAST, DET_OPEN, (s1, s2)))
    inboxes = net.deliver_round(outbox)
    for pl in players:
        got = _expect(inboxes[pl.id], DET_OPEN, ids, pl.id)
        pl.openings = {j: env.payload for j, env in got.items()}
        d1 = lagrange_evaluate([(j, s[0]) for j, s in sorted(pl.openings.items())], 0, modulus)
        d2 = lagrange_evaluate([(j, s[1]) for j, s in sorted(pl.openings.items())], 0, modulus)
        pl.outcome = locate_error(d1, d2, n)

    outcome = volunteer.outcome
    if any(pl.outcome != outcome for pl in players):
        raise ProtocolAbort("players disagree on the detection outcome")
    return outcome


# ---------------------------------------------------------------------------
# correction steps


def choose_helpers(ids: Collection[int], target: int, t: int) -> list[int]:
    """The t lowest ids other than ``target``."""
    pool = sorted(i for i in ids if i != target)
    if len(pool) < t:
        raise InsufficientHelpers(f"need {t} helpers besides player {target}, have {len(pool)}")
    return pool[:t]


def prepare_correction_portions(
    state: PlayerState, helpers: Collection[int], target: int, t: int
) -> list[tuple[int, FieldElement]]:
    """Split gamma_i * alpha_i into t portions, one per helper (self included)."""
    helpers = sorted(helpers)
    if target in helpers or state.id not in helpers or len(helpers) != t or len(set(helpers)) != t:
        raise BadHelperSet(f"helpers={helpers} target={target} t={t} player={state.id}")
    gamma = lagrange_constant(state.id, helpers, target, state.modulus)
    parts = additive_split(gamma * state.alpha, t, state.rng)
    return list(zip(helpers, parts))


def aggregate_portions(received: Sequence[FieldElement], expected: int | None = None) -> FieldElement:
    if not received or (expected is not None and len(received) != expected):
        raise MissingPortion(f"got {len(received)} portions, expected {expected}")
    return _sum(received)


def recover_share(sigmas: Sequence[FieldElement], expected: int | None = None) -> FieldElement:
    if not sigmas or (expected is not None and len(sigmas) != expected):
        raise MissingSigma(f"got {len(sigmas)} sigma values, expected {expected}")
    return _sum(sigmas)


def _sum(values: Sequence[FieldElement]) -> FieldElement:
    total = values[0]
    for v in values[1:]:
        total = total + v
    return total


def run_correction(players: Sequence[PlayerState], target: int, net: Network) -> PlayerState:
    """Two rounds: portions among helpers, then sigma sums to the target."""
    by_id = {pl.id: pl for pl in players}
    if target not in by_id:
        raise BadHelperSet(f"unknown target player {target}")
    victim = by_id[target]
    t = victim.params.t
    helpers = choose_helpers(by_id, target, t)
    modulus = victim.modulus
    net.begin_phase(CORRECTION)
    for pl in players:
        pl.portions.clear()
        pl.sigmas.clear()

    rnd = net.next_round()
    outbox = []
    for hid in helpers:
        for to, part in prepare_correction_portions(by_id[hid], helpers, target, t):
            outbox.append(Envelope(rnd, hid, to, PORTION, (part.value,)))
    inboxes = net.deliver_round(outbox)
    for hid in helpers:
        got = _expect(inboxes[hid], PORTION, helpers, hid)
        by_id[hid].portions = {i: env.payload[0] for i, env in got.items()}

    rnd = net.next_round()
    outbox = []
    for hid in helpers:
        pl = by_id[hid]
        sigma = aggregate_portions([FieldElement(v, modulus) for v in pl.portions.values()], t)
        outbox.append(Envelope(rnd, hid, target, SIGMA, (sigma.value,)))
    inboxes = net.deliver_round(outbox)
    got = _expect(inboxes[target], SIGMA, helpers, target)
    victim.sigmas = {j: env.payload[0] for j, env in got.items()}
    recovered = recover_share([FieldElement(v, modulus) for _, v in sorted(victim.sigmas.items())], t)
    victim.overwrite_share(recovered.value, reason="recovered")
    return victim


@dataclass
class SessionResult:
    outcome: DetectionOutcome
    recovered: PlayerState | None
    net: Network


def detect_and_correct(players: Sequence[PlayerState], net: Network | None = None) -> SessionResult:
    """Run detection and, when it pins down one player, correction."""
    net = net or Network(pl.id for pl in players)
    outcome = run_detection(players, net)
    recovered = None
    if outcome.verdict is Verdict.ERROR_AT:
        recovered = run_correction(players, outcome.location, net)
    return SessionResult(outcome, recovered, net)


__all__ = [
    "CORRECTION",
    "DETECTION",
    "DetContribution",
    "DetectionOutcome",
    "PlayerEquation",
    "PlayerState",
    "SessionResult",
    "Verdict",
    "aggregate_portions",
    "build_player_equation",
    "choose_helpers",
    "compute_public_minors",
    "detect_and_correct",
    "key_equation_matrices",
    "local_det_contribution",
    "locate_error",
    "make_players",
    "prepare_correction_portions",
    "public_matrix",
    "recover_share",
    "run_correction",
    "run_detection",
]
