"""Round-synchronous message passing between simulated players.

Channels are reliable and rounds are lock-step: everything sent in round r
is delivered before round r + 1 starts. The adversary only tampers with
stored shares before a protocol runs, never with messages in flight.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import MixedRounds, UnknownPlayer

if TYPE_CHECKING:
    from .protocol import PlayerState

log = logging.getLogger(__name__)

BROADCAST = 0  # player ids start at 1, so 0 sorts broadcasts first

MINOR_BROADCAST = "minor_broadcast"
DET_SUBSHARE = "det_subshare"
DET_OPEN = "det_open"
PORTION = "portion"
SIGMA = "sigma"
KINDS = (MINOR_BROADCAST, DET_SUBSHARE, DET_OPEN, PORTION, SIGMA)

# det_subshare / det_open carry the (d1, d2) pair in one envelope
_ARITY = {DET_SUBSHARE: 2, DET_OPEN: 2, PORTION: 1, SIGMA: 1}


@dataclass(frozen=True, order=True)
class Envelope:
    round: int
    sender: int
    recipient: int
    kind: str
    payload: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown message kind {self.kind!r}")
        want = _ARITY.get(self.kind)
        if want is not None and len(self.payload) != want:
            raise ValueError(f"{self.kind} carries {want} value(s), got {len(self.payload)}")

    @property
    def is_broadcast(self) -> bool:
        return self.recipient == BROADCAST

    def line(self) -> str:
        to = "*" if self.is_broadcast else str(self.recipient)
        values = ",".join(str(v) for v in self.payload)
        return f"round={self.round} from={self.sender} to={to} kind={self.kind} payload={values}"


@dataclass
class Transcript:
    envelopes: list[Envelope] = field(default_factory=list)
    phases: dict[int, str] = field(default_factory=dict)

    @property
    def rounds(self) -> int:
        return len(self.phases)

    def in_phase(self, phase: str) -> list[Envelope]:
        return [env for env in self.envelopes if self.phases.get(env.round) == phase]

    def export(self) -> str:
        return "".join(env.line() + "\n" for env in self.envelopes)


def round_count(tr: Transcript, phase: str) -> int:
    return sum(1 for ph in tr.phases.values() if ph == phase)


@dataclass(frozen=True)
class AdversarySpec:
    corruptions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        ids = [pid for pid, _ in self.corruptions]
        if len(set(ids)) != len(ids):
            raise ValueError("at most one corruption per player")


def apply_adversary(players: Sequence[PlayerState], spec: AdversarySpec) -> Sequence[PlayerState]:
    """Overwrite stored shares in place. Every corruption is logged, even no-ops."""
    by_id = {pl.id: pl for pl in players}
    for pid, _ in spec.corruptions:
        if pid not in by_id:
            raise UnknownPlayer(pid)
    for pid, value in spec.corruptions:
        pl = by_id[pid]
        old = pl.share.value.value
        pl.overwrite_share(value, reason="adversary")
        log.info("adversary set share of player %d: %d -> %d", pid, old, pl.share.value.value)
    return players


class Network:
    """Scheduler owning the transcript.

    Players listed in ``silent`` never get their messages through, which
    lets tests simulate a round that times out.
    """

    def __init__(self, player_ids: Iterable[int], silent: Iterable[int] = ()):
        self.player_ids = sorted(player_ids)
        self.silent = frozenset(silent)
        self.transcript = Transcript()
        self.round = 0
        self.phase = "setup"
        self.sent = 0
        self.delivered = 0

    def begin_phase(self, phase: str) -> None:
        self.phase = phase

    def next_round(self) -> int:
        return self.round + 1

    def deliver_round(self, outbox: Iterable[Envelope]) -> dict[int, list[Envelope]]:
        """Deliver one round of messages and append them to the transcript."""
        outbox = list(outbox)
        rnd = self.next_round()
        if any(env.round != rnd for env in outbox):
            raise MixedRounds(f"envelopes must all belong to round {rnd}")
        ids = set(self.player_ids)
        for env in outbox:
            if env.sender not in ids or not (env.is_broadcast or env.recipient in ids):
                raise UnknownPlayer(f"{env.sender}->{env.recipient}")

        outbox = sorted((e for e in outbox if e.sender not in self.silent),
                        key=lambda e: (e.round, e.sender, e.recipient))
        inboxes: dict[int, list[Envelope]] = defaultdict(list)
        for env in outbox:
            targets = self.player_ids if env.is_broadcast else [env.recipient]
            for pid in targets:
                inboxes[pid].append(env)
                self.delivered += 1
            self.sent += 1
        self.transcript.envelopes.extend(outbox)
        self.transcript.phases[rnd] = self.phase
        self.round = rnd
        return {pid: inboxes.get(pid, []) for pid in self.player_ids}


def deliver_round(net: Network, outbox: Iterable[Envelope]) -> dict[int, list[Envelope]]:
    return net.deliver_round(outbox)
