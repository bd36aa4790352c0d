"""Scenario runner: ``mpcshield run --scenario FILE [--trace OUT] [--seed N]``.

A scenario file holds ``key=value`` lines; ``#`` starts a comment::

    prime=7
    players=4
    threshold=2
    shares=2,0,5,3
    corrupt=3:4
    mode=full
    seed=1
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .algebra import PrimeModulus, is_prime, MAX_MODULUS
from .coding import Codeword, RsParams, bw_decode, is_codeword
from .errors import MpcShieldError, ParseError, Undecodable, ValidationError
from .protocol import (
    CORRECTION,
    DETECTION,
    Verdict,
    make_players,
    run_correction,
    run_detection,
)
from .sharing import SharingParams, player_rng, sharing_polynomial
from .simnet import AdversarySpec, Network, Transcript, apply_adversary, round_count

MODES = ("detect", "correct", "full", "encode", "decode")
KEYS = ("prime", "players", "threshold", "secret", "shares", "corrupt", "mode", "seed")


@dataclass(frozen=True)
class Scenario:
    prime: int
    players: int
    threshold: int
    secret: int | None = None
    shares: tuple[int, ...] | None = None
    corrupt: tuple[int, int] | None = None
    mode: str = "full"
    seed: int = 0

    @property
    def modulus(self) -> PrimeModulus:
        return PrimeModulus(self.prime)


def _int(key: str, raw: str, line: int) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ParseError(f"{key} expects an integer, got {raw!r}", line) from None


def parse_scenario(text: str) -> Scenario:
    seen: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ParseError(f"duplicate key {key!r}", lineno)
        seen[key] = (value, lineno)

    missing = [k for k in ("prime", "players") if k not in seen]
    if "secret" not in seen and "shares" not in seen:
        missing.append("secret|shares")
    if missing:
        raise ParseError(f"missing required keys: {', '.join(missing)}")
    if "secret" in seen and "shares" in seen:
        raise ParseError("give either secret or shares, not both", seen["shares"][1])

    fields: dict = {}
    for key in ("prime", "players", "threshold", "secret", "seed"):
        if key in seen:
            fields[key] = _int(key, *seen[key])
    if "shares" in seen:
        value, lineno = seen["shares"]
        fields["shares"] = tuple(_int("shares", v, lineno) for v in value.split(","))
    if "corrupt" in seen:
        value, lineno = seen["corrupt"]
        pos, sep, val = value.partition(":")
        if not sep:
            raise ParseError(f"corrupt expects pos:val, got {value!r}", lineno)
        fields["corrupt"] = (_int("corrupt", pos, lineno), _int("corrupt", val, lineno))
    if "mode" in seen:
        value, lineno = seen["mode"]
        if value not in MODES:
            raise ParseError(f"mode must be one of {', '.join(MODES)}", lineno)
        fields["mode"] = value
    fields.setdefault("threshold", fields["players"] - 2)
    return validate(Scenario(**fields))


def validate(s: Scenario) -> Scenario:
    p, n, t = s.prime, s.players, s.threshold
    if not 2 < p <= MAX_MODULUS:
        raise ValidationError(f"prime must satisfy 2 < p <= 2**31 - 1, got {p}")
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    if not 1 <= t <= n <= p - 1:
        raise ValidationError(f"need 1 <= threshold <= players <= prime - 1, got t={t} n={n}")
    if s.shares is not None:
        if len(s.shares) != n:
            raise ValidationError(f"{len(s.shares)} shares listed for {n} players")
        if any(not 0 <= v < p for v in s.shares):
            raise ValidationError(f"share values must lie in [0, {p})")
    if s.secret is not None and not 0 <= s.secret < p:
        raise ValidationError(f"secret must lie in [0, {p})")
    if s.corrupt is not None:
        pos, val = s.corrupt
        if not 1 <= pos <= n:
            raise ValidationError(f"corrupt position {pos} outside 1..{n}")
        if not 0 <= val < p:
            raise ValidationError(f"corrupt value must lie in [0, {p})")
    return s


@dataclass
class RunResult:
    report: str
    transcript: Transcript
    exit_code: int
    shares: list[int] = field(default_factory=list)
    received: list[int] = field(default_factory=list)
    final: list[int] = field(default_factory=list)


def _csv(values) -> str:
    return ",".join(str(int(v)) for v in values)


def run_scenario(s: Scenario) -> RunResult:
    """Dealer, adversary, then the protocol steps the mode asks for."""
    m = s.modulus
    params = SharingParams(s.threshold, s.players, m)
    lines = [
        f"mode: {s.mode}",
        f"prime: {s.prime}",
        f"players: {s.players}",
        f"threshold: {s.threshold}",
        f"seed: {s.seed}",
    ]
    if s.shares is not None:
        shares = list(s.shares)
    else:
        P = sharing_polynomial(s.secret, s.threshold, m, player_rng(s.seed, 0))
        shares = [P(i).value for i in range(1, s.players + 1)]
        lines.append(f"secret: {s.secret}")
    lines.append(f"shares: {_csv(shares)}")

    net = Network(range(1, s.players + 1))
    result = RunResult("", net.transcript, 0, shares=shares)
    if s.mode == "encode":
        result.received = result.final = list(shares)
        result.report = "\n".join(lines) + "\n"
        return result

    players = make_players(shares, params, s.seed)
    corruptions = (s.corrupt,) if s.corrupt else ()
    apply_adversary(players, AdversarySpec(corruptions))
    received = [pl.share.value.value for pl in players]
    result.received = received
    if s.corrupt:
        lines.append(f"corrupt: {s.corrupt[0]}:{s.corrupt[1]}")
    lines.append(f"received: {_csv(received)}")

    if s.mode == "decode":
        # Same code as the detection protocol: message length n - 2, one error.
        rs = RsParams(s.players, s.players - 2, m)
        try:
            dec = bw_decode(Codeword.of(received, m), rs, e=1)
        except Undecodable:
            lines.append("decode: undecodable")
            result.exit_code = 1
        else:
            errs = _csv(sorted(dec.error_positions)) or "none"
            lines.append(f"decode: errors={errs}")
            lines.append(f"corrected: {_csv(dec.corrected.values)}")
            result.final = dec.corrected.values
        result.report = "\n".join(lines) + "\n"
        return result

    outcome = run_detection(players, net)
    lines.append(f"detection: {outcome.describe()}")
    lines.append(f"d1: {outcome.d1}")
    lines.append(f"d2: {outcome.d2}")
    lines.append(f"b0: {outcome.b0 if outcome.b0 is not None else '-'}")
    lines.append(f"detection_rounds: {round_count(net.transcript, DETECTION)}")
    if outcome.verdict is Verdict.UNDECODABLE:
        result.exit_code = 1

    if s.mode in ("correct", "full") and outcome.verdict is Verdict.ERROR_AT:
        target = run_correction(players, outcome.location, net)
        rounds = round_count(net.transcript, CORRECTION)
        lines.append(
            f"correction: player={target.id} recovered={target.share.value} rounds={rounds}"
        )
    final = [pl.share.value.value for pl in players]
    result.final = final
    if s.mode == "full":
        lines.append(f"final: {_csv(final)}")
        ok = is_codeword(Codeword.of(final, m), RsParams(s.players, s.threshold, m))
        lines.append(f"consistent: {'true' if ok else 'false'}")
    result.report = "\n".join(lines) + "\n"
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpcshield", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("--scenario", required=True, type=Path)
    run.add_argument("--trace", type=Path, help="write the message transcript here")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--plot", type=Path, metavar="DIR", help="render figures into DIR")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = parse_scenario(args.scenario.read_text())
        if args.seed is not None:
            scenario = replace(scenario, seed=args.seed)
        result = run_scenario(scenario)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MpcShieldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    report = result.report
    if args.plot is not None:
        from .plotting import render_figures

        for path in render_figures(scenario, result, args.plot):
            report += f"figure: {path}\n"
    sys.stdout.write(report)
    if args.trace is not None:
        args.trace.write_text(result.transcript.export())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
