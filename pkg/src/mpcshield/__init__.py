"""Secure detection and repair of corrupted Shamir shares.

Reed-Solomon coding over Z_p, a Berlekamp-Welch decoder, and two
message-passing protocols: one that locates a single corrupted share from
determinant cofactors, and one that rebuilds it from Lagrange-weighted
portions sent by the other players.
"""

from .algebra import (
    FieldElement,
    MatrixZp,
    Polynomial,
    PrimeModulus,
    determinant,
    lagrange_interpolate,
    minor_determinant,
    mod_inverse,
    poly_divide,
    poly_eval,
    solve_linear_system,
)
from .coding import Codeword, DecodeResult, RsParams, bw_decode, is_codeword, rs_encode
from .protocol import (
    DetectionOutcome,
    PlayerState,
    Verdict,
    detect_and_correct,
    make_players,
    run_correction,
    run_detection,
)
from .sharing import (
    Share,
    SharingParams,
    additive_split,
    lagrange_constant,
    shamir_reconstruct,
    shamir_share,
)
from .simnet import AdversarySpec, Network, Transcript, apply_adversary, round_count

__version__ = "0.1.0"
