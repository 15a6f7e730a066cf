"""Constant-weight line codes: Manchester (1b2b, w=1) and 6b8b (w=4).

Both codes map every input block to a codeword of Hamming weight q/2, so
any weight-balanced stretch of coded bits sweeps exactly the nominal chirp
bandwidth when modulated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import CodeViolationError, FramingError

MANCHESTER = "manchester"
B6B8 = "6b8b"

CODE_NAMES = (MANCHESTER, B6B8)


@dataclass(frozen=True)
class CodeSpec:
    name: str
    p: int  # info bits per codeword
    q: int  # coded bits per codeword
    w: int  # Hamming weight of every codeword
    codebook: tuple[tuple[int, ...], ...]  # value -> codeword bits, MSB-first values


@dataclass(frozen=True)
class CodedFrame:
    bits: np.ndarray      # coded bits, 0/1
    code: str
    coded_bit_len: int    # samples per coded bit; 0 when not yet bound to a rate

    def __len__(self) -> int:
        return len(self.bits)


def _boundary_run_sum(word: tuple[int, ...]) -> int:
    lead = 1
    while lead < len(word) and word[lead] == word[0]:
        lead += 1
    trail = 1
    while trail < len(word) and word[-1 - trail] == word[-1]:
        trail += 1
    return lead + trail


@lru_cache(maxsize=None)
def manchester_spec() -> CodeSpec:
    return CodeSpec(name=MANCHESTER, p=1, q=2, w=1, codebook=((0, 1), (1, 0)))


@lru_cache(maxsize=None)
def build_6b8b_codebook() -> CodeSpec:
    """Deterministic weight-4 octet codebook.

    Of the C(8,4)=70 weight-4 octets, drop the 6 with the largest
    leading-run + trailing-run sum (ties broken by ascending octet value):
    00001111 and 11110000 (sum 8), 00010111 and 11101000 (sum 6), then
    00011011 and 00100111 (sum 5).  The 64 survivors, sorted ascending,
    are assigned to values 0..63.  No octet contains a run longer than 4.
    """
    octets = [w for w in combinations(range(8), 4)]
    words = []
    for ones in octets:
        bits = tuple(1 if i in ones else 0 for i in range(8))
        words.append(bits)
    words.sort()
    ranked = sorted(words, key=lambda w: (-_boundary_run_sum(w), w))
    excluded = set(ranked[:6])
    kept = tuple(w for w in words if w not in excluded)
    assert len(kept) == 64
    return CodeSpec(name=B6B8, p=6, q=8, w=4, codebook=kept)


def get_code_spec(name: str) -> CodeSpec:
    if name == MANCHESTER:
        return manchester_spec()
    if name == B6B8:
        return build_6b8b_codebook()
    raise ValueError(f"unknown code {name!r}; expected one of {CODE_NAMES}")


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.int64).ravel()
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit arrays may only contain 0 and 1")
    return arr


def _block_encode(info_bits, spec: CodeSpec, coded_bit_len: int) -> CodedFrame:
    u = _as_bits(info_bits)
    if len(u) % spec.p:
        raise FramingError(f"{spec.name}: input length {len(u)} not a multiple of {spec.p}")
    if len(u) == 0:
        return CodedFrame(bits=np.zeros(0, dtype=np.int64), code=spec.name,
                          coded_bit_len=coded_bit_len)
    blocks = u.reshape(-1, spec.p)
    weights = 1 << np.arange(spec.p - 1, -1, -1)
    values = blocks @ weights
    table = np.asarray(spec.codebook, dtype=np.int64)
    return CodedFrame(bits=table[values].ravel(), code=spec.name,
                      coded_bit_len=coded_bit_len)


def manchester_encode(info_bits, coded_bit_len: int = 0) -> CodedFrame:
    """Each info bit u maps to the pair (u, not u)."""
    return _block_encode(info_bits, manchester_spec(), coded_bit_len)


def manchester_decode(coded_bits) -> tuple[np.ndarray, np.ndarray]:
    """Hard-decision inverse of manchester_encode.

    (1,0) -> 1 and (0,1) -> 0; the invalid pairs (0,0) and (1,1) decode to 0
    and are reported in the returned array of violating pair indices, so a
    bit always comes out for every pair in.
    """
    x = _as_bits(coded_bits)
    if len(x) % 2:
        raise FramingError(f"manchester: coded length {len(x)} is odd")
    pairs = x.reshape(-1, 2)
    valid = pairs[:, 0] != pairs[:, 1]
    info = np.where(valid, pairs[:, 0], 0)
    return info, np.flatnonzero(~valid)


def b6b8_encode(info_bits, coded_bit_len: int = 0) -> CodedFrame:
    """Blockwise 6-bit value -> weight-4 octet lookup."""
    return _block_encode(info_bits, build_6b8b_codebook(), coded_bit_len)


def b6b8_decode_hard(coded_bits) -> np.ndarray:
    """Inverse octet lookup; raises CodeViolationError on any unknown octet."""
    spec = build_6b8b_codebook()
    x = _as_bits(coded_bits)
    if len(x) % spec.q:
        raise FramingError(f"6b8b: coded length {len(x)} not a multiple of {spec.q}")
    if len(x) == 0:
        return np.zeros(0, dtype=np.int64)
    inverse = {word: value for value, word in enumerate(spec.codebook)}
    out = np.empty((len(x) // spec.q, spec.p), dtype=np.int64)
    for i, block in enumerate(x.reshape(-1, spec.q)):
        value = inverse.get(tuple(int(b) for b in block))
        if value is None:
            raise CodeViolationError(f"octet {''.join(map(str, block))} at block {i} "
                                     "is not in the 6b8b codebook", block_index=i)
        out[i] = [(value >> k) & 1 for k in range(spec.p - 1, -1, -1)]
    return out.ravel()


def encode(info_bits, code: str, coded_bit_len: int = 0) -> CodedFrame:
    if code == MANCHESTER:
        return manchester_encode(info_bits, coded_bit_len)
    if code == B6B8:
        return b6b8_encode(info_bits, coded_bit_len)
    raise ValueError(f"unknown code {code!r}")
