"""MOBS key exchange in the holomorph of the bitstring-matrix semigroup.

Products are written with decreasing exponent left to right, so the exchange
value for exponent ``x`` is ``h^{x-1}(M) ... h(M) M``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automorphism import CycleAutomorphism
from .boolmat import BitMatrix, DimensionError, mat_mul


class ProtocolInvariantError(AssertionError):
    """A simulated exchange violated key agreement or the telescoping identity."""


@dataclass(frozen=True)
class HolomorphElement:
    """Pair ``(g, h^e)`` with the automorphism ``h`` held by reference."""

    g: BitMatrix
    e: int
    h: CycleAutomorphism

    def __mul__(self, other: "HolomorphElement") -> "HolomorphElement":
        # (g, h^e)(g', h^e') = (h^e'(g) g', h^(e+e'))
        if other.h != self.h:
            raise ValueError("holomorph elements over different automorphisms")
        return HolomorphElement(mat_mul(self.h.apply(self.g, other.e), other.g), self.e + other.e, self.h)


def holomorph_pow(base: HolomorphElement, x: int) -> HolomorphElement:
    """``base ** x`` by square-and-multiply; ``x >= 1``."""
    if x < 1:
        raise ValueError("exponent must be >= 1")
    result = None
    square = base
    while True:
        if x & 1:
            # Powers of one element commute, so accumulation order is free.
            result = square if result is None else result * square
        x >>= 1
        if not x:
            return result
        square = square * square


def holomorph_pow_naive(base: HolomorphElement, x: int) -> HolomorphElement:
    if x < 1:
        raise ValueError("exponent must be >= 1")
    result = base
    for _ in range(x - 1):
        result = result * base
    return result


def generate_A(M: BitMatrix, h: CycleAutomorphism, x: int) -> BitMatrix:
    """First component of ``(M, h)^x``."""
    if x < 1:
        raise ValueError("exponent must be >= 1")
    return holomorph_pow(HolomorphElement(M, 1, h), x).g


def generate_A_naive(M: BitMatrix, h: CycleAutomorphism, x: int) -> BitMatrix:
    """Left-multiply ``h^i(M)`` for ``i = 1 .. x-1`` onto ``M``."""
    if x < 1:
        raise ValueError("exponent must be >= 1")
    A = M
    for i in range(1, x):
        A = mat_mul(h.apply(M, i), A)
    return A


def derive_key(own_exponent: int, h: CycleAutomorphism, other_value: BitMatrix, own_value: BitMatrix) -> BitMatrix:
    if other_value.n != own_value.n or other_value.k != own_value.k:
        raise DimensionError("exchange values disagree in shape")
    return mat_mul(h.apply(other_value, own_exponent), own_value)


@dataclass(frozen=True)
class PublicView:
    M: BitMatrix
    h: CycleAutomorphism
    A: BitMatrix
    B: BitMatrix

    def to_json(self) -> dict:
        return {
            "M": self.M.to_json(),
            "h": self.h.to_json(),
            "A": self.A.to_json(),
            "B": self.B.to_json(),
        }


@dataclass(frozen=True)
class ExchangeTranscript:
    M: BitMatrix
    h: CycleAutomorphism
    x: int
    y: int
    A: BitMatrix
    B: BitMatrix
    K: BitMatrix

    def public_view(self) -> PublicView:
        return PublicView(self.M, self.h, self.A, self.B)

    def to_json(self, reveal_private: bool = False) -> dict:
        data = {"n": self.M.n, "k": self.M.k, **self.public_view().to_json()}
        if reveal_private:
            data["x"] = str(self.x)
            data["y"] = str(self.y)
            data["K"] = self.K.to_json()
        return data


def load_transcript(data: dict) -> tuple[PublicView, dict]:
    """Parse transcript JSON into the public view plus any private fields."""
    try:
        view = PublicView(
            BitMatrix.from_json(data["M"]),
            CycleAutomorphism.from_json(data["h"]),
            BitMatrix.from_json(data["A"]),
            BitMatrix.from_json(data["B"]),
        )
    except KeyError as exc:
        raise ValueError(f"transcript missing field {exc}") from None
    private = {}
    if "x" in data:
        private["x"] = int(data["x"])
    if "y" in data:
        private["y"] = int(data["y"])
    if "K" in data:
        private["K"] = BitMatrix.from_json(data["K"])
    return view, private


def run_exchange(M: BitMatrix, h: CycleAutomorphism, x: int, y: int) -> ExchangeTranscript:
    A = generate_A(M, h, x)
    B = generate_A(M, h, y)
    K_A = derive_key(x, h, B, A)
    K_B = derive_key(y, h, A, B)
    if K_A != K_B:
        raise ProtocolInvariantError(f"key mismatch for x={x}, y={y}")
    if mat_mul(h.apply(A), M) != mat_mul(h.apply(M, x), A):
        raise ProtocolInvariantError(f"telescoping identity fails for x={x}")
    return ExchangeTranscript(M, h, x, y, A, B, K_A)


def sample_exponent(rng, e_min: int, e_max: int) -> int:
    """Uniform integer in ``[2**e_min, 2**e_max]``."""
    if e_min > e_max:
        raise ValueError("e_min must not exceed e_max")
    lo, hi = 1 << e_min, 1 << e_max
    if hi < 1 << 62:
        return int(rng.integers(lo, hi, endpoint=True))
    # numpy integers are bounded; draw wide exponents from raw bits.
    span = hi - lo + 1
    while True:
        bits = rng.bytes((span.bit_length() + 7) // 8)
        v = int.from_bytes(bits, "little") >> (8 * len(bits) - span.bit_length())
        if v < span:
            return lo + v
