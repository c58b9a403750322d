"""One-pass streaming fingerprints.

An n-bit input x is read once, left to right, and split into
r = ceil(n/k) segments: every segment holds k bits except the last,
which holds the final n - (r-1)*k bits.  Writing s_{r-1} for the
first-read segment down to s_0 for the last, and w(s) for the field
element whose u^i coefficient is the i-th bit of s in reading order,
the fingerprint polynomial is

    d_x(z) = z^r + w(s_{r-1}) z^{r-1} + ... + w(s_1) z + w(s_0),

monic of degree r with the data in the lower coefficients.  The stream
evaluates d_x at one random point a by a Horner fold: the accumulator
starts at 1 (the monic leading coefficient) and each completed segment
costs one multiplication and one addition, v <- v*a + w(s).  Distinct
equal-length inputs give distinct coefficient vectors, so their
polynomials agree on at most r-1 of the q points.

Space accounting (ResourceProfile.peak_state_bits) counts the live
state: modulus (k+1 bits), point a (k), accumulator v (k), the partial
segment buffer (at most k), and three counters of |n| bits each (n, the
read cursor, completed segments).  That totals at most 4k + 1 + 3|n|
bits, within C*(k + log2 n) for C = 8, for every n, k >= 1.

Tuple coding (for shipping a fingerprint as one bit string): each data
bit b is sent as "1b" and parts are separated by "00", so
<x, y> = 1x_1..1x_|x| 00 1y_1..1y_|y|, and the encoding of m parts has
length 2*(sum of part lengths) + 2*(m-1).  A fingerprint is the triple
<n in minimal binary, a, v> with a and v written as k-bit patterns in
b_{k-1}..b_0 order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .field import ENUMERATION_DEGREE_CAP, FieldCtx, make_field, select_field_size
from .gf2poly import Gf2Poly

__all__ = [
    "ResourceProfile",
    "StreamState",
    "Fingerprint",
    "begin",
    "fingerprint",
    "split_segments",
    "coefficients",
    "direct_eval",
    "count_agreements",
    "encode_tuple",
    "decode_tuple",
    "encode_fingerprint",
    "decode_fingerprint",
    "bits_from_bytes",
    "SPACE_CONSTANT",
]

# peak_state_bits <= SPACE_CONSTANT * (k + log2 n); see the module docstring.
SPACE_CONSTANT = 8


@dataclass
class ResourceProfile:
    """Counters for the one-pass cost model of a single stream run."""

    conversions: int = 0      # segment -> element mappings
    field_ops: int = 0        # multiplications + additions
    random_bits: int = 0      # bits drawn for the evaluation point
    bits_read: int = 0        # input bits consumed (exactly n, no rewinds)
    peak_state_bits: int = 0  # max live state, per the documented accounting


@dataclass(frozen=True)
class Fingerprint:
    """Output of one stream run: <n, a, v> plus its context and seed."""

    n: int
    a: int
    v: int
    ctx: FieldCtx
    seed: int | None = None

    @property
    def k(self) -> int:
        return self.ctx.k

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "t_hex": self.ctx.modulus.to_hex(),
            "a_hex": self.ctx.elem_hex(self.a),
            "v_hex": self.ctx.elem_hex(self.v),
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Fingerprint":
        ctx = FieldCtx(int(d["k"]), Gf2Poly.from_hex(d["t_hex"]))
        return cls(
            n=int(d["n"]),
            a=ctx.elem_from_hex(d["a_hex"]),
            v=ctx.elem_from_hex(d["v_hex"]),
            ctx=ctx,
            seed=None if d.get("seed") is None else int(d["seed"]),
        )


class StreamState:
    """In-flight fingerprint computation; create with begin()."""

    def __init__(self, n: int, ctx: FieldCtx, rng, seed: int | None = None):
        if n < 1:
            raise ValueError("stream length must be >= 1")
        self.n = n
        self.ctx = ctx
        self.r = -(-n // ctx.k)  # ceil(n/k)
        self.a = ctx.random_elem(rng)
        self.v = 1
        self.seed = seed
        self.profile = ResourceProfile(random_bits=ctx.k)
        self._pending: list[str] = []
        self._pending_len = 0
        self._done_segments = 0
        self._finished = False
        self._note_state()

    def _note_state(self) -> None:
        k = self.ctx.k
        live = (k + 1) + k + k + self._pending_len + 3 * self.n.bit_length()
        if live > self.profile.peak_state_bits:
            self.profile.peak_state_bits = live

    def _segment_len(self) -> int:
        if self._done_segments < self.r - 1:
            return self.ctx.k
        return self.n - (self.r - 1) * self.ctx.k

    def feed(self, bits: str) -> None:
        """Consume the next chunk of the input, any chunking allowed."""
        if self._finished:
            raise ValueError("stream already finished")
        if bits.strip("01"):
            raise ValueError("input must consist of '0' and '1' only")
        if self.profile.bits_read + len(bits) > self.n:
            raise ValueError(
                f"overfed: {self.profile.bits_read + len(bits)} bits for n={self.n}"
            )
        self.profile.bits_read += len(bits)
        buf = "".join(self._pending) + bits
        pos = 0
        while self._done_segments < self.r:
            need = self._segment_len()
            if len(buf) - pos < need:
                break
            self._absorb(buf[pos:pos + need])
            pos += need
        rest = buf[pos:]
        # Between calls the retained buffer is always shorter than one
        # segment, which keeps the live state within the documented bound.
        self._pending = [rest] if rest else []
        self._pending_len = len(rest)
        self._note_state()

    def _absorb(self, segment: str) -> None:
        b = self.ctx.from_segment(segment)
        self.profile.conversions += 1
        self.v = self.ctx.add(self.ctx.mul(self.v, self.a), b)
        self.profile.field_ops += 2
        self._done_segments += 1

    def finish(self) -> Fingerprint:
        """Close the stream; requires exactly n bits to have been fed."""
        if self._finished:
            raise ValueError("stream already finished")
        if self.profile.bits_read != self.n:
            raise ValueError(
                f"finish before end of stream: {self.profile.bits_read} of {self.n} bits"
            )
        self._finished = True
        assert self._done_segments == self.r and self._pending_len == 0
        assert self.profile.conversions == self.r
        assert self.profile.field_ops <= 2 * self.r
        return Fingerprint(n=self.n, a=self.a, v=self.v, ctx=self.ctx, seed=self.seed)


def begin(n: int, ctx: FieldCtx, rng, seed: int | None = None) -> StreamState:
    """Start a stream of n bits over ctx; draws the evaluation point."""
    return StreamState(n, ctx, rng, seed)


def fingerprint(
    n: int,
    x: str,
    seed: int,
    f_of_n: int | None = None,
    ctx: FieldCtx | None = None,
) -> Fingerprint:
    """One-shot fingerprint of the bit string x (|x| = n).

    The field comes from select_field_size(n, f_of_n) unless an explicit
    ctx overrides the sizing (test and interop use).
    """
    if len(x) != n:
        raise ValueError(f"length mismatch: |x|={len(x)}, n={n}")
    if ctx is None:
        if f_of_n is None:
            raise ValueError("either f_of_n or ctx is required")
        ctx = make_field(select_field_size(n, f_of_n))
    state = begin(n, ctx, random.Random(seed), seed=seed)
    state.feed(x)
    return state.finish()


def split_segments(x: str, k: int) -> list[str]:
    """Segments [s_{r-1}, ..., s_0] in reading order; the last is short
    when k does not divide |x|."""
    if not x:
        raise ValueError("empty input has no segments")
    r = -(-len(x) // k)
    out = [x[i * k:(i + 1) * k] for i in range(r - 1)]
    out.append(x[(r - 1) * k:])
    return out


def coefficients(ctx: FieldCtx, x: str) -> list[int]:
    """Data coefficients [w(s_{r-1}), ..., w(s_0)] of d_x."""
    return [ctx.from_segment(s) for s in split_segments(x, ctx.k)]


def direct_eval(ctx: FieldCtx, x: str, a: int) -> int:
    """d_x(a) evaluated term by term from materialized coefficients.

    Independent of the streaming fold (powers via square-and-multiply,
    no Horner), so it can referee the streaming path.
    """
    coeffs = coefficients(ctx, x)
    r = len(coeffs)
    acc = ctx.pow(a, r)
    for j, c in enumerate(coeffs):
        acc = ctx.add(acc, ctx.mul(c, ctx.pow(a, r - 1 - j)))
    return acc


def count_agreements(ctx: FieldCtx, x: str, y: str) -> int:
    """|{a : d_x(a) = d_y(a)}| over the whole field (k <= 24).

    For distinct equal-length x, y the difference d_x - d_y is a nonzero
    polynomial of degree at most r-1, so the count is at most r-1.
    """
    if len(x) != len(y) or not x:
        raise ValueError("inputs must be nonempty and of equal length")
    if ctx.k > ENUMERATION_DEGREE_CAP:
        raise ValueError(f"exhaustive agreement count needs k <= {ENUMERATION_DEGREE_CAP}")
    cx = coefficients(ctx, x)
    cy = coefficients(ctx, y)
    r = len(cx)
    mul = ctx.mul
    count = 0
    for a in ctx.elements():
        powers = [1] * (r + 1)
        for i in range(1, r + 1):
            powers[i] = mul(powers[i - 1], a)
        vx = powers[r]
        vy = powers[r]
        for j in range(r):
            p = powers[r - 1 - j]
            vx ^= mul(cx[j], p)
            vy ^= mul(cy[j], p)
        if vx == vy:
            count += 1
    return count


# ---------------------------------------------------------- tuple coding

def encode_tuple(parts: list[str] | tuple[str, ...]) -> str:
    """Self-delimiting encoding of 2 or 3 nonempty bit strings."""
    if not 2 <= len(parts) <= 3:
        raise ValueError("tuple coding covers 2 or 3 parts")
    for p in parts:
        if not p:
            raise ValueError("parts must be nonempty")
        if p.strip("01"):
            raise ValueError("parts must consist of '0' and '1' only")
    return "00".join("".join("1" + b for b in p) for p in parts)


def decode_tuple(bits: str) -> list[str]:
    """Inverse of encode_tuple; raises on any malformed string."""
    if len(bits) % 2 != 0:
        raise ValueError("malformed tuple: dangling bit")
    parts: list[str] = []
    cur: list[str] = []
    for i in range(0, len(bits), 2):
        tok = bits[i:i + 2]
        if tok == "00":
            if not cur:
                raise ValueError("malformed tuple: empty part")
            parts.append("".join(cur))
            cur = []
        elif tok[0] == "1":
            cur.append(tok[1])
        else:
            raise ValueError(f"malformed tuple: bad token {tok!r}")
    if not cur:
        raise ValueError("malformed tuple: empty part")
    parts.append("".join(cur))
    return parts


def encode_fingerprint(fp: Fingerprint) -> str:
    """<n, a, v> as one bit string: n in minimal binary, a and v as k-bit
    patterns in b_{k-1}..b_0 order."""
    return encode_tuple(
        (format(fp.n, "b"), fp.ctx.elem_bits(fp.a), fp.ctx.elem_bits(fp.v))
    )


def decode_fingerprint(bits: str, ctx: FieldCtx) -> Fingerprint:
    """Inverse of encode_fingerprint, given the context (k is external)."""
    parts = decode_tuple(bits)
    if len(parts) != 3:
        raise ValueError("fingerprint encoding must have exactly 3 parts")
    n_bits, a_bits, v_bits = parts
    if n_bits[0] != "1":
        raise ValueError("length field must be minimal binary")
    if len(a_bits) != ctx.k or len(v_bits) != ctx.k:
        raise ValueError("element fields must be exactly k bits")
    return Fingerprint(
        n=int(n_bits, 2), a=int(a_bits, 2), v=int(v_bits, 2), ctx=ctx
    )


def bits_from_bytes(data: bytes) -> str:
    """Bit string of raw bytes, most significant bit of each byte first."""
    return "".join(format(b, "08b") for b in data)
