"""Sign sequences, aperiodic autocorrelation, and quad verification.

A sign sequence is a finite list of +1/-1 entries.  The aperiodic
autocorrelation of A at shift s is

    N_A(s) = sum_j A[j] * A[j+s]

with out-of-range terms treated as zero.  A quad (A, B, C, D) of lengths
(n+1, n+1, n, n) is a *base* quad when the four autocorrelations sum to
zero at every shift s = 1..n.  Two structured subclasses tie B to A:

  * normal (NS):       B[i] = A[i] for i <= n, A[n+1] = +1, B[n+1] = -1
  * near-normal (NNS): B[i] = (-1)^(i-1) * A[i] for i <= n (n even),
                       A[n+1] = +1, B[n+1] = -1

Sequences are stored both as an element tuple (I/O, indexing) and as a
packed bit mask (one sign bit per element) used by the autocorrelation
hot path; the two representations are exact mirrors of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .errors import MalformedInputError


class Kind(str, Enum):
    """Quad family: plain base, normal, or near-normal."""

    BS = "bs"
    NS = "ns"
    NNS = "nns"


_CHAR_OF = {1: "+", -1: "-"}
_SIGN_OF = {"+": 1, "-": -1}


@dataclass(frozen=True)
class SignSeq:
    """Immutable sequence of +1/-1 entries (possibly empty)."""

    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(self.elements)
        for x in elems:
            if x != 1 and x != -1:
                raise MalformedInputError(f"sequence entry {x!r} is not +1/-1")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> "SignSeq":
        return cls(tuple(values))

    @classmethod
    def from_text(cls, text: str) -> "SignSeq":
        """Parse a '+'/'-' string; embedded whitespace (line wrapping) is joined."""
        joined = "".join(text.split())
        bad = set(joined) - set("+-")
        if bad:
            raise MalformedInputError(f"invalid sequence characters: {sorted(bad)}")
        return cls(tuple(_SIGN_OF[ch] for ch in joined))

    @classmethod
    def from_packed(cls, packed: int, length: int) -> "SignSeq":
        """Inverse of ``packed``: bit j set means element j is -1."""
        return cls(tuple(-1 if (packed >> j) & 1 else 1 for j in range(length)))

    @cached_property
    def packed(self) -> int:
        """Bit mask with bit j set iff element j is -1 (least significant bit first)."""
        value = 0
        for j, x in enumerate(self.elements):
            if x < 0:
                value |= 1 << j
        return value

    @cached_property
    def autocorr(self) -> tuple[int, ...]:
        """All aperiodic autocorrelation values (N(0), ..., N(len-1))."""
        length = len(self.elements)
        x = self.packed
        out = []
        for s in range(length):
            mask = (1 << (length - s)) - 1
            disagreements = ((x ^ (x >> s)) & mask).bit_count()
            out.append((length - s) - 2 * disagreements)
        return tuple(out)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __getitem__(self, idx):
        return self.elements[idx]

    def sum(self) -> int:
        return sum(self.elements)

    def alt_sum(self) -> int:
        """Sum of the alternated sequence (every even position negated)."""
        return sum(x if j % 2 == 0 else -x for j, x in enumerate(self.elements))

    def negated(self) -> "SignSeq":
        return SignSeq(tuple(-x for x in self.elements))

    def reversed_(self) -> "SignSeq":
        return SignSeq(tuple(reversed(self.elements)))

    def alternated(self) -> "SignSeq":
        return SignSeq(tuple(x if j % 2 == 0 else -x for j, x in enumerate(self.elements)))

    def text(self) -> str:
        return "".join(_CHAR_OF[x] for x in self.elements)

    def __str__(self) -> str:
        return self.text()


def paf(seq: SignSeq, shift: int) -> int:
    """Aperiodic autocorrelation of ``seq`` at ``shift`` (zero for shift >= len)."""
    if shift < 0:
        raise ValueError("shift must be >= 0")
    if shift >= len(seq):
        return 0
    return seq.autocorr[shift]


def hall_f(seq: SignSeq, theta: float) -> float:
    """Power spectrum value N(0) + 2*sum_j N(j)*cos(j*theta).

    Equals the squared modulus of the polynomial with the sequence entries
    as coefficients, evaluated at exp(i*theta); in particular it is
    nonnegative, f(0) is the squared row sum, and f(pi) the squared
    alternated row sum.
    """
    acf = seq.autocorr
    if not acf:
        return 0.0
    value = float(acf[0])
    for j in range(1, len(acf)):
        value += 2.0 * acf[j] * math.cos(j * theta)
    return value


@dataclass(frozen=True)
class SumProfile:
    """Row sums and alternated-row sums of the four sequences of a quad."""

    a: int
    b: int
    c: int
    d: int
    a_alt: int
    b_alt: int
    c_alt: int
    d_alt: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.a, self.b, self.c, self.d,
                self.a_alt, self.b_alt, self.c_alt, self.d_alt)

    @classmethod
    def from_tuple(cls, values) -> "SumProfile":
        return cls(*map(int, values))

    def square_sum(self) -> int:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    def alt_square_sum(self) -> int:
        return (self.a_alt ** 2 + self.b_alt ** 2
                + self.c_alt ** 2 + self.d_alt ** 2)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.as_tuple())


@dataclass(frozen=True)
class SeqQuad:
    """Four sign sequences with lengths (n+1, n+1, n, n) and a kind tag."""

    a: SignSeq
    b: SignSeq
    c: SignSeq
    d: SignSeq
    kind: Kind

    def __post_init__(self):
        n = len(self.c)
        if len(self.d) != n:
            raise MalformedInputError("C and D must have equal length")
        if len(self.a) != n + 1 or len(self.b) != n + 1:
            raise MalformedInputError("A and B must have length n+1 = len(C)+1")
        if self.kind is Kind.NNS and n % 2 != 0:
            raise MalformedInputError("near-normal quads require even n")

    @property
    def n(self) -> int:
        return len(self.c)

    def seqs(self) -> tuple[SignSeq, SignSeq, SignSeq, SignSeq]:
        return (self.a, self.b, self.c, self.d)

    def sort_key(self) -> tuple[int, ...]:
        """Total order key: concatenated elements with +1 before -1."""
        return tuple(0 if x > 0 else 1
                     for seq in self.seqs() for x in seq.elements)


def derive_partner(a: SignSeq, kind: Kind) -> SignSeq:
    """Build B from A for a structured kind (last entry forced to -1)."""
    if kind is Kind.NS:
        body = a.elements[:-1]
    elif kind is Kind.NNS:
        body = tuple(x if j % 2 == 0 else -x for j, x in enumerate(a.elements[:-1]))
    else:
        raise MalformedInputError("partner derivation applies to ns/nns only")
    return SignSeq(body + (-1,))


def row_sums(quad: SeqQuad) -> SumProfile:
    """Eight row sums (plain and alternated) of a quad."""
    return SumProfile(
        quad.a.sum(), quad.b.sum(), quad.c.sum(), quad.d.sum(),
        quad.a.alt_sum(), quad.b.alt_sum(), quad.c.alt_sum(), quad.d.alt_sum(),
    )


def total_autocorr(quad: SeqQuad, shift: int) -> int:
    """Sum of the four autocorrelations at one shift."""
    return (paf(quad.a, shift) + paf(quad.b, shift)
            + paf(quad.c, shift) + paf(quad.d, shift))


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of quad verification.

    ``valid`` holds exactly when both ``first_failing_shift`` and
    ``structural_violation`` are absent.
    """

    valid: bool
    first_failing_shift: Optional[int]
    structural_violation: Optional[str]
    sums: SumProfile


def _structural_violation(quad: SeqQuad) -> Optional[str]:
    if quad.kind is Kind.BS:
        return None
    n = quad.n
    if quad.a[n] != 1:
        return "last entry of A must be +1"
    if quad.b[n] != -1:
        return "last entry of B must be -1"
    for j in range(n):
        want = quad.a[j] if quad.kind is Kind.NS else (quad.a[j] if j % 2 == 0 else -quad.a[j])
        if quad.b[j] != want:
            rule = "B[i]=A[i]" if quad.kind is Kind.NS else "B[i]=(-1)^(i-1)A[i]"
            return f"coupling {rule} fails at position {j + 1}"
    return None


def verify(quad: SeqQuad) -> VerifyReport:
    """Check zero total autocorrelation at shifts 1..n plus structural coupling.

    The shift range deliberately includes s = n: that value involves only
    the endpoints of A and B and is required for the (n+1, n+1, n, n)
    length pattern (it is equivalent to the end-column congruence that
    every published quad satisfies).
    """
    structural = _structural_violation(quad)
    failing = None
    for s in range(1, quad.n + 1):
        if total_autocorr(quad, s) != 0:
            failing = s
            break
    return VerifyReport(
        valid=(structural is None and failing is None),
        first_failing_shift=failing,
        structural_violation=structural,
        sums=row_sums(quad),
    )


# --- text forms -----------------------------------------------------------
#
# Sequence text form: one '+'/'-' run per sequence; wrapped input is joined.
# Quad text form: four labelled lines X=, Y=, Z=, W= (mapping to A, B, C, D);
# unlabelled continuation lines extend the sequence started above them.

_LABELS = ("X", "Y", "Z", "W")


def quad_to_text(quad: SeqQuad) -> str:
    parts = []
    for label, seq in zip(_LABELS, quad.seqs()):
        parts.append(f"{label}={seq.text()}")
    return "\n".join(parts)


def parse_quads(text: str, kind: Kind) -> list[SeqQuad]:
    """Parse one or more quads in the quad text form."""
    blocks: list[dict[str, str]] = []
    current: dict[str, str] | None = None
    last_label: str | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if len(line) >= 2 and line[0] in _LABELS and line[1] == "=":
            label, body = line[0], line[2:]
            if label == "X":
                current = {}
                blocks.append(current)
            if current is None or label in current:
                raise MalformedInputError(f"unexpected {label}= line")
            current[label] = body
            last_label = label
        else:
            if current is None or last_label is None:
                raise MalformedInputError("sequence data before any X= label")
            current[last_label] += line
    quads = []
    for block in blocks:
        missing = [lab for lab in _LABELS if lab not in block]
        if missing:
            raise MalformedInputError(f"quad is missing lines: {missing}")
        seqs = [SignSeq.from_text(block[lab]) for lab in _LABELS]
        quads.append(SeqQuad(*seqs, kind=kind))
    if not quads:
        raise MalformedInputError("no quads found in input")
    return quads
