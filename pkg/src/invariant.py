"""
Parity invariant of tree automorphisms.

p(g) records, level by level, the number of active vertices of g modulo 2
(level 0 = root, leftmost). p is a homomorphism into an infinite product of
copies of Z/2, and its image on L_omega determines omega up to swapping the
symbols 1 and 2.
"""

import logging
from typing import FrozenSet, Literal, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.errors import (
    DegenerateTruncationError,
    InconsistentTripleError,
    LengthMismatchError,
    MalformedTripleError,
    RangeError,
    ValidationError,
)
from src.omega import OmegaSeq
from src.treeauto import GEN_TABLES, Word, level_active_counts

logger = logging.getLogger(__name__)


class BitTables(BaseModel):
    """Activity bits of the generator rows: 1 where the row entry is a."""

    model_config = ConfigDict(frozen=True)

    beta_bit: Tuple[int, int, int] = (1, 1, 0)
    delta_bit: Tuple[int, int, int] = (0, 1, 1)

    @model_validator(mode="after")
    def _fixed_table(self):
        if (self.beta_bit, self.delta_bit) != ((1, 1, 0), (0, 1, 1)):
            raise ValidationError("bit tables are fixed: beta=(1,1,0), delta=(0,1,1)")
        return self

    @property
    def zeta_bit(self) -> Tuple[int, int, int]:
        return tuple(b ^ d for b, d in zip(self.beta_bit, self.delta_bit))


BIT_TABLES = BitTables()


class ParityVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    bits: Tuple[int, ...]

    @field_validator("bits")
    @classmethod
    def _binary(cls, bits):
        if any(bit not in (0, 1) for bit in bits):
            raise ValidationError(f"parity vector entries must be bits, got {bits}")
        return bits

    @classmethod
    def parse(cls, text: str) -> "ParityVector":
        if not text or any(ch not in "01" for ch in text):
            raise ValidationError(f"{text!r} is not a bit string")
        return cls(bits=tuple(int(ch) for ch in text))

    @classmethod
    def zero(cls, depth: int) -> "ParityVector":
        return cls(bits=(0,) * depth)

    def __xor__(self, other: "ParityVector") -> "ParityVector":
        if len(self) != len(other):
            raise LengthMismatchError(f"cannot add parity vectors of lengths {len(self)} and {len(other)}")
        return ParityVector(bits=tuple(x ^ y for x, y in zip(self.bits, other.bits)))

    @property
    def is_zero(self) -> bool:
        return not any(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


class InvariantTriple(BaseModel):
    """The nonzero elements of p(L_omega) truncated to a depth, in sorted order."""

    model_config = ConfigDict(frozen=True)

    vectors: Tuple[ParityVector, ParityVector, ParityVector]

    @field_validator("vectors")
    @classmethod
    def _valid_triple(cls, vectors):
        first, second, third = vectors
        if not len(first) == len(second) == len(third):
            raise MalformedTripleError("triple vectors must have equal length")
        if len({str(v) for v in vectors}) != 3:
            raise MalformedTripleError("triple vectors must be distinct")
        if any(v.is_zero for v in vectors):
            raise MalformedTripleError("triple vectors must be nonzero")
        if not (first ^ second ^ third).is_zero:
            raise MalformedTripleError("triple vectors must add up to zero")
        return tuple(sorted(vectors, key=str))

    @classmethod
    def parse(cls, texts) -> "InvariantTriple":
        vectors = [ParityVector.parse(text) for text in texts]
        if len(vectors) != 3:
            raise MalformedTripleError(f"a triple needs three vectors, got {len(vectors)}")
        return cls(vectors=tuple(vectors))

    def as_set(self) -> FrozenSet[str]:
        return frozenset(str(v) for v in self.vectors)

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.vectors) + "}"


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Literal["EQUIVALENT", "DISTINCT"]
    depth: int

    def __str__(self) -> str:
        if self.verdict == "EQUIVALENT":
            return f"EQUIVALENT (consistent up to depth {self.depth})"
        return "DISTINCT"


def _row_bits(letter: str) -> Tuple[int, int, int]:
    return tuple(int(entry == "a") for entry in GEN_TABLES.row(letter))


def _generator_parity(letter: str, omega: OmegaSeq, depth: int, phase: int = 0) -> ParityVector:
    if depth == 0:
        return ParityVector(bits=())
    if letter == "a":
        return ParityVector(bits=(1,) + (0,) * (depth - 1))
    row = _row_bits(letter)
    return ParityVector(bits=(0,) + tuple(row[omega.at(phase + n - 1)] for n in range(1, depth)))


def parity_formula(gen: str, omega: OmegaSeq, depth: int, phase: int = 0) -> ParityVector:
    """Closed form of p(ab) or p(d) read from the bit tables."""
    if gen == "ab":
        head, row = 1, BIT_TABLES.beta_bit
    elif gen == "d":
        head, row = 0, BIT_TABLES.delta_bit
    else:
        raise ValidationError(f"closed forms exist for 'ab' and 'd' only, got {gen!r}")
    if depth == 0:
        return ParityVector(bits=())
    return ParityVector(bits=(head,) + tuple(row[omega.at(phase + n - 1)] for n in range(1, depth)))


def parity_by_count(w: Word, depth: int) -> ParityVector:
    """p(w) by counting active vertices level by level."""
    return ParityVector(bits=tuple(count % 2 for count in level_active_counts(w, depth)))


def parity_hom(w: Word, depth: int) -> ParityVector:
    """p(w) as the sum of the generator parities of its letters."""
    total = ParityVector.zero(depth)
    for letter in "abcd":
        if w.letters.count(letter) % 2:
            total = total ^ _generator_parity(letter, w.omega, depth, w.phase)
    return total


def parity_span(omega: OmegaSeq, depth: int) -> FrozenSet[str]:
    """Nonzero elements of p(L_omega) truncated to depth."""
    ab = parity_formula("ab", omega, depth)
    d = parity_formula("d", omega, depth)
    return frozenset(str(v) for v in (ab, d, ab ^ d) if not v.is_zero)


def invariant_triple(omega: OmegaSeq, depth: int) -> InvariantTriple:
    if depth < 2:
        raise RangeError(f"invariant triple needs depth >= 2, got {depth}")
    ab = parity_formula("ab", omega, depth)
    d = parity_formula("d", omega, depth)
    vectors = (ab, d, ab ^ d)
    if any(v.is_zero for v in vectors):
        raise DegenerateTruncationError(
            f"parity image of {omega} degenerates at depth {depth}: {', '.join(map(str, vectors))}"
        )
    return InvariantTriple(vectors=vectors)


_SYMBOL_FROM_BITS = {(0, 1): "0", (1, 1): "1", (1, 0): "2"}


def reconstruct_omega(triple: InvariantTriple) -> Tuple[str, str]:
    """
    Both sequences (up to the swap 1<->2) whose L has this parity image.

    p(d) is the unique vector with a 0 at the root; each remaining vector is
    read as a candidate p(ab).
    """
    root_inactive = [v for v in triple.vectors if v.bits[0] == 0]
    if len(root_inactive) != 1:
        raise MalformedTripleError(f"expected exactly one vector starting with 0 in {triple}")
    d = root_inactive[0]
    candidates = []
    for ab in triple.vectors:
        if ab == d:
            continue
        symbols = []
        for i in range(1, len(d)):
            key = (d.bits[i], ab.bits[i])
            if key not in _SYMBOL_FROM_BITS:
                raise InconsistentTripleError(f"level {i} of {triple} has neither d nor ab active")
            symbols.append(_SYMBOL_FROM_BITS[key])
        candidates.append("".join(symbols))
    first, second = sorted(candidates)
    return first, second


def distinguish(omega: OmegaSeq, eta: OmegaSeq, depth: int) -> Verdict:
    """
    Compare the parity images of L over two sequences.

    DISTINCT proves the closures are not isomorphic; EQUIVALENT only says
    the images agree up to the given depth.
    """
    if depth < 1:
        raise RangeError(f"depth must be positive, got {depth}")
    left, right = parity_span(omega, depth), parity_span(eta, depth)
    logger.debug(f"parity images {sorted(left)} vs {sorted(right)}")
    return Verdict(verdict="EQUIVALENT" if left == right else "DISTINCT", depth=depth)
