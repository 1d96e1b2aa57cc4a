"""
Parameter sequences over {0, 1, 2}.

An OmegaSeq is a finite prefix followed by an optional repeating period.
Public indexing is 1-based (symbol_at(1) is the first symbol); the engine
reads symbols through the 0-based ``at``.
"""

import itertools
import logging
import re
from typing import Any, List, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.errors import DepthError, RangeError, UndecidableError, ValidationError

logger = logging.getLogger(__name__)

SYMBOLS = (0, 1, 2)

_TEXT_FORMAT = re.compile(r"^([012]*)(?:\(([012]*)\))?$")


def _primitive_root(period: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(period)
    for size in range(1, n + 1):
        if n % size == 0 and period[:size] * (n // size) == period:
            return period[:size]
    return period


def _check_symbols(values: Tuple[int, ...]) -> Tuple[int, ...]:
    for value in values:
        if value not in SYMBOLS:
            raise ValidationError(f"symbol {value!r} is not in {{0,1,2}}")
    return values


class PermThree(BaseModel):
    """A permutation of the symbols {0, 1, 2}, stored as its image tuple."""

    model_config = ConfigDict(frozen=True)

    images: Tuple[int, int, int] = (0, 1, 2)

    @field_validator("images")
    @classmethod
    def _is_bijection(cls, images):
        if sorted(images) != list(SYMBOLS):
            raise ValidationError(f"{images} is not a permutation of 0,1,2")
        return images

    def __call__(self, symbol: int) -> int:
        return self.images[symbol]

    def compose(self, other: "PermThree") -> "PermThree":
        """Return self ∘ other (other applied first)."""
        return PermThree(images=tuple(self.images[other.images[s]] for s in SYMBOLS))

    def __str__(self) -> str:
        moved = [s for s in SYMBOLS if self.images[s] != s]
        if not moved:
            return "e"
        if len(moved) == 2:
            return f"({moved[0]}{moved[1]})"
        return f"(0{self.images[0]}{self.images[self.images[0]]})"


IDENTITY = PermThree()
PI = PermThree(images=(0, 2, 1))


class OmegaSeq(BaseModel):
    """
    Eventually periodic sequence ``prefix + period + period + ...``.

    The model is canonical on construction: the period is reduced to its
    primitive root and the prefix is shortened while its last symbol can be
    folded into the period. Two sequences are equal iff their models are.
    An empty period means only the prefix is known.
    """

    model_config = ConfigDict(frozen=True)

    prefix: Tuple[int, ...] = ()
    period: Tuple[int, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _canonicalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        prefix = _check_symbols(tuple(data.get("prefix", ())))
        period = _check_symbols(tuple(data.get("period", ())))
        if period:
            period = _primitive_root(period)
            while prefix and prefix[-1] == period[-1]:
                prefix = prefix[:-1]
                period = (period[-1],) + period[:-1]
        return {"prefix": prefix, "period": period}

    @classmethod
    def parse(cls, text: str) -> "OmegaSeq":
        """Parse ``PREFIX(PERIOD)``, e.g. ``(012)``, ``01(2)`` or ``012``."""
        match = _TEXT_FORMAT.match(text.strip())
        if not match:
            raise ValidationError(f"cannot parse sequence {text!r}; expected PREFIX(PERIOD) over 0,1,2")
        prefix_text, period_text = match.group(1), match.group(2)
        if period_text == "":
            raise ValidationError(f"empty period in {text!r}")
        if not prefix_text and not period_text:
            raise ValidationError("empty sequence")
        return cls(
            prefix=tuple(int(ch) for ch in prefix_text),
            period=tuple(int(ch) for ch in (period_text or "")),
        )

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def at(self, index: int) -> int:
        """0-based symbol lookup."""
        if index < len(self.prefix):
            return self.prefix[index]
        if not self.period:
            raise DepthError(f"sequence {self} has only {len(self.prefix)} symbols, index {index + 1} requested")
        return self.period[(index - len(self.prefix)) % len(self.period)]

    def symbol_at(self, i: int) -> int:
        """1-based symbol lookup: symbol_at(1) is the first symbol."""
        if i < 1:
            raise RangeError(f"sequence positions start at 1, got {i}")
        return self.at(i - 1)

    def prefix_symbols(self, n: int) -> Tuple[int, ...]:
        return tuple(self.at(i) for i in range(n))

    def normal_phase(self, phase: int) -> int:
        """Smallest phase reading the same tail as ``phase``."""
        if not self.period or phase < len(self.prefix):
            return phase
        return len(self.prefix) + (phase - len(self.prefix)) % len(self.period)

    def __str__(self) -> str:
        prefix = "".join(map(str, self.prefix))
        if not self.period:
            return prefix
        return f"{prefix}({''.join(map(str, self.period))})"


def shift(omega: OmegaSeq, k: int) -> OmegaSeq:
    """Drop the first k symbols."""
    if k < 0:
        raise RangeError(f"shift must be nonnegative, got {k}")
    if k <= len(omega.prefix):
        return OmegaSeq(prefix=omega.prefix[k:], period=omega.period)
    if not omega.period:
        raise RangeError(f"cannot shift {omega} by {k}: only {len(omega.prefix)} symbols")
    offset = (k - len(omega.prefix)) % len(omega.period)
    return OmegaSeq(period=omega.period[offset:] + omega.period[:offset])


def is_omega_infinity(omega: OmegaSeq) -> bool:
    """Whether every symbol recurs infinitely often."""
    if not omega.period:
        raise UndecidableError(f"recurrence of symbols is undecidable from the prefix {omega}")
    return set(SYMBOLS) <= set(omega.period)


def apply_perm(omega: OmegaSeq, perm: PermThree) -> OmegaSeq:
    return OmegaSeq(
        prefix=tuple(perm(s) for s in omega.prefix),
        period=tuple(perm(s) for s in omega.period),
    )


def enumerate_pi_orbits(k: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Brute-force orbits of {0,1,2}^k under the coordinatewise swap 1<->2."""
    seen = set()
    orbits = []
    for word in itertools.product(SYMBOLS, repeat=k):
        if word in seen:
            continue
        image = tuple(PI(s) for s in word)
        orbit = tuple(sorted({word, image}))
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def count_pi_classes(k: int) -> int:
    """Number of length-k strings up to the swap 1<->2."""
    if not 1 <= k <= 12:
        raise RangeError(f"length must lie in 1..12, got {k}")
    return (3 ** k + 1) // 2
