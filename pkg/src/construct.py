"""
Explicit witnesses inside L_omega = <ab, d>.

Words of L are written over the tokens A = ab, A^-1 = ba and D = d. The
module builds elements with a prescribed section at a vertex (plain and as
products of iterated squares), elements moving one vertex to another, and
generators of the squares chain L_0 = L, L_n = (L_{n-1})^2.
"""

import itertools
import logging
import re
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.config import SEARCH_SETTINGS
from src.errors import (
    LengthMismatchError,
    NotInLError,
    RangeError,
    SearchExhaustedError,
    UnrealizableError,
    ValidationError,
)
from src.invariant import ParityVector, parity_formula, parity_hom
from src.omega import OmegaSeq, SYMBOLS
from src.treeauto import (
    Word,
    act,
    check_path,
    equal_auto,
    reduce_letters,
    sections,
)

logger = logging.getLogger(__name__)

TOKENS = ("A", "A^-1", "D")
_INVERSE = {"A": "A^-1", "A^-1": "A", "D": "D"}
_FLAT = {"A": "ab", "A^-1": "ba", "D": "d"}
_TOKEN_PATTERN = re.compile(r"A\^-1|A|D")


def _free_reduce(tokens: Sequence[str]) -> Tuple[str, ...]:
    stack: List[str] = []
    for token in tokens:
        if stack and stack[-1] == _INVERSE[token]:
            stack.pop()
        else:
            stack.append(token)
    return tuple(stack)


class LGenWord(BaseModel):
    """Freely reduced word over A, A^-1, D."""

    model_config = ConfigDict(frozen=True)

    tokens: Tuple[str, ...] = ()

    @field_validator("tokens")
    @classmethod
    def _known_tokens(cls, tokens):
        for token in tokens:
            if token not in TOKENS:
                raise ValidationError(f"unknown generator {token!r}; expected A, A^-1 or D")
        return _free_reduce(tokens)

    @classmethod
    def parse(cls, text: str) -> "LGenWord":
        """Read ``A D A^-1`` (spaces optional); ``e`` or ``1`` is the identity."""
        compact = re.sub(r"[\s*]", "", text)
        if compact in ("", "e", "1"):
            return cls()
        tokens = _TOKEN_PATTERN.findall(compact)
        if "".join(tokens) != compact:
            raise ValidationError(f"cannot read {text!r} as a word in A, A^-1, D")
        return cls(tokens=tuple(tokens))

    def flatten(self) -> str:
        return reduce_letters("".join(_FLAT[token] for token in self.tokens))

    def to_word(self, omega: OmegaSeq, phase: int = 0) -> Word:
        return Word(letters=self.flatten(), omega=omega, phase=phase)

    def inverse(self) -> "LGenWord":
        return LGenWord(tokens=tuple(_INVERSE[token] for token in reversed(self.tokens)))

    def __mul__(self, other: "LGenWord") -> "LGenWord":
        return LGenWord(tokens=self.tokens + other.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return " ".join(self.tokens) or "e"


A = LGenWord(tokens=("A",))
A_INV = LGenWord(tokens=("A^-1",))
D = LGenWord(tokens=("D",))

# letter -> (power of a, L-part) in the decomposition x = a^e Y
_COSET_STEP = {"a": (1, ()), "b": (1, ("A",)), "c": (1, ("A", "D")), "d": (0, ("D",))}
# a Y a for each token
_TWIST = {"A": ("A^-1",), "A^-1": ("A",), "D": ("A", "D", "A^-1")}


def to_lgen(w: Word) -> LGenWord:
    """Rewrite an element of L over A, A^-1, D (coset algorithm with coset representative a)."""
    tokens: List[str] = []
    odd = 0
    for letter in w.letters:
        exponent, part = _COSET_STEP[letter]
        if (odd + exponent) % 2:
            tokens.extend(t for token in part for t in _TWIST[token])
            odd = 1
        else:
            tokens.extend(part)
            odd = 0
    if odd:
        raise NotInLError(f"{w} lies in the nontrivial coset of L")
    return LGenWord(tokens=tuple(tokens))


def reduced_token_words(max_len: int) -> Iterator[LGenWord]:
    """Freely reduced nonempty token words by length, then lexicographically (A < A^-1 < D)."""
    for length in range(1, max_len + 1):
        for tokens in itertools.product(TOKENS, repeat=length):
            if all(tokens[i + 1] != _INVERSE[tokens[i]] for i in range(length - 1)):
                yield LGenWord(tokens=tokens)


class CaseRow(BaseModel):
    """An element over omega together with its two sections over shift(omega)."""

    model_config = ConfigDict(frozen=True)

    element: str
    section0: str
    section1: str


_CASE_TABLES: Dict[int, Tuple[Tuple[str, str, str], ...]] = {
    0: (("abab", "ba", "ab"), ("baba", "ab", "ba"), ("d", "", "d"), ("ada", "d", "")),
    1: (("abab", "ba", "ab"), ("baba", "ab", "ba"), ("d", "a", "d"), ("ada", "d", "a")),
    2: (
        ("abab", "b", "b"),
        ("d", "a", "d"),
        ("ada", "d", "a"),
        ("dabab", "ab", "c"),
        ("adaabab", "c", "ab"),
    ),
}

# r = (ab)^2, s = (ac)^2 over a sequence starting with 0
_SQUARE_ROWS = (
    ("abab", "ba", "ab"),
    ("baba", "ab", "ba"),
    ("abaababcacaaba", "d", "d"),
    ("baababcacaab", "d", "d"),
)


def lemma1_case_tables(symbol: int) -> Tuple[CaseRow, ...]:
    """Level-one stabilizer elements of L with their sections, for a sequence starting with ``symbol``."""
    if symbol not in SYMBOLS:
        raise RangeError(f"first symbol must be 0, 1 or 2, got {symbol}")
    return tuple(CaseRow(element=e, section0=s0, section1=s1) for e, s0, s1 in _CASE_TABLES[symbol])


def square_table_rows() -> Tuple[CaseRow, ...]:
    """r, r^a, (rs^-1)^(aba), (rs^-1)^(ab) with their sections, first symbol 0."""
    return tuple(CaseRow(element=e, section0=s0, section1=s1) for e, s0, s1 in _SQUARE_ROWS)


# symbol -> child -> token -> replacement tokens (an element of St(1) with that section)
_SUBSTITUTIONS: Dict[int, Dict[int, Dict[str, Tuple[str, ...]]]] = {
    0: {
        0: {"A": ("A^-1", "A^-1"), "A^-1": ("A", "A"), "D": ("A", "D", "A^-1")},
        1: {"A": ("A", "A"), "A^-1": ("A^-1", "A^-1"), "D": ("D",)},
    },
    2: {
        0: {"A": ("D", "A", "A"), "A^-1": ("A^-1", "A^-1", "D"), "D": ("A", "D", "A^-1")},
        1: {"A": ("A", "D", "A"), "A^-1": ("A^-1", "D", "A^-1"), "D": ("D",)},
    },
}
_SUBSTITUTIONS[1] = _SUBSTITUTIONS[0]


def _realize_tokens(omega: OmegaSeq, phase: int, path: str, g: LGenWord) -> LGenWord:
    tokens = g.tokens
    for i in reversed(range(len(path))):
        table = _SUBSTITUTIONS[omega.at(phase + i)][int(path[i])]
        tokens = _free_reduce([t for token in tokens for t in table[token]])
    return LGenWord(tokens=tokens)


def section_realizer(omega: OmegaSeq, u: str, g: LGenWord) -> Word:
    """
    An element h of L with h in St(1), h(u) = u and h_u = g.

    g is read over shift(omega, |u|). h is built by substituting each
    generator with a level-one stabilizer element having that generator as
    section, once per level from the bottom of u upwards.
    """
    check_path(u)
    if not u:
        raise ValidationError("vertex must have length at least 1")
    return _realize_tokens(omega, 0, u, g).to_word(omega)


class SquaresCert(BaseModel):
    """
    Certificate that an element lies in the n-th squares chain subgroup.

    Level 0 holds a base word of L. Level n >= 1 is the ordered product of
    the squares of its level n-1 entries.
    """

    model_config = ConfigDict(frozen=True)

    level: int
    base: Optional[LGenWord] = None
    squares: Tuple["SquaresCert", ...] = ()

    @model_validator(mode="after")
    def _well_formed(self):
        if self.level == 0:
            if self.base is None or self.squares:
                raise ValidationError("level-0 certificate must hold exactly a base word")
        elif self.base is not None or any(sq.level != self.level - 1 for sq in self.squares):
            raise ValidationError(f"level-{self.level} certificate must hold level-{self.level - 1} squares")
        return self

    def flatten(self) -> str:
        if self.level == 0:
            return self.base.flatten()
        return reduce_letters("".join(square.flatten() * 2 for square in self.squares))

    def to_word(self, omega: OmegaSeq, phase: int = 0) -> Word:
        return Word(letters=self.flatten(), omega=omega, phase=phase)

    def bases(self) -> List[LGenWord]:
        if self.level == 0:
            return [self.base]
        return [base for square in self.squares for base in square.bases()]

    def to_json(self):
        if self.level == 0:
            return {"base": str(self.base)}
        return {"level": self.level, "sq": [square.to_json() for square in self.squares]}


SquaresCert.model_rebuild()

# Verified products of squares, keyed by (current symbol, child, word): every
# generator when the symbol is 0, A and A^-1 when it is 1, and AD, DA^-1 when
# it is 2. Values are (bases, conjugator).
_FROZEN_SQUARES: Dict[Tuple[int, int, str], Tuple[Tuple[str, ...], str]] = {
    (0, 1, "A"): (("A",), ""),
    (0, 1, "A^-1"): (("A^-1",), ""),
    (0, 1, "D"): (("A", "D A^-1"), "aba"),
    (0, 0, "A"): (("A^-1",), ""),
    (0, 0, "A^-1"): (("A",), ""),
    (0, 0, "D"): (("A", "D A^-1"), "ab"),
    (1, 1, "A"): (("A",), ""),
    (1, 1, "A^-1"): (("A^-1",), ""),
    (1, 0, "A"): (("A^-1",), ""),
    (1, 0, "A^-1"): (("A",), ""),
    (2, 1, "A D"): (("A D",), ""),
    (2, 1, "D A^-1"): (("D A^-1",), ""),
    (2, 0, "A D"): (("D A^-1",), ""),
    (2, 0, "D A^-1"): (("A D",), ""),
}


def _conjugate_base(base: LGenWord, conjugator: str, omega: OmegaSeq) -> LGenWord:
    if not conjugator:
        return base
    letters = conjugator[::-1] + base.flatten() + conjugator
    return to_lgen(Word(letters=letters, omega=omega))


def _frozen_square(omega: OmegaSeq, phase: int, child: int, key: str) -> Optional[Tuple[LGenWord, ...]]:
    frozen = _FROZEN_SQUARES.get((omega.at(phase), child, key))
    if frozen is None:
        return None
    bases, conjugator = frozen
    return tuple(_conjugate_base(LGenWord.parse(base), conjugator, omega) for base in bases)


def square_parity_obstructed(omega: OmegaSeq, phase: int, g: LGenWord) -> bool:
    """
    Whether no product of squares over omega at ``phase`` has section g at a child.

    The parity of either child section of t^2 is 0 when t fixes level 1 and
    p(t_0) + p(t_1) otherwise, and p(t_0) + p(t_1) is p(t) without its first
    bit. So child sections of products of squares have parities in the span
    of the tails of p(ab) and p(d); a g outside that span is unreachable.
    """
    if omega.is_periodic:
        depth = len(omega.prefix) + len(omega.period) + 1
    else:
        depth = len(omega.prefix) - phase
    if depth < 1:
        return False
    ab = ParityVector(bits=parity_formula("ab", omega, depth + 1, phase).bits[1:])
    d = ParityVector(bits=parity_formula("d", omega, depth + 1, phase).bits[1:])
    span = {ParityVector.zero(depth), ab, d, ab ^ d}
    return parity_hom(g.to_word(omega, phase + 1), depth) not in span


@lru_cache(maxsize=None)
def _searched_square_entry(
    omega: OmegaSeq, phase: int, child: int, g: LGenWord, max_len: int
) -> Tuple[LGenWord, ...]:
    target = g.to_word(omega, phase + 1)
    pool = list(reduced_token_words(max_len))
    candidates = itertools.chain(
        ((t,) for t in pool),
        itertools.product(pool, repeat=2),
    )
    for bases in candidates:
        letters = "".join(base.flatten() * 2 for base in bases)
        section = sections(Word(letters=letters, omega=omega, phase=phase))[child]
        if section.letters == target.letters or equal_auto(section, target):
            logger.info(f"square entry for {g} at child {child}, phase {phase}: {[str(b) for b in bases]}")
            return bases
    logger.warning(f"no product of squares with section {g} at child {child} (phase {phase} of {omega})")
    raise SearchExhaustedError(
        f"no product of at most two squares has section {g} at child {child} over {omega} phase {phase}",
        max_len,
    )


def _square_entry(omega: OmegaSeq, phase: int, child: int, g: LGenWord, last: bool) -> Tuple[LGenWord, ...]:
    whole = _frozen_square(omega, phase, child, str(g))
    if whole is not None:
        return whole
    per_token = [_frozen_square(omega, phase, child, token) for token in g.tokens]
    if all(entry is not None for entry in per_token):
        return tuple(base for entry in per_token for base in entry)
    max_len = SEARCH_SETTINGS["square_search_max_len"]
    if square_parity_obstructed(omega, phase, g):
        if last:
            raise UnrealizableError(
                f"no element of the {phase + 1}-th squares subgroup of L over {omega} "
                f"has section {g} at a level-{phase + 1} vertex: its parity is out of reach"
            )
        raise SearchExhaustedError(
            f"chosen base {g} cannot be lifted at child {child} over {omega} phase {phase}", max_len
        )
    return _searched_square_entry(omega, omega.normal_phase(phase), child, g, max_len)


def _square_lift(omega: OmegaSeq, phase: int, path: str, g: LGenWord, last: bool = True) -> SquaresCert:
    n = len(path)
    head, child = path[:-1], int(path[-1])
    bases = _square_entry(omega, phase + n - 1, child, g, last)
    if n == 1:
        return SquaresCert(level=1, squares=tuple(SquaresCert(level=0, base=base) for base in bases))
    return SquaresCert(level=n, squares=tuple(_square_lift(omega, phase, head, base, last=False) for base in bases))


def square_realizer(omega: OmegaSeq, u: str, g: LGenWord) -> SquaresCert:
    """
    A product of |u|-fold squares of L-elements that fixes level |u| and has section g at u.

    The level-one step expresses g at the last vertex as a product of squares
    t_1^2 ... t_m^2; each t_i is lifted to the parent vertex one level up and
    the lifts are squared.
    """
    check_path(u)
    if not u:
        raise ValidationError("vertex must have length at least 1")
    return _square_lift(omega, 0, u, g)


def _mapper(omega: OmegaSeq, phase: int, u: str, v: str) -> LGenWord:
    if len(u) == 1:
        return LGenWord() if u == v else A
    x, y = u[0], v[0]
    if x == y:
        inner = _mapper(omega, phase + 1, u[1:], v[1:])
        return _realize_tokens(omega, phase, y, inner)
    ab_section = sections(Word(letters="ab", omega=omega, phase=phase))[int(x)]
    inner = _mapper(omega, phase + 1, act(ab_section, u[1:]), v[1:])
    return _realize_tokens(omega, phase, y, inner) * A


def transitive_mapper(omega: OmegaSeq, u: str, v: str) -> Word:
    """An element of L sending vertex u to vertex v."""
    check_path(u)
    check_path(v)
    if len(u) != len(v):
        raise LengthMismatchError(f"vertices {u!r} and {v!r} lie on different levels")
    if not u:
        return Word(omega=omega)
    return _mapper(omega, 0, u, v).to_word(omega)


def squares_chain(omega: OmegaSeq, n: int, width: int = 4) -> List[Word]:
    """
    Up to ``width`` elements of the n-th squares chain subgroup.

    Starts from ab, d, abd and replaces the list at each step by the squares
    of its members and of products of neighbouring members.
    """
    current = [A.flatten(), D.flatten(), (A * D).flatten()]
    for _ in range(n):
        following: List[str] = []
        products = current + [current[i] + current[i + 1] for i in range(len(current) - 1)]
        for letters in products:
            square = reduce_letters(letters * 2)
            if square and square not in following:
                following.append(square)
            if len(following) == width:
                break
        current = following
    return [Word(letters=letters, omega=omega) for letters in current]
