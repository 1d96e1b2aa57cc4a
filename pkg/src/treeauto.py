"""
Automorphism engine for the groups G_omega acting on the binary tree.

Words are reduced strings over {a, b, c, d} read relative to an OmegaSeq and
a phase (the generator tables are read from the phase-th shift of omega).
Products act on the left: in ``gh`` the right factor h is applied first, and
sections compose as (gh)_u = g_{h(u)} h_u.

The hot paths work on plain ``(letters, phase)`` states; ``Word`` is the
validated value type handed to callers.
"""

import logging
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.config import ENGINE_SETTINGS
from src.errors import (
    ExactnessError,
    OrderCapError,
    ResourceLimitError,
    ValidationError,
)
from src.omega import OmegaSeq

logger = logging.getLogger(__name__)

LETTERS = "abcd"
KLEIN = {
    frozenset("bc"): "d",
    frozenset("bd"): "c",
    frozenset("cd"): "b",
}

VertexPath = str


class GenTables(BaseModel):
    """The rows beta, zeta, delta giving the level-one section of b, c, d."""

    model_config = ConfigDict(frozen=True)

    beta: Tuple[str, str, str] = ("a", "a", "e")
    zeta: Tuple[str, str, str] = ("a", "e", "a")
    delta: Tuple[str, str, str] = ("e", "a", "a")

    @model_validator(mode="after")
    def _fixed_table(self):
        if (self.beta, self.zeta, self.delta) != (("a", "a", "e"), ("a", "e", "a"), ("e", "a", "a")):
            raise ValidationError("generator tables are fixed: beta=(a,a,e), zeta=(a,e,a), delta=(e,a,a)")
        return self

    def row(self, letter: str) -> Tuple[str, str, str]:
        return {"b": self.beta, "c": self.zeta, "d": self.delta}[letter]


GEN_TABLES = GenTables()

# "a" or "" per symbol, for the engine
_ROWS: Dict[str, Tuple[str, str, str]] = {
    letter: tuple("" if entry == "e" else entry for entry in GEN_TABLES.row(letter))
    for letter in "bcd"
}


def reduce_letters(letters: str) -> str:
    """
    Normal form of a letter string.

    Cancels xx and merges adjacent letters of {b, c, d} by the Klein table.
    The identity letter e is dropped.
    """
    stack: List[str] = []
    for letter in letters:
        if letter == "e":
            continue
        if letter not in LETTERS:
            raise ValidationError(f"unknown letter {letter!r}; expected a, b, c, d or e")
        if stack and stack[-1] == letter:
            stack.pop()
        elif letter != "a" and stack and stack[-1] != "a":
            stack[-1] = KLEIN[frozenset((stack[-1], letter))]
        else:
            stack.append(letter)
    return "".join(stack)


def check_path(path: str) -> str:
    if any(bit not in "01" for bit in path):
        raise ValidationError(f"vertex {path!r} must be a bit string")
    return path


def level_vertices(n: int) -> List[VertexPath]:
    """All vertices of level n in lexicographic order (0 < 1)."""
    return [format(i, "b").zfill(n) if n else "" for i in range(2 ** n)]


class Word(BaseModel):
    """A group element of G_omega given by a reduced word."""

    model_config = ConfigDict(frozen=True)

    letters: str = ""
    omega: OmegaSeq
    phase: int = 0

    @field_validator("letters")
    @classmethod
    def _normal_form(cls, letters: str) -> str:
        return reduce_letters(letters)

    @field_validator("phase")
    @classmethod
    def _nonnegative(cls, phase: int) -> int:
        if phase < 0:
            raise ValidationError(f"phase must be nonnegative, got {phase}")
        return phase

    def with_letters(self, letters: str) -> "Word":
        return Word(letters=letters, omega=self.omega, phase=self.phase)

    def _check_frame(self, other: "Word") -> None:
        if self.omega != other.omega or self.phase != other.phase:
            raise ValidationError(
                f"words live over different groups: {self.omega}@{self.phase} vs {other.omega}@{other.phase}"
            )

    def __mul__(self, other: "Word") -> "Word":
        self._check_frame(other)
        return self.with_letters(self.letters + other.letters)

    def inverse(self) -> "Word":
        # all generators are involutions
        return self.with_letters(self.letters[::-1])

    def power(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return self.with_letters(base.letters * abs(n))

    def conjugate(self, h: "Word") -> "Word":
        """h^-1 self h"""
        self._check_frame(h)
        return self.with_letters(h.letters[::-1] + self.letters + h.letters)

    @property
    def root_active(self) -> int:
        return self.letters.count("a") % 2

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters or "e"


def reduce(letters: str, omega: OmegaSeq, phase: int = 0) -> Word:
    return Word(letters=letters, omega=omega, phase=phase)


class Portrait(BaseModel):
    """Root activity at every vertex down to a fixed depth."""

    model_config = ConfigDict(frozen=True)

    active: int
    children: Optional[Tuple["Portrait", "Portrait"]] = None

    @property
    def depth(self) -> int:
        return 0 if self.children is None else 1 + self.children[0].depth

    def to_json(self) -> dict:
        return {
            "active": self.active,
            "children": None if self.children is None else [child.to_json() for child in self.children],
        }

    def levels(self) -> List[str]:
        rows = [str(self.active)]
        if self.children is not None:
            left, right = (child.levels() for child in self.children)
            rows.extend(l + r for l, r in zip(left, right))
        return rows


Portrait.model_rebuild()


# --- engine over (letters, phase) states -----------------------------------

def _active(letters: str) -> int:
    return letters.count("a") % 2


@lru_cache(maxsize=ENGINE_SETTINGS["section_cache_size"])
def _split(letters: str, phase: int, omega: OmegaSeq) -> Tuple[str, str]:
    """Reduced sections of ``letters`` at vertices 0 and 1."""
    symbol = omega.at(phase) if letters.strip("a") else 0
    halves = []
    for start in (0, 1):
        vertex = start
        pieces = []
        for letter in reversed(letters):
            if letter == "a":
                vertex ^= 1
            elif vertex == 0:
                pieces.append(_ROWS[letter][symbol])
            else:
                pieces.append(letter)
        halves.append(reduce_letters("".join(reversed(pieces))))
    return halves[0], halves[1]


def _children(letters: str, phase: int, omega: OmegaSeq) -> Iterator[Tuple[str, int]]:
    """Nontrivial child states."""
    if not letters:
        return
    nxt = omega.normal_phase(phase + 1)
    for section in _split(letters, phase, omega):
        if section:
            yield section, nxt


def _act(letters: str, phase: int, omega: OmegaSeq, path: str) -> str:
    bits = [int(bit) for bit in path]
    if not bits:
        return ""
    for letter in reversed(letters):
        if letter == "a":
            bits[0] ^= 1
            continue
        row = _ROWS[letter]
        for i, bit in enumerate(bits):
            if bit == 0:
                if i + 1 < len(bits) and row[omega.at(phase + i)]:
                    bits[i + 1] ^= 1
                break
    return "".join(map(str, bits))


def _require_period(*omegas: OmegaSeq) -> None:
    for omega in omegas:
        if not omega.is_periodic:
            raise ExactnessError(f"exact decision needs a periodic sequence, got prefix-only {omega}")


def _closure_trivial(letters: str, phase: int, omega: OmegaSeq) -> bool:
    cap = ENGINE_SETTINGS["closure_state_cap"]
    start = (letters, omega.normal_phase(phase))
    seen: Set[Tuple[str, int]] = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if _active(state[0]):
            logger.debug(f"active state {state} after {len(seen)} states")
            return False
        for child in _children(*state, omega):
            if child not in seen:
                if len(seen) >= cap:
                    raise ResourceLimitError(f"state closure exceeded {cap} states")
                seen.add(child)
                queue.append(child)
    logger.debug(f"closure of {letters!r} is trivial ({len(seen)} states)")
    return True


# --- public operations -------------------------------------------------------

def root_active(w: Word) -> int:
    return w.root_active


def sections(w: Word) -> Tuple[Word, Word]:
    left, right = _split(w.letters, w.phase, w.omega)
    return (
        Word(letters=left, omega=w.omega, phase=w.phase + 1),
        Word(letters=right, omega=w.omega, phase=w.phase + 1),
    )


def section_at(w: Word, path: VertexPath) -> Word:
    """The section w_u for a vertex u of any level."""
    check_path(path)
    letters, phase = w.letters, w.phase
    for bit in path:
        letters = _split(letters, phase, w.omega)[int(bit)] if letters else ""
        phase += 1
    return Word(letters=letters, omega=w.omega, phase=phase)


def act(w: Word, path: VertexPath) -> VertexPath:
    """Image of a vertex under w."""
    return _act(w.letters, w.phase, w.omega, check_path(path))


def portrait(w: Word, depth: int) -> Portrait:
    def build(letters: str, phase: int, remaining: int) -> Portrait:
        if remaining == 0:
            return Portrait(active=_active(letters))
        left, right = _split(letters, phase, w.omega) if letters else ("", "")
        return Portrait(
            active=_active(letters),
            children=(build(left, phase + 1, remaining - 1), build(right, phase + 1, remaining - 1)),
        )

    return build(w.letters, w.phase, depth)


def portrait_levels(w: Word, depth: int) -> List[str]:
    """Activity bit string of every level 0..depth, vertices in lexicographic order."""
    rows = []
    states = [w.letters]
    for level in range(depth + 1):
        rows.append("".join(str(_active(letters)) for letters in states))
        if level == depth:
            break
        phase = w.phase + level
        states = [
            section
            for letters in states
            for section in (_split(letters, phase, w.omega) if letters else ("", ""))
        ]
    return rows


def level_active_counts(w: Word, depth: int) -> List[int]:
    """Number of active vertices on each level 0..depth-1."""
    counts = []
    states: Dict[str, int] = {w.letters: 1}
    for level in range(depth):
        phase = w.phase + level
        counts.append(sum(mult for letters, mult in states.items() if _active(letters)))
        if level == depth - 1:
            break
        following: Dict[str, int] = {}
        for letters, mult in states.items():
            if not letters:
                continue
            for section in _split(letters, phase, w.omega):
                if section:
                    following[section] = following.get(section, 0) + mult
        states = following
    return counts


def is_trivial(w: Word) -> bool:
    """Exact word problem by closure over reachable sections."""
    _require_period(w.omega)
    return _closure_trivial(w.letters, w.phase, w.omega)


def is_trivial_to_depth(w: Word, n: int) -> bool:
    """True iff no vertex of level <= n is active."""
    level = {(w.letters, w.omega.normal_phase(w.phase))}
    for k in range(n + 1):
        if any(_active(letters) for letters, _ in level):
            return False
        if k == n:
            break
        level = {child for state in level for child in _children(*state, w.omega)}
        if not level:
            break
    return True


def closure_depth(w: Word) -> int:
    """Deepest level at which a new state of the section closure first appears."""
    _require_period(w.omega)
    start = (w.letters, w.omega.normal_phase(w.phase))
    seen = {start}
    frontier = {start}
    depth = 0
    while True:
        fresh = {child for state in frontier for child in _children(*state, w.omega)} - seen
        if not fresh:
            return depth
        seen |= fresh
        frontier = fresh
        depth += 1


def equal_auto(w1: Word, w2: Word) -> bool:
    """Exact equality of two automorphisms, possibly over different sequences."""
    _require_period(w1.omega, w2.omega)
    cap = ENGINE_SETTINGS["closure_state_cap"]
    o1, o2 = w1.omega, w2.omega

    def state(letters: str, phase: int, omega: OmegaSeq) -> Tuple[str, int]:
        return (letters, omega.normal_phase(phase)) if letters else ("", 0)

    start = (state(w1.letters, w1.phase, o1), state(w2.letters, w2.phase, o2))
    seen = {start}
    queue = deque([start])
    while queue:
        (l1, p1), (l2, p2) = queue.popleft()
        if _active(l1) != _active(l2):
            return False
        if not l1 and not l2:
            continue
        s1 = _split(l1, p1, o1) if l1 else ("", "")
        s2 = _split(l2, p2, o2) if l2 else ("", "")
        for i in (0, 1):
            pair = (state(s1[i], p1 + 1, o1), state(s2[i], p2 + 1, o2))
            if pair not in seen:
                if len(seen) >= cap:
                    raise ResourceLimitError(f"pair closure exceeded {cap} states")
                seen.add(pair)
                queue.append(pair)
    return True


def order(w: Word, cap_exp: Optional[int] = None) -> int:
    """Least power of two killing w, by repeated squaring."""
    _require_period(w.omega)
    cap_exp = ENGINE_SETTINGS["order_cap_exp"] if cap_exp is None else cap_exp
    letters = w.letters
    for k in range(cap_exp + 1):
        if _closure_trivial(letters, w.phase, w.omega):
            return 2 ** k
        letters = reduce_letters(letters + letters)
    raise OrderCapError(f"order of {w} exceeds 2^{cap_exp}")


def metric_distance(w1: Word, w2: Word, depth: Optional[int] = None) -> Fraction:
    """
    Tree distance 2^-m, m the last level on which w1 and w2 agree.

    Exact over periodic sequences. Over a prefix-only sequence a depth bound
    is required; if no difference shows up by that level the bound 2^-depth
    is returned.
    """
    w1._check_frame(w2)
    g = w1.inverse() * w2
    if g.omega.is_periodic:
        if _closure_trivial(g.letters, g.phase, g.omega):
            return Fraction(0)
        limit = None
    elif depth is None:
        raise ExactnessError(f"distance over prefix-only {g.omega} needs a depth bound")
    else:
        limit = depth

    level = {(g.letters, g.omega.normal_phase(g.phase))}
    m = 0
    while limit is None or m < limit:
        if any(_active(letters) for letters, _ in level):
            return Fraction(1, 2 ** m)
        level = {child for state in level for child in _children(*state, g.omega)}
        m += 1
    logger.info(f"no difference up to level {limit}; returning the bound")
    return Fraction(1, 2 ** limit)


def in_L(w: Word) -> bool:
    """Membership in the index-2 subgroup generated by ab and d."""
    return sum(w.letters.count(letter) for letter in "abc") % 2 == 0
