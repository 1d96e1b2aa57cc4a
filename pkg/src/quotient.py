"""
Finite level quotients and rigid stabilizer witnesses.

A LevelQuotient is the action of a list of words on the 2^n vertices of
level n, stored as sympy permutations on the vertex indices (lexicographic
order, first bit most significant).
"""

import logging
from collections import deque
from typing import Dict, FrozenSet, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict
from sympy.combinatorics import Permutation, PermutationGroup

from src.config import QUOTIENT_SETTINGS, SEARCH_SETTINGS
from src.construct import reduced_token_words
from src.errors import (
    ExactnessError,
    LevelMismatchError,
    RangeError,
    ResourceLimitError,
    SearchExhaustedError,
    SizeCapError,
    ValidationError,
)
from src.omega import OmegaSeq
from src.treeauto import (
    Word,
    act,
    check_path,
    closure_depth,
    equal_auto,
    is_trivial_to_depth,
    level_vertices,
    sections,
)

logger = logging.getLogger(__name__)

G_LABELS = ("a", "b", "c", "d")
L_LABELS = ("ab", "d")


class LevelQuotient:
    """
    Permutation action of labelled generators on one level of the tree.

    Args:
        level: Tree level n (points are the 2^n vertices of that level)
        labels: One label per generator
        images: For each generator, the index of the image of every point
    """

    def __init__(self, level: int, labels: Sequence[str], images: Sequence[Sequence[int]]):
        self.level = level
        self.points = level_vertices(level)
        self.labels = tuple(labels)
        self._permutations: Dict[str, Permutation] = {
            label: Permutation(list(image)) for label, image in zip(self.labels, images)
        }
        self._group: Optional[PermutationGroup] = None
        self._order: Optional[int] = None

    @property
    def degree(self) -> int:
        return len(self.points)

    @property
    def group(self) -> PermutationGroup:
        if self._group is None:
            generators = list(self._permutations.values()) or [Permutation(list(range(self.degree)))]
            self._group = PermutationGroup(generators)
        return self._group

    def index_of(self, vertex: str) -> int:
        check_path(vertex)
        if len(vertex) != self.level:
            raise LevelMismatchError(f"vertex {vertex!r} is not on level {self.level}")
        return int(vertex, 2)

    def permutation(self, label: str) -> Permutation:
        if label not in self._permutations:
            raise ValidationError(f"no generator labelled {label!r}")
        return self._permutations[label]

    def image(self, label: str, vertex: str) -> str:
        return self.points[self.permutation(label).array_form[self.index_of(vertex)]]

    def cycle_notation(self, label: str) -> str:
        cycles = self.permutation(label).cyclic_form
        if not cycles:
            return "()"
        return "".join("(" + " ".join(self.points[i] for i in cycle) + ")" for cycle in cycles)

    def restrict(self, level: int) -> "LevelQuotient":
        """The induced action on a higher level."""
        if not 1 <= level <= self.level:
            raise LevelMismatchError(f"cannot restrict level {self.level} to level {level}")
        pad = "0" * (self.level - level)
        images = []
        for label in self.labels:
            array = self._permutations[label].array_form
            images.append([int(self.points[array[int(p + pad, 2)]][:level], 2) for p in level_vertices(level)])
        return LevelQuotient(level, self.labels, images)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "points": self.points,
            "generators": {label: self.cycle_notation(label) for label in self.labels},
        }


def build_quotient(gens: Sequence[Word], n: int, labels: Optional[Sequence[str]] = None) -> LevelQuotient:
    """Action of ``gens`` on level n, labelled by their words unless labels are given."""
    max_level = QUOTIENT_SETTINGS["max_level"]
    if n < 1:
        raise RangeError(f"level must be at least 1, got {n}")
    if n > max_level:
        raise SizeCapError(f"level {n} exceeds the cap of {max_level} (2^{max_level} points)")
    labels = list(labels) if labels is not None else [str(w) for w in gens]
    if len(labels) != len(gens):
        raise ValidationError("one label per generator is required")
    points = level_vertices(n)
    images = [[int(act(w, p), 2) for p in points] for w in gens]
    logger.debug(f"built level-{n} quotient with {len(gens)} generators")
    return LevelQuotient(n, labels, images)


def group_generators(omega: OmegaSeq, which: str = "G") -> List[Word]:
    """The standard generators of G_omega (a, b, c, d) or L_omega (ab, d)."""
    labels = {"G": G_LABELS, "L": L_LABELS}.get(which)
    if labels is None:
        raise ValidationError(f"unknown generating set {which!r}; expected G or L")
    return [Word(letters=label, omega=omega) for label in labels]


def orbit(q: LevelQuotient, vertex: str) -> FrozenSet[str]:
    return frozenset(q.points[i] for i in q.group.orbit(q.index_of(vertex)))


def is_level_transitive(gens: Sequence[Word], n: int) -> bool:
    q = build_quotient(gens, n)
    return len(orbit(q, "0" * n)) == 2 ** n


def group_order(q: LevelQuotient) -> int:
    """
    Order of the quotient from a stabilizer chain.

    The base lists the moved points in lexicographic order; the order is the
    product of the basic orbit lengths.
    """
    if q._order is not None:
        return q._order
    group = q.group
    moved = sorted({i for perm in group.generators for i in perm.support()})
    if not moved:
        q._order = 1
        return 1
    base, strong = group.schreier_sims_incremental(base=moved)
    order = 1
    for i, point in enumerate(base):
        fixing = [g for g in strong if all(g.array_form[b] == b for b in base[:i])]
        if fixing:
            order *= len(PermutationGroup(fixing).orbit(point))
    logger.debug(f"level-{q.level} order {order} from a base of length {len(base)}")
    q._order = order
    return order


def enumerate_order(q: LevelQuotient, cap: Optional[int] = None) -> int:
    """Order by breadth-first enumeration of group elements."""
    cap = QUOTIENT_SETTINGS["enumeration_cap"] if cap is None else cap
    generators = [tuple(q.permutation(label).array_form) for label in q.labels]
    identity = tuple(range(q.degree))
    seen = {identity}
    queue = deque([identity])
    while queue:
        element = queue.popleft()
        for gen in generators:
            product = tuple(gen[i] for i in element)
            if product not in seen:
                if len(seen) >= cap:
                    raise ResourceLimitError(f"more than {cap} elements")
                seen.add(product)
                queue.append(product)
    return len(seen)


def same_group(q1: LevelQuotient, q2: LevelQuotient) -> bool:
    """Whether two quotients on the same level generate the same permutation group."""
    if q1.level != q2.level:
        raise LevelMismatchError(f"levels {q1.level} and {q2.level} differ")
    return all(q2.group.contains(p) for p in q1.group.generators) and all(
        q1.group.contains(p) for p in q2.group.generators
    )


def index_in_quotient(omega: OmegaSeq, n: int) -> int:
    """|G_n : L_n| on level n."""
    g_order = group_order(build_quotient(group_generators(omega, "G"), n))
    l_order = group_order(build_quotient(group_generators(omega, "L"), n))
    index, remainder = divmod(g_order, l_order)
    if remainder or index not in (1, 2):
        logger.error(f"unexpected orders |G_{n}|={g_order}, |L_{n}|={l_order}")
        raise ValidationError(f"index of L_{n} in G_{n} must be 1 or 2, got {g_order}/{l_order}")
    return index


def fixes_level(w: Word, n: int) -> bool:
    """Whether w fixes every vertex of level n."""
    return n == 0 or is_trivial_to_depth(w, n - 1)


def subtree_orbit(gens: Sequence[Word], vertex: str, depth: int) -> FrozenSet[str]:
    """Orbit of vertex + 0^depth under gens."""
    start = check_path(vertex) + "0" * depth
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for w in gens:
            image = act(w, current)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return frozenset(seen)


class RistWitness(BaseModel):
    """An element of L acting trivially outside the subtree below a vertex."""

    model_config = ConfigDict(frozen=True)

    word: str
    generators: str
    vertex: str
    verification_depth: int


def _is_rist_element(w: Word, vertex: str) -> bool:
    current = w
    for bit in vertex:
        if current.root_active:
            return False
        children = sections(current)
        sibling = children[1 - int(bit)]
        if not sibling.is_identity and not equal_auto(sibling, Word(omega=w.omega, phase=sibling.phase)):
            return False
        current = children[int(bit)]
    return not equal_auto(current, Word(omega=w.omega, phase=current.phase))


def rist_search(omega: OmegaSeq, u: str, max_len: Optional[int] = None) -> RistWitness:
    """
    First word of L (by length, then A < A^-1 < D) acting only below u.

    Triviality outside the subtree and nontriviality inside are decided
    exactly, so a returned witness is a genuine rigid stabilizer element.
    """
    check_path(u)
    if not omega.is_periodic:
        raise ExactnessError(f"rigid stabilizer search needs a periodic sequence, got {omega}")
    max_len = SEARCH_SETTINGS["rist_max_len"] if max_len is None else max_len
    seen = set()
    for candidate in reduced_token_words(max_len):
        letters = candidate.flatten()
        if not letters or letters in seen:
            continue
        seen.add(letters)
        w = Word(letters=letters, omega=omega)
        if _is_rist_element(w, u):
            logger.info(f"rigid stabilizer witness at {u!r}: {letters} after {len(seen)} candidates")
            return RistWitness(
                word=letters,
                generators=str(candidate),
                vertex=u,
                verification_depth=closure_depth(w),
            )
    raise SearchExhaustedError(f"no element of L acts only below {u!r} over {omega}", max_len)
