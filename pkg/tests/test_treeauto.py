"""
Unit tests for the automorphism engine
"""

import itertools
import random
import unittest
import sys
from fractions import Fraction
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from src.errors import DepthError, ExactnessError, OrderCapError, ValidationError
from src.omega import OmegaSeq
from src.treeauto import (
    GenTables,
    Word,
    act,
    closure_depth,
    equal_auto,
    in_L,
    is_trivial,
    is_trivial_to_depth,
    level_vertices,
    metric_distance,
    order,
    portrait,
    portrait_levels,
    reduce,
    reduce_letters,
    root_active,
    section_at,
    sections,
)

OMEGA_012 = OmegaSeq.parse("(012)")


def random_letters(rng: random.Random, max_length: int) -> str:
    return "".join(rng.choice("abcd") for _ in range(rng.randint(0, max_length)))


def reduced_words(max_length: int):
    """All reduced words up to the given length."""
    yield ""
    frontier = ["a", "b", "c", "d"]
    for _ in range(max_length):
        for letters in frontier:
            yield letters
        frontier = [
            letters + nxt
            for letters in frontier
            for nxt in ("bcd" if letters[-1] == "a" else "a")
        ]


class TestReduction(unittest.TestCase):
    """Test the normal form."""

    def test_examples(self):
        """Test cancellation and Klein merging."""
        cases = {
            "aa": "",
            "bc": "d",
            "abab": "abab",
            "ebe": "b",
            "abba": "",
            "bcd": "",
            "dbc": "",
            "abcab": "adab",
            "e": "",
        }
        for raw, expected in cases.items():
            with self.subTest(raw=raw):
                self.assertEqual(reduce_letters(raw), expected)

    def test_reduced_words_alternate(self):
        """Test that reduced words alternate between a and {b, c, d}."""
        rng = random.Random(7)
        for _ in range(200):
            letters = reduce_letters(random_letters(rng, 20))
            for left, right in zip(letters, letters[1:]):
                self.assertTrue((left == "a") != (right == "a"), letters)

    def test_unknown_letter(self):
        """Test that unknown letters are rejected."""
        with self.assertRaises(ValidationError):
            reduce("abx", OMEGA_012)

    def test_generator_tables_are_fixed(self):
        """Test that the generator tables cannot be altered."""
        self.assertEqual(GenTables().row("b"), ("a", "a", "e"))
        with self.assertRaises(ValidationError):
            GenTables(beta=("a", "e", "e"))

    def test_word_algebra(self):
        """Test products, inverses, powers and conjugation."""
        a = reduce("a", OMEGA_012)
        b = reduce("b", OMEGA_012)
        self.assertEqual((a * b).letters, "ab")
        self.assertEqual((a * b).inverse().letters, "ba")
        self.assertEqual((a * b).power(2).letters, "abab")
        self.assertEqual((a * b).power(-1).letters, "ba")
        self.assertEqual(reduce("d", OMEGA_012).conjugate(a * b).letters, "badab")
        with self.assertRaises(ValidationError):
            a * reduce("b", OMEGA_012, phase=1)


class TestSectionsAndAction(unittest.TestCase):
    """Test root activity, sections and the action on vertices."""

    def test_root_active(self):
        """Test root activity examples."""
        self.assertEqual(root_active(reduce("a", OMEGA_012)), 1)
        self.assertEqual(root_active(reduce("b", OMEGA_012)), 0)
        self.assertEqual(root_active(reduce("aba", OMEGA_012)), 0)

    def test_sections_examples(self):
        """Test sections of the documented words."""
        left, right = sections(reduce("abab", OMEGA_012))
        self.assertEqual((left.letters, right.letters), ("ba", "ab"))
        self.assertEqual((left.phase, right.phase), (1, 1))
        left, right = sections(reduce("a", OMEGA_012))
        self.assertEqual((left.letters, right.letters), ("", ""))
        left, right = sections(reduce("d", OmegaSeq.parse("(120)")))
        self.assertEqual((left.letters, right.letters), ("a", "d"))

    def test_section_at(self):
        """Test sections at deeper vertices."""
        d = reduce("d", OMEGA_012)
        self.assertEqual(section_at(d, "1").letters, "d")
        self.assertEqual(section_at(d, "10").letters, "a")
        self.assertEqual(section_at(d, "11").phase, 2)

    def test_act_examples(self):
        """Test the action on vertices."""
        self.assertEqual(act(reduce("a", OMEGA_012), "01"), "11")
        self.assertEqual(act(reduce("", OMEGA_012), "0110"), "0110")
        b = reduce("b", OMEGA_012)
        self.assertEqual(act(b, "01"), "00")
        self.assertEqual(act(b, "10"), "10")
        self.assertEqual(act(b, "100"), "101")
        self.assertEqual(act(b, ""), "")

    def test_act_is_left_action(self):
        """Test act(gh, v) == act(g, act(h, v))."""
        rng = random.Random(11)
        for omega in [OMEGA_012, OmegaSeq.parse("0(21)"), OmegaSeq.parse("(2)")]:
            for _ in range(100):
                g = reduce(random_letters(rng, 10), omega)
                h = reduce(random_letters(rng, 10), omega)
                v = "".join(rng.choice("01") for _ in range(rng.randint(0, 8)))
                with self.subTest(omega=str(omega), g=g.letters, h=h.letters, v=v):
                    self.assertEqual(act(g * h, v), act(g, act(h, v)))

    def test_act_preserves_prefixes(self):
        """Test that images of prefixes are prefixes of images."""
        w = reduce("abadacab", OMEGA_012)
        for v in level_vertices(6):
            image = act(w, v)
            for k in range(6):
                self.assertEqual(act(w, v[:k]), image[:k])

    def test_section_product_rule(self):
        """Test (gh)_u == g_{h(u)} h_u by comparing portraits."""
        rng = random.Random(3)
        for _ in range(60):
            g = reduce(random_letters(rng, 9), OMEGA_012)
            h = reduce(random_letters(rng, 9), OMEGA_012)
            gh_sections = sections(g * h)
            for u in "01":
                expected = section_at(g, act(h, u)) * section_at(h, u)
                self.assertEqual(
                    portrait_levels(gh_sections[int(u)], 6),
                    portrait_levels(expected, 6),
                )

    def test_section_length_bound(self):
        """Test that sections are at most half as long plus one."""
        rng = random.Random(5)
        for _ in range(300):
            w = reduce(random_letters(rng, 24), OMEGA_012)
            if len(w) < 2:
                continue
            for section in sections(w):
                self.assertLessEqual(len(section), len(w) // 2 + 1)

    def test_depth_error_on_finite_prefix(self):
        """Test that running out of symbols is reported."""
        w = reduce("b", OmegaSeq.parse("01"))
        self.assertEqual(act(w, "100"), "101")
        self.assertEqual(act(w, "110"), "110")
        with self.assertRaises(DepthError):
            act(w, "1101")


class TestPortrait(unittest.TestCase):
    """Test portraits."""

    def test_generator_a(self):
        """Test the portrait of a."""
        tree = portrait(reduce("a", OMEGA_012), 1)
        self.assertEqual(tree.active, 1)
        self.assertEqual([child.active for child in tree.children], [0, 0])
        self.assertEqual(tree.depth, 1)
        self.assertIsNone(portrait(reduce("a", OMEGA_012), 0).children)

    def test_identity(self):
        """Test that the identity portrait is inactive everywhere."""
        self.assertEqual(portrait(reduce("", OMEGA_012), 3).levels(), ["0", "00", "0000", "00000000"])

    def test_generator_d(self):
        """Test the two-level portrait of d."""
        tree = portrait(reduce("d", OMEGA_012), 2)
        self.assertEqual(tree.levels(), ["0", "00", "0010"])
        self.assertEqual(portrait_levels(reduce("d", OMEGA_012), 2), ["0", "00", "0010"])

    def test_json(self):
        """Test portrait serialization."""
        tree = portrait(reduce("a", OMEGA_012), 1)
        self.assertEqual(
            tree.to_json(),
            {
                "active": 1,
                "children": [{"active": 0, "children": None}, {"active": 0, "children": None}],
            },
        )


class TestWordProblem(unittest.TestCase):
    """Test triviality, equality and order."""

    def test_relations_hold_for_all_short_periods(self):
        """Test a^2, b^2, c^2, d^2 and bcd over every period of length <= 4."""
        for length in range(1, 5):
            for period in itertools.product((0, 1, 2), repeat=length):
                omega = OmegaSeq(period=period)
                for relator in ("aa", "bb", "cc", "dd", "bcd"):
                    with self.subTest(period=period, relator=relator):
                        # unreduced on purpose
                        w = Word.model_construct(letters=relator, omega=omega, phase=0)
                        self.assertTrue(is_trivial(w))

    def test_is_trivial_examples(self):
        """Test the basic triviality examples."""
        self.assertTrue(is_trivial(reduce("", OMEGA_012)))
        self.assertTrue(is_trivial(reduce("bcd", OMEGA_012)))
        self.assertFalse(is_trivial(reduce("ab", OMEGA_012)))
        self.assertFalse(is_trivial(reduce("abab", OMEGA_012)))
        self.assertTrue(is_trivial(reduce("adadadad", OMEGA_012)))

    def test_is_trivial_needs_period(self):
        """Test the exactness error."""
        with self.assertRaises(ExactnessError):
            is_trivial(reduce("ab", OmegaSeq.parse("012")))

    def test_is_trivial_to_depth(self):
        """Test the truncated word problem."""
        self.assertFalse(is_trivial_to_depth(reduce("a", OMEGA_012), 3))
        fixed = OmegaSeq.parse("(2)")
        for n in range(7):
            self.assertTrue(is_trivial_to_depth(reduce("aa", OMEGA_012), n))
            self.assertTrue(is_trivial_to_depth(reduce("b", fixed), n))
        self.assertTrue(is_trivial_to_depth(reduce("d", OMEGA_012), 1))
        self.assertFalse(is_trivial_to_depth(reduce("d", OMEGA_012), 2))

    def test_closure_agrees_with_truncation(self):
        """Test is_trivial against the truncated check at closure depth, all words of length <= 8."""
        for letters in reduced_words(8):
            w = reduce(letters, OMEGA_012)
            with self.subTest(word=letters):
                self.assertEqual(is_trivial(w), is_trivial_to_depth(w, closure_depth(w)))

    def test_equal_auto(self):
        """Test exact equality across sequences."""
        swapped = OmegaSeq.parse("(021)")
        self.assertTrue(equal_auto(reduce("b", OMEGA_012), reduce("c", swapped)))
        self.assertTrue(equal_auto(reduce("b", OMEGA_012), reduce("bd", swapped)))
        self.assertTrue(equal_auto(reduce("d", OMEGA_012), reduce("d", swapped)))
        self.assertFalse(equal_auto(reduce("a", OMEGA_012), reduce("b", swapped)))
        self.assertFalse(equal_auto(reduce("c", OMEGA_012), reduce("c", swapped)))
        w = reduce("abacabad", OMEGA_012)
        self.assertTrue(equal_auto(w, w))

    def test_equal_auto_matches_word_problem(self):
        """Test that g == h exactly when g^-1 h is trivial."""
        rng = random.Random(17)
        for _ in range(100):
            g = reduce(random_letters(rng, 8), OMEGA_012)
            h = reduce(random_letters(rng, 8), OMEGA_012)
            self.assertEqual(equal_auto(g, h), is_trivial(g.inverse() * h))

    def test_order_examples(self):
        """Test element orders in the (012) group."""
        cases = {"a": 2, "": 1, "b": 2, "ad": 4, "ac": 8, "ab": 16}
        for letters, expected in cases.items():
            with self.subTest(word=letters):
                self.assertEqual(order(reduce(letters, OMEGA_012)), expected)

    def test_order_is_exact(self):
        """Test w^order trivial and w^(order/2) nontrivial on random words."""
        rng = random.Random(23)
        for _ in range(40):
            w = reduce(random_letters(rng, 10), OMEGA_012)
            k = order(w)
            self.assertTrue(is_trivial(w.power(k)))
            if k > 1:
                self.assertFalse(is_trivial(w.power(k // 2)))

    def test_order_cap(self):
        """Test that the exponent cap is reported."""
        with self.assertRaises(OrderCapError):
            order(reduce("ab", OMEGA_012), cap_exp=2)


class TestMetricAndParity(unittest.TestCase):
    """Test the tree metric and membership in L."""

    def test_metric_examples(self):
        """Test distances between generators."""
        self.assertEqual(metric_distance(reduce("a", OMEGA_012), reduce("", OMEGA_012)), Fraction(1))
        w = reduce("abad", OMEGA_012)
        self.assertEqual(metric_distance(w, w), Fraction(0))
        # b and c agree on levels <= 2 and differ below vertex 10
        self.assertEqual(metric_distance(reduce("b", OMEGA_012), reduce("c", OMEGA_012)), Fraction(1, 4))

    def test_metric_with_depth_bound(self):
        """Test distances over a prefix-only sequence."""
        prefix = OmegaSeq.parse("012")
        b, c = reduce("b", prefix), reduce("c", prefix)
        self.assertEqual(metric_distance(b, c, depth=3), Fraction(1, 4))
        self.assertEqual(metric_distance(b, c, depth=2), Fraction(1, 4))
        self.assertEqual(metric_distance(b, b, depth=3), Fraction(1, 8))
        with self.assertRaises(ExactnessError):
            metric_distance(b, c)

    def test_metric_is_ultrametric(self):
        """Test symmetry and the strong triangle inequality."""
        rng = random.Random(29)
        for _ in range(60):
            g, h, k = (reduce(random_letters(rng, 8), OMEGA_012) for _ in range(3))
            self.assertEqual(metric_distance(g, h), metric_distance(h, g))
            self.assertLessEqual(
                metric_distance(g, h),
                max(metric_distance(g, k), metric_distance(k, h)),
            )

    def test_in_L(self):
        """Test membership in L."""
        self.assertTrue(in_L(reduce("ab", OMEGA_012)))
        self.assertTrue(in_L(reduce("d", OMEGA_012)))
        self.assertFalse(in_L(reduce("a", OMEGA_012)))
        self.assertFalse(in_L(reduce("c", OMEGA_012)))

    def test_in_L_is_a_homomorphism(self):
        """Test in_L(gh) == (in_L(g) == in_L(h))."""
        rng = random.Random(31)
        for _ in range(200):
            g = reduce(random_letters(rng, 10), OMEGA_012)
            h = reduce(random_letters(rng, 10), OMEGA_012)
            self.assertEqual(in_L(g * h), in_L(g) == in_L(h))


if __name__ == '__main__':
    unittest.main()
