"""
Unit tests for the parity invariant
"""

import itertools
import random
import unittest
import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from src.errors import (
    DegenerateTruncationError,
    InconsistentTripleError,
    LengthMismatchError,
    MalformedTripleError,
    RangeError,
    ValidationError,
)
from src.invariant import (
    BitTables,
    InvariantTriple,
    ParityVector,
    distinguish,
    invariant_triple,
    parity_by_count,
    parity_formula,
    parity_hom,
    parity_span,
    reconstruct_omega,
)
from src.omega import PI, OmegaSeq, apply_perm
from src.treeauto import reduce

OMEGA_012 = OmegaSeq.parse("(012)")


def random_letters(rng: random.Random, max_length: int) -> str:
    return "".join(rng.choice("abcd") for _ in range(rng.randint(0, max_length)))


class TestParityVectors(unittest.TestCase):
    """Test parity vectors of single words."""

    def test_formula_examples(self):
        """Test p(ab) and p(d) over (012)."""
        self.assertEqual(str(parity_formula("ab", OMEGA_012, 4)), "1110")
        self.assertEqual(str(parity_formula("d", OMEGA_012, 4)), "0011")
        self.assertEqual(str(parity_formula("d", OMEGA_012, 0)), "")

    def test_word_examples(self):
        """Test the homomorphism and the count on small words."""
        cases = {"ab": "1110", "d": "0011", "ad": "1011", "": "0000", "abab": "0000"}
        for letters, expected in cases.items():
            with self.subTest(word=letters):
                w = reduce(letters, OMEGA_012)
                self.assertEqual(str(parity_hom(w, 4)), expected)
                self.assertEqual(str(parity_by_count(w, 4)), expected)

    def test_formula_matches_words(self):
        """Test the closed forms against the generator words."""
        for omega_text in ["(012)", "(0112)", "2(10)", "(1)"]:
            omega = OmegaSeq.parse(omega_text)
            for gen in ("ab", "d"):
                with self.subTest(omega=omega_text, gen=gen):
                    self.assertEqual(parity_formula(gen, omega, 9), parity_hom(reduce(gen, omega), 9))
                    self.assertEqual(parity_formula(gen, omega, 9), parity_by_count(reduce(gen, omega), 9))

    def test_formula_on_all_short_prefixes(self):
        """Test the three computations on every prefix of length 4 at depth 5."""
        for symbols in itertools.product((0, 1, 2), repeat=4):
            omega = OmegaSeq(prefix=symbols)
            for gen in ("ab", "d"):
                w = reduce(gen, omega)
                with self.subTest(prefix=symbols, gen=gen):
                    expected = parity_formula(gen, omega, 5)
                    self.assertEqual(parity_hom(w, 5), expected)
                    self.assertEqual(parity_by_count(w, 5), expected)

    def test_count_reads_only_needed_symbols(self):
        """Test that depth n counting works on a prefix of n - 1 symbols."""
        omega = OmegaSeq.parse("01")
        for gen in ("ab", "d"):
            with self.subTest(gen=gen):
                w = reduce(gen, omega)
                self.assertEqual(parity_by_count(w, 3), parity_hom(w, 3))
                self.assertEqual(parity_by_count(w, 3), parity_formula(gen, omega, 3))
        self.assertEqual(str(parity_by_count(reduce("d", omega), 3)), "001")

    def test_formula_rejects_other_generators(self):
        """Test that only ab and d have closed forms."""
        with self.assertRaises(ValidationError):
            parity_formula("c", OMEGA_012, 4)

    def test_count_agrees_with_homomorphism(self):
        """Test both computations on random words to depth 10."""
        rng = random.Random(53)
        for omega_text in ["(012)", "(021)", "1(220)"]:
            omega = OmegaSeq.parse(omega_text)
            for _ in range(60):
                w = reduce(random_letters(rng, 16), omega)
                with self.subTest(omega=omega_text, word=w.letters):
                    self.assertEqual(parity_by_count(w, 10), parity_hom(w, 10))

    def test_count_is_a_homomorphism(self):
        """Test p(gh) == p(g) + p(h) by counting."""
        rng = random.Random(59)
        for _ in range(80):
            g = reduce(random_letters(rng, 10), OMEGA_012)
            h = reduce(random_letters(rng, 10), OMEGA_012)
            self.assertEqual(parity_by_count(g * h, 8), parity_by_count(g, 8) ^ parity_by_count(h, 8))

    def test_vector_algebra(self):
        """Test addition and the length check."""
        v = ParityVector.parse("1011")
        self.assertTrue((v ^ v).is_zero)
        self.assertEqual(ParityVector.zero(3), ParityVector.parse("000"))
        with self.assertRaises(LengthMismatchError):
            v ^ ParityVector.parse("101")
        with self.assertRaises(ValidationError):
            ParityVector.parse("10a1")

    def test_bit_tables(self):
        """Test the fixed bit tables."""
        self.assertEqual(BitTables().zeta_bit, (1, 0, 1))
        with self.assertRaises(ValidationError):
            BitTables(beta_bit=(1, 0, 0))


class TestInvariantTriple(unittest.TestCase):
    """Test triples and reconstruction."""

    def test_triple_example(self):
        """Test the (012) triple at depth 4."""
        triple = invariant_triple(OMEGA_012, 4)
        self.assertEqual(triple.as_set(), frozenset({"0011", "1101", "1110"}))
        self.assertEqual(str(triple), "{0011, 1101, 1110}")
        self.assertEqual(reconstruct_omega(triple), ("012", "021"))

    def test_reconstruct_round_trip(self):
        """Test every prefix of length 6 except the degenerate all-zero one."""
        for symbols in itertools.product((0, 1, 2), repeat=6):
            text = "".join(map(str, symbols))
            omega = OmegaSeq(prefix=symbols)
            if text == "000000":
                with self.assertRaises(DegenerateTruncationError):
                    invariant_triple(omega, 7)
                continue
            swapped = "".join(str(PI(s)) for s in symbols)
            self.assertEqual(set(reconstruct_omega(invariant_triple(omega, 7))), {text, swapped})

    def test_symbol_swap_preserves_image(self):
        """Test that omega and its 1<->2 swap have the same parity image."""
        rng = random.Random(61)
        for _ in range(100):
            period = tuple(rng.choice((0, 1, 2)) for _ in range(rng.randint(1, 6)))
            omega = OmegaSeq(period=period)
            depth = rng.randint(2, 12)
            self.assertEqual(parity_span(omega, depth), parity_span(apply_perm(omega, PI), depth))

    def test_eventually_zero_sequence(self):
        """Test a sequence whose tail is constant 0."""
        triple = invariant_triple(OmegaSeq.parse("1(0)"), 5)
        self.assertEqual(reconstruct_omega(triple), ("1000", "2000"))

    def test_degenerate_and_range(self):
        """Test the constant-0 sequence and small depths."""
        for depth in (2, 5, 9):
            with self.assertRaises(DegenerateTruncationError):
                invariant_triple(OmegaSeq.parse("(0)"), depth)
        with self.assertRaises(RangeError):
            invariant_triple(OMEGA_012, 1)

    def test_malformed_triples(self):
        """Test triple validation."""
        bad = [
            ["0011", "1101", "0011"],
            ["0011", "1100", "1110"],
            ["0011", "110", "1110"],
            ["0000", "0011", "0011"],
        ]
        for texts in bad:
            with self.subTest(texts=texts):
                with self.assertRaises(MalformedTripleError):
                    InvariantTriple.parse(texts)
        with self.assertRaises(MalformedTripleError):
            InvariantTriple.parse(["0011", "1101"])
        with self.assertRaises(MalformedTripleError):
            reconstruct_omega(InvariantTriple.parse(["0110", "0011", "0101"]))

    def test_inconsistent_triple(self):
        """Test a level where neither d nor ab is active."""
        with self.assertRaises(InconsistentTripleError):
            reconstruct_omega(InvariantTriple.parse(["0100", "1000", "1100"]))


class TestDistinguish(unittest.TestCase):
    """Test the comparison of two sequences."""

    def test_distinct(self):
        """Test sequences with different parity images."""
        verdict = distinguish(OMEGA_012, OmegaSeq.parse("(001122)"), 7)
        self.assertEqual(verdict.verdict, "DISTINCT")
        self.assertEqual(str(verdict), "DISTINCT")

    def test_equivalent(self):
        """Test a sequence against its symbol swap."""
        verdict = distinguish(OMEGA_012, OmegaSeq.parse("(021)"), 10)
        self.assertEqual(verdict.verdict, "EQUIVALENT")
        self.assertEqual(str(verdict), "EQUIVALENT (consistent up to depth 10)")

    def test_range(self):
        """Test that the depth must be positive."""
        with self.assertRaises(RangeError):
            distinguish(OMEGA_012, OMEGA_012, 0)


if __name__ == '__main__':
    unittest.main()
