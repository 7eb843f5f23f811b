import random

import pytest

from ergaps import admissible, errors, events, primes
from ergaps.admissible import Tuple

from .helpers import TestCase

#: Minimal diameters of admissible k-tuples.
NARROWEST_DIAMETERS = {1: 0, 2: 2, 3: 6, 4: 8, 5: 12, 6: 16, 7: 20, 8: 26}


class TupleTestCase(TestCase):
    def test_properties(self):
        t = Tuple((7, 11, 13, 17, 19))
        self.assertEqual(t.k, 5)
        self.assertEqual(len(t), 5)
        self.assertEqual(t.diameter, 12)
        self.assertEqual(list(t), [7, 11, 13, 17, 19])
        self.assertEqual(t.shifted(-7), Tuple((0, 4, 6, 10, 12)))

    def test_must_be_ascending(self):
        for offsets in ((), (1, 1), (3, 2)):
            with self.subTest(offsets=offsets):
                with self.assertRaises(errors.ParameterError):
                    Tuple(offsets)

    def test_text_format(self):
        t = Tuple((0, 2, 6))
        self.assertEqual(t.to_text(), "0\n2\n6\n")
        self.assertEqual(Tuple.from_text("0\n2\n6\n"), t)
        with self.assertRaises(errors.ParameterError):
            Tuple.from_text("0\ntwo\n")

    def test_load(self):
        path = f"{self.TEST_DIR}/tuple.txt"
        with open(path, "w") as fh:
            fh.write("7\n11\n13\n")
        self.assertEqual(Tuple.load(path), Tuple((7, 11, 13)))


class IsAdmissibleTestCase(TestCase):
    def test_admissible_with_witness(self):
        result = admissible.is_admissible(Tuple((0, 2, 6)))
        self.assertTrue(result)
        self.assertIsNone(result.covering_prime)
        self.assertEqual(result.missed_residues, {2: 1, 3: 1})

    def test_not_admissible(self):
        for offsets, covering_prime in (((0, 1), 2), ((0, 2, 4), 3), ((0, 6, 12, 18, 24), 5)):
            with self.subTest(offsets=offsets):
                result = admissible.is_admissible(Tuple(offsets))
                self.assertFalse(result)
                self.assertEqual(result.covering_prime, covering_prime)

    def test_single_offset(self):
        self.assertTrue(admissible.is_admissible(Tuple((5,))))

    def test_primes_up_to_k_suffice(self):
        rng = random.Random(7)
        for _ in range(200):
            k = rng.randint(2, 8)
            t = Tuple(tuple(sorted(rng.sample(range(0, 60, 2), k))))
            with self.subTest(offsets=t.offsets):
                self.assertEqual(
                    bool(admissible.is_admissible(t)),
                    bool(admissible.is_admissible(t, primes_upto=t.diameter + 1)),
                )

    def test_shift_invariance(self):
        rng = random.Random(11)
        for _ in range(100):
            t = Tuple(tuple(sorted(rng.sample(range(100), rng.randint(2, 7)))))
            shift = rng.randint(-1000, 1000)
            with self.subTest(offsets=t.offsets, shift=shift):
                self.assertEqual(bool(admissible.is_admissible(t)), bool(admissible.is_admissible(t.shifted(shift))))


class ConstructPrimesGtKTestCase(TestCase):
    def test_k_5(self):
        self.assertEqual(admissible.construct_primes_gt_k(5), Tuple((7, 11, 13, 17, 19)))

    def test_k_1(self):
        self.assertEqual(admissible.construct_primes_gt_k(1), Tuple((2,)))

    def test_admissible(self):
        for k in (2, 5, 10, 50, 1000):
            with self.subTest(k=k):
                t = admissible.construct_primes_gt_k(k)
                self.assertEqual(t.k, k)
                self.assertGreater(t.offsets[0], k)
                self.assertTrue(admissible.is_admissible(t))

    def test_uses_given_table(self):
        table = primes.sieve_primes(1000)
        self.assertEqual(admissible.construct_primes_gt_k(5, table=table), Tuple((7, 11, 13, 17, 19)))

    def test_table_too_small(self):
        with self.assertRaises(errors.ResourceError) as cm:
            admissible.construct_primes_gt_k(50, table=primes.sieve_primes(100))
        self.assertEqual(cm.exception.required, admissible.primes_gt_k_limit_estimate(50))

    def test_budget(self):
        with self.assertRaises(errors.ResourceError):
            admissible.construct_primes_gt_k(1000, budget=1000)

    def test_invalid_k(self):
        with self.assertRaises(errors.ParameterError):
            admissible.construct_primes_gt_k(0)


class DusartTestCase(TestCase):
    def test_diameter_bound(self):
        bound = admissible.dusart_diameter_bound(100)
        self.assertFalse(bound.valid)
        self.assertGreater(bound.value, 0)
        self.assertTrue(admissible.dusart_diameter_bound(5e10).valid)

    def test_prime_count_bound(self):
        bound = admissible.dusart_prime_count_bound(10**6)
        self.assertAlmostEqual(bound.value, 77621.6, delta=0.5)
        self.assertLess(bound.value, 78498)

    def test_invalid_k(self):
        for func in (admissible.dusart_diameter_bound, admissible.dusart_prime_count_bound):
            with self.subTest(func=func.__name__):
                with self.assertRaises(errors.ParameterError):
                    func(1)

    def test_bounds_narrowest(self):
        for k in range(2, 8):
            with self.subTest(k=k):
                self.assertLessEqual(
                    admissible.narrowest_search(k).diameter, admissible.construct_primes_gt_k(k).diameter
                )


class NarrowestSearchTestCase(TestCase):
    def test_diameters(self):
        for k, diameter in NARROWEST_DIAMETERS.items():
            with self.subTest(k=k):
                t = admissible.narrowest_search(k)
                self.assertEqual(t.diameter, diameter)
                self.assertEqual(t.offsets[0], 0)
                self.assertTrue(admissible.is_admissible(t))

    def test_lexicographically_first(self):
        self.assertEqual(admissible.narrowest_search(5), Tuple((0, 2, 6, 8, 12)))
        self.assertEqual(admissible.narrowest_search(3), Tuple((0, 2, 6)))

    def test_minimal_by_exhaustion(self):
        self.assertIsNone(admissible.narrowest_search(5, max_diameter=10))

    def test_workers_do_not_change_result(self):
        for k in (4, 6, 7):
            with self.subTest(k=k):
                self.assertEqual(admissible.narrowest_search(k, workers=4), admissible.narrowest_search(k, workers=1))

    def test_node_budget(self):
        with self.assertRaises(errors.ResourceError):
            admissible.narrowest_search(8, node_budget=50)

    def test_invalid_k(self):
        for k in (0, 13):
            with self.subTest(k=k):
                with self.assertRaises(errors.ParameterError):
                    admissible.narrowest_search(k)

    def test_events(self):
        exhausted = []
        events.register(events.Event.TUPLE_SEARCH_DIAMETER_EXHAUSTED, lambda ctx: exhausted.append(ctx.diameter))
        admissible.narrowest_search(5)
        self.assertEqual(exhausted, [8, 10])


@pytest.mark.slow
class LargeTupleTestCase(TestCase):
    def test_primes_after_k_admissible(self):
        t = admissible.construct_primes_gt_k(10**5)
        self.assertTrue(admissible.is_admissible(t))

    def test_narrowest_search(self):
        for k, diameter in ((9, 30), (10, 32)):
            with self.subTest(k=k):
                self.assertEqual(admissible.narrowest_search(k).diameter, diameter)
