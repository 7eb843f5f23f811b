import os
from pathlib import Path
from unittest import mock

from ergaps import conf

from .helpers import TestCase


class SettingsTestCase(TestCase):
    def write_config(self, text: str) -> Path:
        path = Path(self.TEST_DIR) / "settings.ini"
        path.write_text(text)
        return path

    def test_defaults(self):
        settings = conf.Settings()
        self.assertEqual(settings.seed, 20190601)
        self.assertEqual(settings.workers, 1)
        self.assertEqual(settings.format, "json")
        self.assertEqual(settings.float_digits, 15)
        self.assertEqual(settings.sieve_options.budget, 200_000_000)
        self.assertEqual(settings.sieve_options.segment_size, 2**18)
        self.assertEqual(settings.numeric_options.quad_tolerance, 1e-10)
        self.assertEqual(settings.numeric_options.quad_limit, 200)
        self.assertEqual(settings.numeric_options.mc_budget, 200_000)
        self.assertEqual(settings.numeric_options.mc_chunk_size, 2**15)
        self.assertEqual(settings.numeric_options.search_node_budget, 5_000_000)
        self.assertEqual(settings.numeric_options.q_cap, 1_000_000)

    def test_cache_dir_from_environment(self):
        with mock.patch.dict(os.environ, {conf.SIEVE_CACHE_ENV: self.TEST_DIR}):
            self.assertEqual(conf.SieveOptions().cache_dir, Path(self.TEST_DIR))
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertIsNone(conf.SieveOptions().cache_dir)

    def test_load(self):
        path = self.write_config(
            "[ergaps]\n"
            "debug = yes\n"
            "seed = 42\n"
            "workers = 4\n"
            "format = csv\n"
            "\n"
            "[ergaps.sieve]\n"
            "budget = 1000000\n"
            "\n"
            "[ergaps.numeric]\n"
            "mc_budget = 5000\n"
            "quad_tolerance = 1e-8\n"
        )
        settings = conf.Settings.load(path)
        self.assertTrue(settings.debug)
        self.assertEqual(settings.seed, 42)
        self.assertEqual(settings.workers, 4)
        self.assertEqual(settings.format, "csv")
        self.assertEqual(settings.sieve_options.budget, 1_000_000)
        self.assertEqual(settings.sieve_options.segment_size, 2**18)
        self.assertEqual(settings.numeric_options.mc_budget, 5000)
        self.assertEqual(settings.numeric_options.quad_tolerance, 1e-8)
        self.assertEqual(settings.numeric_options.quad_limit, 200)

    def test_load_missing_file(self):
        self.assertEqual(conf.Settings.load(Path(self.TEST_DIR) / "missing.ini"), conf.Settings())

    def test_load_unknown_format(self):
        path = self.write_config("[ergaps]\nformat = yaml\n")
        with self.assertRaisesRegex(ValueError, "Unknown output format 'yaml'"):
            conf.Settings.load(path)

    def test_str(self):
        text = str(conf.Settings())
        self.assertIn("seed = 20190601", text)
        self.assertIn("sieve.budget = 200000000", text)
        self.assertIn("numeric.q_cap = 1000000", text)
