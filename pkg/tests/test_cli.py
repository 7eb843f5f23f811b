import json
import math
from pathlib import Path
from unittest import TestCase, mock

import click
from click.testing import CliRunner
import pytest

from ergaps import __version__, cli, conf, errors, events
from ergaps.admissible import Tuple
from ergaps.primes import PrimeSetSpec


class ErrorHandlingTestCase(TestCase):
    @mock.patch("ergaps.actions.App.narrowest")
    def test_resource_error_exit_code(self, action_mock):
        action_mock.side_effect = errors.ResourceError("Out of nodes", required=10)
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["narrowest", "--k", "9"])
        self.assertEqual(result.exit_code, 3)
        self.assertIn("Error: Out of nodes", result.output)

    def test_parameter_error_exit_code(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["narrowest", "--k", "13"])
        self.assertEqual(result.exit_code, 2)
        self.assertIn("Error:", result.output)

    def test_unknown_command(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["no-such-command"])
        self.assertEqual(result.exit_code, 2)

    def test_bad_spec(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["equidist", "sw", "--x", "100", "--q", "3", "--spec", "mod=8;classes=x"])
        self.assertEqual(result.exit_code, 2)

    def test_missing_config_file(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(cli.ergaps, ["--config-file", "missing.ini", "example-c"])
        self.assertEqual(result.exit_code, 2)
        self.assertIn("File does not exist", result.output)

    def test_invalid_config_file(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path("settings.ini").write_text("[ergaps]\nformat = yaml\n")
            result = runner.invoke(cli.ergaps, ["--config-file", "settings.ini", "example-c"])
        self.assertEqual(result.exit_code, 2)
        self.assertIn("Unknown output format", result.output)


class ConfigFileTestCase(TestCase):
    def test_seed_from_config_file(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path("settings.ini").write_text("[ergaps]\nseed = 7\n")
            result = runner.invoke(cli.ergaps, ["--config-file", "settings.ini", "example-c"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(json.loads(result.output)["seed"], 7)

    def test_options_override_config_file(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path("settings.ini").write_text("[ergaps]\nseed = 7\n")
            result = runner.invoke(cli.ergaps, ["--config-file", "settings.ini", "--seed", "11", "example-c"])
        self.assertEqual(json.loads(result.output)["seed"], 11)


class ConstantsCommandTestCase(TestCase):
    def test_example_c(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["example-c", "--m", "2"])
        self.assertEqual(result.exit_code, 0)
        report = json.loads(result.output)
        self.assertEqual(report["command"], "example-c")
        self.assertEqual(report["version"], __version__)
        self.assertEqual(report["seed"], conf.Settings().seed)
        self.assertEqual(report["inputs"], {"m": 2})
        self.assertAlmostEqual(report["result"]["k"] / 4.961e10, 1, places=3)
        self.assertTrue(report["result"]["dusart_valid"])

    def test_constants(self):
        runner = CliRunner()
        result = runner.invoke(
            cli.ergaps, ["constants", "--r", "2", "--m", "2", "--delta", "0.25", "--B", "2", "--theta", "0.5"]
        )
        self.assertEqual(result.exit_code, 0)
        report = json.loads(result.output)["result"]
        self.assertTrue(math.isclose(report["k_min"], math.exp(2 + 16 * math.sqrt(2)), rel_tol=1e-12))
        self.assertEqual(report["delta"], "1/4")

    @mock.patch("ergaps.actions.App.constants")
    def test_constants_passes_k(self, action_mock):
        action_mock.return_value = {}
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["constants", "--r", "3", "--m", "2", "--delta", "1", "--k", "5000"])
        self.assertEqual(result.exit_code, 0)
        action_mock.assert_called_once_with(3, 2, 1.0, 1, 0.5, k=5000)

    def test_text_format(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["--format", "text", "example-c"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn(" »» result.dusart_valid", result.output)
        self.assertIn(" »» command", result.output)


class TupleCommandTestCase(TestCase):
    def test_offsets(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["tuple", "--k", "5"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output, "7\n11\n13\n17\n19\n")

    def test_needs_exactly_one_source(self):
        runner = CliRunner()
        self.assertEqual(runner.invoke(cli.ergaps, ["tuple"]).exit_code, 2)

    def test_write_and_check(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(cli.ergaps, ["tuple", "--k", "5", "-o", "tuple.txt"])
            self.assertEqual(result.exit_code, 0)
            self.assertEqual(Path("tuple.txt").read_text(), "7\n11\n13\n17\n19\n")
            self.assertTrue(json.loads(result.output)["result"]["admissible"])

            Path("covered.txt").write_text("0\n2\n4\n")
            result = runner.invoke(cli.ergaps, ["tuple", "--check", "covered.txt"])
        self.assertEqual(result.exit_code, 0)
        report = json.loads(result.output)["result"]
        self.assertFalse(report["admissible"])
        self.assertEqual(report["covering_prime"], 3)

    def test_narrowest(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["narrowest", "--k", "5"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output, "0\n2\n6\n8\n12\n")

    @mock.patch("ergaps.actions.App.narrowest")
    def test_narrowest_not_found(self, action_mock):
        action_mock.return_value = None
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["narrowest", "--k", "5", "--max-diameter", "10"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(json.loads(result.output)["result"], {"found": False})
        action_mock.assert_called_once_with(5, max_diameter=10)

    @mock.patch("ergaps.actions.App.primes_after_k")
    def test_sieve_budget(self, action_mock):
        runner = CliRunner()

        def check_budget(k):
            self.assertEqual(click.get_current_context().obj.settings.sieve_options.budget, 1000)
            return Tuple((2,))

        action_mock.side_effect = check_budget
        result = runner.invoke(cli.ergaps, ["--sieve-budget", "1000", "tuple", "--k", "1"])
        self.assertEqual(result.exit_code, 0)
        action_mock.assert_called_once_with(1)


class FunctionalCommandTestCase(TestCase):
    @mock.patch("ergaps.actions.App.functional")
    def test_defaults(self, action_mock):
        action_mock.return_value = {}
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["functional", "--k", "3"])
        self.assertEqual(result.exit_code, 0)
        action_mock.assert_called_once_with(
            3, 2, 0.5, A=None, method="quadrature", budget=None, sampler="importance"
        )

    def test_workers_do_not_change_results(self):
        runner = CliRunner()
        args = ["functional", "--k", "3", "--A", "1", "--method", "montecarlo", "--budget", "20000"]
        single = runner.invoke(cli.ergaps, ["--workers", "1"] + args)
        several = runner.invoke(cli.ergaps, ["--workers", "4"] + args)
        self.assertEqual(single.exit_code, 0)
        self.assertEqual(single.output, several.output)

    def test_seed_option(self):
        runner = CliRunner()
        args = ["functional", "--k", "3", "--A", "1", "--method", "montecarlo", "--budget", "20000"]
        local = runner.invoke(cli.ergaps, args + ["--seed", "3"])
        self.assertEqual(local.exit_code, 0)
        self.assertEqual(json.loads(local.output)["seed"], 3)
        self.assertEqual(local.output, runner.invoke(cli.ergaps, ["--seed", "3"] + args).output)
        self.assertEqual(local.output, runner.invoke(cli.ergaps, ["--seed", "9"] + args + ["--seed", "3"]).output)

    def test_seed_changes_results(self):
        runner = CliRunner()
        args = ["functional", "--k", "3", "--A", "1", "--method", "montecarlo", "--budget", "20000"]
        first = json.loads(runner.invoke(cli.ergaps, ["--seed", "1"] + args).output)
        second = json.loads(runner.invoke(cli.ergaps, ["--seed", "2"] + args).output)
        self.assertEqual(first["seed"], 1)
        self.assertNotEqual(first["result"]["I_k"], second["result"]["I_k"])

    def test_quadrature_is_refused_above_four(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["functional", "--k", "5", "--A", "1"])
        self.assertEqual(result.exit_code, 2)


class ErCommandTestCase(TestCase):
    def test_list(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["er", "--r", "2", "--X", "30"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.split(), ["6", "10", "14", "15", "21", "22", "26"])

    def test_needs_X_or_constraints(self):
        runner = CliRunner()
        self.assertEqual(runner.invoke(cli.ergaps, ["er", "--r", "2"]).exit_code, 2)

    def test_list_then_gaps(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(cli.ergaps, ["er", "--r", "2", "--X", "30", "-o", "e2.txt"])
            self.assertEqual(result.exit_code, 0)
            summary = json.loads(result.output)["result"]
            self.assertEqual(summary, {"count": 7, "first": 6, "last": 26})

            result = runner.invoke(cli.ergaps, ["--format", "csv", "gaps", "--input", "e2.txt"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output, "gap,count\n1,2\n4,3\n6,1\n")

    def test_gaps_bad_input(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path("bad.txt").write_text("1\nseven\n")
            result = runner.invoke(cli.ergaps, ["gaps", "--input", "bad.txt"])
        self.assertEqual(result.exit_code, 2)

    @mock.patch("ergaps.actions.App.T_N")
    def test_tn(self, action_mock):
        action_mock.return_value = {"T_N": 1}
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["tn", "--N", "1000", "--eta", "0.1"])
        self.assertEqual(result.exit_code, 0)
        args = action_mock.call_args.args
        self.assertEqual(args[:3], (1000, 2, 0.1))
        self.assertEqual(args[3], PrimeSetSpec.all_primes())


class ConvCheckCommandTestCase(TestCase):
    def test_run(self):
        runner = CliRunner()
        result = runner.invoke(
            cli.ergaps, ["conv-check", "--X", "2000", "--range", "2:20", "--last-range", "21:2000"]
        )
        self.assertEqual(result.exit_code, 0)
        report = json.loads(result.output)
        self.assertEqual(report["inputs"]["ranges"], [[2, 20]])
        self.assertTrue(report["result"]["holds"])
        self.assertTrue(report["result"]["dyadic_holds"])

    def test_bad_interval(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["conv-check", "--X", "2000", "--range", "20:2", "--last-range", "21:2000"])
        self.assertEqual(result.exit_code, 2)


class EquidistCommandTestCase(TestCase):
    def test_sw(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["equidist", "sw", "--x", "100", "--q", "2"])
        self.assertEqual(result.exit_code, 0)
        report = json.loads(result.output)
        self.assertEqual(report["command"], "equidist sw")
        self.assertEqual(report["result"]["error"], 1.0)
        self.assertEqual(report["result"]["main_term"], 25)

    def test_sw_modulus_not_coprime_to_B(self):
        runner = CliRunner()
        args = ["equidist", "sw", "--x", "100", "--q", "6", "--spec", "mod=8;classes=1;B=2"]
        result = runner.invoke(cli.ergaps, args)
        self.assertEqual(result.exit_code, 2)

    def test_bv_csv(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["--format", "csv", "equidist", "bv", "--x", "10000"])
        self.assertEqual(result.exit_code, 0)
        lines = result.output.splitlines()
        self.assertEqual(lines[0], "q,error")
        self.assertEqual([line.split(",")[0] for line in lines[1:]], [str(q) for q in range(1, 11)])

    @mock.patch("ergaps.actions.App.decay")
    def test_bv_several_x(self, action_mock):
        action_mock.return_value = [{"x": 100, "sum": 1.0, "main_term": 25, "ratio": 0.04}]
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["equidist", "bv", "--x", "100", "--x", "1000"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(action_mock.call_args.args[:2], ([100, 1000], 0.25))
        self.assertEqual(json.loads(result.output)["result"]["decay"][0]["x"], 100)

    @mock.patch("ergaps.actions.App.bv_er")
    def test_bv_er(self, action_mock):
        action_mock.return_value = mock.Mock(terms={}, to_dict=lambda: {"sum": 0.0})
        runner = CliRunner()
        result = runner.invoke(
            cli.ergaps, ["equidist", "bv-er", "--N", "10000", "--range", "0:0.5", "--range", "0.5:1"]
        )
        self.assertEqual(result.exit_code, 0)
        N, u, r, ranges, _, theta_exponent = action_mock.call_args.args
        self.assertEqual((N, u, r, theta_exponent), (10000, 1.0, 2, 0.25))
        self.assertEqual(ranges, [(0.0, 0.5), (0.5, 1.0)])


class ProgressTestCase(TestCase):
    def tearDown(self):
        events.clear()

    def test_progress_on_stderr(self):
        runner = CliRunner()
        result = runner.invoke(cli.ergaps, ["--progress", "er", "--r", "2", "--X", "30"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn(" » Enumerated 7 number(s).", result.output)
        self.assertIn(" » Sieving up to", result.output)


class DeterminismTestCase(TestCase):
    """Every command writes the same bytes for the same seed, whatever the worker count."""

    commands = {
        "constants": ["constants", "--r", "2", "--m", "2", "--delta", "0.25", "--B", "2"],
        "example-c": ["example-c", "--m", "3"],
        "tuple": ["tuple", "--k", "50"],
        "tuple-check": ["tuple", "--check", "tuple.txt"],
        "narrowest": ["narrowest", "--k", "6"],
        "functional": ["functional", "--k", "3", "--A", "1", "--method", "montecarlo", "--budget", "20000"],
        "functional-quadrature": ["functional", "--k", "2", "--A", "0.5"],
        "er": ["er", "--r", "3", "--X", "5000"],
        "er-constrained": ["er", "--r", "3", "--N", "2000", "--eta", "0.1", "--h", "2", "-o", "eh.txt"],
        "gaps": ["gaps", "--m", "2", "--input", "e2.txt"],
        "tn": ["tn", "--N", "10000", "--eta", "0.15"],
        "conv-check": ["conv-check", "--X", "5000", "--range", "2:50", "--last-range", "51:5000"],
        "equidist-sw": ["equidist", "sw", "--x", "10000", "--q", "7", "--spec", "mod=8;classes=1;B=2"],
        "equidist-bv": ["equidist", "bv", "--x", "1000", "--x", "10000"],
        "equidist-bv-er": ["equidist", "bv-er", "--N", "10000", "--range", "0:0.25", "--range", "0.25:1"],
    }

    def run_all_ways(self, args: list[str]) -> list[str]:
        runner = CliRunner()
        outputs = []
        with runner.isolated_filesystem():
            Path("tuple.txt").write_text("0\n2\n6\n8\n12\n")
            Path("e2.txt").write_text("6\n10\n14\n15\n21\n22\n26\n")
            for extra in ([], [], ["--workers", "1"], ["--workers", "4"]):
                options = ["--seed", "7"] + extra
                result = runner.invoke(cli.ergaps, options + args)
                self.assertEqual(result.exit_code, 0, result.output)
                outputs.append(result.output)
        return outputs

    def test_byte_identical_output(self):
        for name, args in self.commands.items():
            with self.subTest(command=name):
                first, *others = self.run_all_ways(args)
                self.assertTrue(first)
                for output in others:
                    self.assertEqual(output, first)

    def test_byte_identical_csv(self):
        for name in ("gaps", "equidist-bv", "tn"):
            with self.subTest(command=name):
                first, *others = self.run_all_ways(["--format", "csv"] + self.commands[name])
                for output in others:
                    self.assertEqual(output, first)

    @pytest.mark.slow
    def test_report_all(self):
        first, *others = self.run_all_ways(["report-all"])
        for output in others:
            self.assertEqual(output, first)
