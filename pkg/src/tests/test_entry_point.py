import io
import logging
import os
import tempfile
import unittest
from fractions import Fraction
from unittest.mock import patch

import yaml

from bulk_spanner.cli import (
    EXIT_CAP,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_SOLVER,
    EXIT_USAGE,
    EXIT_VALIDATION,
    build_parser,
    main,
    solver_config,
)
from bulk_spanner.config.loader import Config
from bulk_spanner.errors import SolverError
from bulk_spanner.models.documents import InstanceDocument, ReportDocument
from bulk_spanner.models.instance import Demand, Edge, Instance


def hub_document(budget=2):
    return InstanceDocument.from_instance(Instance(
        n=4,
        edges=(
            Edge(tail=0, head=2, length=1, sigma=1),
            Edge(tail=1, head=2, length=1, sigma=1),
            Edge(tail=2, head=3, length=1, sigma=6),
            Edge(tail=0, head=3, length=2, sigma=5),
            Edge(tail=1, head=3, length=2, sigma=5),
        ),
        demands=(Demand(source=0, sink=3, dist_budget=budget), Demand(source=1, sink=3, dist_budget=2)),
    ))


class TestMain(unittest.TestCase):

    def test_imports(self):
        self.assertIsNotNone(main)

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.instance_path = os.path.join(self.tmp.name, 'hub.yaml')
        self.report_path = os.path.join(self.tmp.name, 'report.yaml')
        hub_document().dump(self.instance_path)

    def tearDown(self):
        self.tmp.cleanup()

    def run_main(self, *argv):
        with patch('sys.stdout', new_callable=io.StringIO) as out, \
                patch('sys.stderr', new_callable=io.StringIO) as err:
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_generate(self):
        # Arrange
        path = os.path.join(self.tmp.name, 'random.yaml')

        # Act
        code, _, _ = self.run_main('generate', 'random', '--seed', '4', '-p', 'n=5', '-p', 'k=2', '-o', path)

        # Assert
        self.assertEqual(code, EXIT_OK)
        document = InstanceDocument.load(path)
        self.assertEqual((document.n, len(document.demands)), (5, 2))
        self.assertEqual(document.metadata.seed, 4)

    def test_generate_rejects_unknown_param(self):
        code, _, err = self.run_main('generate', 'random', '-p', 'colour=blue')

        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("validation failed", err)

    def test_solve_then_verify(self):
        # Act
        solved, _, _ = self.run_main('solve', self.instance_path, '--algo', 'k', '-o', self.report_path)
        verified, out, _ = self.run_main('verify', self.instance_path, self.report_path)

        # Assert
        self.assertEqual(solved, EXIT_OK)
        self.assertEqual(ReportDocument.load(self.report_path).cost.total, 8)
        self.assertEqual(verified, EXIT_OK)
        self.assertIn("PASS", out)

    def test_verify_tampered_report(self):
        # Arrange
        self.run_main('solve', self.instance_path, '-o', self.report_path)
        with open(self.report_path) as f:
            data = yaml.safe_load(f)
        data['cost']['total'] = '9/1'
        with open(self.report_path, 'w') as f:
            yaml.safe_dump(data, f)

        # Act
        code, out, _ = self.run_main('verify', self.instance_path, self.report_path)

        # Assert
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("FAIL", out)
        self.assertIn("cost.total: reported 9/1, recomputed 8/1", out)

    def test_solve_to_stdout(self):
        code, out, _ = self.run_main('solve', self.instance_path, '--theta', '1')

        self.assertEqual(code, EXIT_OK)
        self.assertIn("solver: k", out)
        self.assertIn("theta: 1/1", out)

    def test_invalid_instance(self):
        bad = os.path.join(self.tmp.name, 'bad.yaml')
        InstanceDocument(n=2, edges=[Edge(tail=0, head=1, length=1)],
                         demands=[Demand(source=1, sink=0, dist_budget=1)]).dump(bad)

        code, _, err = self.run_main('solve', bad)

        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("no path from 1 to 0", err)

    def test_rcsp_pair(self):
        out_path = os.path.join(self.tmp.name, 'rcsp.yaml')

        code, _, _ = self.run_main('rcsp', self.instance_path, '--pair', '0', '-o', out_path)

        self.assertEqual(code, EXIT_OK)
        with open(out_path) as f:
            result = yaml.safe_load(f)
        self.assertEqual(result['path'], [3])
        self.assertEqual(result['cost'], '5/1')

    def test_rcsp_usage(self):
        code, _, err = self.run_main('rcsp', self.instance_path, '--source', '0')

        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("rcsp needs --pair", err)

    def test_rcsp_unknown_pair(self):
        code, _, err = self.run_main('rcsp', self.instance_path, '--pair', '5')

        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("No demand pair 5", err)

    def test_rcsp_infeasible(self):
        code, _, err = self.run_main('rcsp', self.instance_path, '--source', '3', '--sink', '0', '--budget', '2')

        self.assertEqual(code, EXIT_INFEASIBLE)
        self.assertIn("infeasible", err)

    def test_oracle(self):
        code, _, _ = self.run_main('oracle', self.instance_path, '-o', self.report_path)

        self.assertEqual(code, EXIT_OK)
        report = ReportDocument.load(self.report_path)
        self.assertEqual(report.theta, 0)
        self.assertEqual(report.cost.total, 8)

    def test_oracle_cap(self):
        code, _, err = self.run_main('oracle', self.instance_path, '--max-oracle-vertices', '3')

        self.assertEqual(code, EXIT_CAP)
        self.assertIn("Oracle limited to 3 vertices", err)

    def test_generate_to_stdout_is_pure_yaml(self):
        # Arrange
        with patch('sys.stdout', new_callable=io.StringIO) as out, \
                patch('sys.stderr', new_callable=io.StringIO) as err:

            # Act
            code = main(['generate', 'random', '-v', '-p', 'n=5'])
            logging.getLogger('bulk_spanner').info("log line after generate")

        # Assert
        self.assertEqual(code, EXIT_OK)
        document = InstanceDocument.model_validate(yaml.safe_load(out.getvalue()))
        self.assertEqual(document.n, 5)
        self.assertNotIn("log line after generate", out.getvalue())
        self.assertIn("log line after generate", err.getvalue())

    def test_solver_failure_exit_code(self):
        with patch('bulk_spanner.cli_operations.solve_exact_integer',
                   side_effect=SolverError("Integral resource 0 overshoots: 3 > 2")):
            code, out, err = self.run_main('rcsp', self.instance_path, '--pair', '0', '--exact')

        self.assertEqual(code, EXIT_SOLVER)
        self.assertEqual(out, "")
        self.assertIn("solver failure: Integral resource 0 overshoots", err)

    def test_bad_rational_flag(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as context:
                main(['solve', self.instance_path, '--theta', 'half'])
        self.assertEqual(context.exception.code, 2)


class TestSolverConfig(unittest.TestCase):

    def test_flags_override_defaults(self):
        # Arrange
        args = build_parser().parse_args(['solve', 'x.yaml', '--theta', '1/4', '--algo', 'n45',
                                          '--max-patterns', '10', '--max-tree-nodes', '7'])

        # Act
        cfg = solver_config(args, Config())

        # Assert
        self.assertEqual(cfg.theta, Fraction(1, 4))
        self.assertEqual(cfg.algorithm, 'n45')
        self.assertEqual(cfg.rcsp.max_patterns, 10)
        self.assertEqual(cfg.junction.max_tree_nodes, 7)
        self.assertEqual(cfg.epsilon, Fraction(1, 2))

    def test_oracle_keeps_default_theta(self):
        args = build_parser().parse_args(['oracle', 'x.yaml'])

        cfg = solver_config(args, Config())

        self.assertEqual(args.theta, 0)
        self.assertEqual(cfg.theta, Fraction(1, 2))


if __name__ == '__main__':
    unittest.main()
