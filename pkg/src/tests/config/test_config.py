import os
import tempfile
import unittest

from bulk_spanner.config.loader import Config, merge_dicts


class TestConfig(unittest.TestCase):

    def setUp(self):
        self.c = Config()

    def test_config_import(self):
        self.assertIsNotNone(Config)
        self.assertIsInstance(self.c, Config)

    def test_config_dir(self):
        self.assertTrue(self.c.config_dir.exists())
        self.assertTrue(self.c.config_dir.is_dir())

    def test_load_yaml(self):
        solver_yaml_path = self.c.config_dir / "solver.yaml"
        self.assertTrue(solver_yaml_path.exists())

        yaml_data = self.c.load_yaml(solver_yaml_path)

        self.assertIsInstance(yaml_data, dict)
        for section in ('logging', 'solver', 'rcsp', 'lp', 'junction', 'oracle'):
            self.assertIn(section, yaml_data)
        self.assertEqual(yaml_data['solver']['theta'], "1/2")

    def test_solver_config_loaded(self):
        """The packaged defaults are loaded during initialization."""
        self.assertIsInstance(self.c.solver_config, dict)
        self.assertEqual(self.c.section('junction')['max_tree_nodes'], 60000)
        self.assertEqual(self.c.log_level, "INFO")

    def test_unknown_section(self):
        with self.assertRaises(KeyError) as context:
            self.c.section('network')
        self.assertIn("network", str(context.exception))

    def test_override_file(self):
        # Arrange
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "override.yaml")
            with open(path, 'w') as f:
                f.write("logging:\n  level: debug\nsolver:\n  seed: 11\n")

            # Act
            config = Config(path)

        # Assert
        self.assertEqual(config.log_level, "DEBUG")
        self.assertEqual(config.section('solver')['seed'], 11)
        self.assertEqual(config.section('solver')['theta'], "1/2")

    def test_merge_dicts(self):
        base = {'a': {'x': 1, 'y': 2}, 'b': 3}
        merged = merge_dicts(base, {'a': {'y': 5}, 'c': 4})

        self.assertEqual(merged, {'a': {'x': 1, 'y': 5}, 'b': 3, 'c': 4})
        self.assertEqual(base['a']['y'], 2)


if __name__ == "__main__":
    unittest.main()
