from pathlib import Path
from typing import Dict, Any, Optional, Union

import yaml

class Config:
    """
    Configuration class for the spanner solvers

    Loads the packaged defaults from solver.yaml and, optionally, a user file
    whose keys override the defaults section by section.
    """

    def __init__(self, override_path: Optional[Union[str, Path]] = None):
        self.config_dir = Path(__file__).parent

        self.solver_config = self.load_yaml(self.config_dir / 'solver.yaml')
        if override_path is not None:
            self.solver_config = merge_dicts(self.solver_config, self.load_yaml(override_path))

    def load_yaml(self, file_path: Union[str, Path]) -> Dict[str, Any]:
        """Load YAML file."""
        with open(file_path, 'r') as f:
            return yaml.safe_load(f) or {}

    def section(self, name: str) -> Dict[str, Any]:
        """
        Return one top-level section of the configuration.

        Raises:
            KeyError: If the section does not exist.
        """
        if name not in self.solver_config:
            raise KeyError(f"Unknown configuration section: {name}")
        return dict(self.solver_config[name])

    @property
    def log_level(self) -> str:
        return str(self.solver_config.get('logging', {}).get('level', 'INFO')).upper()


def merge_dicts(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge override into a copy of base."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_dicts(merged[key], value)
        else:
            merged[key] = value
    return merged
