"""
Runtime settings management for mimorelay

Physical parameters live in the JSON system configuration (see config.py).
This module only covers how the tool runs: logging, Monte Carlo defaults,
worker count and output locations.
"""

import os
import yaml
from pathlib import Path
from typing import Dict, Any, List, Optional
from dataclasses import dataclass, field

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv(override=True)
except ImportError:
    pass  # dotenv not installed, continue with system environment variables


PARALLELISM_ENV = "MIMORELAY_PARALLELISM"
LOG_LEVEL_ENV = "MIMORELAY_LOG_LEVEL"


@dataclass
class Settings:
    """Runtime settings for mimorelay."""

    # Logging settings
    log_level: str = "INFO"
    log_file: Optional[str] = "mimorelay.log"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Monte Carlo defaults
    default_seed: int = 0
    default_trials: int = 200
    default_n_values: List[int] = field(default_factory=lambda: [64, 256, 1024, 4096])
    # SI matrices are regenerated per subcarrier instead of held in memory from this N on
    lazy_si_threshold: int = 1024

    # Execution settings
    parallelism: int = 1

    # Output settings
    output_directory: str = "results"
    output_format: str = "json"
    write_html: bool = False

    def __post_init__(self):
        """Apply environment overrides after creation."""
        env_parallelism = os.getenv(PARALLELISM_ENV)
        if env_parallelism:
            try:
                self.parallelism = max(1, int(env_parallelism))
            except ValueError:
                raise ValueError(
                    f"{PARALLELISM_ENV} must be a positive integer, got {env_parallelism!r}"
                )

        env_level = os.getenv(LOG_LEVEL_ENV)
        if env_level:
            self.log_level = env_level.upper()

    @classmethod
    def from_file(cls, settings_path: Optional[str]) -> 'Settings':
        """Load settings from YAML file."""
        if not settings_path or not Path(settings_path).exists():
            return cls()

        with open(settings_path, 'r') as f:
            settings_data = yaml.safe_load(f) or {}

        # Flatten nested sections for the dataclass
        flat = {}

        if 'logging' in settings_data:
            log_config = settings_data['logging'] or {}
            flat['log_level'] = str(log_config.get('level', 'INFO')).upper()
            flat['log_file'] = log_config.get('file', 'mimorelay.log')
            flat['log_format'] = log_config.get('format', cls.log_format)

        if 'simulation' in settings_data:
            sim_config = settings_data['simulation'] or {}
            flat['default_seed'] = int(sim_config.get('seed', 0))
            flat['default_trials'] = int(sim_config.get('trials', 200))
            if 'n_values' in sim_config:
                flat['default_n_values'] = [int(n) for n in sim_config['n_values']]
            flat['lazy_si_threshold'] = int(sim_config.get('lazy_si_threshold', 1024))

        if 'execution' in settings_data:
            exec_config = settings_data['execution'] or {}
            flat['parallelism'] = max(1, int(exec_config.get('parallelism', 1)))

        if 'output' in settings_data:
            output_config = settings_data['output'] or {}
            flat['output_directory'] = output_config.get('directory', 'results')
            flat['output_format'] = output_config.get('format', 'json')
            flat['write_html'] = bool(output_config.get('write_html', False))

        return cls(**flat)

    @classmethod
    def from_yaml(cls, settings_path: Optional[str]) -> 'Settings':
        """Load settings from YAML file (alias for from_file)."""
        return cls.from_file(settings_path)

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to the nested YAML layout."""
        return {
            'logging': {
                'level': self.log_level,
                'file': self.log_file,
                'format': self.log_format
            },
            'simulation': {
                'seed': self.default_seed,
                'trials': self.default_trials,
                'n_values': list(self.default_n_values),
                'lazy_si_threshold': self.lazy_si_threshold
            },
            'execution': {
                'parallelism': self.parallelism
            },
            'output': {
                'directory': self.output_directory,
                'format': self.output_format,
                'write_html': self.write_html
            }
        }
