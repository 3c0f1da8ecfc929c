"""fdqc Configuration Management.

This module handles configuration loading and validation from multiple sources
with a clear priority order:

1. Default config (config/default.yaml)
2. Custom config file (via FDQC_CONFIG env var or --config flag)
3. Environment variables (FDQC_<SECTION>_<OPTION>)
4. Runtime overrides (passed to functions)

Pydantic validates the merged result when it is installed; otherwise the
merged dictionary is used as is.

Configuration Sections:
    - core: version, log level, output directory
    - protocol: comparison tolerance, payload snapshots, key refresh, defaults
    - verification: sweep worker threads and fuzzing sizes
    - report: JSON indentation of printed documents

Example:
    Basic configuration loading::

        from fdqc.config import load_config

        config = load_config()
        tol = config['protocol']['tolerance']  # 1e-10

    Environment variable override::

        $ export FDQC_VERIFICATION_FUZZ_PROGRAMS=50
        $ fdqc verify --sweep all

Attributes:
    HAVE_PYDANTIC (bool): Whether Pydantic is available for validation
    HAVE_YAML (bool): Whether PyYAML is available for config file loading
"""

import logging
import os
from pathlib import Path
from typing import Any

from .exceptions import FDQCError

logger = logging.getLogger(__name__)

# Optional Pydantic import for validation
try:
    from pydantic import BaseModel, Field, ValidationError

    HAVE_PYDANTIC = True
except ImportError:
    HAVE_PYDANTIC = False
    BaseModel = object  # type: ignore

    def Field(*args, **kwargs):  # noqa: N802
        """Stub for Field when Pydantic is not installed."""
        return

    ValidationError = Exception  # type: ignore

# Optional YAML import
try:
    import yaml

    HAVE_YAML = True
except ImportError:
    HAVE_YAML = False
    yaml = None  # type: ignore

ENV_PREFIX = "FDQC_"


# =============================================================================
# Configuration Schema (Pydantic Models if available)
# =============================================================================

if HAVE_PYDANTIC:

    class CoreConfig(BaseModel):
        """Core settings: version string, log level and output directory."""

        version: str = "1.0.0"
        log_level: str = Field(
            default="WARNING", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$"
        )
        output_dir: str = "fdqc_output"

    class ProtocolConfig(BaseModel):
        """Delegation session defaults.

        Attributes:
            tolerance (float): Fidelity slack for state comparisons, in (0, 1e-3]
            snapshots (bool): Keep 9-wire payload snapshots in transcripts
            refresh_keys (bool): Re-encrypt the held register before every round
            default_mode (str): fdqc or hdqc
            default_seed (int): Seed used when the CLI gets none
        """

        tolerance: float = Field(default=1e-10, gt=0, le=1e-3)
        snapshots: bool = False
        refresh_keys: bool = False
        default_mode: str = Field(default="fdqc", pattern="^(fdqc|hdqc)$")
        default_seed: int = Field(default=0, ge=0, lt=2**64)

    class VerificationConfig(BaseModel):
        """Sweep settings; ``worker_threads=0`` lets the executor choose."""

        worker_threads: int = Field(default=0, ge=0)
        fuzz_programs: int = Field(default=200, ge=1)
        fuzz_max_length: int = Field(default=10, ge=0)
        fuzz_max_qubits: int = Field(default=3, ge=1, le=6)
        fuzz_seed: int = Field(default=0, ge=0)

    class ReportConfig(BaseModel):
        indent: int = Field(default=2, ge=0, le=8)

    class FDQCConfig(BaseModel):
        """Complete fdqc configuration."""

        core: CoreConfig = Field(default_factory=CoreConfig)
        protocol: ProtocolConfig = Field(default_factory=ProtocolConfig)
        verification: VerificationConfig = Field(default_factory=VerificationConfig)
        report: ReportConfig = Field(default_factory=ReportConfig)

        class Config:
            extra = "allow"


# =============================================================================
# Configuration Loader
# =============================================================================


class ConfigurationError(FDQCError):
    """Raised when configuration is invalid or cannot be loaded."""


class ConfigLoader:
    """Loads and validates configuration from multiple sources.

    The configuration priority order (highest to lowest):
        1. Runtime overrides (config_dict parameter)
        2. Environment variables (FDQC_* prefix)
        3. Custom config file (via parameter or FDQC_CONFIG env var)
        4. Default config (config/default.yaml)

    Example:
        >>> loader = ConfigLoader()
        >>> config = loader.load(config_dict={'verification': {'fuzz_programs': 20}})
        >>> loader.get('verification', 'fuzz_programs')
        20
    """

    def __init__(self):
        self._config: dict[str, Any] = {}
        self._loaded = False

    def load(
        self,
        config_file: str | Path | None = None,
        config_dict: dict[str, Any] | None = None,
        validate: bool = True,
    ) -> dict[str, Any]:
        """Load configuration from multiple sources.

        Raises:
            ConfigurationError: If a file cannot be loaded, YAML parsing fails,
                or Pydantic validation fails.
        """
        try:
            merged = self._load_default_config()

            if config_file is not None:
                merged = self._deep_merge(merged, self._load_yaml_config(config_file))

            env_config_file = os.environ.get(f"{ENV_PREFIX}CONFIG")
            if env_config_file:
                merged = self._deep_merge(merged, self._load_yaml_config(env_config_file))

            merged = self._deep_merge(merged, self._load_env_overrides())

            if config_dict:
                merged = self._deep_merge(merged, config_dict)

            if validate and HAVE_PYDANTIC:
                try:
                    validated = FDQCConfig(**merged)
                    self._config = validated.model_dump()
                except ValidationError as e:
                    logger.error(f"Configuration validation failed: {e}")
                    raise ConfigurationError(f"Invalid configuration: {e}")
            else:
                self._config = merged

            self._loaded = True
            return self._config

        except Exception as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"Failed to load configuration: {e}")

    def _load_default_config(self) -> dict[str, Any]:
        """Load config/default.yaml, falling back to hardcoded defaults."""
        config_dir = Path(__file__).parent.parent.parent / "config"
        default_config_path = config_dir / "default.yaml"

        if default_config_path.exists() and HAVE_YAML:
            return self._load_yaml_config(default_config_path)

        logger.debug("Could not load default.yaml, using hardcoded defaults")
        return self._get_hardcoded_defaults()

    def _load_yaml_config(self, path: str | Path) -> dict[str, Any]:
        if not HAVE_YAML:
            raise ConfigurationError("YAML support not available. Install with: pip install pyyaml")

        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"Configuration file not found: {path}")

        try:
            with path.open(encoding="utf-8") as f:
                config = yaml.safe_load(f)
                if not isinstance(config, dict):
                    raise ConfigurationError(
                        f"Invalid YAML config in {path}: expected dict, got {type(config)}"
                    )
                return config
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Failed to parse YAML config {path}: {e}")

    def _load_env_overrides(self) -> dict[str, Any]:
        """Collect ``FDQC_SECTION_OPTION`` variables (split on the first underscore).

        ``FDQC_CONFIG`` names a file and is not an override.
        """
        overrides: dict[str, Any] = {}
        for key, value in os.environ.items():
            if not key.startswith(ENV_PREFIX) or key == f"{ENV_PREFIX}CONFIG":
                continue
            parts = key[len(ENV_PREFIX) :].split("_", 1)
            if len(parts) == 2:
                section, option = parts
                self._set_nested(
                    overrides, (section.lower(), option.lower()), self._convert_type(value)
                )
        return overrides

    def _set_nested(self, d: dict[str, Any], path: tuple, value: Any) -> None:
        for key in path[:-1]:
            d = d.setdefault(key, {})
        d[path[-1]] = value

    def _convert_type(self, value: str) -> Any:
        """Convert an environment string to bool, int, float or str.

        Examples:
            >>> loader._convert_type('true')
            True
            >>> loader._convert_type('42')
            42
            >>> loader._convert_type('1e-9')
            1e-09
        """
        if value.lower() in ("true", "yes", "on"):
            return True
        if value.lower() in ("false", "no", "off"):
            return False

        try:
            return int(value)
        except ValueError:
            pass

        try:
            return float(value)
        except ValueError:
            pass

        return value

    def _deep_merge(self, base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
        """Deep merge two dictionaries, override takes precedence."""
        result = base.copy()
        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value
        return result

    def _get_hardcoded_defaults(self) -> dict[str, Any]:
        return {
            "core": {
                "version": "1.0.0",
                "log_level": "WARNING",
                "output_dir": "fdqc_output",
            },
            "protocol": {
                "tolerance": 1e-10,
                "snapshots": False,
                "refresh_keys": False,
                "default_mode": "fdqc",
                "default_seed": 0,
            },
            "verification": {
                "worker_threads": 0,
                "fuzz_programs": 200,
                "fuzz_max_length": 10,
                "fuzz_max_qubits": 3,
                "fuzz_seed": 0,
            },
            "report": {"indent": 2},
        }

    def get(self, *keys: str, default: Any = None) -> Any:
        """Get a configuration value using nested keys.

        Raises:
            ConfigurationError: If configuration has not been loaded
        """
        if not self._loaded:
            raise ConfigurationError("Configuration not loaded. Call load() first.")

        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    @property
    def config(self) -> dict[str, Any]:
        if not self._loaded:
            raise ConfigurationError("Configuration not loaded. Call load() first.")
        return self._config


# =============================================================================
# Global Configuration Instance
# =============================================================================

_global_config: ConfigLoader | None = None


def get_config(
    config_file: str | Path | None = None,
    config_dict: dict[str, Any] | None = None,
    reload: bool = False,
) -> ConfigLoader:
    """Get the global configuration instance, loading it on first use."""
    global _global_config

    if _global_config is None or reload:
        _global_config = ConfigLoader()
        _global_config.load(config_file=config_file, config_dict=config_dict)

    return _global_config


def load_config(
    config_file: str | Path | None = None,
    config_dict: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """Reload the global configuration and return it as a dictionary."""
    config_loader = get_config(config_file=config_file, config_dict=config_dict, reload=True)
    return config_loader.config


def setup_logging(config: dict[str, Any] | None = None) -> None:
    """Configure root logging (to standard error) from ``core.log_level``."""
    if config is None:
        try:
            config = get_config().config
        except ConfigurationError:
            config = {}
    log_level = config.get("core", {}).get("log_level", "WARNING")

    logging.basicConfig(
        level=getattr(logging, log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    logging.getLogger("fdqc").setLevel(getattr(logging, log_level))
