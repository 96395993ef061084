"""
Shared plumbing for ppgmask commands: the --config and --seed options and
the translation of failures into exit codes.

Exit codes: 0 on success, 1 for data or runtime errors (any domain error
or I/O failure), 2 for configuration errors.
"""

from __future__ import annotations

import json
import logging
from typing import Any

from django.core.management.base import BaseCommand, CommandError

from domain.errors import DomainException

from ..config import ConfigError, RunConfig

logger = logging.getLogger(__name__)

EXIT_RUNTIME = 1
EXIT_CONFIG = 2


class PipelineCommand(BaseCommand):
    """Base class; subclasses implement run(config, **options)."""

    def add_arguments(self, parser: Any) -> None:
        parser.add_argument("--config", default=None, help="JSON run configuration; defaults apply when omitted")
        parser.add_argument("--seed", type=int, default=None, help="override every seed in the configuration")

    def load_config(self, options: dict[str, Any]) -> RunConfig:
        config = RunConfig.load(options.get("config"))
        seed = options.get("seed")
        if seed is not None:
            if seed < 0:
                raise ConfigError(f"seed must be non-negative, got {seed}")
            config = config.with_seed(seed)
        return config

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            config = self.load_config(options)
            self.run(config, **{k: v for k, v in options.items() if k != "config"})
        except ConfigError as exc:
            raise CommandError(f"configuration error: {exc.message}", returncode=EXIT_CONFIG) from exc
        except DomainException as exc:
            logger.error("%s failed: %s", self.name, exc.message)
            raise CommandError(exc.message, returncode=EXIT_RUNTIME) from exc
        except OSError as exc:
            raise CommandError(str(exc), returncode=EXIT_RUNTIME) from exc

    @property
    def name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def run(self, config: RunConfig, **options: Any) -> None:
        raise NotImplementedError

    def emit_json(self, payload: Any) -> None:
        self.stdout.write(json.dumps(payload, indent=2, sort_keys=True))
