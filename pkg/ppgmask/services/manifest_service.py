"""
Run manifests: the JSON record written next to every command's outputs.

A manifest carries the command, its arguments, the build id and the full
effective configuration, so the run can be repeated exactly. It holds no
timestamps, which keeps reruns byte-identical.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from ..conf import app_settings
from ..config import RunConfig

logger = logging.getLogger(__name__)


class ManifestService:
    """
    Service class for reading and writing run manifests.
    """

    @staticmethod
    def manifest_path(target: str | Path) -> Path:
        """
        Where the manifest of an output lives.

        Args:
            target: An output directory, or a single output file

        Returns:
            Path: <dir>/manifest.json for a directory, <file>.manifest.json otherwise
        """
        target = Path(target)
        if target.is_dir():
            return target / app_settings.MANIFEST_NAME
        return target.with_name(f"{target.name}.{app_settings.MANIFEST_NAME}")

    @staticmethod
    def write_manifest(
        target: str | Path,
        command: str,
        config: RunConfig,
        arguments: dict[str, Any] | None = None,
        outputs: list[str] | None = None,
        **extra: Any,
    ) -> Path:
        """
        Write the manifest for one command run.

        Args:
            target: Output directory or file the manifest describes
            command: Command name
            config: Effective run configuration, echoed in full
            arguments: Command arguments other than the config
            outputs: Names of the files written, relative to the output directory
            **extra: Command-specific fields (stage, counts, reports)

        Returns:
            Path: The manifest file
        """
        arguments = arguments or {}
        manifest = {
            "command": command,
            "build_id": app_settings.BUILD_ID,
            "arguments": {key: str(value) if isinstance(value, Path) else value for key, value in arguments.items()},
            "config": config.to_dict(),
            "seed": config.seed,
            "outputs": sorted(outputs or []),
            **extra,
        }
        path = ManifestService.manifest_path(target)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        logger.info("wrote manifest %s", path)
        return path

    @staticmethod
    def read_manifest(target: str | Path) -> dict[str, Any]:
        """
        Read a manifest; an output without one gives an empty dict.
        """
        path = ManifestService.manifest_path(target)
        if not path.exists():
            return {}
        return json.loads(path.read_text())
