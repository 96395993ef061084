"""
Service layer for signal files: synthetic generation, preprocessing and
loading preprocessed segments as patch datasets.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from domain.dsp import (
    PatchSequence,
    RawRecord,
    ScreenReport,
    patchify,
    preprocess_record,
    read_ppgb,
    segment_and_screen,
    synth_ppg,
    write_ppgb,
)
from domain.dsp.errors import PatchMismatch
from domain.train.errors import EmptyDataset

from ..conf import app_settings
from ..config import RunConfig
from .manifest_service import ManifestService

logger = logging.getLogger(__name__)

SUFFIX = ".ppgb"
STAGE_RAW = "raw"
STAGE_PREPROCESSED = "preprocessed"


class SignalService:
    """
    Service class for PPGB signal directories.

    Encapsulates:
    - Writing seeded synthetic records
    - Running the preprocessing chain over a directory
    - Loading preprocessed segments as (S, N, T) patch arrays
    """

    @staticmethod
    def generate_synth(config: RunConfig, out_dir: str | Path) -> list[Path]:
        """
        Write config.synth.n_records synthetic records and a manifest.

        Args:
            config: Run configuration; only the synth section is read
            out_dir: Output directory, created if missing

        Returns:
            list[Path]: The record files, in index order
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = [
            write_ppgb(out_dir / f"rec_{index:04d}{SUFFIX}", synth_ppg(config.synth, index))
            for index in range(config.synth.n_records)
        ]
        ManifestService.write_manifest(
            out_dir,
            "gen_synth",
            config,
            arguments={"out": out_dir},
            outputs=[p.name for p in paths],
            stage=STAGE_RAW,
            count=len(paths),
        )
        logger.info("wrote %d synthetic records to %s", len(paths), out_dir)
        return paths

    @staticmethod
    def read_records(in_dir: str | Path) -> list[tuple[str, RawRecord]]:
        """
        Read every PPGB file of a directory, sorted by name.

        Raises:
            FileNotFoundError: If the directory does not exist
            ContainerFormatError: If a file is not a valid PPGB container
        """
        in_dir = Path(in_dir)
        if not in_dir.is_dir():
            raise FileNotFoundError(f"no such directory: {in_dir}")
        return [(path.stem, read_ppgb(path)) for path in sorted(in_dir.glob(f"*{SUFFIX}"))]

    @staticmethod
    def stage(in_dir: str | Path) -> str:
        return ManifestService.read_manifest(in_dir).get("stage", STAGE_RAW)

    @staticmethod
    def preprocess_directory(config: RunConfig, in_dir: str | Path, out_dir: str | Path) -> ScreenReport:
        """
        Preprocess every record of in_dir into screened segments in out_dir.

        Raw input goes through the whole chain and each record may yield
        several segments. Input that is already preprocessed is only
        re-screened, one segment per file under the same name, so running
        the command twice leaves the segments unchanged.

        Args:
            config: Run configuration; the preprocess section is read
            in_dir: Directory of PPGB records
            out_dir: Output directory, created if missing

        Returns:
            ScreenReport: Kept and dropped window counts over all records
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        settings = config.preprocess
        rescreen = SignalService.stage(in_dir) == STAGE_PREPROCESSED
        report = ScreenReport()
        outputs: list[str] = []
        for name, record in SignalService.read_records(in_dir):
            if rescreen:
                segments, record_report = segment_and_screen(record, window_s=record.duration_s)
                names = [name]
            else:
                segments, record_report = preprocess_record(
                    record, settings.low_hz, settings.high_hz, settings.target_hz, settings.window
                )
                names = [f"{name}_{j:03d}" for j in range(len(segments))]
            for segment_name, segment in zip(names, segments):
                record_out = RawRecord(segment.sample_rate_hz, segment.samples)
                path = write_ppgb(out_dir / f"{segment_name}{SUFFIX}", record_out)
                outputs.append(path.name)
            report = report + record_report
        ManifestService.write_manifest(
            out_dir,
            "preprocess",
            config,
            arguments={"in": Path(in_dir), "out": out_dir},
            outputs=outputs,
            stage=STAGE_PREPROCESSED,
            kept=report.kept,
            dropped_missing=report.dropped_missing,
            dropped_flatline=report.dropped_flatline,
        )
        logger.info("preprocessed %s: kept %d, dropped %d", in_dir, report.kept, report.dropped)
        return report

    @staticmethod
    def load_patches(in_dir: str | Path) -> tuple[list[str], list[PatchSequence]]:
        """Patch every segment of a preprocessed directory."""
        records = SignalService.read_records(in_dir)
        if not records:
            raise EmptyDataset(f"no {SUFFIX} segments in {in_dir}")
        names = [name for name, _ in records]
        return names, [patchify(record.samples, app_settings.PATCH_LEN) for _, record in records]

    @staticmethod
    def load_dataset(in_dir: str | Path) -> tuple[list[str], np.ndarray]:
        """
        Load a preprocessed directory as one (S, N, T) array.

        Raises:
            EmptyDataset: If the directory holds no segments
            PatchMismatch: If segments differ in length
        """
        names, sequences = SignalService.load_patches(in_dir)
        shapes = {seq.patches.shape for seq in sequences}
        if len(shapes) > 1:
            raise PatchMismatch(f"segments in {in_dir} have different shapes: {sorted(shapes)}")
        return names, np.stack([seq.patches for seq in sequences])
