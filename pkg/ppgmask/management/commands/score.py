from pathlib import Path

from ppgmask.management.base import PipelineCommand
from ppgmask.services import ScoringService


class Command(PipelineCommand):
    help = "Write per-patch prior scores of preprocessed segments as CSV."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--out", required=True, type=Path, help="CSV file")

    def run(self, config, **options):
        frame = ScoringService.write_scores(config, options["in_dir"], options["out"])
        self.stdout.write(f"scored {len(frame)} patches of {frame['segment_id'].nunique()} segments")
