from pathlib import Path

from domain.train.definitions import STRATEGIES
from ppgmask.management.base import PipelineCommand
from ppgmask.services import MaskingService


class Command(PipelineCommand):
    help = "Draw one mask per preprocessed segment and write them as JSON lines."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--out", required=True, type=Path, help="JSONL file")
        parser.add_argument("--strategy", choices=STRATEGIES, default="prior_guided")
        parser.add_argument("--teacher", type=Path, default=None, help="teacher checkpoint from pretrain")

    def run(self, config, **options):
        frame = MaskingService.write_masks(
            config, options["in_dir"], options["out"], options["strategy"], options["teacher"]
        )
        self.stdout.write(f"wrote {len(frame)} masks, {int(frame['repaired'].sum())} repaired")
