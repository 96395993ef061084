from pathlib import Path

from ppgmask.management.base import PipelineCommand
from ppgmask.services import TrainingService


class Command(PipelineCommand):
    help = "Train the VQ tokenizer (stage 1) on preprocessed segments."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--out", required=True, type=Path, help="output directory")

    def run(self, config, **options):
        history = TrainingService.run_tokenizer(config, options["in_dir"], options["out"])
        self.stdout.write(
            f"{len(history.rows)} epochs, final L_total {history.final('L_total'):.6f}, "
            f"unused codes {history.final('unused_codes'):.0f}"
        )
