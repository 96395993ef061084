from pathlib import Path

from domain.train.definitions import STRATEGIES
from ppgmask.management.base import PipelineCommand
from ppgmask.services import TrainingService


class Command(PipelineCommand):
    help = "Pretrain once per masking strategy on identical data and seed."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--tokenizer", required=True, type=Path, help="tokenizer checkpoint")
        parser.add_argument("--out", required=True, type=Path, help="output directory")
        parser.add_argument("--strategies", nargs="+", choices=STRATEGIES, default=list(STRATEGIES))

    def run(self, config, **options):
        summary = TrainingService.run_ablation(
            config, options["in_dir"], options["tokenizer"], options["out"], options["strategies"]
        )
        self.stdout.write(summary.to_string(index=False))
