from pathlib import Path

from ppgmask.management.base import PipelineCommand
from ppgmask.services import TrainingService


class Command(PipelineCommand):
    help = "Masked pretraining (stage 2) against a frozen tokenizer."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--tokenizer", required=True, type=Path, help="tokenizer checkpoint")
        parser.add_argument("--out", required=True, type=Path, help="output directory")

    def run(self, config, **options):
        history = TrainingService.run_pretrain(config, options["in_dir"], options["tokenizer"], options["out"])
        self.stdout.write(f"{config.stage2.strategy}: final student CE {history.final('student_ce'):.6f}")
