from pathlib import Path

from domain.train import DEFAULT_BETAS
from ppgmask.management.base import PipelineCommand
from ppgmask.services import TrainingService


class Command(PipelineCommand):
    help = "Pretrain once per prior mixing weight beta."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--tokenizer", required=True, type=Path, help="tokenizer checkpoint")
        parser.add_argument("--out", required=True, type=Path, help="output directory")
        parser.add_argument("--betas", nargs="+", type=float, default=list(DEFAULT_BETAS))

    def run(self, config, **options):
        frame = TrainingService.run_beta_sweep(
            config, options["in_dir"], options["tokenizer"], options["out"], options["betas"]
        )
        final = frame.groupby("beta").tail(1)[["beta", "student_ce", "masked_s_amp", "masked_s_skew"]]
        self.stdout.write(final.to_string(index=False))
