from pathlib import Path

from ppgmask.management.base import PipelineCommand
from ppgmask.services import ValidationService


class Command(PipelineCommand):
    help = "Report latent drift under augmentation relative to the codebook's Voronoi radius."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="preprocessed segment directory")
        parser.add_argument("--out", required=True, type=Path, help="JSON report file")
        parser.add_argument("--tokenizer", type=Path, default=None, help="tokenizer checkpoint; untrained when omitted")
        parser.add_argument("--max-pairs", type=int, default=2048)

    def run(self, config, **options):
        report = ValidationService.write_codebook_report(
            config, options["in_dir"], options["out"], options["tokenizer"], options["max_pairs"]
        )
        self.stdout.write(
            f"r={report['voronoi_radius']:.6g}, mean d/r={report['mean_ratio']:.4f}, "
            f"ICR={report['icr_by_augmentation']}"
        )
