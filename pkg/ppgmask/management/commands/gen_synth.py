from pathlib import Path

from ppgmask.management.base import PipelineCommand
from ppgmask.services import SignalService


class Command(PipelineCommand):
    help = "Write seeded synthetic PPG records in PPGB format, with a manifest."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--out", required=True, type=Path, help="output directory")

    def run(self, config, **options):
        paths = SignalService.generate_synth(config, options["out"])
        self.stdout.write(f"wrote {len(paths)} records to {options['out']}")
