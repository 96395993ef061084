from pathlib import Path

from ppgmask.management.base import PipelineCommand
from ppgmask.services import SignalService


class Command(PipelineCommand):
    help = "Filter, resample, segment and screen a directory of PPGB records."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--in", dest="in_dir", required=True, type=Path, help="directory of PPGB records")
        parser.add_argument("--out", required=True, type=Path, help="output directory for segments")

    def run(self, config, **options):
        report = SignalService.preprocess_directory(config, options["in_dir"], options["out"])
        self.stdout.write(
            f"kept {report.kept}, dropped {report.dropped} "
            f"(missing {report.dropped_missing}, flatline {report.dropped_flatline})"
        )
