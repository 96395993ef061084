from django.core.management.base import CommandError

from ppgmask.management.base import EXIT_RUNTIME, PipelineCommand
from ppgmask.services import ValidationService


class Command(PipelineCommand):
    help = "Finite-difference check of every differentiable op and of the micro networks; exits 1 if any fails."

    def run(self, config, **options):
        results = ValidationService.gradient_checks(config.seed or 0)
        for result in results:
            status = "ok" if result.passed else "FAIL"
            self.stdout.write(
                f"{status:4} {result.name:24} abs={result.max_abs_error:.2e} rel={result.max_rel_error:.2e}"
            )
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(f"{len(failed)} of {len(results)} gradient checks failed", returncode=EXIT_RUNTIME)
        self.stdout.write(f"all {len(results)} gradient checks passed")
