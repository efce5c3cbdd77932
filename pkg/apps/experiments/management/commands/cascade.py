from apps.experiments.management.base import ExperimentCommand
from apps.experiments.reports import render_csv
from apps.experiments.runners import record_run, run_cascade_sweep


class Command(ExperimentCommand):
    help = "Run Cascade sessions over a p_err grid and write the efficiency curve as CSV"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--length", type=int, help="bits per session")

    def execute_experiment(self, options):
        config = self.load(options)
        rows = run_cascade_sweep(config)
        text = render_csv(rows)
        self.emit(text, config.out)
        if options["record"]:
            run = record_run("cascade", config, text, rows)
            self.stderr.write(self.style.SUCCESS(f"recorded run #{run.pk}"))
