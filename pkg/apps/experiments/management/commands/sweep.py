from apps.experiments.management.base import ExperimentCommand
from apps.experiments.reports import render_csv
from apps.experiments.runners import record_run, run_sweep


class Command(ExperimentCommand):
    help = "Simulate the sp-protocol over a p_err grid and write the efficiency curve as CSV"

    def execute_experiment(self, options):
        config = self.load(options)
        rows = run_sweep(config)
        text = render_csv(rows)
        self.emit(text, config.out)
        infeasible = sum(1 for row in rows if row.status != "ok")
        if infeasible:
            self.stderr.write(self.style.WARNING(f"{infeasible} grid points infeasible"))
        if options["record"]:
            run = record_run("sweep", config, text, rows)
            self.stderr.write(self.style.SUCCESS(f"recorded run #{run.pk}"))
