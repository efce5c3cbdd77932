from apps.experiments.management.base import ExperimentCommand
from apps.experiments.runners import calibration_rows, record_run, run_calibration
from apps.reconciliation.calibration import format_table


class Command(ExperimentCommand):
    help = "Measure the smallest efficiency f(p_err) a code sustains at the target frame error rate"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--fer-target", dest="fer_target", type=float)

    def execute_experiment(self, options):
        config = self.load(options)
        points, table = run_calibration(config)
        text = format_table(table) if table is not None else ""
        self.emit(text, config.out)
        for point in points:
            if not point.reachable:
                self.stderr.write(self.style.WARNING(f"p_err={point.p_err}: unreachable"))
        if options["record"]:
            code = config.codes()[0]
            f_eff = {i: point.f_eff for i, point in enumerate(points) if point.reachable}
            run = record_run("calibrate", config, text, calibration_rows(code, points, config), f_eff)
            self.stderr.write(self.style.SUCCESS(f"recorded run #{run.pk}"))
