from django.core.management.base import BaseCommand, CommandError

from apps.experiments.reports import optional_float, read_csv
from apps.security.leakage import fixed_code_efficiency
from sp_recon.exceptions import ReconciliationError


class Command(BaseCommand):
    help = "Side-by-side efficiencies of an sp-protocol sweep, the unadapted code and Cascade"

    def add_arguments(self, parser):
        parser.add_argument("sweep", help="CSV written by the sweep command")
        parser.add_argument("cascade", help="CSV written by the cascade command")

    def handle(self, *args, **options):
        try:
            sweep = read_csv(options["sweep"])
            cascade = {row["p_err"]: row for row in read_csv(options["cascade"])}
        except ReconciliationError as exc:
            raise CommandError(str(exc))

        self.stdout.write("p_err,f_code,f_fixed,f_cascade")
        for row in sweep:
            p_err = float(row["p_err"])
            f_fixed = None
            if row["n"] and row["k"]:
                f_fixed = fixed_code_efficiency(int(row["n"]), int(row["k"]), p_err)
            other = cascade.get(row["p_err"])
            f_cascade = optional_float(other["f_orig"]) if other else None
            cells = [row["p_err"], row["f_code"], _fmt(f_fixed), _fmt(f_cascade)]
            self.stdout.write(",".join(cells))


def _fmt(value):
    return "" if value is None else f"{value:.6f}"
