from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.security.serializers import KeyBudgetSerializer


class Command(BaseCommand):
    help = "Lower bound on the distillable key after reconciling with an adapted code"

    def add_arguments(self, parser):
        parser.add_argument("--h-min-prior", type=float, required=True,
                            help="H_inf(X|Z) in bits before reconciliation")
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument("--s", type=int, default=0)
        parser.add_argument("--p", type=int, default=0)
        parser.add_argument("--t", type=float, default=None,
                            help="Security parameter in bits (default settings.RECON['SECURITY_T'])")

    def handle(self, *args, **options):
        t = options["t"] if options["t"] is not None else settings.RECON["SECURITY_T"]
        serializer = KeyBudgetSerializer(data={
            "h_min_prior": options["h_min_prior"],
            "n": options["n"],
            "k": options["k"],
            "s": options["s"],
            "p": options["p"],
            "t": t,
        })
        if not serializer.is_valid():
            raise CommandError(f"invalid parameters: {serializer.errors}")

        budget = serializer.to_budget()
        self.stdout.write(f"payload |X|          {budget.payload_len}")
        self.stdout.write(f"adapted rate R       {budget.adapted_rate} ({float(budget.adapted_rate):.6f})")
        self.stdout.write(f"leaked |X|(1-R) + t  {float(budget.leak_formula_bits):.6f}")
        self.stdout.write(f"raw |C| form         {float(budget.raw_bound):.6f}")
        self.stdout.write(self.style.SUCCESS(
            f"key bits >= {float(budget.key_bits_lower_bound):.6f}"
        ))
