import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.codes.alist import write_alist
from apps.codes.ldpc import gf2_rank
from apps.codes.models import RegisteredCode
from apps.codes.sources import resolve_code
from sp_recon.exceptions import ReconciliationError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Validate parity-check codes (alist files or generator specs) and report their parameters"

    def add_arguments(self, parser):
        parser.add_argument(
            "sources",
            nargs="+",
            help="alist paths or gallager:n=...,col=...,row=...,seed=... specs",
        )
        parser.add_argument(
            "--skip-rank-check",
            action="store_true",
            help="Do not run GF(2) elimination (large codes)",
        )
        parser.add_argument(
            "--register",
            action="store_true",
            help="Store every valid code so the API can serve it",
        )
        parser.add_argument(
            "--write",
            metavar="PATH",
            help="Write the (single) checked code back out in alist format",
        )

    def handle(self, *args, **options):
        sources = options["sources"]
        if options["write"] and len(sources) != 1:
            raise CommandError("--write needs exactly one source")

        failures = 0
        for source in sources:
            try:
                code = resolve_code(source, check_rank=False)
            except ReconciliationError as exc:
                failures += 1
                self.stdout.write(self.style.ERROR(f"{source}: {exc}"))
                continue

            self.stdout.write(
                f"{source}: n={code.n} m_rows={code.m_rows} k={code.k} "
                f"R0={code.R0} ({float(code.R0):.6f}) edges={code.edge_count}"
            )
            self.stdout.write(
                f"  column degrees {code.col_degrees.min()}..{code.col_degrees.max()}, "
                f"row degrees {code.row_degrees.min()}..{code.row_degrees.max()}, "
                f"identifier {code.identifier}"
            )

            full_rank = True
            if not options["skip_rank_check"]:
                rank = gf2_rank(code)
                full_rank = rank == code.m_rows
                if full_rank:
                    self.stdout.write(self.style.SUCCESS("  full row rank"))
                else:
                    failures += 1
                    self.stdout.write(
                        self.style.ERROR(
                            f"  rank {rank} < {code.m_rows}: true dimension is {code.n - rank}"
                        )
                    )
                    continue

            if options["write"]:
                Path(options["write"]).write_text(write_alist(code), encoding="ascii")
                self.stdout.write(f"  written to {options['write']}")

            if options["register"]:
                record, created = RegisteredCode.objects.update_or_create(
                    identifier=code.identifier,
                    defaults={
                        "name": code.name or source,
                        "n": code.n,
                        "m_rows": code.m_rows,
                        "full_rank": full_rank,
                        "alist": write_alist(code),
                    },
                )
                verb = "Registered" if created else "Updated"
                logger.info(f"{verb} code {record.name} ({record.identifier})")
                self.stdout.write(self.style.SUCCESS(f"  {verb.lower()} as {record.name}"))

        if failures:
            raise CommandError(f"{failures} of {len(sources)} codes failed the check")
