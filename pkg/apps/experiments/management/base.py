import logging

from django.core.management.base import BaseCommand, CommandError

from apps.experiments.config import load_config
from sp_recon.exceptions import ConfigError, ReconciliationError

logger = logging.getLogger(__name__)

# command-line flag -> config key
FLAG_KEYS = {
    "code": "code",
    "delta": "delta",
    "grid": "grid",
    "f_eff": "f_eff",
    "frames": "frames",
    "seed": "seed",
    "t": "t",
    "out": "out",
    "fer_target": "fer_target",
    "length": "length",
}


class ExperimentCommand(BaseCommand):
    """Shared flags and error conversion for the experiment commands."""

    def add_arguments(self, parser):
        parser.add_argument("--config", help="key=value experiment file")
        parser.add_argument("--code", help="alist path or gallager:... spec; ';' separates a family")
        parser.add_argument("--delta", help="fraction of positions to puncture or shorten")
        parser.add_argument("--grid", help="p_err grid: a,b,c or start:stop:step")
        parser.add_argument("--f-eff", dest="f_eff", help="constant efficiency or calibration table path")
        parser.add_argument("--frames", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--t", type=float, help="security parameter in bits")
        parser.add_argument("--out", help="output path (stdout when omitted)")
        parser.add_argument("--record", action="store_true", help="store the run in the database")

    def load(self, options):
        overrides = {key: options.get(flag) for flag, key in FLAG_KEYS.items()}
        return load_config(options.get("config"), overrides)

    def emit(self, text, path):
        if path:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            self.stdout.write(self.style.SUCCESS(f"wrote {path}"))
        else:
            self.stdout.write(text, ending="")

    def execute_experiment(self, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            self.execute_experiment(options)
        except ConfigError as exc:
            raise CommandError(f"invalid configuration: {exc.errors}")
        except ReconciliationError as exc:
            logger.error(f"{self.__module__.rsplit('.', 1)[-1]} failed: {exc}", exc_info=True)
            raise CommandError(str(exc))
