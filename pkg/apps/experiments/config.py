"""
Experiment configuration: flat ``key=value`` files plus command-line overrides.

Example::

    # (3,6) code at desk scale
    code=gallager:n=2000,col=3,row=6,seed=1
    delta=0.05
    grid=0.01:0.05:0.005
    f_eff=1.3
    frames=200
    seed=42
"""

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from django.conf import settings
from dotenv import dotenv_values

from apps.codes.sources import resolve_codes
from apps.reconciliation.calibration import read_table
from sp_recon.exceptions import ConfigError
from .serializers import ExperimentConfigSerializer

logger = logging.getLogger(__name__)

CONFIG_KEYS = (
    "code", "delta", "grid", "f_eff", "frames", "seed", "t", "out", "h_min_prior",
    "max_iterations", "fer_target", "f_eff_ceiling", "length", "skip_rank_check",
)


@dataclass(frozen=True)
class ExperimentConfig:
    code: str | None = None
    delta: Fraction = Fraction(1, 20)
    grid: tuple = field(default_factory=tuple)
    f_eff: str | None = None
    frames: int = 100
    seed: int = 0
    t: float = 0.0
    out: str | None = None
    h_min_prior: float | None = None
    max_iterations: int = 200
    fer_target: float = 0.05
    f_eff_ceiling: float = 3.0
    length: int = 10000
    skip_rank_check: bool = False

    def require(self, *keys):
        missing = [key for key in keys if getattr(self, key) in (None, "")]
        if missing:
            raise ConfigError({key: ["This field is required."] for key in missing})

    def codes(self):
        self.require("code")
        codes = resolve_codes(self.code, check_rank=not self.skip_rank_check)
        if not codes:
            raise ConfigError({"code": ["no code source given"]})
        return codes

    def efficiency(self):
        """Constant efficiency or a calibrated table, whichever f_eff names."""
        self.require("f_eff")
        try:
            return float(self.f_eff)
        except ValueError:
            return read_table(self.f_eff)

    def as_dict(self):
        data = asdict(self)
        data["delta"] = str(self.delta)
        data["grid"] = list(self.grid)
        return data


def read_config_file(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError({"config": [f"config file not found: {path}"]})
    values = {key: value for key, value in dotenv_values(path).items() if value is not None}
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError({key: ["unknown config key"] for key in unknown})
    return values


def load_config(path=None, overrides=None):
    """Validated ExperimentConfig; ``overrides`` (CLI flags) win over the file."""
    values = read_config_file(path) if path else {}
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})

    serializer = ExperimentConfigSerializer(data=values)
    if not serializer.is_valid():
        raise ConfigError(dict(serializer.errors))
    data = dict(serializer.validated_data)

    recon = settings.RECON
    data.setdefault("t", float(recon["SECURITY_T"]))
    data.setdefault("max_iterations", recon["MAX_ITERATIONS"])
    data.setdefault("fer_target", recon["FER_TARGET"])
    data.setdefault("f_eff_ceiling", recon["F_EFF_CEILING"])
    data["delta"] = Fraction(data["delta"])
    data["grid"] = tuple(data["grid"])

    config = ExperimentConfig(**data)
    logger.debug(f"loaded config {config}")
    return config
