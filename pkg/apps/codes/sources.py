from pathlib import Path

from sp_recon.exceptions import ConfigError
from .alist import load_alist
from .construction import generate_gallager

GALLAGER_PREFIX = "gallager:"
GALLAGER_KEYS = ("n", "col", "row", "seed")


def parse_gallager_spec(source):
    """``gallager:n=2000,col=3,row=6,seed=1`` -> dict of ints."""
    body = source[len(GALLAGER_PREFIX):]
    params = {}
    for part in filter(None, (p.strip() for p in body.split(","))):
        key, sep, value = part.partition("=")
        if not sep or key not in GALLAGER_KEYS:
            raise ConfigError({"code": [f"unknown generator parameter {part!r}"]})
        try:
            params[key] = int(value)
        except ValueError:
            raise ConfigError({"code": [f"generator parameter {key} must be an integer"]})
    missing = [key for key in GALLAGER_KEYS if key not in params]
    if missing:
        raise ConfigError({"code": [f"generator spec is missing {', '.join(missing)}"]})
    return params


def resolve_code(source, check_rank=True):
    """Build the code named by an alist path or a generator spec."""
    source = source.strip()
    if source.startswith(GALLAGER_PREFIX):
        params = parse_gallager_spec(source)
        return generate_gallager(params["n"], params["col"], params["row"], params["seed"])
    path = Path(source)
    if not path.is_file():
        raise ConfigError({"code": [f"alist file not found: {source}"]})
    return load_alist(path.read_bytes(), check_rank=check_rank, name=path.name)


def resolve_codes(sources, check_rank=True):
    """Several ``;``-separated sources, in order."""
    return [resolve_code(s, check_rank) for s in sources.split(";") if s.strip()]
