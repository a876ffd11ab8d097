import os

DEFAULT_MAX_PREFIX = 1 << 22
DEFAULT_MAX_STATES = 250_000


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_prefix():
    """Longest word (fixed-point prefix or power image) we agree to build."""
    return _env_int("PARRY_MAX_PREFIX", DEFAULT_MAX_PREFIX)


def max_states():
    return _env_int("PARRY_MAX_STATES", DEFAULT_MAX_STATES)
