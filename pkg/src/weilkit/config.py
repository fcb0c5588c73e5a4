"""Process-wide budgets.  The CLI overrides them from its flags."""

from contextlib import contextmanager
from dataclasses import dataclass

from .fields import DEFAULT_HEIGHT_BOUND
from .groebner import DEFAULT_DEGREE_CAP


@dataclass
class Settings:
    point_budget: int = 10**6
    gb_degree_cap: int = DEFAULT_DEGREE_CAP
    height_bound: int = DEFAULT_HEIGHT_BOUND


settings = Settings()


@contextmanager
def overrides(**values):
    """Temporarily replace some settings; ``None`` values are ignored."""
    old = {k: getattr(settings, k) for k in values}
    for k, v in values.items():
        if v is not None:
            setattr(settings, k, v)
    try:
        yield settings
    finally:
        for k, v in old.items():
            setattr(settings, k, v)
