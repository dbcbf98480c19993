"""Shared helpers: cached builds so tests do not reconstruct algebras."""

from functools import lru_cache

from cartan_forge.analysis import root_report
from cartan_forge.builder import build
from cartan_forge.catalog import builtin, instantiate


@lru_cache(maxsize=None)
def report_for(name, params=()):
    """Root report for a builtin catalog entry, cached across the suite."""
    cc = instantiate(builtin(name), dict(params))
    return root_report(build(cc))


@lru_cache(maxsize=None)
def model_for(name, params=()):
    cc = instantiate(builtin(name), dict(params))
    return build(cc)
