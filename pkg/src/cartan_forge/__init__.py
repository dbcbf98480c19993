"""Exact contragredient Lie (super)algebra construction over small finite fields."""

from .field import Field, FieldError, make_field
from .catalog import (
    CartanSpec,
    CatalogError,
    ConcreteCartan,
    GoldenData,
    builtin,
    builtin_specs,
    instantiate,
    parse_catalog,
    serialize,
)
from .builder import AlgebraModel, BuildLimitError, bracket, build, cartan_dims, lower
from .analysis import RootEntry, RootReport, compare, isotropy, root_report
from .reflection import (
    ReflectionError,
    canonical_form,
    enumerate_bases,
    initial_state,
    normalize_rows,
    odd_reflect,
)

__version__ = "0.1.0"
