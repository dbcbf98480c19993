"""Catalog parsing, serialization, parameter binding, builtin registry."""

import pytest

from cartan_forge.catalog import (
    CatalogError,
    CartanSpec,
    GoldenData,
    builtin,
    builtin_specs,
    instantiate,
    parse_catalog,
    serialize,
)
from cartan_forge.field import FieldError

SAMPLE = """\
cartan-catalog v1

# toy entries for the parser
name=toy-a2
p=5
fielddeg=1
parities=00
matrix=2,-1;-1,2
expect.sdim=8|0
expect.nroots=3

name=toy-param
p=3
fielddeg=1
parities=10
matrix=0,a;a,2
source=external
exclude=a:0
default.a=1
"""


def test_parse_sample():
    specs = parse_catalog(SAMPLE)
    assert [s.name for s in specs] == ["toy-a2", "toy-param"]
    a2, par = specs
    assert (a2.p, a2.k, a2.n) == (5, 1, 2)
    assert a2.entries == ((2, -1), (-1, 2))
    assert a2.expected == GoldenData(8, 0, None, None, 3, None)
    assert par.source == "external"
    assert par.symbols == ("a",)
    assert par.exclude == (("a", (0,)),)
    assert par.defaults == (("a", "1"),)


def test_serialize_round_trip():
    specs = parse_catalog(SAMPLE)
    again = parse_catalog(serialize(specs))
    assert again == specs


def test_instantiate_defaults_and_bindings():
    spec = parse_catalog(SAMPLE)[1]
    cc = instantiate(spec)  # default a=1
    assert int(cc.A[0, 1]) == 1 and cc.params == (("a", 1),)
    cc2 = instantiate(spec, {"a": "2"})
    assert int(cc2.A[0, 1]) == 2
    cc3 = instantiate(spec, {"a": -1})
    assert int(cc3.A[0, 1]) == 2  # lifted mod 3
    with pytest.raises(CatalogError):
        instantiate(spec, {"a": 0})  # excluded value
    with pytest.raises(CatalogError):
        instantiate(spec, {"b": 1})  # unknown symbol
    with pytest.raises(FieldError):
        instantiate(spec, {"a": "a"})  # generator token needs fielddeg=2


def test_unbound_parameter_rejected():
    spec = parse_catalog(SAMPLE.replace("default.a=1\n", ""))[1]
    with pytest.raises(CatalogError):
        instantiate(spec)


def test_barred_diagonal_literals():
    text = SAMPLE + "\nname=toy-barred\np=2\nfielddeg=1\nparities=1\nmatrix=1bar\n"
    spec = parse_catalog(text)[2]
    cc = instantiate(spec)
    assert int(cc.A[0, 0]) == 1
    bad = SAMPLE + "\nname=bad\np=2\nfielddeg=1\nparities=11\nmatrix=0,1bar;1,0\n"
    with pytest.raises(CatalogError):
        parse_catalog(bad)


def test_parse_errors():
    with pytest.raises(CatalogError):
        parse_catalog("not-a-catalog\n")
    with pytest.raises(CatalogError):
        parse_catalog("cartan-catalog v1\n\np=3\n")  # key before any name
    with pytest.raises(CatalogError):
        parse_catalog(SAMPLE.replace("name=toy-param", "name=toy-a2"))  # dup name
    with pytest.raises(CatalogError):
        parse_catalog(SAMPLE.replace("matrix=2,-1;-1,2", "matrix=2,-1;-1"))
    with pytest.raises(CatalogError):
        parse_catalog(SAMPLE.replace("matrix=2,-1;-1,2", "matrix=2,x;-1,2"))
    with pytest.raises(CatalogError):
        parse_catalog(SAMPLE.replace("p=5", "p=4"))


def test_golden_data_validation():
    with pytest.raises(CatalogError):
        GoldenData(2, 0, roots=(((1, 0), 0, 1),))  # isotropic but even
    with pytest.raises(CatalogError):
        GoldenData(2, 0, n_positive=2, roots=(((1, 0), 0, 0),))


def test_spec_validation():
    with pytest.raises(CatalogError):
        CartanSpec("x", 3, 1, ((2, 1),), (0,))  # not square
    with pytest.raises(CatalogError):
        CartanSpec("x", 3, 1, ((2,),), (0, 1))  # parity length
    with pytest.raises(CatalogError):
        CartanSpec("x", 3, 1, ((2,),), (0,), source="web")


def test_builtin_registry():
    specs = builtin_specs()
    assert len(specs) == 30
    names = {s.name for s in specs}
    assert "brj(2;5)#1" in names and "br(3)" in names
    assert builtin("brj(2;5)").name == "brj(2;5)#1"  # base-name fallback
    with pytest.raises(CatalogError) as err:
        builtin("brj(9;9)")
    assert "near matches" in str(err.value)
    # every entry with a golden table parses its CSV
    for s in specs:
        if s.expected is not None and s.expected.roots is not None:
            assert len(s.expected.roots) == s.expected.n_positive


def test_catalog_env_override(tmp_path, monkeypatch):
    path = tmp_path / "alt.catalog"
    path.write_text(SAMPLE, encoding="utf-8")
    monkeypatch.setenv("CARTAN_FORGE_CATALOG", str(path))
    assert [s.name for s in builtin_specs()] == ["toy-a2", "toy-param"]
    monkeypatch.delenv("CARTAN_FORGE_CATALOG")
    assert len(builtin_specs()) == 30
