"""Cartan-matrix catalog: data model, file format, builtin registry.

A catalog document is line-oriented text with a versioned header::

    cartan-catalog v1

    name=brj(2;5)#1
    p=5
    fielddeg=1
    parities=11
    matrix=0,-1;-2,1
    source=paper
    expect.sdim=10|12
    expect.roots=golden/brj2_5__1.csv

Entries start at each ``name=`` line.  Matrix rows are separated by ``;``,
entries by ``,``.  Entry tokens are signed integers, the parameter symbol
``a``, or the barred diagonal literals ``0bar``/``1bar`` (legal on the
diagonal only).  Optional keys: ``source`` (paper|external, default paper),
``exclude`` (``a:0,1`` -- integer values the parameter must avoid),
``default.<sym>`` (field-element token used for ``<sym>`` when the caller
binds nothing),
``expect.sdim`` / ``expect.derived`` (``E|O``), ``expect.nroots``, and
``expect.roots`` (path, relative to the catalog file, of a CSV with rows
``k1,...,kn,parity,isotropic``).
"""

from __future__ import annotations

import difflib
import os
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .field import Field, FieldError, make_field

HEADER = "cartan-catalog v1"
BARRED = {"0bar": 0, "1bar": 1}


class CatalogError(ValueError):
    """Raised for malformed catalog documents or bad instantiation."""


@dataclass(frozen=True)
class GoldenData:
    sdim_even: int
    sdim_odd: int
    derived_even: int | None = None
    derived_odd: int | None = None
    n_positive: int | None = None
    roots: tuple[tuple[tuple[int, ...], int, int], ...] | None = None  # (weight, parity, isotropic)

    def __post_init__(self):
        if self.roots is not None:
            if self.n_positive is not None and self.n_positive != len(self.roots):
                raise CatalogError("n_positive disagrees with the golden root list")
            for w, par, iso in self.roots:
                if iso and not par:
                    raise CatalogError(f"golden root {w} flagged isotropic but even")


@dataclass(frozen=True)
class CartanSpec:
    name: str
    p: int
    k: int
    entries: tuple[tuple[object, ...], ...]  # int | "a" | "0bar" | "1bar"
    parities: tuple[int, ...]
    source: str = "paper"
    expected: GoldenData | None = None
    exclude: tuple[tuple[str, tuple[int, ...]], ...] = ()  # (symbol, excluded ints)
    defaults: tuple[tuple[str, str], ...] = ()  # (symbol, field-element token)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def symbols(self) -> tuple[str, ...]:
        syms = sorted({e for row in self.entries for e in row if isinstance(e, str) and e not in BARRED})
        return tuple(syms)

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise CatalogError(f"{self.name}: matrix is not square")
        if len(self.parities) != n:
            raise CatalogError(f"{self.name}: parity vector length != n")
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if isinstance(e, str) and e in BARRED and i != j:
                    raise CatalogError(f"{self.name}: barred literal {e} off the diagonal at ({i},{j})")
        if self.source not in ("paper", "external"):
            raise CatalogError(f"{self.name}: bad source {self.source!r}")


@dataclass(frozen=True)
class ConcreteCartan:
    field: Field
    A: np.ndarray  # n x n element codes
    parities: tuple[int, ...]
    name: str
    params: tuple[tuple[str, int], ...] = ()  # (symbol, element code)

    @property
    def n(self) -> int:
        return len(self.parities)

    def with_matrix(self, A: np.ndarray, parities: tuple[int, ...], name: str | None = None) -> "ConcreteCartan":
        return ConcreteCartan(self.field, A.astype(np.uint8), tuple(parities), name or self.name, self.params)


def instantiate(spec: CartanSpec, bindings: dict | None = None) -> ConcreteCartan:
    """Resolve a spec's symbolic entries over its field."""
    bindings = dict(bindings or {})
    F = make_field(spec.p, spec.k)
    defaults = dict(spec.defaults)
    bound: dict[str, int] = {}
    for sym in spec.symbols:
        if sym in bindings:
            val = bindings.pop(sym)
        elif sym in defaults:
            val = defaults[sym]
        else:
            raise CatalogError(f"{spec.name}: unbound parameter {sym!r}")
        code = F.parse(val) if isinstance(val, str) else F.lift(int(val))
        bound[sym] = code
    if bindings:
        raise CatalogError(f"{spec.name}: unknown parameter(s) {sorted(bindings)}")
    for sym, excluded in spec.exclude:
        if sym in bound and bound[sym] in {F.lift(z) for z in excluded}:
            raise CatalogError(
                f"{spec.name}: parameter {sym}={F.fmt(bound[sym])} is excluded "
                f"(must avoid {sorted(set(excluded))})"
            )
    n = spec.n
    A = F.zeros(n, n)
    for i in range(n):
        for j in range(n):
            e = spec.entries[i][j]
            if isinstance(e, int):
                A[i, j] = F.lift(e)
            elif e in BARRED:
                A[i, j] = F.lift(BARRED[e])
            else:
                A[i, j] = bound[e]
    return ConcreteCartan(F, A, spec.parities, spec.name, tuple(sorted(bound.items())))


# -- parsing ----------------------------------------------------------------


def _parse_token(tok: str, where: str):
    tok = tok.strip()
    if tok in BARRED or tok == "a":
        return tok
    try:
        return int(tok)
    except ValueError:
        raise CatalogError(f"{where}: bad matrix token {tok!r}") from None


def _parse_roots_csv(text: str, n: int, where: str):
    roots = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [s.strip() for s in line.split(",")]
        if len(parts) != n + 2:
            raise CatalogError(f"{where}:{lineno}: expected {n + 2} fields, got {len(parts)}")
        nums = [int(s) for s in parts]
        weight = tuple(nums[:n])
        par, iso = nums[n], nums[n + 1]
        if any(c < 0 for c in weight) or par not in (0, 1) or iso not in (0, 1):
            raise CatalogError(f"{where}:{lineno}: bad root row")
        roots.append((weight, par, iso))
    return tuple(roots)


def _read_side_file(path: str, base: str | None) -> str:
    if base is not None:
        return open(os.path.join(base, path), encoding="utf-8").read()
    ref = resources.files("cartan_forge").joinpath("data", path)
    return ref.read_text(encoding="utf-8")


def parse_catalog(text: str, base_path: str | None = None) -> list[CartanSpec]:
    """Parse a catalog document.

    ``base_path``: directory used to resolve ``expect.roots`` paths; when
    None, paths resolve against the packaged data directory.
    """
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines) or lines[idx].strip() != HEADER:
        raise CatalogError(f"line {idx + 1}: missing header {HEADER!r}")
    blocks: list[list[tuple[int, str, str]]] = []
    cur: list[tuple[int, str, str]] | None = None
    for lineno, raw in enumerate(lines[idx + 1:], idx + 2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CatalogError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "name":
            cur = []
            blocks.append(cur)
        elif cur is None:
            raise CatalogError(f"line {lineno}: {key}= before any name=")
        cur.append((lineno, key, val))

    specs: list[CartanSpec] = []
    seen: set[str] = set()
    for block in blocks:
        kv: dict[str, str] = {}
        first_line = block[0][0]
        for lineno, key, val in block:
            if key in kv:
                raise CatalogError(f"line {lineno}: duplicate key {key}")
            kv[key] = val
        where = f"entry at line {first_line}"
        for req in ("name", "p", "fielddeg", "parities", "matrix"):
            if req not in kv:
                raise CatalogError(f"{where}: missing {req}=")
        name = kv["name"]
        if name in seen:
            raise CatalogError(f"{where}: duplicate name {name!r}")
        seen.add(name)
        try:
            p, k = int(kv["p"]), int(kv["fielddeg"])
        except ValueError:
            raise CatalogError(f"{where}: p/fielddeg must be integers") from None
        parities = tuple(int(c) for c in kv["parities"])
        if any(b not in (0, 1) for b in parities):
            raise CatalogError(f"{where}: parities must be a bit string")
        entries = tuple(
            tuple(_parse_token(t, where) for t in row.split(","))
            for row in kv["matrix"].split(";")
        )
        exclude = []
        if "exclude" in kv:
            sym, _, vals = kv["exclude"].partition(":")
            exclude.append((sym.strip(), tuple(int(v) for v in vals.split(","))))
        defaults = tuple(
            (key[len("default."):], val) for key, val in kv.items()
            if key.startswith("default.")
        )
        expected = None
        if any(key.startswith("expect.") for key in kv):
            roots = None
            n_positive = None
            if "expect.roots" in kv:
                csv_text = _read_side_file(kv["expect.roots"], base_path)
                roots = _parse_roots_csv(csv_text, len(entries), kv["expect.roots"])
                n_positive = len(roots)
            if "expect.nroots" in kv:
                n_positive = int(kv["expect.nroots"])
            de = do = None
            if "expect.derived" in kv:
                de, do = (int(s) for s in kv["expect.derived"].split("|"))
            se, so = (int(s) for s in kv["expect.sdim"].split("|"))
            expected = GoldenData(se, so, de, do, n_positive, roots)
        try:
            spec = CartanSpec(
                name=name, p=p, k=k, entries=entries, parities=parities,
                source=kv.get("source", "paper"), expected=expected,
                exclude=tuple(exclude), defaults=defaults,
            )
            make_field(p, k)  # validates field parameters
        except FieldError as exc:
            raise CatalogError(f"{where}: {exc}") from None
        specs.append(spec)
    return specs


def serialize(specs: list[CartanSpec], roots_paths: dict[str, str] | None = None) -> str:
    """Render specs back to catalog text (golden roots referenced by path)."""
    out = [HEADER, ""]
    roots_paths = roots_paths or {}
    for s in specs:
        out.append(f"name={s.name}")
        out.append(f"p={s.p}")
        out.append(f"fielddeg={s.k}")
        out.append("parities=" + "".join(str(b) for b in s.parities))
        out.append("matrix=" + ";".join(",".join(str(e) for e in row) for row in s.entries))
        out.append(f"source={s.source}")
        for sym, vals in s.exclude:
            out.append(f"exclude={sym}:" + ",".join(str(v) for v in vals))
        for sym, tok in s.defaults:
            out.append(f"default.{sym}={tok}")
        g = s.expected
        if g is not None:
            out.append(f"expect.sdim={g.sdim_even}|{g.sdim_odd}")
            if g.derived_even is not None:
                out.append(f"expect.derived={g.derived_even}|{g.derived_odd}")
            if s.name in roots_paths:
                out.append(f"expect.roots={roots_paths[s.name]}")
            elif g.n_positive is not None and g.roots is None:
                out.append(f"expect.nroots={g.n_positive}")
        out.append("")
    return "\n".join(out)


# -- builtin registry -------------------------------------------------------

_BUILTIN: list[CartanSpec] | None = None


def builtin_catalog_path() -> str | None:
    """Path override from CARTAN_FORGE_CATALOG, if set."""
    return os.environ.get("CARTAN_FORGE_CATALOG") or None


def builtin_specs(refresh: bool = False) -> list[CartanSpec]:
    global _BUILTIN
    override = builtin_catalog_path()
    if override:
        text = open(override, encoding="utf-8").read()
        return parse_catalog(text, base_path=os.path.dirname(os.path.abspath(override)))
    if _BUILTIN is None or refresh:
        text = resources.files("cartan_forge").joinpath("data", "builtin.catalog").read_text(encoding="utf-8")
        _BUILTIN = parse_catalog(text, base_path=None)
    return _BUILTIN


def builtin(name: str) -> CartanSpec:
    specs = builtin_specs()
    by_name = {s.name: s for s in specs}
    if name in by_name:
        return by_name[name]
    # tolerate a missing or extra realization tag: unique base-name match
    base = name.split("#")[0]
    hits = [s for s in specs if s.name.split("#")[0] == base]
    if len(hits) == 1:
        return hits[0]
    near = difflib.get_close_matches(name, list(by_name), n=5, cutoff=0.4)
    raise CatalogError(f"unknown catalog entry {name!r}; near matches: {', '.join(near) or 'none'}")
