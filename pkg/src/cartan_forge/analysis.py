"""Observables of a built algebra: root report, isotropy, superdimension,

derived-algebra dimensions, and comparison against golden data."""

from __future__ import annotations

from dataclasses import dataclass

from .builder import NEG, POS, AlgebraModel
from .catalog import GoldenData


@dataclass(frozen=True)
class RootEntry:
    weight: tuple[int, ...]
    parity: int
    isotropic: int
    multiplicity: int
    height: int


@dataclass(frozen=True)
class RootReport:
    name: str
    p: int
    field: str
    n: int
    rank: int
    dim_h: int
    entries: tuple[RootEntry, ...]
    sdim: tuple[int, int]
    derived: tuple[int, int] | None  # (even - 2*corank, odd); None when corank = 0

    @property
    def n_positive(self) -> int:
        return len(self.entries)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "field": self.field,
            "n": self.n,
            "rank": self.rank,
            "dim_h": self.dim_h,
            "sdim": {"even": self.sdim[0], "odd": self.sdim[1]},
            "derived": None if self.derived is None
            else {"even": self.derived[0], "odd": self.derived[1]},
            "roots": [
                {"k": list(e.weight), "parity": e.parity,
                 "isotropic": e.isotropic, "height": e.height}
                for e in self.entries
            ],
        }


def isotropy(model: AlgebraModel, alpha) -> int:
    """1 iff alpha is odd and alpha(h_alpha) = 0, h_alpha = [x_a, mirror(x_a)].

    Even roots always report 0 (the zero value occurs vacuously mod 2).
    """
    alpha = tuple(alpha)
    if model.parity(alpha) == 0:
        return 0
    if model.mult(alpha) != 1:
        raise ValueError(f"isotropy undefined for multiplicity {model.mult(alpha)} at {alpha}")
    F = model.field
    mirror = (tuple(-c for c in alpha), F.zeros(model.mult(alpha, NEG)))
    mirror[1][0] = 1
    h = model.pair((POS, alpha, 0), mirror)
    if h[0] is None:
        return 1
    val = 0
    for i in range(model.n):
        val = F.add(val, F.mul(int(h[1][i]), model.weight_eval(alpha, i)))
    return 1 if val == 0 else 0


def root_report(model: AlgebraModel) -> RootReport:
    cc = model.cc
    entries = []
    for w in model.roots:
        m = model.mult(w)
        entries.append(RootEntry(w, model.parity(w),
                                 isotropy(model, w) if m == 1 else 0, m, sum(w)))
    n_even = sum(e.multiplicity for e in entries if e.parity == 0)
    n_odd = sum(e.multiplicity for e in entries if e.parity == 1)
    sdim = (2 * n_even + model.dim_h, 2 * n_odd)
    derived = None
    if model.corank > 0:
        derived = (sdim[0] - 2 * model.corank, sdim[1])
    return RootReport(
        name=cc.name, p=cc.field.p, field=cc.field.name, n=model.n,
        rank=model.rank_a, dim_h=model.dim_h,
        entries=tuple(sorted(entries, key=lambda e: (e.height, e.weight))),
        sdim=sdim, derived=derived,
    )


@dataclass(frozen=True)
class Diff:
    sdim_mismatch: tuple | None
    derived_mismatch: tuple | None
    missing: tuple  # golden rows absent from the report
    extra: tuple    # report rows absent from the golden table
    count_mismatch: tuple | None

    @property
    def empty(self) -> bool:
        return (self.sdim_mismatch is None and self.derived_mismatch is None
                and not self.missing and not self.extra and self.count_mismatch is None)

    def summary(self) -> str:
        if self.empty:
            return "ok"
        bits = []
        if self.sdim_mismatch:
            bits.append(f"sdim {self.sdim_mismatch[0]} != expected {self.sdim_mismatch[1]}")
        if self.derived_mismatch:
            bits.append(f"derived {self.derived_mismatch[0]} != expected {self.derived_mismatch[1]}")
        if self.count_mismatch:
            bits.append(f"{self.count_mismatch[0]} roots != expected {self.count_mismatch[1]}")
        if self.missing:
            bits.append(f"missing {len(self.missing)} roots e.g. {self.missing[0]}")
        if self.extra:
            bits.append(f"extra {len(self.extra)} roots e.g. {self.extra[0]}")
        return "; ".join(bits)


def compare(report: RootReport, golden: GoldenData) -> Diff:
    sdim_mm = None
    if report.sdim != (golden.sdim_even, golden.sdim_odd):
        sdim_mm = (report.sdim, (golden.sdim_even, golden.sdim_odd))
    derived_mm = None
    if golden.derived_even is not None:
        got = report.derived if report.derived is not None else report.sdim
        if got != (golden.derived_even, golden.derived_odd):
            derived_mm = (got, (golden.derived_even, golden.derived_odd))
    missing: list = []
    extra: list = []
    count_mm = None
    if golden.roots is not None:
        want = {(w, par, iso) for w, par, iso in golden.roots}
        got_set = {(e.weight, e.parity, e.isotropic) for e in report.entries}
        missing = sorted(want - got_set)
        extra = sorted(got_set - want)
    elif golden.n_positive is not None and report.n_positive != golden.n_positive:
        count_mm = (report.n_positive, golden.n_positive)
    return Diff(sdim_mm, derived_mm, tuple(missing), tuple(extra), count_mm)
