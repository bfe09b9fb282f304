"""Expression trees: sums of rational-coefficient products of indexed kernels.

A term's factor list is ordered; derivative-operator factors act on every
factor to their right.  Metric-spinor and delta factors are numeric
constants and commute with everything, including operators (the metric
spinors are covariantly constant here, which is what licenses the index
gymnastics the rewrite rules encode).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction


class IndexKind(Enum):
    UNPRIMED = "unprimed"
    PRIMED = "primed"
    WORLD = "world"


class Variance(Enum):
    UP = "up"
    DOWN = "down"

    @property
    def opposite(self) -> "Variance":
        return Variance.DOWN if self is Variance.UP else Variance.UP


DIMENSION = {IndexKind.UNPRIMED: 2, IndexKind.PRIMED: 2, IndexKind.WORLD: 4}


def kind_of_label(label: str) -> IndexKind:
    if label.endswith("'"):
        return IndexKind.PRIMED
    head = label.lstrip("~!")
    if head[:1].isupper():
        return IndexKind.UNPRIMED
    return IndexKind.WORLD


@dataclass(frozen=True, order=True)
class Idx:
    name: str
    kind: IndexKind = field(compare=False)
    up: bool

    @classmethod
    def from_label(cls, label: str, up: bool) -> "Idx":
        return cls(label, kind_of_label(label), up)

    @property
    def variance(self) -> Variance:
        return Variance.UP if self.up else Variance.DOWN

    def __repr__(self) -> str:
        return f"{'^' if self.up else '_'}{self.name}"


@dataclass(frozen=True)
class Factor:
    kernel: str
    indices: tuple[Idx, ...]

    def __repr__(self) -> str:
        return self.kernel + "".join(repr(i) for i in self.indices)


# ("sym" | "antisym", ((factor_position, slot_position), ...))
SymGroup = tuple[str, tuple[tuple[int, int], ...]]


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple[Factor, ...]
    groups: tuple[SymGroup, ...] = ()

    def all_indices(self):
        for fpos, f in enumerate(self.factors):
            for spos, idx in enumerate(f.indices):
                yield (fpos, spos), idx

    def index_census(self) -> dict[str, list[tuple[tuple[int, int], Idx]]]:
        census: dict[str, list] = {}
        for pos, idx in self.all_indices():
            census.setdefault(idx.name, []).append((pos, idx))
        return census

    def free_indices(self) -> dict[str, Idx]:
        return {
            name: occs[0][1]
            for name, occs in self.index_census().items()
            if len(occs) == 1
        }

    def dummy_names(self) -> set[str]:
        return {
            name for name, occs in self.index_census().items() if len(occs) == 2
        }

    def with_coeff(self, coeff: Fraction) -> "Term":
        return Term(coeff, self.factors, self.groups)

    def __repr__(self) -> str:
        head = str(self.coeff)
        body = " ".join(repr(f) for f in self.factors) or "1"
        tail = f" groups={list(self.groups)}" if self.groups else ""
        return f"{head} * {body}{tail}"


@dataclass(frozen=True)
class Expr:
    terms: tuple[Term, ...]

    @classmethod
    def zero(cls) -> "Expr":
        return cls(())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def free_indices(self) -> dict[str, Idx]:
        return self.terms[0].free_indices() if self.terms else {}

    def __add__(self, other: "Expr") -> "Expr":
        return Expr(self.terms + other.terms)

    def __sub__(self, other: "Expr") -> "Expr":
        return Expr(self.terms + tuple(t.with_coeff(-t.coeff) for t in other.terms))

    def __neg__(self) -> "Expr":
        return Expr(tuple(t.with_coeff(-t.coeff) for t in self.terms))

    def scaled(self, c: Fraction) -> "Expr":
        return Expr(tuple(t.with_coeff(t.coeff * c) for t in self.terms))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return "  +  ".join(repr(t) for t in self.terms)
