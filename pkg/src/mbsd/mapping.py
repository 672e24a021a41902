"""Mapping specifications relating behaviours of domain A to domain B."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import ltlf
from .ltlf import Formula

POINTWISE = "pointwise"
TARGET = "target"
GENERAL = "general"
KINDS = (POINTWISE, TARGET, GENERAL)


class MappingError(ValueError):
    pass


def _as_formula(x: Formula | str) -> Formula:
    return ltlf.parse(x) if isinstance(x, str) else x


@dataclass(frozen=True)
class MappingSpec:
    """Either k pairs ``(phi_i, psi_i)`` of propositional formulas (point-wise
    and target kinds) or one arbitrary LTLf formula (general kind).

    * point-wise:  AND_i  G(phi_i -> psi_i)
    * target:      AND_i  (F phi_i) -> (F psi_i)
    """

    kind: str
    conjuncts: tuple[tuple[Formula, Formula], ...] = ()
    formula: Formula | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MappingError(f"unknown mapping kind {self.kind!r}")
        if self.kind == GENERAL:
            if self.formula is None:
                raise MappingError("general mapping needs a formula")
        else:
            if not self.conjuncts:
                raise MappingError(f"{self.kind} mapping needs at least one conjunct")
            for phi, psi in self.conjuncts:
                if not (ltlf.is_temporal_free(phi) and ltlf.is_temporal_free(psi)):
                    raise MappingError(
                        f"{self.kind} conjunct sides must be propositional: "
                        f"{ltlf.to_str(phi)} / {ltlf.to_str(psi)}")

    @classmethod
    def pointwise(cls, pairs: Iterable[tuple[Formula | str, Formula | str]]) -> MappingSpec:
        return cls(POINTWISE, tuple((_as_formula(a), _as_formula(b)) for a, b in pairs))

    @classmethod
    def target(cls, pairs: Iterable[tuple[Formula | str, Formula | str]]) -> MappingSpec:
        return cls(TARGET, tuple((_as_formula(a), _as_formula(b)) for a, b in pairs))

    @classmethod
    def general(cls, formula: Formula | str) -> MappingSpec:
        return cls(GENERAL, formula=_as_formula(formula))

    @property
    def k(self) -> int:
        return len(self.conjuncts)

    def invariant(self) -> Formula:
        """The propositional body ``AND_i (phi_i -> psi_i)`` of a point-wise mapping."""
        if self.kind != POINTWISE:
            raise MappingError("only point-wise mappings have an invariant body")
        return ltlf.conjoin([ltlf.Implies(a, b) for a, b in self.conjuncts])

    def as_ltlf(self) -> Formula:
        """The whole mapping as one LTLf formula."""
        if self.kind == GENERAL:
            return self.formula
        if self.kind == POINTWISE:
            return ltlf.conjoin([ltlf.Globally(ltlf.Implies(a, b)) for a, b in self.conjuncts])
        return ltlf.conjoin([ltlf.Implies(ltlf.Eventually(a), ltlf.Eventually(b))
                             for a, b in self.conjuncts])

    def check_sides(self, props_a: Iterable[str], props_b: Iterable[str]) -> None:
        pa, pb = frozenset(props_a), frozenset(props_b)
        if self.kind == GENERAL:
            extra = ltlf.propositions(self.formula) - pa - pb
            if extra:
                raise MappingError(f"mapping mentions unknown propositions {sorted(extra)}")
            return
        for i, (phi, psi) in enumerate(self.conjuncts):
            bad = ltlf.propositions(phi) - pa
            if bad:
                raise MappingError(f"conjunct {i}: A side uses non-A propositions {sorted(bad)}")
            bad = ltlf.propositions(psi) - pb
            if bad:
                raise MappingError(f"conjunct {i}: B side uses non-B propositions {sorted(bad)}")

    def to_json(self) -> dict:
        if self.kind == GENERAL:
            return {"kind": GENERAL, "formula": ltlf.to_str(self.formula)}
        return {"kind": self.kind,
                "conjuncts": [{"phi": ltlf.to_str(a), "psi": ltlf.to_str(b)}
                              for a, b in self.conjuncts]}

    @classmethod
    def from_json(cls, doc: dict) -> MappingSpec:
        try:
            kind = doc["kind"]
            if kind == GENERAL:
                return cls.general(doc["formula"])
            pairs: Sequence = doc["conjuncts"]
            return cls(kind, tuple((ltlf.parse(c["phi"]), ltlf.parse(c["psi"])) for c in pairs))
        except (KeyError, TypeError) as exc:
            raise MappingError(f"malformed mapping document: {exc!r}") from exc
