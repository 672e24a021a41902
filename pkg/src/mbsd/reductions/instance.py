"""MBSD problem instances and their JSON encoding."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .. import domains, ltlf
from ..domains import DynamicDomain
from ..ltlf import Formula
from ..mapping import GENERAL, POINTWISE, TARGET, MappingError, MappingSpec

STOP_A = "A"
STOP_B = "B"


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class MbsdInstance:
    domain_a: DynamicDomain
    domain_b: DynamicDomain
    mapping: MappingSpec
    stop_agent: str

    def __post_init__(self):
        domains.validate(self.domain_a)
        domains.validate(self.domain_b)
        if self.stop_agent not in (STOP_A, STOP_B):
            raise InstanceError(f"stop agent must be 'A' or 'B', got {self.stop_agent!r}")
        shared = self.domain_a.props & self.domain_b.props
        if shared:
            raise InstanceError(f"the two domains share propositions {sorted(shared)}")
        try:
            self.mapping.check_sides(self.domain_a.props, self.domain_b.props)
        except MappingError as exc:
            raise InstanceError(str(exc)) from exc
        if self.mapping.kind == POINTWISE and self.stop_agent != STOP_A:
            raise InstanceError("point-wise mappings require stop agent A")
        if self.mapping.kind == TARGET and self.stop_agent != STOP_B:
            raise InstanceError("target mappings require stop agent B")

    @property
    def kind(self) -> str:
        return self.mapping.kind

    @property
    def formula(self) -> Formula:
        """The mapping as one LTLf formula over both proposition sets."""
        return self.mapping.as_ltlf()

    def joint_label(self, s: int, t: int) -> frozenset[str]:
        return self.domain_a.labels[s] | self.domain_b.labels[t]

    def joint_word(self, states_a, states_b) -> list[frozenset[str]]:
        if len(states_a) != len(states_b):
            raise ValueError("joint traces need equal lengths")
        return [self.joint_label(s, t) for s, t in zip(states_a, states_b)]

    def masks(self) -> tuple[list[int], list[int]]:
        """Bit i of ``cmask[s]`` / ``dmask[t]``: phi_i holds at s / psi_i holds at t."""
        if self.kind == GENERAL:
            raise InstanceError("general mappings have no conjunct masks")
        cmask = [0] * self.domain_a.n_states
        dmask = [0] * self.domain_b.n_states
        for i, (phi, psi) in enumerate(self.mapping.conjuncts):
            for s, lab in enumerate(self.domain_a.labels):
                if ltlf.eval_assignment(phi, lab):
                    cmask[s] |= 1 << i
            for t, lab in enumerate(self.domain_b.labels):
                if ltlf.eval_assignment(psi, lab):
                    dmask[t] |= 1 << i
        return cmask, dmask

    def to_json(self) -> dict:
        return {
            "domain_a": domains.encode(self.domain_a),
            "domain_b": domains.encode(self.domain_b),
            "mapping": self.mapping.to_json(),
            "stop_agent": self.stop_agent,
        }

    @classmethod
    def from_json(cls, doc: dict, base_dir: str | None = None) -> MbsdInstance:
        if not isinstance(doc, dict):
            raise InstanceError("instance document must be a JSON object")
        for key in ("domain_a", "domain_b", "mapping", "stop_agent"):
            if key not in doc:
                raise InstanceError(f"instance document is missing {key!r}")
        da = _load_domain(doc["domain_a"], base_dir)
        db = _load_domain(doc["domain_b"], base_dir)
        try:
            mapping = MappingSpec.from_json(doc["mapping"])
        except (MappingError, ltlf.LtlfSyntaxError) as exc:
            raise InstanceError(f"bad mapping: {exc}") from exc
        return cls(da, db, mapping, doc["stop_agent"])


def _load_domain(x, base_dir: str | None) -> DynamicDomain:
    if isinstance(x, str):
        path = x if os.path.isabs(x) or base_dir is None else os.path.join(base_dir, x)
        with open(path, encoding="utf-8") as fh:
            return domains.loads(fh.read())
    return domains.decode(x)


def load_instance(path: str) -> MbsdInstance:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: malformed JSON: {exc}") from exc
    return MbsdInstance.from_json(doc, os.path.dirname(os.path.abspath(path)))


def dumps_instance(p: MbsdInstance) -> str:
    return json.dumps(p.to_json(), indent=1, sort_keys=True)
