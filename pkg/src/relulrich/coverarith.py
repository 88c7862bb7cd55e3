"""Numeric bookkeeping for cyclic and abelian covers of curves and varieties.

All ramification is modeled as a totally ramified cyclic cover over a smooth
branch divisor: every branch point has a single preimage of index d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence


class InvalidCoverSpec(ValueError):
    pass


class NonIntegralGenus(ValueError):
    pass


class NegativeGenus(ValueError):
    pass


class StageMissingCertificate(ValueError):
    pass


@dataclass(frozen=True)
class CoverStage:
    d: int
    m_deg: int
    branch: str | None = None

    def __post_init__(self):
        if self.d < 2:
            raise InvalidCoverSpec(f"stage degree {self.d} < 2")
        if self.m_deg < 0:
            raise InvalidCoverSpec(f"negative line bundle degree {self.m_deg}")

    def to_json(self) -> dict:
        out = {"d": self.d, "m_deg": self.m_deg}
        if self.branch is not None:
            out["branch"] = self.branch
        return out


@dataclass(frozen=True)
class AbelianCoverSpec:
    stages: tuple[CoverStage, ...]

    def __post_init__(self):
        if not self.stages:
            raise InvalidCoverSpec("a cover needs at least one stage")

    @classmethod
    def cyclic(cls, d: int, m_deg: int = 1) -> "AbelianCoverSpec":
        return cls((CoverStage(d, m_deg),))

    @classmethod
    def from_degrees(cls, degrees: Sequence[int], m_degs: Sequence[int] | None = None):
        m_degs = m_degs or [1] * len(degrees)
        return cls(tuple(CoverStage(d, m) for d, m in zip(degrees, m_degs)))

    @classmethod
    def from_json(cls, data: dict) -> "AbelianCoverSpec":
        try:
            raw = data["stages"]
            stages = tuple(CoverStage(int(s["d"]), int(s.get("m_deg", 1)), s.get("branch"))
                           for s in raw)
        except (KeyError, TypeError) as exc:
            raise InvalidCoverSpec(f"malformed cover spec: {exc}") from None
        return cls(stages)

    def to_json(self) -> dict:
        return {"format_version": "1", "stages": [s.to_json() for s in self.stages]}

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s.d for s in self.stages)

    @property
    def total_degree(self) -> int:
        return math.prod(self.degrees)


def pushforward_summands(spec: AbelianCoverSpec) -> list[tuple[int, ...]]:
    """Exponent tuples (-k_1, ..., -k_l), one per summand M_1^{-k_1} (x) ... (x) M_l^{-k_l}.

    The first stage index varies fastest.
    """
    ranges = [range(s.d) for s in reversed(spec.stages)]
    return [tuple(-k for k in reversed(ks)) for ks in product(*ranges)]


def summand_degrees(spec: AbelianCoverSpec) -> list[int]:
    """Degree of each summand when every M_i has degree m_deg_i on a curve."""
    return [sum(e * s.m_deg for e, s in zip(exps, spec.stages))
            for exps in pushforward_summands(spec)]


@dataclass(frozen=True)
class CurveCoverArithmetic:
    g_base: int
    d: int
    branch_degree: int
    g_top: int
    ramification_degree: int

    def riemann_hurwitz_holds(self) -> bool:
        return (2 * self.g_top - 2
                == self.d * (2 * self.g_base - 2) + self.ramification_degree)

    @property
    def is_etale(self) -> bool:
        return self.branch_degree == 0

    def forced_degree(self, rank: int = 1) -> int:
        """Degree of a rank-r bundle whose pushforward is trivial of rank r*d.

        chi(E) = chi(O^{rd}) on the base gives deg E + r(1 - g_top) = r d (1 - g_base).
        """
        return rank * self.d * (1 - self.g_base) + rank * (self.g_top - 1)

    def required_h0(self, rank: int = 1) -> int:
        return rank * self.d

    def h0_upper_bound(self, rank: int = 1) -> int | None:
        deg = self.forced_degree(rank)
        if self.is_etale and self.g_base >= 1:
            # degree-zero semistable bundle: sections inject, so h0 <= rank
            return rank
        if rank == 1 and 0 <= deg <= 2 * self.g_top - 2:
            # Clifford when special; deg + 1 - g <= deg/2 + 1 otherwise
            return deg // 2 + 1
        return None

    def to_json(self) -> dict:
        return {"g_base": self.g_base, "d": self.d, "branch_degree": self.branch_degree,
                "g_top": self.g_top, "ramification_degree": self.ramification_degree}


def riemann_hurwitz(g_base: int, d: int, branch_degree: int) -> CurveCoverArithmetic:
    """Genus of a totally ramified degree-d cyclic cover branched over ``branch_degree`` points."""
    if g_base < 0:
        raise NegativeGenus(f"base genus {g_base}")
    if d < 2:
        raise InvalidCoverSpec(f"cover degree {d} < 2")
    if branch_degree < 0:
        raise InvalidCoverSpec(f"branch degree {branch_degree}")
    ram = (d - 1) * branch_degree
    twice = d * (2 * g_base - 2) + ram + 2
    if twice % 2:
        raise NonIntegralGenus(
            f"2g - 2 = {twice - 2} is odd for g_base={g_base}, d={d}, branch degree {branch_degree}")
    g_top = twice // 2
    if g_top < 0:
        raise NegativeGenus(f"g_top = {g_top}")
    if branch_degree == 0 and g_base == 0:
        raise NegativeGenus("P^1 has no connected etale covers of degree >= 2 "
                            f"(formula gives g_top = {g_top})")
    out = CurveCoverArithmetic(g_base, d, branch_degree, g_top, ram)
    assert out.riemann_hurwitz_holds()
    return out


def cyclic_branch_degree(d: int, m_deg: int) -> int:
    """The branch divisor of t^d = s with s a section of M^d has degree d * deg M."""
    return d * m_deg


@dataclass
class FeasibilityReport:
    verdict: str  # "Feasible", "InfeasibleEtale" or "InfeasibleH0"
    arithmetic: CurveCoverArithmetic
    rank: int
    forced_degree: int
    required_h0: int
    h0_bound: int | None
    narrative: str

    @property
    def feasible(self) -> bool:
        return self.verdict == "Feasible"

    def to_json(self) -> dict:
        return {
            "format_version": "1",
            "verdict": self.verdict,
            "arithmetic": self.arithmetic.to_json(),
            "rank": self.rank,
            "forced_degree": self.forced_degree,
            "required_h0": self.required_h0,
            "h0_upper_bound": self.h0_bound,
            "narrative": self.narrative,
        }


def feasibility_report(arith: CurveCoverArithmetic, rank: int = 1) -> FeasibilityReport:
    """Necessary conditions for a rank-r bundle on the top curve to push forward to a trivial one.

    "Feasible" only means none of the checks excludes it.
    """
    if rank < 1:
        raise ValueError("rank must be positive")
    if not arith.riemann_hurwitz_holds():
        raise ValueError("inconsistent cover arithmetic")
    deg = arith.forced_degree(rank)
    need = arith.required_h0(rank)
    bound = arith.h0_upper_bound(rank)
    head = (f"degree-{arith.d} cover of a genus-{arith.g_base} curve by a genus-{arith.g_top} "
            f"curve, branch degree {arith.branch_degree}; a rank-{rank} bundle with trivial "
            f"pushforward must have degree {deg} and h0 = {need}")
    if bound is not None and bound < need:
        if arith.is_etale:
            verdict = "InfeasibleEtale"
            why = (f"the cover is etale, so such a bundle is semistable of degree 0 "
                   f"and h0 <= rank = {bound} < {need}")
        else:
            verdict = "InfeasibleH0"
            why = (f"a line bundle of degree {deg} on a genus-{arith.g_top} curve has "
                   f"h0 <= floor({deg}/2) + 1 = {bound} < {need}")
        return FeasibilityReport(verdict, arith, rank, deg, need, bound, f"{head}; {why}.")
    if bound is None:
        why = "no available bound applies, so the rank is not excluded"
    else:
        why = f"the bound h0 <= {bound} allows {need}, so the rank is not excluded"
    return FeasibilityReport("Feasible", arith, rank, deg, need, bound, f"{head}; {why}.")


@dataclass
class StagePlan:
    index: int
    d: int
    m_deg: int
    terms: int
    specialized: bool
    rank: int
    branch: str | None = None

    def certificate_request(self) -> dict:
        return {"stage": self.index, "d": self.d, "n": self.m_deg, "branch": self.branch,
                "expected_terms": self.terms, "specialize": self.specialized}


@dataclass
class AbelianPlan:
    stages: list[StagePlan]
    total_rank: int
    total_degree: int
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "format_version": "1",
            "total_degree": self.total_degree,
            "total_rank": self.total_rank,
            "stages": [dict(s.certificate_request(), rank=s.rank) for s in self.stages],
            "notes": list(self.notes),
        }


def stage_rank(d: int, terms: int, specialize: bool = True) -> int:
    if specialize and d == 2 and terms == 1:
        return 1
    return d ** terms


def compose_abelian_plan(spec: AbelianCoverSpec, per_stage_terms: Sequence[int | None], *,
                         specialize: bool = True) -> AbelianPlan:
    """Rank of the bundle assembled stage by stage, pulling back and tensoring.

    ``per_stage_terms[i]`` is the number of product terms in stage i's branch
    decomposition; ``None`` marks a stage with no certificate available.
    """
    if len(per_stage_terms) != len(spec.stages):
        raise StageMissingCertificate(
            f"{len(per_stage_terms)} term counts for {len(spec.stages)} stages")
    plans = []
    for i, (stage, r) in enumerate(zip(spec.stages, per_stage_terms)):
        if r is None or r < 1:
            raise StageMissingCertificate(f"stage {i} (degree {stage.d}) has no decomposition")
        spec_used = specialize and stage.d == 2 and r == 1
        plans.append(StagePlan(i, stage.d, stage.m_deg, r, spec_used,
                               stage_rank(stage.d, r, specialize), stage.branch))
    total = math.prod(p.rank for p in plans)
    notes = [f"stage {p.index}: degree {p.d}, {p.terms} term(s), rank {p.rank}"
             + (" (2x2 double-cover factorization)" if p.specialized else "") for p in plans]
    return AbelianPlan(plans, total, spec.total_degree, notes)
