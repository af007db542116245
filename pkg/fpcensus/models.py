"""Pydantic models for invariants, numerics and census reports."""

import re
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import factorint


class QuotientType(str, Enum):
    """The two groups of order four."""
    C4 = "C4"
    V4 = "V4"


class AbelianInvariants(BaseModel):
    """Invariant factors d1 | d2 | ... of the torsion part plus the free rank."""

    model_config = ConfigDict(frozen=True)

    torsion: Tuple[int, ...] = ()
    free_rank: int = Field(0, ge=0)

    @field_validator("torsion")
    @classmethod
    def _check_chain(cls, torsion: Tuple[int, ...]) -> Tuple[int, ...]:
        for d in torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be at least 2")
        for d, e in zip(torsion, torsion[1:]):
            if e % d:
                raise ValueError(f"invariant factors {d} and {e} break the divisibility chain")
        return torsion

    @classmethod
    def from_cyclic_orders(cls, orders: List[int], free_rank: int = 0) -> "AbelianInvariants":
        """Invariants of a direct sum of cyclic groups Z/n (n = 0 means Z)."""
        prime_powers: Dict[int, List[int]] = {}
        for n in orders:
            n = abs(n)
            if n == 0:
                free_rank += 1
                continue
            for p, e in factorint(n).items():
                prime_powers.setdefault(int(p), []).append(int(e))

        length = max((len(v) for v in prime_powers.values()), default=0)
        factors = [1] * length
        for p, exponents in prime_powers.items():
            exponents.sort(reverse=True)
            for i, e in enumerate(exponents):
                factors[length - 1 - i] *= p ** e
        return cls(torsion=tuple(factors), free_rank=free_rank)

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        result = 1
        for d in self.torsion:
            result *= d
        return result

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def elementary_divisors(self) -> List[int]:
        """Prime-power orders of the primary cyclic summands, ascending."""
        divisors = []
        for d in self.torsion:
            divisors.extend(int(p) ** int(e) for p, e in factorint(d).items())
        return sorted(divisors)

    def __str__(self) -> str:
        parts = []
        divisors = self.elementary_divisors()
        i = 0
        while i < len(divisors):
            j = i
            while j < len(divisors) and divisors[j] == divisors[i]:
                j += 1
            count = j - i
            parts.append(f"C{divisors[i]}" + (f"^{count}" if count > 1 else ""))
            i = j
        if self.free_rank:
            parts.append("Z" + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        return " x ".join(parts) if parts else "trivial"


_INVARIANT_TERM_RE = re.compile(r"^(C|Z)(\d*)(?:\^(\d+))?$")


def parse_invariants(text: str) -> AbelianInvariants:
    """Parse strings such as ``C2^2 x C13``, ``Z^2`` or ``trivial``."""
    cleaned = text.replace("×", "x").replace("_", "").replace("{", "").replace("}", "")
    cleaned = cleaned.strip()
    if cleaned in ("", "trivial", "1"):
        return AbelianInvariants()
    orders: List[int] = []
    free_rank = 0
    for term in re.split(r"\s*x\s*", cleaned):
        match = _INVARIANT_TERM_RE.match(term.strip())
        if match is None:
            raise ValueError(f"cannot read abelian group term {term!r}")
        kind, order, power = match.groups()
        count = int(power) if power else 1
        if kind == "Z":
            if order:
                raise ValueError(f"cannot read abelian group term {term!r}")
            free_rank += count
        else:
            if not order:
                raise ValueError(f"cyclic term {term!r} needs an order")
            orders.extend([int(order)] * count)
    return AbelianInvariants.from_cyclic_orders(orders, free_rank)


class SurfaceNumerics(BaseModel):
    """Numerical invariants of a surface."""

    p_g: int = Field(..., ge=0, description="Geometric genus")
    q: int = Field(..., ge=0, description="Irregularity")
    chi: int = Field(..., description="Holomorphic Euler characteristic")
    K2: int = Field(..., description="Canonical self-intersection")

    @model_validator(mode="after")
    def _check_noether(self) -> "SurfaceNumerics":
        if self.chi != 1 - self.q + self.p_g:
            raise ValueError("chi must equal 1 - q + p_g")
        return self


class ThreefoldNumerics(BaseModel):
    """Product threefold built from a degree-36 surface and a curve of genus g."""

    g: int = Field(..., ge=2, description="Curve genus")
    p_gY: int
    K3: int
    degW: int
    degPhi: int
    formula: str = "K3 = 3 * K_X^2 * (2g - 2)"

    @model_validator(mode="after")
    def _check_formulas(self) -> "ThreefoldNumerics":
        if self.p_gY != 3 * self.g:
            raise ValueError("p_gY must equal 3g")
        if self.K3 != self.degPhi * self.degW:
            raise ValueError("K3 must equal degPhi * degW")
        return self


class CosetTableData(BaseModel):
    """JSON form of a coset table."""

    index: int = Field(..., ge=1)
    action: Dict[str, List[int]]


class AmbientNormalizer(BaseModel):
    """Normalizer data of a subgroup inside a supergroup of the ambient group."""

    normalizer_index: int = Field(..., ge=1, description="|N(S) : S| in the supergroup")
    ambient_index: int = Field(..., ge=1, description="[supergroup : S]")
    over_base: Optional[int] = Field(None, ge=1, description="[N(S) : base group], for subgroups normal in the base group")


class SubgroupRecord(BaseModel):
    """One index-n subgroup found by the census."""

    table: CosetTableData
    normal: bool
    quotient_type: Optional[QuotientType] = None
    abelian_invariants: AbelianInvariants
    abelian_invariants_text: str
    b1: int
    normalizer_index: int
    ambient_index: Optional[int] = None

    @model_validator(mode="after")
    def _check_record(self) -> "SubgroupRecord":
        if self.b1 != self.abelian_invariants.free_rank:
            raise ValueError("b1 must equal the free rank of the abelianization")
        has_type = self.normal and self.table.index == 4
        if has_type != (self.quotient_type is not None):
            raise ValueError("quotient_type is present exactly for normal subgroups of index 4")
        return self


class CensusReport(BaseModel):
    """Per-presentation classification record (Table 1 row shape)."""

    source: str
    index: int
    h1: AbelianInvariants
    h1_text: str
    n_subgroups: int
    n_conjugacy_classes: int
    n_normal: int
    n1: int
    quotient_type_histogram: Dict[QuotientType, int]
    lemma11_expected: Optional[int] = None
    lemma11_consistent: Optional[bool] = None
    per_subgroup: List[SubgroupRecord] = []

    @model_validator(mode="after")
    def _check_counts(self) -> "CensusReport":
        if not self.n1 <= self.n_normal <= self.n_subgroups:
            raise ValueError("counts must satisfy n1 <= n_normal <= n_subgroups")
        if self.index == 4 and sum(self.quotient_type_histogram.values()) != self.n_normal:
            raise ValueError("quotient type histogram must total n_normal")
        return self


class FileDiagnostic(BaseModel):
    """A per-file failure collected by the census."""

    source: str
    kind: str
    message: str


class AggregateSummary(BaseModel):
    """Totals of the N1 column over a set of reports or table rows."""

    rows: int = 0
    total: int = 0
    doubled: int = 0
    missing: int = 0

    def reconcile(self, claimed_total: int) -> Dict[str, int]:
        """Compare with a published total; ``gap`` is what missing cells would need to hold."""
        return {
            "claimed_total": claimed_total,
            "claimed_doubled": 2 * claimed_total,
            "computed_total": self.total,
            "gap": claimed_total - self.total,
        }


class CensusOutcome(BaseModel):
    """Everything one census run produced."""

    schema_version: int = 1
    index: int
    reports: List[CensusReport] = []
    diagnostics: List[FileDiagnostic] = []
    summary: AggregateSummary = Field(default_factory=AggregateSummary)


class CensusOptions(BaseModel):
    """Options for one census run."""

    index: int = Field(4, ge=1)
    max_cosets: Optional[int] = Field(None, ge=1)
    max_nodes: Optional[int] = Field(None, ge=1)
    workers: Optional[int] = Field(None, ge=1)
    pattern: Optional[str] = None
    supergroup_path: Optional[Path] = None
    embed: Optional[str] = None

    @model_validator(mode="after")
    def _check_supergroup(self) -> "CensusOptions":
        if (self.supergroup_path is None) != (self.embed is None):
            raise ValueError("supergroup and embed must be given together")
        return self


class Table1Row(BaseModel):
    """One row of the published census table."""

    lattice: str
    aut: str
    h1: str
    n0: int
    n1: Optional[int] = None


class Table1Check(BaseModel):
    """Correspondence check for one published row."""

    lattice: str
    h1: str
    n0: int
    n1: Optional[int]
    order4_quotients: int
    status: str  # "consistent", "filtered", "impossible", "missing"
