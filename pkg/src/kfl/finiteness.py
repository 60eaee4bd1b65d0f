"""Product fibrations onto Z^t and the finiteness type of their kernels.

A product of r factor maps (branched covers of the torus, or bare H1 data)
adds up to a single map from a product of surface groups onto Z^t.  Two
statements about the kernel are tracked separately because they rest on
different hypotheses:

* f_upper ("not of type F_r"): needs r >= 3 factors, each a genus >= 2
  surface with a non-trivial factor map.  Certified by the subgroup
  criterion of Bridson, Howie, Miller and Short: all factor kernels are
  infinitely generated, so the product kernel fails FP_r.
* f_lower ("type F_{r-1}"): additionally needs every factor to be an
  actual branched cover and the product map to be surjective on homology,
  so the associated pencil has connected fibres and an (r-1)-skeleton
  bound applies.

Classification: for products of purely branched covers, the multiset of
(genus, sheet count) pairs is a complete isomorphism invariant of the
kernel (for r, s >= 3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .covers import MonodromyRep, genus, image_lattice, is_connected, is_purely_branched, make_kfold, validate
from .errors import InvalidInputError
from .homology import H1Map
from .matrices import xgcd


Factor = MonodromyRep | H1Map


@dataclass(frozen=True)
class ProductFibration:
    """An ordered list of factors mapping to a common Z^t."""

    target_rank: int
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def r(self):
        return len(self.factors)


def product_violations(p: ProductFibration):
    """Named violations of the product invariants (empty means valid)."""
    out = []
    if p.target_rank < 1:
        out.append(f"target_rank: must be >= 1, got {p.target_rank}")
    if p.r < 1:
        out.append("factors: need at least one factor")
    for i, f in enumerate(p.factors, start=1):
        if isinstance(f, MonodromyRep):
            if p.target_rank != 2:
                out.append(
                    f"factor {i}: target_rank mismatch (branched covers map to Z^2, "
                    f"product has target rank {p.target_rank})"
                )
            v = validate(f)
            if v:
                out.extend(f"factor {i}: {x}" for x in v)
            elif not is_connected(f):
                out.append(f"factor {i}: disconnected cover")
        elif isinstance(f, H1Map):
            if f.target_rank != p.target_rank:
                out.append(
                    f"factor {i}: target_rank mismatch ({f.target_rank} vs {p.target_rank})"
                )
        else:
            out.append(f"factor {i}: unsupported factor type {type(f).__name__}")
    return out


def _require_valid(p):
    v = product_violations(p)
    if v:
        raise InvalidInputError("invalid product: " + "; ".join(v), v)


@dataclass(frozen=True)
class FactorSummary:
    kind: str  # "cover" or "h1"
    genus: int
    k: int | None  # sheet / block count when the factor is canonical
    nontrivial: bool


def summarize_factor(f) -> FactorSummary:
    if isinstance(f, MonodromyRep):
        g = genus(f)
        k = f.degree if is_purely_branched(f) else None
        nontrivial = image_lattice(f).rank > 0
        return FactorSummary(kind="cover", genus=g, k=k, nontrivial=nontrivial)
    return FactorSummary(kind="h1", genus=f.g, k=f.canonical_k(), nontrivial=not f.is_zero())


# ---------------------------------------------------------------------------
# the two families of examples


def build_phi(genera) -> ProductFibration:
    """Product of double covers: every factor induces C(g_i, 2)."""
    return ProductFibration(2, tuple(make_kfold(_checked(g), 2) for g in genera))


def build_psi(genera) -> ProductFibration:
    """Product of full-degree covers: every factor induces C(g_i, g_i)."""
    return ProductFibration(2, tuple(make_kfold(_checked(g), g) for g in genera))


def _checked(g):
    if g < 2:
        raise InvalidInputError(f"factor genus must be >= 2, got {g}")
    return g


# ---------------------------------------------------------------------------
# surjectivity of the sum map


def _spans_full(vectors, t):
    """True iff the integer vectors generate all of Z^t."""
    pivots = {}
    for vec in vectors:
        v = list(vec)
        for c in range(t):
            if v[c] == 0:
                continue
            if c not in pivots:
                pivots[c] = v if v[c] > 0 else [-x for x in v]
                break
            p = pivots[c]
            g, s, u = xgcd(p[c], v[c])
            new_p = [s * a + u * b for a, b in zip(p, v)]
            v = [(p[c] // g) * b - (v[c] // g) * a for a, b in zip(p, v)]
            pivots[c] = new_p
        # fully reduced vectors drop out
    if len(pivots) != t:
        return False
    index = 1
    for c in range(t):
        index *= abs(pivots[c][c])
    return index == 1


def is_surjective(p: ProductFibration):
    """True iff the factor images together generate all of Z^t.

    For rank-2 targets with branched-cover factors this is exactly the
    connected-fibre criterion for the associated pencil.
    """
    _require_valid(p)
    vectors = []
    for f in p.factors:
        if isinstance(f, MonodromyRep):
            vectors.extend(image_lattice(f).rows)
        else:
            vectors.extend(f.column_vectors())
    return _spans_full(vectors, p.target_rank)


# ---------------------------------------------------------------------------
# finiteness report


@dataclass(frozen=True)
class FinitenessReport:
    """What is established about the kernel, with hypotheses tracked."""

    r: int
    target_rank: int
    factors: tuple[FactorSummary, ...]
    surjective: bool
    f_lower: bool  # classifying space with finite (r-1)-skeleton established
    f_upper: bool  # failure of type F_r established
    missing_lower: tuple[str, ...]
    missing_upper: tuple[str, ...]
    provenance: tuple[str, ...]

    def statement(self):
        parts = []
        if self.f_lower:
            parts.append(f"of type F_{self.r - 1}")
        if self.f_upper:
            parts.append(f"not of type F_{self.r}")
        if not parts:
            return "no finiteness conclusion established"
        return "kernel is " + " and ".join(parts)

    def to_dict(self):
        return {
            "r": self.r,
            "target_rank": self.target_rank,
            "surjective": self.surjective,
            "factors": [
                {"kind": s.kind, "genus": s.genus, "k": s.k, "nontrivial": s.nontrivial}
                for s in self.factors
            ],
            "f_lower": {
                "established": self.f_lower,
                "statement": f"type F_{self.r - 1}",
                "missing_hypotheses": list(self.missing_lower),
            },
            "f_upper": {
                "established": self.f_upper,
                "statement": f"not of type F_{self.r}",
                "missing_hypotheses": list(self.missing_upper),
            },
            "statement": self.statement(),
            "provenance": list(self.provenance),
        }


def finiteness_report(p: ProductFibration) -> FinitenessReport:
    """Derive the finiteness flags, naming any missing hypothesis.

    Never throws on hypothesis failure; a flag is simply absent with its
    reasons listed.
    """
    _require_valid(p)
    summaries = tuple(summarize_factor(f) for f in p.factors)
    surjective = is_surjective(p)
    r = p.r

    missing_upper = []
    if r < 3:
        missing_upper.append(f"needs r >= 3 factors (got r = {r})")
    for i, s in enumerate(summaries, start=1):
        if not s.nontrivial:
            missing_upper.append(
                f"factor {i}: non-trivial homomorphism hypothesis fails (zero map on H1)"
            )
        if s.genus < 2:
            missing_upper.append(f"factor {i}: needs genus >= 2 (got genus {s.genus})")

    missing_lower = list(missing_upper)
    for i, s in enumerate(summaries, start=1):
        if s.kind != "cover":
            missing_lower.append(
                f"factor {i}: needs a branched-cover realization (bare H1 data given)"
            )
    if not surjective:
        missing_lower.append(
            "the product map is not surjective on H1, so fibre connectivity fails"
        )

    provenance = []
    if not missing_upper:
        provenance.append("bhms-kernel-criterion")
    if not missing_lower:
        provenance.append("branched-pencil-construction")

    return FinitenessReport(
        r=r,
        target_rank=p.target_rank,
        factors=summaries,
        surjective=surjective,
        f_lower=not missing_lower,
        f_upper=not missing_upper,
        missing_lower=tuple(missing_lower),
        missing_upper=tuple(missing_upper),
        provenance=tuple(provenance),
    )


# ---------------------------------------------------------------------------
# isomorphism classification


@dataclass(frozen=True)
class ClassificationVerdict:
    answer: str  # "YES" | "NO" | "UNKNOWN"
    invariant_left: tuple | None
    invariant_right: tuple | None
    note: str = ""

    def to_dict(self):
        out = {"answer": self.answer}
        if self.invariant_left is not None:
            out["invariant_left"] = [list(x) for x in self.invariant_left]
        if self.invariant_right is not None:
            out["invariant_right"] = [list(x) for x in self.invariant_right]
        if self.note:
            out["note"] = self.note
        return out


def _pure_invariant(p):
    """Sorted multiset of (genus, sheets) pairs, or (None, reason)."""
    pairs = []
    for i, f in enumerate(p.factors, start=1):
        if not isinstance(f, MonodromyRep):
            return None, f"factor {i} is bare H1 data, not a branched cover"
        if not is_purely_branched(f):
            return None, f"factor {i} is not purely branched"
        pairs.append((genus(f), f.degree))
    return tuple(sorted(pairs)), None


def classify_products(p: ProductFibration, q: ProductFibration) -> ClassificationVerdict:
    """Compare kernels of two products of purely branched covers.

    The sorted multiset of (genus, sheets) pairs is a complete invariant
    when both products have r, s >= 3 purely branched factors over a rank-2
    target.  Outside those hypotheses the verdict is UNKNOWN with a pointer
    to the per-factor witness search.
    """
    _require_valid(p)
    _require_valid(q)
    unknown_reasons = []
    if p.target_rank != 2 or q.target_rank != 2:
        unknown_reasons.append("classification needs rank-2 targets")
    if p.r < 3 or q.r < 3:
        unknown_reasons.append(f"classification needs r, s >= 3 (got {p.r} and {q.r})")
    inv_l, why_l = _pure_invariant(p)
    inv_r, why_r = _pure_invariant(q)
    for why in (why_l, why_r):
        if why:
            unknown_reasons.append(why)
    if unknown_reasons:
        return ClassificationVerdict(
            answer="UNKNOWN",
            invariant_left=inv_l,
            invariant_right=inv_r,
            note="; ".join(unknown_reasons)
            + "; compare factors individually with equivalence.search_witness",
        )
    if inv_l == inv_r:
        return ClassificationVerdict(
            answer="YES",
            invariant_left=inv_l,
            invariant_right=inv_r,
            note="equal (genus, sheets) multisets; kernels are isomorphic",
        )
    return ClassificationVerdict(
        answer="NO",
        invariant_left=inv_l,
        invariant_right=inv_r,
        note="the (genus, sheets) multiset is an isomorphism invariant and differs",
    )
