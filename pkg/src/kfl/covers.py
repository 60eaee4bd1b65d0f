"""Permutation monodromy models of branched covers of the torus.

A degree-d cover of the torus E branched over l points is encoded by where
the standard generators of the fundamental group of the punctured torus send
the d sheets: two handle loops (alpha, beta) and one small positively
oriented loop around each branch point.  The single defining relation of
the punctured torus forces

    [alpha, beta] * g_1 * ... * g_l  ==  identity

as a product of sheet permutations, composed left to right (see perm.py).

The total space is connected exactly when the generated permutation group is
transitive.  The genus comes from the Euler-characteristic count over a
genus-1 base: 2 - 2g = -sum_i (d - cycles(g_i)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InvalidInputError
from .matrices import xgcd
from .perm import Permutation, commutator


# ---------------------------------------------------------------------------
# sublattices of Z^2


@dataclass(frozen=True)
class Lattice2:
    """A sublattice of Z^2 in canonical row Hermite form.

    ``rows`` holds zero, one or two basis vectors.  At rank 2 the basis is
    ((a, b), (0, d)) with a, d > 0 and 0 <= b < d, which is unique, so
    lattice equality is tuple equality.
    """

    rows: tuple[tuple[int, int], ...]

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def full(cls):
        return cls(((1, 0), (0, 1)))

    @classmethod
    def from_vectors(cls, vectors):
        r1 = None  # (a, b) with a > 0
        d = 0  # second row is (0, d) once d > 0
        for x, y in vectors:
            x = int(x)
            y = int(y)
            if x:
                if r1 is None:
                    r1 = (x, y) if x > 0 else (-x, -y)
                    continue
                a, b = r1
                q, rem = divmod(x, a)
                if rem:
                    g, s, t = xgcd(a, x)
                    r1 = (g, s * b + t * y)
                    y = (x // g) * b - (a // g) * y
                else:
                    y -= q * b
            if y:
                d = gcd(d, y)
                if d == 1 and r1 is not None and r1[0] == 1:
                    return cls(((1, 0), (0, 1)))
        if r1 is not None and d:
            r1 = (r1[0], r1[1] % d)
        rows = tuple(r for r in (r1, (0, d) if d else None) if r is not None)
        return cls(rows)

    @property
    def rank(self):
        return len(self.rows)

    def is_full(self):
        return self.rows == ((1, 0), (0, 1))

    def index(self):
        """Index in Z^2 when full rank, else None."""
        if self.rank != 2:
            return None
        return self.rows[0][0] * self.rows[1][1]

    def contains(self, v):
        x, y = v
        r1 = next((r for r in self.rows if r[0] != 0), None)
        r2 = next((r for r in self.rows if r[0] == 0), None)
        if r1 is None:
            if x != 0:
                return False
        else:
            if x % r1[0]:
                return False
            y = y - (x // r1[0]) * r1[1]
            x = 0
        if r2 is None:
            return y == 0
        return y % r2[1] == 0

    def __add__(self, other: "Lattice2") -> "Lattice2":
        return Lattice2.from_vectors(self.rows + other.rows)

    def describe(self):
        if self.is_full():
            return "full"
        if self.rank == 0:
            return "zero"
        basis = ", ".join(str(r) for r in self.rows)
        if self.rank == 2:
            return f"index {self.index()}, basis {basis}"
        return f"rank 1, basis {basis}"


# ---------------------------------------------------------------------------
# monodromy data


@dataclass(frozen=True)
class Branch:
    label: str
    perm: Permutation


@dataclass(frozen=True)
class MonodromyRep:
    """Monodromy of a branched cover of the torus.

    The constructor is permissive; use validate() to get the list of broken
    invariants.  Branch points whose permutation is the identity are
    rejected by validate: they signal a caller error, not an actual branch
    point.
    """

    degree: int
    sigma_alpha: Permutation
    sigma_beta: Permutation
    branches: tuple[Branch, ...]

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))

    @property
    def branch_perms(self):
        return [b.perm for b in self.branches]

    def all_generators(self):
        return [self.sigma_alpha, self.sigma_beta] + self.branch_perms


def validate(rep: MonodromyRep):
    """Return the list of violated invariants (empty means valid)."""
    violations = []
    d = rep.degree
    if d < 1:
        violations.append(f"degree: must be a positive integer, got {d}")
        return violations
    for name, p in (("alpha", rep.sigma_alpha), ("beta", rep.sigma_beta)):
        if p.degree != d:
            violations.append(f"permutation-degree: {name} has degree {p.degree}, expected {d}")
    for i, b in enumerate(rep.branches, start=1):
        if b.perm.degree != d:
            violations.append(
                f"permutation-degree: branch {b.label or i} has degree {b.perm.degree}, expected {d}"
            )
    if violations:
        return violations
    for i, b in enumerate(rep.branches, start=1):
        if b.perm.is_identity():
            violations.append(f"identity-branch: branch {b.label or i} acts trivially")
    relator = commutator(rep.sigma_alpha, rep.sigma_beta)
    for b in rep.branches:
        relator = relator * b.perm
    if not relator.is_identity():
        violations.append("relator: [alpha, beta] * (branch product) is not the identity")
    total = sum(d - b.perm.cycle_count() for b in rep.branches)
    if total % 2:
        violations.append(f"ramification-parity: total ramification {total} is odd")
    return violations


def _require_valid(rep):
    violations = validate(rep)
    if violations:
        raise InvalidInputError("invalid monodromy data: " + "; ".join(violations), violations)


def _orbit_of_zero(rep):
    gens = rep.all_generators()
    seen = {0}
    stack = [0]
    while stack:
        p = stack.pop()
        for g in gens:
            q = g.images[p]
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def is_connected(rep: MonodromyRep):
    """True when the monodromy group acts transitively on the sheets.

    Assumes a valid rep (precondition); run validate() first on raw data.
    """
    return len(_orbit_of_zero(rep)) == rep.degree


def _require_connected(rep):
    if not is_connected(rep):
        raise InvalidInputError(
            "disconnected cover: the monodromy action is not transitive",
            ["disconnected"],
        )


def genus(rep: MonodromyRep):
    """Genus of the covering surface, by the Euler-characteristic count."""
    _require_valid(rep)
    _require_connected(rep)
    total = sum(rep.degree - b.perm.cycle_count() for b in rep.branches)
    return 1 + total // 2


def is_purely_branched(rep: MonodromyRep):
    """True when both handle loops lift to loops on every sheet.

    Assumes a valid rep (precondition); run validate() first on raw data.
    """
    return rep.sigma_alpha.is_identity() and rep.sigma_beta.is_identity()


def image_lattice(rep: MonodromyRep) -> Lattice2:
    """Image of the covering surface's fundamental group inside Z^2.

    Computed from Schreier generators of the stabilizer of sheet 0: a
    breadth-first transversal (generators in the fixed order alpha, beta,
    branch loops; shortest-then-lexicographic words) assigns each sheet an
    exponent vector, and every non-tree edge contributes the vector

        t(p) + e(x) - t(p^x)

    where e(alpha) = (1, 0), e(beta) = (0, 1) and every branch loop counts
    as (0, 0).  The resulting vectors generate the image lattice; it is all
    of Z^2 exactly when the cover is surjective on fundamental groups.

    Assumes a valid rep (precondition) and rejects disconnected input,
    which the sheet traversal detects for free.
    """
    gens = [(rep.sigma_alpha, (1, 0)), (rep.sigma_beta, (0, 1))]
    gens += [(b.perm, (0, 0)) for b in rep.branches]
    transversal = {0: (0, 0)}
    order = [0]
    vectors = set()
    for p in order:
        tp = transversal[p]
        for g, e in gens:
            q = g.images[p]
            w = (tp[0] + e[0], tp[1] + e[1])
            tq = transversal.get(q)
            if tq is None:
                transversal[q] = w
                order.append(q)
            else:
                v = (w[0] - tq[0], w[1] - tq[1])
                if v != (0, 0):
                    vectors.add(v)
    if len(transversal) != rep.degree:
        raise InvalidInputError(
            "disconnected cover: the monodromy action is not transitive",
            ["disconnected"],
        )
    return Lattice2.from_vectors(vectors)


# ---------------------------------------------------------------------------
# explicit constructions


def make_cyclic(h: int) -> MonodromyRep:
    """Cyclic h-fold cover of the torus branched over two points.

    The sheets carry a Z/h action; one branch loop advances the sheets by
    one step and the other by minus one.  The handle loops lift to loops, so
    the cover is purely branched, and the genus works out to h.
    """
    if h < 2:
        raise InvalidInputError(f"cyclic construction needs h >= 2, got {h}")
    step = Permutation(tuple((i + 1) % h for i in range(h)))
    return MonodromyRep(
        degree=h,
        sigma_alpha=Permutation.identity(h),
        sigma_beta=Permutation.identity(h),
        branches=(Branch("b1", step), Branch("b2", step.inverse())),
    )


def make_kfold(g: int, k: int) -> MonodromyRep:
    """k-fold purely branched cover of genus g, all branch orders two.

    Built by cutting one reference copy of the torus along g-1 slits and
    gluing k-1 further copies back in: copy i (1 <= i <= k-2) along slit i,
    and the last copy along all remaining slits.  Each slit end gives a
    branch point whose monodromy is a transposition into the reference
    sheet, so there are two copies of (0 i) for i = 1..k-2 and
    2(g-1) - 2(k-2) copies of (0 k-1).  Morse-type double points only.
    """
    if not 2 <= k <= g:
        raise InvalidInputError(f"k-fold construction needs 2 <= k <= g, got g={g}, k={k}")
    branches = []
    for i in range(1, k - 1):
        t = Permutation.from_cycles([(0, i)], k)
        branches.append(t)
        branches.append(t)
    last = Permutation.from_cycles([(0, k - 1)], k)
    branches.extend([last] * (2 * (g - 1) - 2 * (k - 2)))
    return MonodromyRep(
        degree=k,
        sigma_alpha=Permutation.identity(k),
        sigma_beta=Permutation.identity(k),
        branches=tuple(Branch(f"b{i}", p) for i, p in enumerate(branches, start=1)),
    )
