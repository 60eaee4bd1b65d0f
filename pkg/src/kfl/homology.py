"""Integer linear algebra for first homology.

Conventions, frozen once and used everywhere:

* the homology basis of a genus-g surface is ordered (a1, b1, ..., ag, bg),
  so the intersection form is the block diagonal J_{2g} of g copies of
  J = [[0, 1], [-1, 0]];
* an induced map to the torus is a 2 x 2g integer matrix acting on column
  vectors; column 2i-2 (0-based 2(i-1)) is the image of a_i and column
  2i-1 the image of b_i;
* a change of basis A acts on the source from the right: the equivalence
  equation reads M * A = B * N.
"""

from __future__ import annotations

from dataclasses import dataclass

from .covers import Lattice2, MonodromyRep, genus, image_lattice, is_purely_branched
from .errors import InvalidInputError
from .matrices import Matrix


def j_matrix(g: int) -> Matrix:
    """The standard symplectic form on Z^{2g}: block diagonal J blocks."""
    if g < 1:
        raise InvalidInputError(f"j_matrix needs g >= 1, got {g}")
    j2 = Matrix(((0, 1), (-1, 0)))
    return Matrix.block_diag([j2] * g)


def symplectic_sign(m: Matrix):
    """+1 if m^t J m = J, -1 if m^t J m = -J, None otherwise."""
    if m.nrows != m.ncols:
        raise InvalidInputError("symplectic_sign needs a square matrix")
    if m.nrows % 2:
        raise InvalidInputError("symplectic_sign needs an even-dimensional matrix")
    j = j_matrix(m.nrows // 2)
    p = m.transpose() * j * m
    if p == j:
        return 1
    if p == -j:
        return -1
    return None


@dataclass(frozen=True)
class SpElement:
    """An element of Sp+-(2g, Z): matrix plus its symplectic sign."""

    matrix: Matrix
    sign: int

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SpElement":
        s = symplectic_sign(m)
        if s is None:
            raise InvalidInputError("matrix is not in Sp+-(2g, Z)")
        return cls(m, s)

    @classmethod
    def identity(cls, g):
        return cls(Matrix.identity(2 * g), 1)

    @property
    def g(self):
        return self.matrix.nrows // 2

    def __mul__(self, other: "SpElement") -> "SpElement":
        return SpElement(self.matrix * other.matrix, self.sign * other.sign)

    def inverse(self) -> "SpElement":
        # A^t J A = eps J  gives  A^-1 = -eps J A^t J, exactly over Z.
        j = j_matrix(self.g)
        inv = (j * self.matrix.transpose() * j).scale(-self.sign)
        return SpElement(inv, self.sign)


def transvection(v) -> SpElement:
    """The symplectic transvection x -> x + <x, v> v, as I - v v^t J."""
    v = tuple(v)
    n = len(v)
    j = j_matrix(n // 2)
    vvt = Matrix(tuple(tuple(a * b for b in v) for a in v))
    return SpElement(Matrix.identity(n) - vvt * j, 1)


def pair_permutation_matrix(g, pair_images) -> SpElement:
    """Permute the g symplectic (a_i, b_i) pairs; always sign +1."""
    rows = [[0] * (2 * g) for _ in range(2 * g)]
    for i, pi in enumerate(pair_images):
        rows[2 * pi][2 * i] = 1
        rows[2 * pi + 1][2 * i + 1] = 1
    return SpElement(Matrix(tuple(tuple(r) for r in rows)), 1)


def orientation_flip(g) -> SpElement:
    """diag(1, -1, ..., 1, -1): reverses every b_i, so the sign is -1."""
    rows = tuple(
        tuple((-1 if i % 2 else 1) if i == j else 0 for j in range(2 * g))
        for i in range(2 * g)
    )
    return SpElement(Matrix(rows), -1)


def _chain_vectors(g):
    # a1, b1, a1+a2, b2, a2+a3, b3, ...: consecutive vectors pair to +-1,
    # non-consecutive ones to 0.  Transvections along such a chain generate
    # Sp(2g, Z) (the classical surjectivity of the braid-group symplectic
    # representation).
    vecs = []
    e = lambda i: tuple(1 if j == i else 0 for j in range(2 * g))
    vecs.append(e(0))
    vecs.append(e(1))
    for p in range(1, g):
        vecs.append(tuple(x + y for x, y in zip(e(2 * (p - 1)), e(2 * p))))
        vecs.append(e(2 * p + 1))
    return vecs


def sp_generators(g: int) -> list[SpElement]:
    """A finite generating set for Sp+-(2g, Z).

    Chain transvections and their inverses generate Sp(2g, Z); the adjacent
    pair swaps are redundant but keep permutation witnesses short in word
    searches; one orientation flip reaches the sign -1 coset.  Order is
    fixed, so breadth-first searches over this list are deterministic.
    """
    if g < 1:
        raise InvalidInputError(f"sp_generators needs g >= 1, got {g}")
    gens = []
    for v in _chain_vectors(g):
        t = transvection(v)
        gens.append(t)
        gens.append(t.inverse())
    for p in range(g - 1):
        images = list(range(g))
        images[p], images[p + 1] = images[p + 1], images[p]
        gens.append(pair_permutation_matrix(g, images))
    gens.append(orientation_flip(g))
    return gens


def sp_generator_labels(g: int) -> list[str]:
    """Human-readable names aligned with sp_generators(g)."""
    labels = []
    names = []
    names.append("a1")
    names.append("b1")
    for p in range(1, g):
        names.append(f"a{p}+a{p+1}")
        names.append(f"b{p+1}")
    for v in names:
        labels.append(f"T[{v}]")
        labels.append(f"T[{v}]^-1")
    for p in range(g - 1):
        labels.append(f"swap({p + 1},{p + 2})")
    labels.append("flip")
    return labels


# ---------------------------------------------------------------------------
# induced maps on H1


@dataclass(frozen=True)
class H1Map:
    """A map H1(genus-g surface) -> Z^t as a t x 2g integer matrix."""

    g: int
    target_rank: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target_rank, 2 * self.g):
            raise InvalidInputError(
                f"H1 map matrix must be {self.target_rank} x {2 * self.g}, "
                f"got {self.matrix.shape}"
            )

    def is_zero(self):
        return self.matrix.is_zero()

    def canonical_k(self):
        """k if the matrix is literally (I ... I 0 ... 0) with k blocks, else None."""
        if self.target_rank != 2:
            return None
        blocks = []
        for i in range(self.g):
            block = tuple(self.matrix.rows[r][2 * i : 2 * i + 2] for r in range(2))
            if block == ((1, 0), (0, 1)):
                blocks.append("I")
            elif block == ((0, 0), (0, 0)):
                blocks.append("0")
            else:
                return None
        k = 0
        while k < self.g and blocks[k] == "I":
            k += 1
        if k == 0 or any(b != "0" for b in blocks[k:]):
            return None
        return k

    def column_vectors(self):
        return [tuple(self.matrix.rows[r][c] for r in range(self.target_rank))
                for c in range(2 * self.g)]


def canonical_form(g: int, k: int, target_rank: int = 2) -> H1Map:
    """The block row (I ... I 0 ... 0) with k identity blocks."""
    if target_rank != 2:
        raise InvalidInputError("canonical forms are only defined for rank-2 targets")
    if not 1 <= k <= g:
        raise InvalidInputError(f"canonical_form needs 1 <= k <= g, got g={g}, k={k}")
    row0 = [0] * (2 * g)
    row1 = [0] * (2 * g)
    for i in range(k):
        row0[2 * i] = 1
        row1[2 * i + 1] = 1
    return H1Map(g=g, target_rank=2, matrix=Matrix((tuple(row0), tuple(row1))))


@dataclass(frozen=True)
class NotCanonical:
    """Result marker for covers with nontrivial handle monodromy.

    Such covers do carry an induced H1 map, but no canonical matrix for it
    is modeled here; the image lattice is reported instead.
    """

    lattice: Lattice2


def induced_h1(rep: MonodromyRep):
    """Induced map on H1 for a valid connected cover.

    Purely branched covers of degree k and genus g induce the canonical
    block row C(g, k) in a suitable symplectic basis; anything else gets a
    NotCanonical marker carrying the image lattice.
    """
    g = genus(rep)  # validates and checks connectivity
    if is_purely_branched(rep):
        k = rep.degree
        assert 1 <= k <= g, "purely branched covers satisfy degree <= genus"
        return canonical_form(g, k)
    return NotCanonical(image_lattice(rep))
