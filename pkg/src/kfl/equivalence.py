"""Equivalence of H1 maps under Sp+-(2g, Z) x GL(2, Z).

Two maps M, N (2 x 2g, acting on column vectors) are equivalent when there
are A in Sp+-(2g, Z) and B in GL(2, Z) with

    M * A == B * N.

For canonical block rows C(g, k) the answer is decided in closed form: the
block count k and the genus g are invariants.  For everything else there is
a bounded breadth-first witness search (YES or UNKNOWN, never NO) plus a
bounded exhaustive falsifier and the exact rank machinery behind the
closed-form answer.  All certificates are exact; floating point appears
only in refined_rank_check, whose factors involve sqrt(k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .homology import H1Map, SpElement, j_matrix, sp_generator_labels, sp_generators, symplectic_sign
from .matrices import Matrix


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of an equivalence question.

    YES always carries a verified witness pair (A, B).  NO only ever comes
    from the closed-form oracle (certificate "oracle-k-mismatch" or
    "rank-obstruction").  UNKNOWN only comes from the bounded search
    (certificate "exhausted-bound").
    """

    answer: str
    witness: tuple[SpElement, Matrix] | None = None
    certificate: str | None = None
    bounds: dict | None = None
    stats: dict | None = None
    note: str = ""
    witness_word: tuple[str, ...] = ()

    def to_dict(self):
        out = {"answer": self.answer}
        if self.witness is not None:
            a, b = self.witness
            out["witness"] = {
                "A": a.matrix.to_lists(),
                "sign": a.sign,
                "B": b.to_lists(),
            }
            if self.witness_word:
                out["witness"]["word"] = list(self.witness_word)
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.stats is not None:
            out["stats"] = self.stats
        if self.bounds is not None:
            out["bounds"] = self.bounds
        if self.note:
            out["note"] = self.note
        return out


def unimodular_2x2(bound):
    """All B in GL(2, Z) with entries in [-bound, bound], in lexicographic order."""
    rng = range(-bound, bound + 1)
    out = []
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if abs(a * d - b * c) == 1:
                        out.append(Matrix(((a, b), (c, d))))
    return out


# ---------------------------------------------------------------------------
# closed-form oracle for canonical maps


def decide_canonical(g_left, k_left, g_right, k_right) -> EquivalenceVerdict:
    """Decide C(g_left, k_left) ~ C(g_right, k_right) in closed form.

    Equal genus and equal block count give YES with the identity witness.
    Equal genus but different block counts is a definite NO: the block count
    of a canonical map is preserved by every (A, B).  Different genera live
    in different ambient groups, so no change of basis has the right shape.
    """
    for g, k, side in ((g_left, k_left, "left"), (g_right, k_right, "right")):
        if not 1 <= k <= g:
            raise InvalidInputError(f"{side} side needs 1 <= k <= g, got g={g}, k={k}")
    if g_left != g_right:
        return EquivalenceVerdict(
            answer="NO",
            certificate="rank-obstruction",
            note=(
                f"genus mismatch ({g_left} vs {g_right}): the sources have "
                "different homology ranks, so no change of basis exists"
            ),
        )
    if k_left == k_right:
        return EquivalenceVerdict(
            answer="YES",
            witness=(SpElement.identity(g_left), Matrix.identity(2)),
            note="identical canonical forms",
        )
    return EquivalenceVerdict(
        answer="NO",
        certificate="oracle-k-mismatch",
        note=(
            f"canonical block counts differ ({k_left} vs {k_right}); the block "
            "count of a purely branched cover is an equivalence invariant"
        ),
    )


# ---------------------------------------------------------------------------
# bounded witness search


def search_witness(
    M: H1Map,
    N: H1Map,
    depth: int,
    entry_cap: int,
    b_bound: int | None = None,
    max_states: int | None = None,
) -> EquivalenceVerdict:
    """Breadth-first witness search over words in sp_generators(g).

    States are deduplicated by exact matrix equality and pruned when any
    entry exceeds entry_cap in absolute value.  B ranges over GL(2, Z) with
    entries bounded by b_bound (defaults to entry_cap + 1 so both bounds
    scale together).  Deterministic: the returned witness is the first hit
    in BFS order, with B candidates tried in lexicographic entry order.

    Returns YES with a verified witness, or UNKNOWN (exhausted-bound).
    This path never returns NO.
    """
    if (M.g, M.target_rank) != (N.g, N.target_rank):
        raise InvalidInputError(
            f"shape mismatch: left is g={M.g}, t={M.target_rank}; "
            f"right is g={N.g}, t={N.target_rank}"
        )
    if M.target_rank != 2:
        raise InvalidInputError("witness search only supports rank-2 targets")
    if depth < 0 or entry_cap < 1:
        raise InvalidInputError("depth must be >= 0 and entry_cap >= 1")
    if b_bound is None:
        b_bound = entry_cap + 1
    g = M.g
    bounds = {"depth": depth, "entry_cap": entry_cap, "b_bound": b_bound}

    targets = {}
    for b in unimodular_2x2(b_bound):
        targets.setdefault((b * N.matrix).rows, b)

    gens = sp_generators(g)
    labels = sp_generator_labels(g)
    start = SpElement.identity(g)
    seen = {start.matrix.rows}
    frontier = [(start, ())]
    states = 1
    levels_done = 0

    def hit(a_el, word):
        b = targets.get((M.matrix * a_el.matrix).rows)
        if b is None:
            return None
        return EquivalenceVerdict(
            answer="YES",
            witness=(a_el, b),
            witness_word=tuple(labels[i] for i in word),
            bounds=bounds,
            stats={"states": states, "levels_completed": levels_done, "b_candidates": len(targets)},
        )

    found = hit(start, ())
    if found:
        return found
    for level in range(1, depth + 1):
        next_frontier = []
        for a_el, word in frontier:
            for gi, gen in enumerate(gens):
                child = a_el * gen
                if child.matrix.max_abs() > entry_cap:
                    continue
                rows = child.matrix.rows
                if rows in seen:
                    continue
                seen.add(rows)
                states += 1
                if max_states is not None and states > max_states:
                    raise ResourceLimitError(
                        f"witness search exceeded the state ceiling ({max_states})"
                    )
                found = hit(child, word + (gi,))
                if found:
                    return found
                next_frontier.append((child, word + (gi,)))
        frontier = next_frontier
        levels_done = level
        if not frontier:
            break
    return EquivalenceVerdict(
        answer="UNKNOWN",
        certificate="exhausted-bound",
        bounds=bounds,
        stats={"states": states, "levels_completed": levels_done, "b_candidates": len(targets)},
        note="no witness within the search bounds; no conclusion",
    )


def decide(M: H1Map, N: H1Map, depth=6, entry_cap=6, b_bound=None, max_states=None):
    """Oracle when both sides are literal canonical forms, else bounded search."""
    if (M.g, M.target_rank) != (N.g, N.target_rank):
        return EquivalenceVerdict(
            answer="NO",
            certificate="rank-obstruction",
            note=(
                f"shape mismatch (g={M.g}, t={M.target_rank} vs g={N.g}, "
                f"t={N.target_rank}): no shape-compatible change of basis exists"
            ),
        )
    kl, kr = M.canonical_k(), N.canonical_k()
    if kl is not None and kr is not None:
        return decide_canonical(M.g, kl, N.g, kr)
    return search_witness(M, N, depth, entry_cap, b_bound=b_bound, max_states=max_states)


# ---------------------------------------------------------------------------
# bounded exhaustive falsification of the canonical-form equation


@dataclass(frozen=True)
class FalsifyReport:
    g: int
    k_left: int
    k_right: int
    entry_bound: int
    b_bound: int
    num_b: int
    num_symplectic: int
    pairs_tested: int
    solutions: tuple  # tuples (A matrix rows, sign, B matrix rows)
    mode: str = "test-all"

    @property
    def solutions_found(self):
        return len(self.solutions)

    def to_dict(self):
        return {
            "g": self.g,
            "k_left": self.k_left,
            "k_right": self.k_right,
            "entry_bound": self.entry_bound,
            "b_bound": self.b_bound,
            "num_b": self.num_b,
            "num_symplectic": self.num_symplectic,
            "pairs_tested": self.pairs_tested,
            "solutions_found": self.solutions_found,
            "mode": self.mode,
            "solutions": [
                {"A": [list(r) for r in a], "sign": s, "B": [list(r) for r in b]}
                for a, s, b in self.solutions[:10]
            ],
        }


def _bn_key(b: Matrix, g, k_right):
    u = []
    v = []
    for j in range(g):
        if j < k_right:
            u.extend((b[0, 0], b[0, 1]))
            v.extend((b[1, 0], b[1, 1]))
        else:
            u.extend((0, 0))
            v.extend((0, 0))
    return tuple(u) + tuple(v)


def falsify_bounded(
    g,
    k_left,
    k_right,
    entry_bound,
    b_bound: int | None = None,
    max_candidates: int = 50_000_000,
    column_constraints: bool = False,
) -> FalsifyReport:
    """Exhaustively test C(g, k_left) * A == B * C(g, k_right) over a box.

    A ranges over every integer matrix with entries in [-entry_bound,
    entry_bound] satisfying A^t J A = +-J, enumerated column pair by column
    pair with the pairing constraints pruning as columns are placed.  B
    ranges over GL(2, Z) with entries in [-b_bound, b_bound] (defaults to
    entry_bound + 1).  Every surviving A is tested against every B at once
    through a hash of the left-hand side.  Raises ResourceLimitError when
    the enumeration would exceed max_candidates states.

    With column_constraints=True the B loop moves outside and each column
    of A is additionally restricted to the exact partial-sum values that
    the equation forces for that B.  Any pair skipped that way provably
    fails the equation, so the solution set is identical; num_symplectic
    and pairs_tested then count only the constrained slice.  Use it for
    boxes where the unconstrained enumeration is out of reach.
    """
    if g < 1 or not 1 <= k_left <= g or not 1 <= k_right <= g:
        raise InvalidInputError(f"need 1 <= k <= g on both sides, got g={g}, kl={k_left}, kr={k_right}")
    if entry_bound < 1:
        raise InvalidInputError("entry_bound must be >= 1")
    if b_bound is None:
        b_bound = entry_bound + 1
    dim = 2 * g
    n_vec = (2 * entry_bound + 1) ** dim
    if n_vec * n_vec > max_candidates:
        raise ResourceLimitError(
            f"candidate-column pairing table would hold {n_vec * n_vec} entries, "
            f"over the ceiling {max_candidates}; raise max_candidates to force this"
        )

    cand = np.array(
        list(itertools.product(range(-entry_bound, entry_bound + 1), repeat=dim)),
        dtype=np.int64,
    )
    jn = np.array(j_matrix(g).to_lists(), dtype=np.int64)
    pairing = (cand @ jn) @ cand.T  # pairing[i, j] = c_i^t J c_j

    # partial coordinate sums: row r of C(g, kl) * A only sees coordinates
    # r, r+2, ..., r+2(kl-1) of each column of A
    ps_even = cand[:, 0 : 2 * k_left : 2].sum(axis=1)
    ps_odd = cand[:, 1 : 2 * k_left : 2].sum(axis=1)

    bs = unimodular_2x2(b_bound)

    solutions = []
    state = {"n_sym": 0, "visited": 0}

    def bump(n):
        state["visited"] += n
        if state["visited"] > max_candidates:
            raise ResourceLimitError(
                f"column enumeration exceeded the ceiling ({max_candidates})"
            )

    def emit(cols, eps, b_rows):
        a = tuple(tuple(int(cand[c][r]) for c in cols) for r in range(dim))
        solutions.append((a, eps, b_rows))

    if not column_constraints:
        targets = {}
        for b in bs:
            targets.setdefault(_bn_key(b, g, k_right), b)

        def explore(eps, chosen, alive):
            keep = np.flatnonzero(alive)
            bump(len(keep))
            sub = pairing[np.ix_(keep, keep)] == eps
            rr, ss = np.nonzero(sub)
            if len(chosen) + 2 == dim:
                state["n_sym"] += len(rr)
                base_e = [int(ps_even[c]) for c in chosen]
                base_o = [int(ps_odd[c]) for c in chosen]
                for i, j in zip(keep[rr].tolist(), keep[ss].tolist()):
                    key = (*base_e, int(ps_even[i]), int(ps_even[j]),
                           *base_o, int(ps_odd[i]), int(ps_odd[j]))
                    b = targets.get(key)
                    if b is not None:
                        emit(list(chosen) + [i, j], eps, b.rows)
                return
            for r, s in zip(rr.tolist(), ss.tolist()):
                i, j = int(keep[r]), int(keep[s])
                explore(eps, chosen + (i, j), alive & (pairing[i] == 0) & (pairing[j] == 0))

        for eps in (1, -1):
            explore(eps, (), np.ones(len(cand), dtype=bool))
        pairs_tested = state["n_sym"] * len(bs)
    else:
        def explore_b(eps, col_masks, b_rows, chosen, alive):
            m = len(chosen)
            ki = np.flatnonzero(alive & col_masks[m])
            kj = np.flatnonzero(alive & col_masks[m + 1])
            bump(len(ki) + len(kj))
            sub = pairing[np.ix_(ki, kj)] == eps
            rr, ss = np.nonzero(sub)
            if m + 2 == dim:
                # every completed matrix satisfies the equation by construction
                state["n_sym"] += len(rr)
                for i, j in zip(ki[rr].tolist(), kj[ss].tolist()):
                    emit(list(chosen) + [i, j], eps, b_rows)
                return
            for r, s in zip(rr.tolist(), ss.tolist()):
                i, j = int(ki[r]), int(kj[s])
                explore_b(eps, col_masks, b_rows, chosen + (i, j),
                          alive & (pairing[i] == 0) & (pairing[j] == 0))

        for b in bs:
            key = _bn_key(b, g, k_right)
            col_masks = [
                (ps_even == key[m]) & (ps_odd == key[dim + m]) for m in range(dim)
            ]
            if any(not mask.any() for mask in col_masks):
                continue
            for eps in (1, -1):
                explore_b(eps, col_masks, b.rows, (), np.ones(len(cand), dtype=bool))
        pairs_tested = state["n_sym"]

    return FalsifyReport(
        g=g,
        k_left=k_left,
        k_right=k_right,
        entry_bound=entry_bound,
        b_bound=b_bound,
        num_b=len(bs),
        num_symplectic=state["n_sym"],
        pairs_tested=pairs_tested,
        solutions=tuple(solutions),
        mode="column-constrained" if column_constraints else "test-all",
    )


# ---------------------------------------------------------------------------
# rank machinery behind the closed-form answer


def proof_decomposition(A: SpElement, k):
    """Split A^t J A = E + F along the first 2k rows of A.

    E comes from the rows that the canonical equation ties to the target
    (rank <= 2k, since it factors through Z^{2k}); F from the rest (rank
    <= 2(g-k)).  The sum is exactly sign(A) * J, checked here.
    """
    m = A.matrix
    g = m.nrows // 2
    if not 1 <= k < g:
        raise InvalidInputError(f"proof_decomposition needs 1 <= k < g, got k={k}, g={g}")
    gamma = Matrix(m.rows[: 2 * k])
    alpha = Matrix(m.rows[2 * k :])
    e = gamma.transpose() * j_matrix(k) * gamma
    f = alpha.transpose() * j_matrix(g - k) * alpha
    if e + f != j_matrix(g).scale(A.sign):
        raise InvalidInputError("matrix is not symplectic: E + F != sign * J")
    return e, f, e.rank(), f.rank()


def _numerical_rank(m, tolerance):
    if m.size == 0:
        return 0
    svals = np.linalg.svd(m, compute_uv=False)
    thresh = tolerance * max(1.0, float(svals[0]))
    return int((svals > thresh).sum())


def refined_rank_check(A, B: Matrix, k, l, tolerance=1e-9):
    """Verify the refined rank identities behind the block-count invariance.

    Input is a 2g x 2g integer matrix (an SpElement or a synthetic matrix)
    whose top 2k rows satisfy the block-sum side condition extracted from
    the canonical equation: sum_i A_ij == B for j <= l and 0 for j > l.
    The check builds the normalized block matrices (they carry 1/sqrt(k)
    and 1/(sqrt(k)-1) factors, hence floating point), verifies the four
    product identities within the tolerance, confirms rank(S) <= 2k - 2
    numerically, and then confirms exactly, over the integers, that
    rank(eps*J - E) >= 2(g-k) + 2 for every sign eps making the residual
    block R invertible.  For an orientation-reversing B (det B = -1) the
    quadratic terms need an extra det B factor; with det B = 1 the
    identities are used in their plain form.

    k = 1 is refused: the 1/(sqrt(k)-1) normalization is singular.
    """
    mat = A.matrix if isinstance(A, SpElement) else A
    if mat.nrows != mat.ncols or mat.nrows % 2:
        raise InvalidInputError("need a square even-dimensional matrix")
    g = mat.nrows // 2
    if k == 1:
        raise InvalidInputError(
            "k = 1 is refused: the 1/(sqrt(k) - 1) factor in the normalization is singular"
        )
    if not 2 <= k <= g:
        raise InvalidInputError(f"need 2 <= k <= g, got k={k}, g={g}")
    if not 1 <= l <= g:
        raise InvalidInputError(f"need 1 <= l <= g, got l={l}")
    det_b = B.det()
    if abs(det_b) != 1:
        raise InvalidInputError("B must be unimodular")

    # exact side condition on the 2x2 blocks of the top 2k rows
    def block(i, j):
        return tuple(mat.rows[2 * i + r][2 * j : 2 * j + 2] for r in range(2))

    for j in range(g):
        s00 = sum(block(i, j)[0][0] for i in range(k))
        s01 = sum(block(i, j)[0][1] for i in range(k))
        s10 = sum(block(i, j)[1][0] for i in range(k))
        s11 = sum(block(i, j)[1][1] for i in range(k))
        want = ((B[0, 0], B[0, 1]), (B[1, 0], B[1, 1])) if j < l else ((0, 0), (0, 0))
        if ((s00, s01), (s10, s11)) != want:
            raise InvalidInputError(
                f"block-sum side condition fails at column block {j + 1}"
            )

    def jf(n):
        return np.array(j_matrix(n).to_lists(), dtype=float) if n else np.zeros((0, 0))

    gamma = np.array([list(r) for r in mat.rows[: 2 * k]], dtype=float)
    b_np = np.array(B.to_lists(), dtype=float)
    # unimodular: the inverse is det(B) times the adjugate, an integer matrix
    b_inv = det_b * np.array([[B[1, 1], -B[0, 1]], [-B[1, 0], B[0, 0]]], dtype=float)
    rk = np.sqrt(k)

    m_part = gamma[:, : 2 * l]
    n_part = gamma[:, 2 * l :]
    mp = np.zeros((2 * (k - 1), 2 * l))
    np_ = np.zeros((2 * (k - 1), 2 * (g - l)))
    for i in range(k - 1):
        for j in range(l):
            a_ij = gamma[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
            s_j = sum(
                b_inv @ gamma[2 * t : 2 * t + 2, 2 * j : 2 * j + 2] for t in range(k - 1)
            )
            mp[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = det_b * (
                b_inv @ a_ij - s_j / (rk - 1) + np.eye(2) / rk
            )
        for m_col in range(l, g):
            a_im = gamma[2 * i : 2 * i + 2, 2 * m_col : 2 * m_col + 2]
            s_m = sum(
                b_inv @ gamma[2 * t : 2 * t + 2, 2 * m_col : 2 * m_col + 2]
                for t in range(k - 1)
            )
            np_[2 * i : 2 * i + 2, 2 * (m_col - l) : 2 * (m_col - l) + 2] = det_b * (
                b_inv @ a_im - s_m / (rk - 1)
            )

    j2k = jf(k)
    j2k2 = jf(k - 1)
    grid = np.tile(jf(1), (l, l)) * (det_b / k)
    # det B = -1 flips the sign of every quadratic term in the primed matrices
    c = float(det_b)

    def close(lhs, rhs):
        if lhs.size == 0:
            return True
        scale = max(1.0, float(np.abs(lhs).max()))
        return float(np.abs(lhs - rhs).max()) <= tolerance * scale

    ok = close(m_part.T @ j2k @ m_part, grid + c * (mp.T @ j2k2 @ mp))
    ok = ok and close(m_part.T @ j2k @ n_part, c * (mp.T @ j2k2 @ np_))
    ok = ok and close(n_part.T @ j2k @ m_part, c * (np_.T @ j2k2 @ mp))
    ok = ok and close(n_part.T @ j2k @ n_part, c * (np_.T @ j2k2 @ np_))

    w = np.hstack([mp, np_])
    s_mat = c * (w.T @ j2k2 @ w)
    ok = ok and _numerical_rank(s_mat, tolerance) <= 2 * k - 2

    gamma_exact = Matrix(mat.rows[: 2 * k])
    e_exact = gamma_exact.transpose() * j_matrix(k) * gamma_exact
    grid_full = np.zeros((2 * g, 2 * g))
    grid_full[: 2 * l, : 2 * l] = grid
    ok = ok and close(np.array(e_exact.to_lists(), dtype=float), grid_full + s_mat)

    # rank(eps*J - E) >= 2(g-k)+2 whenever the residual block is invertible,
    # i.e. eps*k != det(B)*l; exact integer rank, no tolerance involved
    for eps in (1, -1):
        if eps * k != det_b * l:
            f_mat = j_matrix(g).scale(eps) - e_exact
            ok = ok and f_mat.rank() >= 2 * (g - k) + 2

    # when the input really is symplectic, cross-check the exact split
    sign = symplectic_sign(mat)
    if sign is not None and k < g:
        proof_decomposition(SpElement(mat, sign), k)
    return ok


# ---------------------------------------------------------------------------
# the residual block R


@dataclass(frozen=True)
class RMatrix:
    """The 2l x 2l residual block with entries (s1 + s2/k) J and (s2/k) J."""

    l: int
    k: Fraction
    signs: tuple[int, int]
    matrix: Matrix


def build_r(l, k, signs=(1, 1)) -> RMatrix:
    """Materialize the residual block over exact rationals.

    Diagonal 2x2 blocks are (s1 + s2/k) J, off-diagonal blocks (s2/k) J,
    with independent signs s1, s2 in {+1, -1}.  s1 is the sign of the
    ambient symplectic form, s2 the sign -det(B) coming from the target
    change of basis.
    """
    if l < 1:
        raise InvalidInputError(f"build_r needs l >= 1, got {l}")
    k = Fraction(k)
    if k == 0:
        raise InvalidInputError("build_r needs k != 0")
    s1, s2 = signs
    if s1 not in (1, -1) or s2 not in (1, -1):
        raise InvalidInputError(f"signs must be +-1, got {signs}")
    diag = s1 + Fraction(s2) / k
    off = Fraction(s2) / k
    rows = [[Fraction(0)] * (2 * l) for _ in range(2 * l)]
    for bi in range(l):
        for bj in range(l):
            coeff = diag if bi == bj else off
            rows[2 * bi][2 * bj + 1] = coeff
            rows[2 * bi + 1][2 * bj] = -coeff
    return RMatrix(l=l, k=k, signs=(s1, s2), matrix=Matrix(tuple(tuple(r) for r in rows)))


def r_invertible_all_signs(l, k):
    """True iff the residual block is invertible for all four sign choices.

    Exact rational determinants; the contract is equivalence with l != +-k.
    """
    return all(
        build_r(l, k, (s1, s2)).matrix.det() != 0
        for s1 in (1, -1)
        for s2 in (1, -1)
    )
