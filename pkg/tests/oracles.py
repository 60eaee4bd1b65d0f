"""Independent brute-force oracles used only by the tests.

Everything here deliberately avoids the library's code paths: transversals
are depth-first (the library uses breadth-first), Schreier generators are
materialized as explicit words with formal inverses and only then summed,
and the lattice normal form is its own xgcd loop.
"""

from fractions import Fraction


def coset_table(rep):
    """table[p][i] = image of sheet p under generator i (alpha, beta, branches)."""
    letters = [rep.sigma_alpha, rep.sigma_beta] + [b.perm for b in rep.branches]
    return [[g.images[p] for g in letters] for p in range(rep.degree)], len(letters)


def dfs_transversal(table, n_letters):
    """Depth-first transversal words over positive letters, from sheet 0."""
    words = {0: ()}
    stack = [0]
    while stack:
        p = stack.pop()
        for i in range(n_letters):
            q = table[p][i]
            if q not in words:
                words[q] = words[p] + (i,)
                stack.append(q)
    return words

def schreier_exponent_vectors(rep):
    """All Schreier generators of the sheet-0 stabilizer, as exponent vectors.

    Each generator is the explicit word T(p) . x . T(p^x)^-1 (formal
    inverses encoded as negative letters); its vector is the (alpha, beta)
    exponent sum with branch letters counting zero.
    """
    table, n_letters = coset_table(rep)
    words = dfs_transversal(table, n_letters)
    if len(words) != rep.degree:
        raise ValueError("disconnected: oracle needs a transitive action")
    vectors = []
    for p in range(rep.degree):
        row = table[p]
        for i in range(n_letters):
            q = row[i]
            # the Schreier word T(p) . x_i . T(q)^-1, with formal inverses
            word = [*words[p], i]
            word += [-1 - j for j in reversed(words[q])]
            x = y = 0
            for c in word:
                if c == 0:
                    x += 1
                elif c == 1:
                    y += 1
                elif c == -1:
                    x -= 1
                elif c == -2:
                    y -= 1
            if x or y:
                vectors.append((x, y))
    return vectors


def hnf_rows(vectors):
    """Canonical row form ((a, b), (0, d)) of the lattice they generate.

    Distinct code path from Lattice2: plain gcd loops, no xgcd cofactors.
    """
    vecs = [tuple(v) for v in vectors if v != (0, 0)]
    with_x = [v for v in vecs if v[0] != 0]
    only_y = [v[1] for v in vecs if v[0] == 0]
    r1 = None
    while with_x:
        # repeatedly subtract to shrink the first coordinates toward the gcd
        with_x.sort(key=lambda v: abs(v[0]))
        v0 = with_x.pop(0)
        if v0[0] < 0:
            v0 = (-v0[0], -v0[1])
        rest = []
        for v in with_x:
            q = v[0] // v0[0]
            w = (v[0] - q * v0[0], v[1] - q * v0[1])
            if w[0] != 0:
                rest.append(w)
            elif w[1] != 0:
                only_y.append(w[1])
        if not rest:
            r1 = v0
            break
        rest.append(v0)
        with_x = rest
    d = 0
    for y in only_y:
        y = abs(y)
        while y:
            d, y = y, d % y
    r2 = (0, d) if d else None
    if r1 is not None and r2 is not None:
        r1 = (r1[0], r1[1] % r2[1])
    return tuple(r for r in (r1, r2) if r is not None)


def oracle_image_lattice_rows(rep):
    return hnf_rows(set(schreier_exponent_vectors(rep)))


# ---------------------------------------------------------------------------
# elimination-order oracle for the residual block


def r_invertible_by_reduction(l, k, signs):
    """Invertibility of the residual block by the explicit row reduction.

    Works on the l x l block-scalar matrix (each entry a multiple of J):
    subtract the last row from the others, clear the last row with the
    first l-1 pivots, and read off whether every pivot is nonzero.
    """
    k = Fraction(k)
    s1, s2 = signs
    diag = s1 + Fraction(s2) / k
    off = Fraction(s2) / k
    m = [[diag if i == j else off for j in range(l)] for i in range(l)]
    if l == 1:
        return m[0][0] != 0
    last = m[l - 1]
    for i in range(l - 1):
        m[i] = [a - b for a, b in zip(m[i], last)]
    # rows 0..l-2 now have a single nonzero pivot at column i (value diag-off)
    pivot = m[0][0]
    if pivot == 0:
        return False
    for i in range(l - 1):
        if m[i][i] == 0:
            return False
        factor = last[i] / m[i][i]
        last = [a - factor * b for a, b in zip(last, m[i])]
    return last[l - 1] != 0


def unimodular_inverse_2x2(b):
    """Exact inverse of a 2x2 matrix with det +-1, as nested tuples."""
    (a, bb), (c, d) = b
    det = a * d - bb * c
    assert abs(det) == 1
    return ((det * d, -det * bb), (-det * c, det * a))
