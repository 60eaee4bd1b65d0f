"""Worker for the exhaustive image-lattice acceptance check.

Enumerates every valid cover with the given handle permutations and branch
count (the last branch permutation is forced by the relator), and compares
image_lattice against the independent coset-table oracle on each connected
one.  Lives in its own module so multiprocessing can import it.
"""

import itertools

from kfl.covers import Branch, MonodromyRep, image_lattice
from kfl.errors import InvalidInputError
from kfl.perm import Permutation, commutator

from oracles import oracle_image_lattice_rows


def check_pair_task(task):
    """task = (degree, alpha_images, beta_images, branch_counts).

    Returns (checked, mismatches) where mismatches is a list of offending
    rep descriptions (empty on success).
    """
    d, sa_images, sb_images, branch_counts = task
    sa = Permutation(tuple(sa_images))
    sb = Permutation(tuple(sb_images))
    perms = [Permutation(p) for p in itertools.permutations(range(d))]
    nonid = [p for p in perms if not p.is_identity()]
    comm_inv = commutator(sa, sb).inverse()
    checked = 0
    mismatches = []

    def run(rep):
        nonlocal checked
        try:
            got = image_lattice(rep).rows
        except InvalidInputError:
            return  # disconnected
        checked += 1
        want = oracle_image_lattice_rows(rep)
        if got != want:
            mismatches.append(
                (d, sa_images, sb_images,
                 tuple(b.perm.images for b in rep.branches), got, want)
            )

    inv_of = {p: p.inverse() for p in nonid}
    for l in branch_counts:
        if l == 0:
            if comm_inv.is_identity():
                run(MonodromyRep(d, sa, sb, ()))
            continue
        # last = p_{l-1}^-1 * ... * p_1^-1 * comm_inv; build the shared tail
        # p_{l-2}^-1 * ... * p_1^-1 * comm_inv by left-multiplying in order
        for short in itertools.product(nonid, repeat=max(0, l - 2)):
            tail = comm_inv
            for p in short:
                tail = inv_of[p] * tail
            if l == 1:
                if not tail.is_identity():
                    run(MonodromyRep(d, sa, sb, (Branch("b1", tail),)))
                continue
            for p_last in nonid:
                last = inv_of[p_last] * tail
                if last.is_identity():
                    continue
                prefix = short + (p_last,)
                branches = tuple(
                    Branch(f"b{i}", p) for i, p in enumerate(prefix + (last,), 1)
                )
                run(MonodromyRep(d, sa, sb, branches))
    return checked, mismatches


def sigma_pair_orbit_members(d, rng):
    """One member per simultaneous-relabeling orbit of handle-permutation pairs.

    Relabeling the sheets conjugates both permutations at once and does not
    change validity, connectivity, or the image lattice, so one member per
    orbit covers all pairs up to the arbitrary sheet labels.  The member is
    drawn at random (seeded) so the tested labels are not special.
    """
    perms = [Permutation(p) for p in itertools.permutations(range(d))]
    orbits = {}
    for sa in perms:
        for sb in perms:
            canon = min(
                ((t.inverse() * sa * t).images, (t.inverse() * sb * t).images)
                for t in perms
            )
            orbits.setdefault(canon, []).append((sa.images, sb.images))
    return [rng.choice(members) for canon, members in sorted(orbits.items())]
