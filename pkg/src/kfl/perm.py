"""Permutations in 0-based one-line notation.

Composition reads left to right everywhere in this package: ``p * q`` means
"apply p, then q", so ``(p * q)(x) == q(p(x))``.  This is the order in which
sheet monodromy composes along concatenated loops, and the cover relator
check depends on it.  Cycle notation appears only at I/O boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0, ..., d-1}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a bijection on 0..{len(imgs) - 1}: {list(imgs)}")

    @classmethod
    def _unchecked(cls, images):
        # internal fast path: images is already known to be a bijection
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, degree):
        return cls._unchecked(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles, degree):
        """Build from disjoint cycles, e.g. [(0, 1, 2), (3, 4)]."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < degree:
                    raise ValueError(f"cycle entry {x} out of range for degree {degree}")
                if x in seen:
                    raise ValueError(f"cycles are not disjoint at {x}")
                seen.add(x)
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    @property
    def degree(self):
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Left-to-right composition: apply self first, then other."""
        q = other.images
        if len(q) != len(self.images):
            raise ValueError(f"degree mismatch: {len(self.images)} vs {len(q)}")
        return Permutation._unchecked(tuple(q[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation._unchecked(tuple(inv))

    def apply(self, x):
        return self.images[x]

    def is_identity(self):
        return all(i == x for x, i in enumerate(self.images))

    def cycle_count(self):
        """Number of cycles, fixed points included."""
        seen = [False] * self.degree
        count = 0
        for start in range(self.degree):
            if seen[start]:
                continue
            count += 1
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x]
        return count

    def cycles(self):
        """Nontrivial cycles, each starting at its smallest element."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def to_cycle_string(self):
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """[a, b] = a b a^-1 b^-1, composed left to right."""
    return a * b * a.inverse() * b.inverse()


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycle_string(text, degree) -> Permutation:
    """Parse cycle notation like "(0 1 2)(3 4)" or "id" at a given degree.

    Cycles must be disjoint; entries may be separated by spaces or commas.
    """
    s = text.strip()
    if s in ("id", "()", ""):
        return Permutation.identity(degree)
    covered = "".join(_CYCLE_RE.findall(s))
    stripped = _CYCLE_RE.sub("", s).strip()
    if stripped:
        raise ValueError(f"unparsable cycle notation: {text!r}")
    cycles = []
    for group in _CYCLE_RE.findall(s):
        entries = [e for e in re.split(r"[\s,]+", group.strip()) if e]
        if not entries:
            continue
        try:
            cycles.append(tuple(int(e) for e in entries))
        except ValueError:
            raise ValueError(f"non-integer entry in cycle {group!r}") from None
    if not cycles and covered.strip():
        raise ValueError(f"unparsable cycle notation: {text!r}")
    return Permutation.from_cycles(cycles, degree)
