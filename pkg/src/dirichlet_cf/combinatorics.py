"""Partitions, permutations and set partitions.

Integer partitions are stored in frequency form: ``freq[i-1]`` is the number
of parts equal to ``i``.  Permutations are 1-based image tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Partition:
    """Integer partition of ``n`` in frequency form, ``len(freq) == n``."""

    freq: tuple[int, ...]

    def __post_init__(self):
        if any(f < 0 for f in self.freq):
            raise ValueError("frequencies must be non-negative")
        if sum((i + 1) * f for i, f in enumerate(self.freq)) != len(self.freq):
            raise ValueError(f"frequency vector {self.freq} is not a partition of {len(self.freq)}")

    @property
    def n(self) -> int:
        return len(self.freq)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        parts = list(parts)
        n = sum(parts)
        freq = [0] * n
        for p in parts:
            if p <= 0:
                raise ValueError("parts must be positive")
            freq[p - 1] += 1
        return cls(tuple(freq))

    def parts(self) -> tuple[int, ...]:
        """Parts in ascending order."""
        out: list[int] = []
        for i, f in enumerate(self.freq):
            out.extend([i + 1] * f)
        return tuple(out)

    @property
    def length(self) -> int:
        return sum(self.freq)

    def __str__(self):
        return "(" + ",".join(map(str, self.freq)) + ")"


def _parts_descending(n: int, largest: int) -> Iterator[list[int]]:
    if n == 0:
        yield []
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _parts_descending(n - p, p):
            yield [p] + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n``, reverse-lexicographic in the frequency vector.

    The first entry is ``1^n`` and the last is the single part ``n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    parts = [Partition.from_parts(p) for p in _parts_descending(n, n)]
    return tuple(sorted(parts, key=lambda lam: lam.freq, reverse=True))


def multinomial_weight(lam: Partition) -> int:
    """Number of permutations of ``[n]`` with cycle type ``lam``.

    Equals n! / prod_i (lam_i! * i^lam_i); always an integer.
    """
    den = 1
    for i, f in enumerate(lam.freq, start=1):
        den *= factorial(f) * i**f
    num = factorial(lam.n)
    q, r = divmod(num, den)
    assert r == 0
    return q


# -- permutations ----------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..n}``; ``images[i-1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for start in range(1, self.n + 1):
            if seen[start - 1]:
                continue
            cyc = []
            i = start
            while not seen[i - 1]:
                seen[i - 1] = True
                cyc.append(i)
                i = self.images[i - 1]
            out.append(tuple(cyc))
        return out


def cycle_structure(perm: Permutation) -> Partition:
    """Cycle type of ``perm`` as a partition of its degree."""
    freq = [0] * perm.n
    for cyc in perm.cycles():
        freq[len(cyc) - 1] += 1
    return Partition(tuple(freq))


def symmetric_group(n: int) -> list[Permutation]:
    from itertools import permutations

    return [Permutation(p) for p in permutations(range(1, n + 1))]


def cyclic_group(n: int) -> list[Permutation]:
    return [Permutation(tuple((i + r) % n + 1 for i in range(n))) for r in range(n)]


def dihedral_group(n: int) -> list[Permutation]:
    rots = cyclic_group(n)
    refl = Permutation(tuple((-i) % n + 1 for i in range(n)))
    return rots + [r.compose(refl) for r in rots]


def _generated(gens: list[tuple[int, ...]], limit: int) -> set[tuple[int, ...]]:
    n = len(gens[0])
    ident = tuple(range(1, n + 1))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = tuple(h[j - 1] for j in g)
                if x not in group:
                    group.add(x)
                    nxt.append(x)
                    if len(group) > limit:
                        return group
        frontier = nxt
    return group


def generated_group(gens: Sequence[Permutation]) -> set[Permutation]:
    """Group generated by ``gens`` (breadth-first closure)."""
    out = _generated([g.images for g in gens], limit=10**9)
    return {Permutation(x) for x in out}


def is_closed(elements: Sequence[Permutation]) -> bool:
    """True if the finite set is closed under composition, i.e. a group.

    Picks generators from the set in a fixed pseudo-random order and compares
    the generated group with the set; a few random elements usually generate,
    so this avoids the |G|^2 product table.
    """
    import random

    if not elements:
        return False
    n = elements[0].n
    if any(p.n != n for p in elements):
        return False
    s = {p.images for p in elements}
    order = sorted(s)
    random.Random(0).shuffle(order)
    gens: list[tuple[int, ...]] = []
    span = {tuple(range(1, n + 1))}
    for h in order:
        if h in span:
            continue
        gens.append(h)
        span = _generated(gens, limit=len(s))
        if not span <= s:
            return False
    return span == s


# -- set partitions --------------------------------------------------------


@dataclass(frozen=True)
class SetPartition:
    """Ordered set partition of ``{1..n}`` into non-empty blocks.

    Canonical order: blocks by ascending size, ties by least element; each
    block stored sorted.
    """

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def canonical(cls, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        bl = [tuple(sorted(b)) for b in blocks]
        if any(len(b) == 0 for b in bl):
            raise ValueError("blocks must be non-empty")
        elems = sorted(x for b in bl for x in b)
        if elems != list(range(1, len(elems) + 1)):
            raise ValueError("blocks must partition {1..n}")
        bl.sort(key=lambda b: (len(b), b[0]))
        return cls(tuple(bl))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)


def set_partition_shape(sp: SetPartition) -> Partition:
    """Partition counting the blocks of each size."""
    freq = [0] * sp.n
    for b in sp.blocks:
        freq[len(b) - 1] += 1
    return Partition(tuple(freq))


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``n`` into ``k`` parts, lexicographic, iterative."""
    if k <= 0:
        if n == 0:
            yield ()
        return
    m = [0] * k
    m[-1] = n
    while True:
        yield tuple(m)
        # move one unit from the last non-zero slot (past the first) leftwards
        j = k - 1
        while j > 0 and m[j] == 0:
            j -= 1
        if j == 0:
            return
        rest = m[j] - 1
        m[j] = 0
        m[j - 1] += 1
        m[-1] = rest
