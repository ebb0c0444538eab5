"""Finite atomic measure spaces and their set algebra.

The sigma-algebra is the full power set of the atom set; sets are frozen
index subsets.  Zero-mass atoms are allowed (they drive the absolute-
continuity error cases downstream).  Includes the dyadic spaces and the
sign-pattern set families used by the density-failure probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Tuple

from .falgebra import RationalLike, as_rational


class TooManyAtoms(ValueError):
    """Partition enumeration refused: Bell-number growth."""


class SpaceMismatch(ValueError):
    """Set operation across different measure spaces."""


@dataclass(frozen=True)
class MeasureSpace:
    atom_names: Tuple[str, ...]
    masses: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.atom_names) != len(self.masses):
            raise ValueError("atom_names and masses must have equal length")
        if len(set(self.atom_names)) != len(self.atom_names):
            raise ValueError("atom names must be unique")
        if any(m < 0 for m in self.masses):
            raise ValueError("masses must be nonnegative")
        if sum(self.masses) <= 0:
            raise ValueError("total mass must be positive")

    @classmethod
    def build(cls, atom_names: Iterable[str],
              masses: Iterable[RationalLike]) -> "MeasureSpace":
        return cls(tuple(atom_names), tuple(as_rational(m) for m in masses))

    @property
    def size(self) -> int:
        return len(self.atom_names)

    @property
    def total_mass(self) -> Fraction:
        return sum(self.masses, Fraction(0))

    def index_of(self, name: str) -> int:
        return self.atom_names.index(name)

    def mass(self, i: int) -> Fraction:
        return self.masses[i]

    def full_set(self) -> "MeasurableSet":
        return MeasurableSet(self, frozenset(range(self.size)))

    def empty_set(self) -> "MeasurableSet":
        return MeasurableSet(self, frozenset())

    def singleton(self, i: int) -> "MeasurableSet":
        return MeasurableSet(self, frozenset((i,)))

    def subset(self, members: Iterable[int]) -> "MeasurableSet":
        return MeasurableSet(self, frozenset(members))

    def subset_of_names(self, names: Iterable[str]) -> "MeasurableSet":
        return MeasurableSet(self, frozenset(self.index_of(n) for n in names))

    def all_subsets(self) -> Iterator["MeasurableSet"]:
        m = self.size
        for mask in range(1 << m):
            yield MeasurableSet(
                self, frozenset(i for i in range(m) if (mask >> i) & 1))


@dataclass(frozen=True)
class MeasurableSet:
    space: MeasureSpace
    members: FrozenSet[int]

    def __post_init__(self):
        if any(i < 0 or i >= self.space.size for i in self.members):
            raise ValueError("member index out of range")

    def _check(self, other: "MeasurableSet") -> None:
        if self.space is not other.space and self.space != other.space:
            raise SpaceMismatch("sets live on different measure spaces")

    def union(self, other: "MeasurableSet") -> "MeasurableSet":
        self._check(other)
        return MeasurableSet(self.space, self.members | other.members)

    def intersection(self, other: "MeasurableSet") -> "MeasurableSet":
        self._check(other)
        return MeasurableSet(self.space, self.members & other.members)

    def difference(self, other: "MeasurableSet") -> "MeasurableSet":
        self._check(other)
        return MeasurableSet(self.space, self.members - other.members)

    def symmetric_difference(self, other: "MeasurableSet") -> "MeasurableSet":
        self._check(other)
        return MeasurableSet(self.space, self.members ^ other.members)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference

    def names(self) -> List[str]:
        return sorted(self.space.atom_names[i] for i in self.members)


def measure_of(F: MeasurableSet) -> Fraction:
    return sum((F.space.masses[i] for i in F.members), Fraction(0))


@dataclass(frozen=True)
class Partition:
    blocks: Tuple[MeasurableSet, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("partition needs at least one block")
        space = self.blocks[0].space
        seen: set = set()
        for b in self.blocks:
            if b.space != space:
                raise SpaceMismatch("partition blocks on different spaces")
            if seen & b.members:
                raise ValueError("partition blocks must be disjoint")
            seen |= b.members
        if seen != set(range(space.size)):
            raise ValueError("partition blocks must cover the space")

    @property
    def space(self) -> MeasureSpace:
        return self.blocks[0].space


def atomic_partition(space: MeasureSpace) -> Partition:
    return Partition(tuple(space.singleton(i) for i in range(space.size)))


def enumerate_partitions(space: MeasureSpace,
                         max_atoms: int = 10) -> List[Partition]:
    """Every set partition of the atoms, exactly once (Bell(m) of them)."""
    m = space.size
    if m > max_atoms:
        raise TooManyAtoms(f"{m} atoms exceeds cap {max_atoms}")

    out: List[Partition] = []

    def extend(i: int, blocks: List[List[int]]) -> None:
        if i == m:
            out.append(Partition(tuple(
                space.subset(b) for b in blocks)))
            return
        for b in blocks:
            b.append(i)
            extend(i + 1, blocks)
            b.pop()
        blocks.append([i])
        extend(i + 1, blocks)
        blocks.pop()

    extend(0, [])
    return out


def dyadic_space(levels: int) -> MeasureSpace:
    """2**levels atoms of equal mass 2**-levels (total mass one); atoms are
    named by their binary address."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels > 20:
        raise ValueError("levels > 20 rejected (2**levels atoms)")
    n = 1 << levels
    mass = Fraction(1, n)
    names = tuple(format(i, f"0{levels}b") for i in range(n))
    return MeasureSpace(names, (mass,) * n)


def rademacher_set(space: MeasureSpace, n: int) -> MeasurableSet:
    """Atoms where the n-th fair sign is +1: binary digit n-1 (from the most
    significant) of the atom index is 0.  Requires a dyadic space."""
    m = space.size
    levels = m.bit_length() - 1
    if m != 1 << levels or levels < 1:
        raise ValueError("rademacher_set needs a dyadic space")
    if any(mass != Fraction(1, m) for mass in space.masses):
        raise ValueError("rademacher_set needs uniform dyadic masses")
    if not (1 <= n <= levels):
        raise ValueError(f"n must be in 1..{levels}")
    bit = levels - n
    return space.subset(i for i in range(m) if not (i >> bit) & 1)
