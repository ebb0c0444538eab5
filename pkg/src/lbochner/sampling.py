"""Seeded generators for random algebra data.

Everything is driven by stdlib Mersenne Twister instances so that a 64-bit
seed fully determines every harness; helpers derive independent streams
from (seed, label) pairs.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .falgebra import LElement
from .lmodule import Functional, ModuleSpace, ModuleVector
from .measure import MeasurableSet, MeasureSpace


def rng_for(seed: int, *stream: int) -> random.Random:
    x = seed & 0xFFFFFFFFFFFFFFFF
    for s in stream:
        x = (x * 6364136223846793005 + s + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
    return random.Random(x)


def random_fraction(rng: random.Random, max_num: int = 12, max_den: int = 12,
                    signed: bool = True) -> Fraction:
    num = rng.randint(-max_num, max_num) if signed else rng.randint(0, max_num)
    return Fraction(num, rng.randint(1, max_den))


def random_positive_fraction(rng: random.Random, max_num: int = 12,
                             max_den: int = 12) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_lelement(rng: random.Random, d: int, max_num: int = 12,
                    max_den: int = 12, signed: bool = True) -> LElement:
    return LElement([random_fraction(rng, max_num, max_den, signed)
                     for _ in range(d)])


def random_positive_lelement(rng: random.Random, d: int, max_num: int = 12,
                             max_den: int = 12) -> LElement:
    return LElement([random_positive_fraction(rng, max_num, max_den)
                     for _ in range(d)])


def random_module_vector(rng: random.Random, space: ModuleSpace,
                         max_num: int = 12, max_den: int = 12) -> ModuleVector:
    return ModuleVector(space, tuple(
        random_lelement(rng, space.scalar_dim, max_num, max_den)
        for _ in range(space.rank)))


def random_functional(rng: random.Random, space: ModuleSpace,
                      max_num: int = 12, max_den: int = 12) -> Functional:
    return Functional(space, tuple(
        random_lelement(rng, space.scalar_dim, max_num, max_den)
        for _ in range(space.rank)))


def random_measure_space(rng: random.Random, m: int, null_atoms: int = 0,
                         normalize: bool = False) -> MeasureSpace:
    """m atoms with small rational masses; null_atoms of them get mass zero.
    With normalize=True the total mass is rescaled to one."""
    if null_atoms >= m:
        raise ValueError("need at least one positive-mass atom")
    names = tuple(f"a{i}" for i in range(m))
    masses = [random_positive_fraction(rng, 6, 6) for _ in range(m)]
    if null_atoms:
        for i in rng.sample(range(m), null_atoms):
            masses[i] = Fraction(0)
    if normalize:
        total = sum(masses)
        masses = [q / total for q in masses]
    return MeasureSpace(names, tuple(masses))


def random_measurable_set(rng: random.Random, space: MeasureSpace) -> MeasurableSet:
    members = [i for i in range(space.size) if rng.random() < 0.5]
    return space.subset(members)
