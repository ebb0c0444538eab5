"""Document formats for spaces, functions, and measures.

Rationals travel as "num/den" strings, module vectors as rank x dim arrays
of such strings, and functions as maps from atom name to such arrays.  The
loaders are strict and raise ValueError with a location on malformed input.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict

from .bochner import LFunction
from .duality import DualFunction
from .falgebra import LElement
from .lmodule import Functional, ModuleSpace, ModuleVector, NormKind
from .measure import MeasurableSet, MeasureSpace
from .vecmeasure import VectorMeasure


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: Any, where: str = "value") -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{where}: not a rational: {s!r}") from exc


def lelement_to_doc(x: LElement) -> list:
    return [format_rational(q) for q in x.coords]


def lelement_from_doc(doc: Any, where: str = "element") -> LElement:
    if not isinstance(doc, list) or not doc:
        raise ValueError(f"{where}: expected a nonempty array of rationals")
    return LElement([parse_rational(s, f"{where}[{i}]")
                     for i, s in enumerate(doc)])


def module_space_to_doc(space: ModuleSpace) -> Dict[str, Any]:
    return {"rank": space.rank, "d": space.scalar_dim,
            "norm_kind": space.norm_kind.value}


def module_space_from_doc(doc: Any, where: str = "codomain") -> ModuleSpace:
    if not isinstance(doc, dict):
        raise ValueError(f"{where}: expected an object")
    try:
        kind = NormKind(doc["norm_kind"])
        return ModuleSpace(int(doc["rank"]), int(doc["d"]), kind)
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{where}: bad module space: {exc}") from exc


def module_vector_to_doc(x: ModuleVector) -> list:
    return [lelement_to_doc(e) for e in x.entries]


def module_vector_from_doc(doc: Any, space: ModuleSpace,
                           where: str = "vector") -> ModuleVector:
    if not isinstance(doc, list) or len(doc) != space.rank:
        raise ValueError(f"{where}: expected {space.rank} entries")
    return ModuleVector(space, tuple(
        lelement_from_doc(row, f"{where}[{i}]") for i, row in enumerate(doc)))


def measure_space_to_doc(space: MeasureSpace) -> Dict[str, Any]:
    return {"atoms": list(space.atom_names),
            "masses": [format_rational(m) for m in space.masses]}


def measure_space_from_doc(doc: Any, where: str = "space") -> MeasureSpace:
    if not isinstance(doc, dict) or "atoms" not in doc or "masses" not in doc:
        raise ValueError(f"{where}: expected an object with atoms and masses")
    atoms = doc["atoms"]
    masses = doc["masses"]
    if not isinstance(atoms, list) or not isinstance(masses, list):
        raise ValueError(f"{where}: atoms and masses must be arrays")
    return MeasureSpace(tuple(str(a) for a in atoms), tuple(
        parse_rational(m, f"{where}.masses[{i}]")
        for i, m in enumerate(masses)))


def measurable_set_to_doc(F: MeasurableSet) -> list:
    return F.names()


def measurable_set_from_doc(doc: Any, space: MeasureSpace,
                            where: str = "set") -> MeasurableSet:
    if not isinstance(doc, list):
        raise ValueError(f"{where}: expected an array of atom names")
    try:
        return space.subset_of_names(str(n) for n in doc)
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from exc


def _values_from_doc(doc: Any, space: MeasureSpace, codomain: ModuleSpace,
                     where: str):
    if not isinstance(doc, dict):
        raise ValueError(f"{where}: expected an object keyed by atom name")
    missing = [n for n in space.atom_names if n not in doc]
    if missing:
        raise ValueError(f"{where}: missing atoms {missing}")
    return tuple(
        module_vector_from_doc(doc[name], codomain, f"{where}[{name!r}]")
        for name in space.atom_names)


def lfunction_to_doc(f: LFunction) -> Dict[str, Any]:
    return {
        "space": measure_space_to_doc(f.space),
        "codomain": module_space_to_doc(f.codomain),
        "values": {name: module_vector_to_doc(f.values[t])
                   for t, name in enumerate(f.space.atom_names)},
    }


def lfunction_from_doc(doc: Any, where: str = "function") -> LFunction:
    if not isinstance(doc, dict):
        raise ValueError(f"{where}: expected an object")
    space = measure_space_from_doc(doc.get("space"), f"{where}.space")
    codomain = module_space_from_doc(doc.get("codomain"), f"{where}.codomain")
    values = _values_from_doc(doc.get("values"), space, codomain,
                              f"{where}.values")
    return LFunction(space, codomain, values)


def vector_measure_to_doc(G: VectorMeasure) -> Dict[str, Any]:
    return {
        "space": measure_space_to_doc(G.space),
        "codomain": module_space_to_doc(G.codomain),
        "atom_values": {name: module_vector_to_doc(G.atom_values[t])
                        for t, name in enumerate(G.space.atom_names)},
    }


def vector_measure_from_doc(doc: Any, where: str = "measure") -> VectorMeasure:
    if not isinstance(doc, dict):
        raise ValueError(f"{where}: expected an object")
    space = measure_space_from_doc(doc.get("space"), f"{where}.space")
    codomain = module_space_from_doc(doc.get("codomain"), f"{where}.codomain")
    values = _values_from_doc(doc.get("atom_values"), space, codomain,
                              f"{where}.atom_values")
    return VectorMeasure(space, codomain, values)


def dual_function_to_doc(v: DualFunction) -> Dict[str, Any]:
    primal = v.primal_space
    return {
        "space": measure_space_to_doc(v.space),
        "codomain": module_space_to_doc(primal),
        "values": {name: [lelement_to_doc(c) for c in v.values[t].coeffs]
                   for t, name in enumerate(v.space.atom_names)},
    }


def dual_function_from_doc(doc: Any, where: str = "dual") -> DualFunction:
    if not isinstance(doc, dict):
        raise ValueError(f"{where}: expected an object")
    space = measure_space_from_doc(doc.get("space"), f"{where}.space")
    primal = module_space_from_doc(doc.get("codomain"), f"{where}.codomain")
    raw = doc.get("values")
    vecs = _values_from_doc(raw, space, primal, f"{where}.values")
    return DualFunction(space, tuple(
        Functional(primal, vec.entries) for vec in vecs))


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON: {exc}") from exc
