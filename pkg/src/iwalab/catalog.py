"""Built-in example modules, each a function of the prime."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .modules import ModulePresentation
from .poly import LambdaPolynomial, w_poly


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    d: int
    description: str
    build: Callable[[int], ModulePresentation]
    metadata: dict = field(default_factory=dict)


def _one(p, d):
    return LambdaPolynomial.constant(p, d, 1)


def _T(p, d, i=0):
    return LambdaPolynomial.variable(p, d, i)


def _cyclic(name, d, f):
    def build(p):
        return ModulePresentation.build(p, d, [[f(p)]], name=name)
    return build


def _two_relations(name, d, f, g):
    def build(p):
        return ModulePresentation.build(p, d, [[f(p), g(p)]], name=name)
    return build


def _zero(p):
    return ModulePresentation.build(p, 1, [], relations=0, name="zero-module")


_ENTRIES = [
    CatalogEntry(
        "lambda-mod-p", 1, "Λ/(p): μ = 1, λ = 0, orders p^(p^n)",
        _cyclic("lambda-mod-p", 1, lambda p: _one(p, 1) * p),
        {"square": True, "pseudoNull": False, "scf": True}),
    CatalogEntry(
        "lambda-mod-p2", 1, "Λ/(p^2): μ = 2, λ = 0",
        _cyclic("lambda-mod-p2", 1, lambda p: _one(p, 1) * p**2),
        {"square": True, "pseudoNull": False, "scf": True}),
    CatalogEntry(
        "lambda-mod-T-minus-p", 1, "Λ/(T - p): μ = 0, λ = 1, cyclic tower",
        _cyclic("lambda-mod-T-minus-p", 1, lambda p: _T(p, 1) - p),
        {"square": True, "pseudoNull": False, "scf": True}),
    CatalogEntry(
        "lambda-mod-p-T-minus-p", 1, "Λ/(p(T - p)): μ = 1, λ = 1",
        _cyclic("lambda-mod-p-T-minus-p", 1, lambda p: (_T(p, 1) - p) * p),
        {"square": True, "pseudoNull": False, "scf": True}),
    CatalogEntry(
        "lambda-mod-w1", 1,
        "Λ/(w_1): torsion but with infinite coinvariants at every level",
        _cyclic("lambda-mod-w1", 1, lambda p: w_poly(p, 1)),
        {"square": True, "pseudoNull": False, "scf": False}),
    CatalogEntry(
        "lambda-mod-p-T", 1, "Λ/(p, T): finite, hence pseudo-null; constant order p",
        _two_relations("lambda-mod-p-T", 1, lambda p: _one(p, 1) * p, lambda p: _T(p, 1)),
        {"square": False, "pseudoNull": True, "scf": True}),
    CatalogEntry(
        "d2-mod-p-T1", 2, "Λ_2/(p, T_1): height-two annihilator, pseudo-null",
        _two_relations("d2-mod-p-T1", 2, lambda p: _one(p, 2) * p, lambda p: _T(p, 2, 0)),
        {"square": False, "pseudoNull": True, "scf": True}),
    CatalogEntry(
        "counterexample-d2", 2,
        "Λ_2/(T_1, T_2) = Z_p with trivial action: not coinvariant-finite",
        _two_relations("counterexample-d2", 2, lambda p: _T(p, 2, 0), lambda p: _T(p, 2, 1)),
        {"square": False, "pseudoNull": False, "scf": False}),
    CatalogEntry(
        "zero-module", 1, "the zero module (empty presentation)", _zero,
        {"square": True, "pseudoNull": True, "scf": True}),
]

CATALOG = {e.name: e for e in _ENTRIES}


def catalog_list() -> list[tuple[str, str]]:
    return [(e.name, e.description) for e in _ENTRIES]


def catalog_module(name: str, p: int) -> ModulePresentation:
    try:
        entry = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None
    return entry.build(p)
