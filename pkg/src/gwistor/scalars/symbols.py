"""Closed symbol vocabulary shared by every polynomial in the engine."""

from __future__ import annotations

import itertools

BASE_SYMBOLS: tuple[str, ...] = (
    "f0", "f1", "f2", "f3", "f4",
    "k", "lam", "rbar", "c", "s",
    "x", "y", "z", "h",
)

#: Symbols that abbreviate polynomials in f0..f3 and are removed by ``expand``.
DERIVED_SYMBOLS: frozenset[str] = frozenset({"x", "y", "z", "h"})

F_SYMBOLS: tuple[str, ...] = ("f0", "f1", "f2", "f3", "f4")

# The single component eliminated by the first Bianchi identity.
BIANCHI_DEPENDENT = (0, 3, 1, 2)


def _canonical_riemann_indices() -> list[tuple[int, int, int, int]]:
    pairs = list(itertools.combinations(range(4), 2))
    out = []
    for a, b in itertools.combinations_with_replacement(pairs, 2):
        idx = (*a, *b)
        if idx != BIANCHI_DEPENDENT:
            out.append(idx)
    return out


RIEMANN_INDICES: tuple[tuple[int, int, int, int], ...] = tuple(_canonical_riemann_indices())


def riemann_name(i: int, j: int, p: int, q: int) -> str:
    return f"R{i}{j}{p}{q}"


RIEMANN_SYMBOLS: tuple[str, ...] = tuple(riemann_name(*idx) for idx in RIEMANN_INDICES)

VOCABULARY: tuple[str, ...] = BASE_SYMBOLS + RIEMANN_SYMBOLS
SYMBOL_INDEX: dict[str, int] = {name: i for i, name in enumerate(VOCABULARY)}


class UnknownSymbol(KeyError):
    pass


def symbol_index(name: str) -> int:
    try:
        return SYMBOL_INDEX[name]
    except KeyError:
        raise UnknownSymbol(name) from None
