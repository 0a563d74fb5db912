"""Three dimensional Lie algebras given by structure constants.

``c[i][j][k]`` is the coefficient of ``X_k`` in ``[X_i, X_j]`` for the fixed
basis ``(X1, X2, X3)``. Indices are 0-based in code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Tuple

from . import linalg3 as la
from .errors import UnknownAlgebra

ALGEBRA_IDS = ("nil", "e02", "sol", "su2", "sl2")


@dataclass(frozen=True)
class LieAlgebra:
    id: str
    c: Tuple  # 3x3x3 nested tuples

    def bracket(self, u, v):
        return bracket(self, u, v)

    def ad(self, u):
        return ad(self, u)


def _from_brackets(id: str, table: Dict[Tuple[int, int], Tuple[int, int, int]]) -> LieAlgebra:
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), out in table.items():
        for k in la.RANGE:
            c[i][j][k] = out[k]
            c[j][i][k] = -out[k]
    return LieAlgebra(id, tuple(tuple(tuple(r) for r in plane) for plane in c))


# Non-vanishing brackets [X_i, X_j], 0-based.
_TABLES = {
    "nil": {(0, 1): (0, 0, 1)},
    "su2": {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (2, 0): (0, 1, 0)},
    "sl2": {(0, 1): (0, 0, -1), (1, 2): (1, 0, 0), (2, 0): (0, 1, 0)},
    "sol": {(2, 0): (1, 0, 0), (2, 1): (0, -1, 0)},
    "e02": {(2, 0): (0, 1, 0), (2, 1): (-1, 0, 0)},
}

_CATALOG = {k: _from_brackets(k, t) for k, t in _TABLES.items()}


def catalog(id: str) -> LieAlgebra:
    """Return one of the five unimodular algebras by lowercase id."""
    try:
        return _CATALOG[str(id).lower()]
    except KeyError:
        raise UnknownAlgebra(f"unknown algebra id {id!r}; expected one of {', '.join(ALGEBRA_IDS)}") from None


def bracket(g: LieAlgebra, u, v):
    c = g.c
    out = [u[0] * 0, u[0] * 0, u[0] * 0]
    for i, j in itertools.product(la.RANGE, la.RANGE):
        w = u[i] * v[j]
        if w == 0:
            continue
        cij = c[i][j]
        for k in la.RANGE:
            if cij[k]:
                out[k] = out[k] + w * cij[k]
    return tuple(out)


def ad(g: LieAlgebra, u):
    """Matrix of ``v -> [u, v]``; column ``j`` is ``[u, X_j]``."""
    one = u[0] * 0 + 1
    cols = [bracket(g, u, la.basis(j, one)) for j in la.RANGE]
    return la.from_columns(cols)


def jacobi_residual(g: LieAlgebra, u, v, w):
    """``[u,[v,w]] + [v,[w,u]] + [w,[u,v]]``."""
    b = lambda x, y: bracket(g, x, y)
    return la.add(la.add(b(u, b(v, w)), b(v, b(w, u))), b(w, b(u, v)))


def check_invariants(g: LieAlgebra) -> None:
    """Assert antisymmetry, Jacobi and unimodularity on the structure constants."""
    c = g.c
    for i, j, k in itertools.product(la.RANGE, repeat=3):
        if c[i][j][k] != -c[j][i][k]:
            raise ValueError(f"{g.id}: c[{i}][{j}][{k}] not antisymmetric")
    for i, j, k, l in itertools.product(la.RANGE, repeat=4):
        s = sum(c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                for m in la.RANGE)
        if s != 0:
            raise ValueError(f"{g.id}: Jacobi identity fails at {(i, j, k, l)}")
    for i in la.RANGE:
        if sum(c[i][j][j] for j in la.RANGE) != 0:
            raise ValueError(f"{g.id}: tr ad(X{i + 1}) != 0")
