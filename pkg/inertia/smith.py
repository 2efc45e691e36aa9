"""Smith normal form over Z with the column transform kept (and its inverse)."""
from dataclasses import dataclass
from typing import List, Sequence

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_decomp

IntMatrix = List[List[int]]


@dataclass
class SmithForm:
    diagonal: List[int]   # one entry per column; 0 for free directions
    V: IntMatrix          # S A V = D with S unimodular; columns of V are the new coordinates
    V_inv: IntMatrix


def _ints(M: Matrix) -> IntMatrix:
    return [[int(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def smith_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> SmithForm:
    """Diagonalize the relation matrix whose rows are ``rows``.

    A vector x (row) lies in the row lattice iff (x V)_i is divisible by
    diagonal[i] for every i.
    """
    A = Matrix([[int(x) for x in r] for r in rows]) if rows else Matrix.zeros(0, ncols)
    if A.cols != ncols:
        raise ValueError(f"relation rows have {A.cols} columns, expected {ncols}")
    D, _, V = smith_normal_decomp(A, domain=ZZ)
    diagonal = [abs(int(D[i, i])) if i < D.rows else 0 for i in range(ncols)]
    return SmithForm(diagonal, _ints(V), _ints(V.inv()))


def invariant_factors(rows: Sequence[Sequence[int]], ncols: int) -> List[int]:
    """Nontrivial invariant factors d_1 | d_2 | ... of Z^ncols / rowspace."""
    return [d for d in smith_normal_form(rows, ncols).diagonal if d != 1]
