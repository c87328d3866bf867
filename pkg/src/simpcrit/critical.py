"""Critical groups of simplicial complexes.

Two independent routes to the same group:

* ``critical_group_direct`` works straight from the definition,
  ker(boundary) modulo the image of the up-down Laplacian, with no
  hypotheses beyond the dimension range.  It is the ground truth.
* ``critical_group_reduced`` is the fast path through the reduced
  Laplacian of a torsion-free spanning tree; agreement of the two is
  the content of the main structure theorem and is what the test suite
  checks on every fixture.

The module also builds the skew-style stacked matrix of reduced
boundary/coboundary maps for skeleta of simplices and verifies its
cokernel identities, plus the eigenvalue products pi_j and their
alternating quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb

from .complexes import SimplicialComplex
from .generators import full_simplex
from .intlinalg import (
    IntMatrix,
    cokernel,
    invariant_factors,
    pseudo_determinant,
    smith_normal_form,
)
from .trees import as_spanning_tree, require_torsion_free


class LaplacianKind(str, Enum):
    UP_DOWN = "up_down"
    DOWN_UP = "down_up"
    TOTAL = "total"


@dataclass(frozen=True)
class CriticalGroup:
    """Invariant-factor description of a critical group."""

    dimension: int
    invariant_factors: tuple
    free_rank: int

    @property
    def order(self):
        """Order of the finite part."""
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{f}" for f in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def laplacian(comp: SimplicialComplex, i, kind=LaplacianKind.UP_DOWN) -> IntMatrix:
    """The combinatorial Laplacian on i-chains, an f_i x f_i symmetric matrix.

    up_down is boundary_{i+1} times its transpose (zero when i is the top
    dimension); down_up is the transpose of boundary_i times boundary_i.
    Dimension -1 is allowed: its up-down Laplacian is the 1 x 1 matrix
    [f_0] coming from the augmentation.
    """
    kind = LaplacianKind(kind)
    if not -1 <= i <= comp.dim:
        raise ValueError(f"dimension {i} out of range [-1, {comp.dim}]")
    n = len(comp.faces(i))
    if kind is LaplacianKind.TOTAL:
        return laplacian(comp, i, LaplacianKind.UP_DOWN) + laplacian(
            comp, i, LaplacianKind.DOWN_UP
        )
    if kind is LaplacianKind.UP_DOWN:
        if i == comp.dim:
            return IntMatrix(n, n)
        bd = comp.boundary_matrix(i + 1)
        return bd * bd.transpose()
    bd = comp.boundary_matrix(i)
    return bd.transpose() * bd


def reduced_laplacian(comp: SimplicialComplex, i, tree) -> IntMatrix:
    """Up-down Laplacian restricted to the i-faces outside the tree.

    Rows and columns follow the lexicographic order of the complement.
    ``tree`` may be a SpanningTree or an iterable of i-faces; it is
    re-validated either way and NotATreeError is raised on failure.
    """
    tree = as_spanning_tree(comp, i, tree)
    in_tree = set(tree.top_faces)
    theta = [j for j, f in enumerate(comp.faces(i)) if f not in in_tree]
    lap = laplacian(comp, i, LaplacianKind.UP_DOWN)
    return lap.submatrix(theta, theta)


def critical_group_reduced(comp: SimplicialComplex, i, tree) -> CriticalGroup:
    """K_i as the cokernel of the reduced Laplacian of a torsion-free tree."""
    if not 0 <= i < comp.dim:
        raise ValueError(f"dimension {i} out of range [0, {comp.dim})")
    tree = require_torsion_free(as_spanning_tree(comp, i, tree))
    ck = cokernel(reduced_laplacian(comp, i, tree))
    return CriticalGroup(dimension=i, invariant_factors=ck.torsion, free_rank=ck.free_rank)


def critical_group_direct(comp: SimplicialComplex, i) -> CriticalGroup:
    """K_i straight from the definition: ker(boundary_i) / im(Laplacian).

    An integer basis of the kernel comes from the Smith form of the
    boundary map; each Laplacian column is rewritten in that basis (the
    chain property guarantees this is possible), and the cokernel of the
    coefficient matrix is the group.  No tree is involved.
    """
    if not 0 <= i < comp.dim:
        raise ValueError(f"dimension {i} out of range [0, {comp.dim})")
    bd = comp.boundary_matrix(i)
    s = smith_normal_form(bd)
    lap = laplacian(comp, i, LaplacianKind.UP_DOWN)
    w = s.v_inv * lap
    # rows below the rank are the kernel coordinates; rows above must
    # vanish because the Laplacian image lies inside the kernel
    for r in range(s.rank):
        if any(w.data[r]):
            raise AssertionError("Laplacian image escaped the boundary kernel")
    coeff = IntMatrix(bd.cols - s.rank, bd.cols, w.data[s.rank:])
    ck = cokernel(coeff)
    return CriticalGroup(dimension=i, invariant_factors=ck.torsion, free_rank=ck.free_rank)


# -- skeleta of simplices -------------------------------------------------


def maxwell_matrix(n, k) -> IntMatrix:
    """The stacked reduced boundary/coboundary matrix of the n-vertex simplex.

    Rows: the boundary map on k-faces with the rows of (k-1)-faces
    containing vertex 1 deleted, on top of the negated coboundary map
    into (k+1)-faces with only the rows of (k+1)-faces containing
    vertex 1 kept.  The result is square of side C(n-1,k) + C(n-1,k+1)
    and its cokernel is (Z/n)^C(n-2,k).
    """
    if not 1 <= k <= n - 2:
        raise ValueError("need 1 <= k <= n - 2")
    comp = full_simplex(n)
    bd_k = comp.boundary_matrix(k)
    keep_low = [r for r, f in enumerate(comp.faces(k - 1)) if 1 not in f]
    top = [bd_k.data[r][:] for r in keep_low]
    cb = comp.boundary_matrix(k + 1).transpose()
    keep_high = [r for r, f in enumerate(comp.faces(k + 1)) if 1 in f]
    bottom = [[-x for x in cb.data[r]] for r in keep_high]
    return IntMatrix(len(top) + len(bottom), bd_k.cols, top + bottom)


@dataclass(frozen=True)
class SimplexStructureReport:
    """Cross-checks between the stacked matrix and the critical groups
    of the n-vertex simplex at dimensions k-1 and k.

    ``aat_matches`` records which direct sum the cokernel of A*A^T
    agreed with: the doubled K_{k-1}, the sum K_{k-1} + K_k, or both
    (they coincide exactly when C(n-2,k) = C(n-2,k+1)).
    """

    n: int
    k: int
    coker_a: tuple
    coker_aat: tuple
    factors_k_minus_1: tuple
    factors_k: tuple
    blocks_ok: bool
    cyclic_ok: bool
    exponent_k_minus_1_ok: bool
    exponent_k_ok: bool
    maxwell_ok: bool
    aat_matches: str

    @property
    def passed(self):
        return (
            self.blocks_ok
            and self.cyclic_ok
            and self.exponent_k_minus_1_ok
            and self.exponent_k_ok
            and self.maxwell_ok
            and self.aat_matches != "neither"
        )


def _direct_sum_factors(*factor_lists):
    entries = [f for fl in factor_lists for f in fl]
    facs = invariant_factors(IntMatrix.diagonal(entries))
    return tuple(f for f in facs if f > 1)


def verify_simplex_structure(n, k) -> SimplexStructureReport:
    """Verify the stacked-matrix identities on the n-vertex simplex.

    Computes everything from scratch on both sides: the blocks of A*A^T
    against reduced Laplacians, the cokernel of A against (Z/n)^C(n-2,k),
    the critical groups K_{k-1} and K_k against their predicted exponents,
    and which direct sum matches coker(A*A^T).
    """
    comp = full_simplex(n)
    a = maxwell_matrix(n, k)
    aat = a * a.transpose()

    # block structure: top-left is the up-down Laplacian at k-1 reduced by
    # the tree of (k-1)-faces containing vertex 1; bottom-right is the
    # down-up Laplacian at k+1 restricted to (k+1)-faces containing vertex 1
    star = [f for f in comp.faces(k - 1) if 1 in f]
    top = reduced_laplacian(comp, k - 1, star)
    m = top.rows
    keep_high = [r for r, f in enumerate(comp.faces(k + 1)) if 1 in f]
    down_up = laplacian(comp, k + 1, LaplacianKind.DOWN_UP).submatrix(keep_high, keep_high)
    size = aat.rows
    blocks_ok = (
        aat.submatrix(range(m), range(m)) == top
        and aat.submatrix(range(m, size), range(m, size)) == down_up
        and aat.submatrix(range(m), range(m, size)) == 0
    )

    coker_a = cokernel(a)
    coker_aat = cokernel(aat)
    g_km1 = critical_group_direct(comp, k - 1)
    g_k = critical_group_direct(comp, k)

    cyclic_ok = (
        g_km1.free_rank == 0
        and g_k.free_rank == 0
        and all(f == n for f in g_km1.invariant_factors)
        and all(f == n for f in g_k.invariant_factors)
    )
    exp_km1_ok = len(g_km1.invariant_factors) == comb(n - 2, k)
    exp_k_ok = len(g_k.invariant_factors) == comb(n - 2, k + 1)
    maxwell_ok = (
        coker_a.free_rank == 0
        and coker_a.torsion == tuple([n] * comb(n - 2, k))
    )

    shifted = _direct_sum_factors(g_km1.invariant_factors, g_k.invariant_factors)
    doubled = _direct_sum_factors(g_km1.invariant_factors, g_km1.invariant_factors)
    if coker_aat.torsion == shifted and coker_aat.torsion == doubled:
        matches = "both"
    elif coker_aat.torsion == shifted:
        matches = "K[k-1]+K[k]"
    elif coker_aat.torsion == doubled:
        matches = "K[k-1] doubled"
    else:
        matches = "neither"

    return SimplexStructureReport(
        n=n,
        k=k,
        coker_a=coker_a.torsion,
        coker_aat=coker_aat.torsion,
        factors_k_minus_1=g_km1.invariant_factors,
        factors_k=g_k.invariant_factors,
        blocks_ok=blocks_ok,
        cyclic_ok=cyclic_ok,
        exponent_k_minus_1_ok=exp_km1_ok,
        exponent_k_ok=exp_k_ok,
        maxwell_ok=maxwell_ok,
        aat_matches=matches,
    )


# -- eigenvalue products ---------------------------------------------------


def pi_product(comp: SimplicialComplex, j) -> int:
    """Product of the nonzero eigenvalues of the up-down Laplacian in
    dimension j - 1.  With the augmentation convention, pi_0 = f_0."""
    if not 0 <= j <= comp.dim:
        raise ValueError(f"index {j} out of range [0, {comp.dim}]")
    return pseudo_determinant(laplacian(comp, j - 1, LaplacianKind.UP_DOWN))


def alternating_order(comp: SimplicialComplex, i) -> Fraction:
    """Alternating product of the pi_j whose value is |K_i| under the
    usual hypotheses (vanishing lower homology and a torsion-free tree).

    Returns the exact rational prod_{j=0}^{i+1} pi_j^((-1)^(i+1-j))
    unconditionally; whether it equals the group order is the caller's
    check.
    """
    if not 0 <= i < comp.dim:
        raise ValueError(f"dimension {i} out of range [0, {comp.dim})")
    out = Fraction(1)
    for j in range(i + 2):
        out *= Fraction(pi_product(comp, j)) ** ((-1) ** (i + 1 - j))
    return out
