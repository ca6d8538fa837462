"""Direct encodings of small SDPs for the Clarabel conic solver.

Problems are assembled in the form

    minimize    q^T x
    subject to  A x + s = b,   s in (zero) x (nonneg) x (PSD triangle)*

Symmetric matrices enter through the scaled upper-triangle vectorization
(svec), which is an isometry for the Frobenius inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import clarabel

__all__ = ["svec", "smat", "svec_dim", "ConicProblem", "ConicSolution"]

_SQRT2 = np.sqrt(2.0)


def svec_dim(m: int) -> int:
    return m * (m + 1) // 2


def svec(M: np.ndarray) -> np.ndarray:
    """Column-stacked upper triangle with off-diagonals scaled by sqrt(2)."""
    m = M.shape[0]
    out = np.empty(svec_dim(m))
    k = 0
    for j in range(m):
        for i in range(j + 1):
            out[k] = M[i, j] * (1.0 if i == j else _SQRT2)
            k += 1
    return out


def smat(v: np.ndarray, m: int) -> np.ndarray:
    """Inverse of svec."""
    M = np.zeros((m, m))
    k = 0
    for j in range(m):
        for i in range(j + 1):
            if i == j:
                M[i, j] = v[k]
            else:
                M[i, j] = M[j, i] = v[k] / _SQRT2
            k += 1
    return M


@dataclass
class ConicSolution:
    x: np.ndarray
    zero_duals: np.ndarray
    nonneg_duals: np.ndarray
    psd_duals: list[np.ndarray]
    status: str
    iterations: int
    obj: float
    obj_dual: float

    @property
    def solved(self) -> bool:
        return self.status in ("Solved", "AlmostSolved")


class ConicProblem:
    """Incremental builder for a mixed zero/nonneg/PSD cone program."""

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self._q = np.zeros(num_vars)
        self._zero_rows: list[np.ndarray] = []
        self._zero_rhs: list[float] = []
        self._nonneg_rows: list[np.ndarray] = []
        self._nonneg_rhs: list[float] = []
        self._psd_blocks: list[tuple[list[tuple[int, np.ndarray]], np.ndarray]] = []

    def set_objective(self, q: np.ndarray) -> None:
        self._q = np.asarray(q, dtype=float)

    def add_equality(self, coeffs: np.ndarray, rhs: float) -> None:
        self._zero_rows.append(np.asarray(coeffs, dtype=float))
        self._zero_rhs.append(float(rhs))

    def add_inequality(self, coeffs: np.ndarray, rhs: float) -> None:
        """coeffs . x <= rhs"""
        self._nonneg_rows.append(np.asarray(coeffs, dtype=float))
        self._nonneg_rhs.append(float(rhs))

    def add_psd_block(self, terms: list[tuple[int, np.ndarray]], const: np.ndarray) -> None:
        """Require const + sum_j x_j * M_j to be positive semidefinite."""
        self._psd_blocks.append((terms, np.asarray(const, dtype=float)))

    def solve(self, tol: float = 1e-10, max_iter: int = 200, verbose: bool = False) -> ConicSolution:
        nv = self.num_vars
        blocks = []
        rhs = []
        cones = []
        if self._zero_rows:
            blocks.append(np.vstack(self._zero_rows))
            rhs.append(np.asarray(self._zero_rhs))
            cones.append(clarabel.ZeroConeT(len(self._zero_rows)))
        if self._nonneg_rows:
            blocks.append(np.vstack(self._nonneg_rows))
            rhs.append(np.asarray(self._nonneg_rhs))
            cones.append(clarabel.NonnegativeConeT(len(self._nonneg_rows)))
        psd_dims = []
        for terms, const in self._psd_blocks:
            m = const.shape[0]
            psd_dims.append(m)
            rows = np.zeros((svec_dim(m), nv))
            for var, M in terms:
                rows[:, var] = -svec(M)
            blocks.append(rows)
            rhs.append(svec(const))
            cones.append(clarabel.PSDTriangleConeT(m))

        A = sp.csc_matrix(np.vstack(blocks))
        b = np.concatenate(rhs)
        P = sp.csc_matrix((nv, nv))
        settings = clarabel.DefaultSettings()
        settings.verbose = verbose
        settings.max_iter = max_iter
        settings.tol_gap_abs = tol
        settings.tol_gap_rel = tol
        settings.tol_feas = tol
        solver = clarabel.DefaultSolver(P, self._q, A, b, cones, settings)
        sol = solver.solve()

        z = np.asarray(sol.z)
        ofs = 0
        nzero = len(self._zero_rows)
        zero_duals = z[ofs:ofs + nzero]
        ofs += nzero
        nnn = len(self._nonneg_rows)
        nonneg_duals = z[ofs:ofs + nnn]
        ofs += nnn
        psd_duals = []
        for m in psd_dims:
            d = svec_dim(m)
            psd_duals.append(smat(z[ofs:ofs + d], m))
            ofs += d
        return ConicSolution(
            x=np.asarray(sol.x),
            zero_duals=zero_duals,
            nonneg_duals=nonneg_duals,
            psd_duals=psd_duals,
            status=str(sol.status),
            iterations=int(sol.iterations),
            obj=float(sol.obj_val),
            obj_dual=float(sol.obj_val_dual),
        )
