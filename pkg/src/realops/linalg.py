"""Dense real-matrix kernels.

Operator norms via singular values, the two-part real positivity test
(selfadjoint + nonnegative quadratic form), and the norm/positivity
equivalence through the 2x2 block matrix [[I, x], [x^T, I]].

Matrices are plain 2-D float ndarrays throughout; ``as_matrix`` is the
single validation gate.  All functions are pure.
"""

from __future__ import annotations

import numpy as np

#: default tolerance for boolean classifications (positivity, contractivity)
CLASSIFY_TOL = 1e-9
#: default tolerance for exact linear-algebra identities
EXACT_TOL = 1e-12


def as_matrix(m) -> np.ndarray:
    """Validate and return ``m`` as a 2-D float array with finite entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix must have positive shape, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def op_norm(m) -> float:
    """Largest singular value of ``m`` (0 for the zero matrix)."""
    a = as_matrix(m)
    if not a.any():
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def sym_eig_min(m: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetrization (m + m^T)/2."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError("eigenvalue bound requires a square matrix")
    return float(np.linalg.eigvalsh((a + a.T) / 2.0)[0])


def is_real_positive(m, tol: float = CLASSIFY_TOL) -> bool:
    """Positivity in the real sense: symmetric within ``tol`` entrywise and
    smallest eigenvalue >= -tol.

    Both parts are required: a nonsymmetric real matrix can have a
    nonnegative quadratic form (e.g. [[2, -1], [1, 2]]) yet is not positive.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError("positivity requires a square matrix")
    if np.max(np.abs(a - a.T)) > tol:
        return False
    return sym_eig_min(a) >= -tol


def contraction_block(x: np.ndarray) -> np.ndarray:
    """The (p+q) x (p+q) block matrix [[I_p, x], [x^T, I_q]]."""
    a = as_matrix(x)
    p, q = a.shape
    return np.block([[np.eye(p), a], [a.T, np.eye(q)]])


def contraction_iff_positive(x, tol: float = CLASSIFY_TOL) -> tuple[bool, bool]:
    """Return (op_norm(x) <= 1 + tol, real-positivity of [[I, x], [x^T, I]]).

    The two booleans agree for every matrix; callers assert the agreement.
    """
    a = as_matrix(x)
    return op_norm(a) <= 1.0 + tol, is_real_positive(contraction_block(a), tol)


def mat_to_json(m: np.ndarray) -> dict:
    a = as_matrix(m)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "entries": [[float(v) for v in row] for row in a]}


def mat_from_json(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict) or {"rows", "cols", "entries"} - set(obj):
        raise ValueError('matrix JSON needs keys "rows", "cols", "entries"')
    a = as_matrix(obj["entries"])
    if a.shape != (int(obj["rows"]), int(obj["cols"])):
        raise ValueError(f'entries shape {a.shape} does not match declared '
                         f'({obj["rows"]}, {obj["cols"]})')
    return a
