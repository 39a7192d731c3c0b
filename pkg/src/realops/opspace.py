"""Concrete real operator spaces and their matrix-level norms.

A space is a list of linearly independent basis matrices inside an ambient
M_{p,q}(R); an element of the n-th matrix level is an n x n x d coefficient
tensor over that basis; a completely bounded map is a coefficient matrix
amplified coefficientwise to every level.  Everything downstream (the
complexification functor, quantizations, M-projection machinery, operator
systems) is built on these three types.

Coefficient conventions used throughout the package:

* element tensors are indexed ``coeffs[i, j, k]`` with (i, j) the matrix
  position and k the basis index; flattening is C-order;
* the complexification doubles the basis as [real copies..., imaginary
  copies...] and its conjugation negates the imaginary half;
* the column space C_2(X) (see mideal) stacks [upper copies..., lower
  copies...].
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, mat_from_json, mat_to_json, op_norm
from .optim import (LinearMatrixMap, ratio_ascent, ratio_eval, seesaw_ascent,
                    polyak_minimize, smoothed_spectral_min,
                    top_singular_triple)
from .rng import derived_rng

#: singular-value threshold below which a basis is rejected as degenerate
BASIS_RANK_TOL = 1e-10


@dataclass(frozen=True)
class OpSpace:
    """Concrete real operator space: span of ``basis`` inside M_{p,q}(R)."""

    basis: np.ndarray                      # (d, p, q)
    is_complexified: bool = False
    conjugation: np.ndarray | None = None  # (d, d) coefficient involution
    gram_condition: float = field(init=False, default=0.0)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 3 or b.shape[0] < 1:
            raise ValueError("basis must be a nonempty (d, p, q) array")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis entries must be finite")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        d = b.shape[0]
        vecs = b.reshape(d, -1)
        svals = np.linalg.svd(vecs, compute_uv=False)
        if svals[-1] < BASIS_RANK_TOL:
            raise ValueError(
                f"basis is numerically dependent (smallest singular value "
                f"{svals[-1]:.3e} < {BASIS_RANK_TOL:.0e})")
        object.__setattr__(self, "gram_condition",
                           float((svals[0] / svals[-1]) ** 2))
        object.__setattr__(self, "_pinv", np.linalg.pinv(vecs.T))
        object.__setattr__(self, "_rmcache", {})
        if self.conjugation is not None:
            c = np.asarray(self.conjugation, dtype=float).copy()
            if c.shape != (d, d):
                raise ValueError("conjugation must be a d x d matrix")
            if np.max(np.abs(c @ c - np.eye(d))) > 1e-12:
                raise ValueError("conjugation must be an involution")
            c.setflags(write=False)
            object.__setattr__(self, "conjugation", c)
        if self.is_complexified:
            p, q = self.ambient
            if p % 2 or q % 2:
                raise ValueError("complexified space needs even ambient sides")
            jp = complex_structure(p // 2)
            jq = complex_structure(q // 2)
            for k in range(d):
                conj = jp @ b[k] @ jq.T     # J x J^{-1}, J^{-1} = J^T
                _, res = self.coefficients(conj)
                if res > 1e-10 * (1.0 + np.linalg.norm(conj)):
                    raise ValueError(
                        "span is not invariant under the block complex "
                        f"structure (basis element {k}, residual {res:.3e})")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient(self) -> tuple[int, int]:
        return self.basis.shape[1], self.basis.shape[2]

    def coefficients(self, mat: np.ndarray) -> tuple[np.ndarray, float]:
        """Least-squares coefficients of ``mat`` plus the residual norm."""
        m = as_matrix(mat)
        if m.shape != self.ambient:
            raise ValueError(f"matrix shape {m.shape} does not match ambient "
                             f"{self.ambient}")
        c = self._pinv @ m.ravel()
        res = float(np.linalg.norm(self.basis.reshape(self.dim, -1).T @ c
                                   - m.ravel()))
        return c, res

    def contains(self, mat: np.ndarray, tol: float = 1e-10) -> bool:
        m = as_matrix(mat)
        _, res = self.coefficients(m)
        return res <= tol * (1.0 + np.linalg.norm(m))

    def realization_matrix(self, level: int) -> np.ndarray:
        """vec matrix of the realization R at ``level`` (cached).

        Columns are indexed by the C-order flattening of (i, j, k).
        """
        cache = self._rmcache
        if level not in cache:
            d = self.dim
            p, q = self.ambient
            n = level
            k_mat = np.zeros((n * p * n * q, n * n * d))
            for i in range(n):
                for j in range(n):
                    block = np.zeros((n * p, n * q, d))
                    block[i * p:(i + 1) * p, j * q:(j + 1) * q, :] = \
                        np.moveaxis(self.basis, 0, -1)
                    cols = block.reshape(n * p * n * q, d)
                    k_mat[:, (i * n + j) * d:(i * n + j + 1) * d] = cols
            k_mat.setflags(write=False)
            cache[level] = k_mat
        return cache[level]


def complex_structure(half: int) -> np.ndarray:
    """The block matrix J = [[0, -I], [I, 0]] of side 2*half."""
    j = np.zeros((2 * half, 2 * half))
    j[:half, half:] = -np.eye(half)
    j[half:, :half] = np.eye(half)
    return j


def full_matrix_space(p: int, q: int | None = None) -> OpSpace:
    """M_{p,q}(R) with the matrix-unit basis (row-major order)."""
    q = p if q is None else q
    basis = np.zeros((p * q, p, q))
    for r in range(p):
        for c in range(q):
            basis[r * q + c, r, c] = 1.0
    return OpSpace(basis)


def span_space(mats) -> OpSpace:
    """Operator space spanned by the given matrices (kept as the basis)."""
    return OpSpace(np.stack([as_matrix(m) for m in mats]))


@dataclass(frozen=True)
class MatElem:
    """Element of M_n(X), stored by coefficients over the basis of X."""

    space: OpSpace
    coeffs: np.ndarray    # (level, level, d)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 3 or c.shape[0] != c.shape[1]:
            raise ValueError("coefficients must have shape (n, n, d)")
        if c.shape[2] != self.space.dim:
            raise ValueError(f"coefficient depth {c.shape[2]} does not match "
                             f"space dimension {self.space.dim}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def level(self) -> int:
        return self.coeffs.shape[0]

    def realization(self) -> np.ndarray:
        n = self.level
        p, q = self.space.ambient
        r = np.einsum("ijk,kpq->ipjq", self.coeffs, self.space.basis)
        return r.reshape(n * p, n * q)


def level_norm(x: MatElem) -> float:
    """Canonical norm of M_n(X) inherited from the ambient matrices."""
    return op_norm(x.realization())


def elem(space: OpSpace, coeffs) -> MatElem:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim == 1:
        c = c.reshape(1, 1, -1)
    return MatElem(space, c)


def random_elem(space: OpSpace, level: int, rng: np.random.Generator) -> MatElem:
    return MatElem(space, rng.standard_normal((level, level, space.dim)))


def scalar_sandwich(alpha: np.ndarray, x: MatElem, beta: np.ndarray) -> MatElem:
    """The Ruan action alpha x beta of scalar matrices on M_n(X)."""
    c = np.einsum("ia,abk,bj->ijk", alpha, x.coeffs, beta)
    return MatElem(x.space, c)


def direct_sum_elem(x: MatElem, y: MatElem) -> MatElem:
    """x (+) y in M_{n+m}(X), with block-diagonal coefficients."""
    if x.space is not y.space and not np.array_equal(x.space.basis, y.space.basis):
        raise ValueError("direct sum of elements needs a common space")
    n, m = x.level, y.level
    c = np.zeros((n + m, n + m, x.space.dim))
    c[:n, :n, :] = x.coeffs
    c[n:, n:, :] = y.coeffs
    return MatElem(x.space, c)


@dataclass(frozen=True)
class CBMap:
    """Linear map between spaces, amplified coefficientwise to all levels."""

    domain: OpSpace
    codomain: OpSpace
    matrix: np.ndarray    # (dim codomain, dim domain)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(f"coefficient matrix shape {m.shape} does not "
                             f"match (dim Y, dim X) = "
                             f"({self.codomain.dim}, {self.domain.dim})")
        if not np.all(np.isfinite(m)):
            raise ValueError("map entries must be finite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, x: MatElem) -> MatElem:
        if x.space is not self.domain and \
                not np.array_equal(x.space.basis, self.domain.basis):
            raise ValueError("element does not live in the map's domain")
        return MatElem(self.codomain,
                       np.einsum("mk,ijk->ijm", self.matrix, x.coeffs))


def identity_map(space: OpSpace) -> CBMap:
    return CBMap(space, space, np.eye(space.dim))


def compose(f: CBMap, g: CBMap) -> CBMap:
    """f after g."""
    return CBMap(g.domain, f.codomain, f.matrix @ g.matrix)


# ----------------------------------------------------------------------
# Complexification
# ----------------------------------------------------------------------

def complexify_space(space: OpSpace) -> OpSpace:
    """X_c as the 2p x 2q space of blocks [[x, -y], [y, x]], x, y in X.

    The basis doubles: real copies [[B_k, 0], [0, B_k]] first, imaginary
    copies [[0, -B_k], [B_k, 0]] second.  The conjugation negates the
    imaginary half of the coefficients.
    """
    if space.is_complexified:
        raise ValueError("space is already complexified; the functor is "
                         "defined on real spaces only")
    d = space.dim
    p, q = space.ambient
    basis = np.zeros((2 * d, 2 * p, 2 * q))
    for k in range(d):
        b = space.basis[k]
        basis[k, :p, :q] = b
        basis[k, p:, q:] = b
        basis[d + k, :p, q:] = -b
        basis[d + k, p:, :q] = b
    conj = np.diag(np.concatenate([np.ones(d), -np.ones(d)]))
    return OpSpace(basis, is_complexified=True, conjugation=conj)


def conjugate_elem(x: MatElem) -> MatElem:
    if x.space.conjugation is None:
        raise ValueError("space carries no conjugation")
    return MatElem(x.space,
                   np.einsum("kl,ijl->ijk", x.space.conjugation, x.coeffs))


def complexified_elem(space_c: OpSpace, x: MatElem, y: MatElem) -> MatElem:
    """The element x + iy of M_n(X_c), given x, y in M_n(X)."""
    if x.level != y.level:
        raise ValueError("x and y must live at the same level")
    if x.coeffs.shape[2] * 2 != space_c.dim:
        raise ValueError("space_c is not the complexification of the "
                         "elements' space")
    return MatElem(space_c, np.concatenate([x.coeffs, y.coeffs], axis=2))


def complexification_norm(space: OpSpace, x: MatElem, y: MatElem) -> float:
    """The norm of x + iy computed in the complexified space."""
    xc = complexify_space(space)
    return level_norm(complexified_elem(xc, x, y))


def complexify_map(u: CBMap) -> CBMap:
    """T_c(x + iy) = T(x) + iT(y), acting blockwise on coefficients."""
    if u.domain.is_complexified or u.codomain.is_complexified:
        raise ValueError("complexify_map expects a map between real spaces")
    a = u.matrix
    mat = np.block([[a, np.zeros_like(a)], [np.zeros_like(a), a]])
    return CBMap(complexify_space(u.domain), complexify_space(u.codomain), mat)


# ----------------------------------------------------------------------
# Ruan axiom sampling
# ----------------------------------------------------------------------

@dataclass
class RuanReport:
    direct_sum_deviation: float
    scalar_action_deviation: float
    samples: int
    max_level: int
    tol: float
    passed: bool


def check_ruan_axioms(space: OpSpace, max_level: int = 3, samples: int = 100,
                      seed: int = 0, tol: float = 1e-10) -> RuanReport:
    """Sampled check of the two matrix-norm axioms.

    (i)  |norm(x (+) y) - max(norm x, norm y)| over random pairs;
    (ii) max(0, norm(alpha x beta) - |alpha| norm(x) |beta|).
    """
    if max_level < 2:
        raise ValueError("max_level must be at least 2")
    rng = derived_rng(seed, 1)
    dev1 = 0.0
    dev2 = 0.0
    for _ in range(samples):
        n = int(rng.integers(1, max_level + 1))
        m = int(rng.integers(1, max_level + 1))
        x = random_elem(space, n, rng)
        y = random_elem(space, m, rng)
        nx, ny = level_norm(x), level_norm(y)
        if nx < 1e-14 or ny < 1e-14:
            continue
        dev1 = max(dev1, abs(level_norm(direct_sum_elem(x, y)) - max(nx, ny)))
        alpha = rng.standard_normal((n, n))
        beta = rng.standard_normal((n, n))
        lhs = level_norm(scalar_sandwich(alpha, x, beta))
        dev2 = max(dev2, max(0.0, lhs - op_norm(alpha) * nx * op_norm(beta)))
    return RuanReport(dev1, dev2, samples, max_level, tol,
                      passed=(dev1 <= tol and dev2 <= tol))


# ----------------------------------------------------------------------
# Direct sums
# ----------------------------------------------------------------------

def direct_sum_spaces(spaces) -> OpSpace:
    """Block-diagonal direct sum; level norms are the max over components."""
    spaces = list(spaces)
    if not spaces:
        raise ValueError("need at least one summand")
    p_tot = sum(s.ambient[0] for s in spaces)
    q_tot = sum(s.ambient[1] for s in spaces)
    basis = []
    row, col = 0, 0
    for s in spaces:
        p, q = s.ambient
        for k in range(s.dim):
            b = np.zeros((p_tot, q_tot))
            b[row:row + p, col:col + q] = s.basis[k]
            basis.append(b)
        row += p
        col += q
    return OpSpace(np.stack(basis))


# ----------------------------------------------------------------------
# Completely bounded norm lower bounds
# ----------------------------------------------------------------------

@dataclass
class CbSearchResult:
    value: float
    level: int
    witness: np.ndarray          # coefficient tensor in the domain space
    restart_values: list[float]


def _amplification(matrix: np.ndarray, level: int) -> np.ndarray:
    return np.kron(np.eye(level * level), matrix)


def _num_den_maps(u: CBMap, level: int) -> tuple[LinearMatrixMap, LinearMatrixMap]:
    px, qx = u.domain.ambient
    py, qy = u.codomain.ambient
    k_den = u.domain.realization_matrix(level)
    k_num = u.codomain.realization_matrix(level) @ _amplification(u.matrix, level)
    num = LinearMatrixMap(k_num, level * py, level * qy)
    den = LinearMatrixMap(k_den, level * px, level * qx)
    return num, den


def _canonical_starts(dim_domain: int, level: int) -> list[np.ndarray]:
    """Single-coefficient elements: the classical extremal candidates."""
    starts = []
    for k in range(dim_domain):
        c = np.zeros(level * level * dim_domain)
        c[k] = 1.0
        starts.append(c)
    return starts


def cb_norm_lower_search(u: CBMap, level: int, restarts: int = 32,
                         iters: int = 500, seed: int = 0) -> CbSearchResult:
    """Certified lower bound for the norm of the level-n amplification u_n.

    Multistart ascent on the ratio norm(u_n(x)) / norm(x).  Lower levels
    are searched first and their best witnesses re-embedded (zero-padded),
    so results are monotone nondecreasing in the level under a fixed seed
    schedule.  Every reported value is the ratio at a feasible element.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    d = u.domain.dim
    p, q = u.domain.ambient
    full_domain = (d == p * q)
    best_val = 0.0
    best_x = None        # flat coefficient vector at level best_level
    best_level = 1
    restart_values: list[float] = []
    for lvl in range(1, level + 1):
        num, den = _num_den_maps(u, lvl)
        starts = _canonical_starts(d, lvl)
        if best_x is not None and best_level < lvl:
            # zero-padding preserves the ratio, so the search is monotone
            # nondecreasing in the level under a fixed seed schedule
            pad = np.zeros((lvl, lvl, d))
            pad[:best_level, :best_level, :] = \
                best_x.reshape(best_level, best_level, d)
            starts.append(pad.ravel())
        for c in starts:
            val = ratio_eval(num, den, c)
            if val > best_val:
                best_val, best_x, best_level = val, c.copy(), lvl
        for r in range(restarts):
            rng = derived_rng(seed, lvl, r)
            x0 = rng.standard_normal(lvl * lvl * d)
            x0 += 1e-8 * rng.standard_normal(x0.shape)   # tie-breaking jitter
            if full_domain:
                val, x = seesaw_ascent(num, den, x0)
            else:
                val, x = ratio_ascent(num, den, x0, iters=iters)
            if lvl == level:
                restart_values.append(val)
            if val > best_val:
                best_val, best_x, best_level = val, x.copy(), lvl
        # polish the incumbent at this level
        if best_x is not None and best_level == lvl:
            if full_domain:
                val, x = seesaw_ascent(num, den, best_x)
            else:
                val, x = ratio_ascent(num, den, best_x, iters=iters,
                                      step0=1e-3)
            if val > best_val:
                best_val, best_x = val, x.copy()
    witness = np.zeros((level, level, d))
    if best_x is not None:
        witness[:best_level, :best_level, :] = \
            best_x.reshape(best_level, best_level, d)
    return CbSearchResult(best_val, level, witness, restart_values)


def level_cb_norm_lower(u: CBMap, level: int, restarts: int = 32,
                        iters: int = 500, seed: int = 0) -> float:
    return cb_norm_lower_search(u, level, restarts, iters, seed).value


# ----------------------------------------------------------------------
# Quotient norms
# ----------------------------------------------------------------------

@dataclass
class QuotientResult:
    value: float
    gap: float
    converged: bool
    minimizer: np.ndarray    # (n, n, dim Y) coefficients over the subspace


def quotient_level_norm(space: OpSpace, subspace_coeffs, x: MatElem,
                        iters: int = 5000, tol: float = 1e-7) -> QuotientResult:
    """dist(x, M_n(Y)) for the subspace Y spanned by the given level-1
    coefficient vectors.

    Convex minimization of t -> sigma_max(R(x) - R(y(t))): Polyak
    subgradient steps followed by a smoothing-continuation polish (plain
    subgradient steps stall when the optimal matrix has a repeated top
    singular value).  The value at the best iterate is an upper bound on
    the infimum; non-convergence (gap estimate > tol) is flagged, not
    silent.
    """
    s = np.asarray(subspace_coeffs, dtype=float)
    if s.ndim == 1:
        s = s.reshape(1, -1)
    if s.shape[1] != space.dim:
        raise ValueError("subspace coefficients must have the space's depth")
    if np.linalg.matrix_rank(s) < s.shape[0]:
        raise ValueError("subspace basis coefficients are dependent")
    n = x.level
    p, q = space.ambient
    k_space = space.realization_matrix(n)
    k_sub = k_space @ np.kron(np.eye(n * n), s.T)
    b_vec = x.realization().ravel()
    value, w_best, gap, converged = polyak_minimize(
        b_vec, k_sub, n * p, n * q, iters=iters, tol=tol)
    if value > 1e-13:
        p_val, p_w, p_gap = smoothed_spectral_min(b_vec, k_sub, n * p, n * q,
                                                  w_best)
        if p_val <= value:
            value, w_best, gap = p_val, p_w, p_gap
            converged = gap <= tol
    return QuotientResult(value, gap, converged,
                          w_best.reshape(n, n, s.shape[0]))


# ----------------------------------------------------------------------
# The dual-scalars counterexample machinery
# ----------------------------------------------------------------------

@dataclass
class ThetaSearchResult:
    lower: float
    best_m: int
    restart_values: list[float]
    witness_re: np.ndarray
    witness_im: np.ndarray


def _project_complex_contraction(w: np.ndarray) -> np.ndarray:
    u, s, vt = np.linalg.svd(w)
    return u @ np.diag(np.minimum(s, 1.0)) @ vt


def _theta_value_matrix(z_re, z_im, w: np.ndarray) -> np.ndarray:
    return np.kron(z_re, w.real) + np.kron(z_im, w.imag)


def theta_dual_search(z_re, z_im, m_max: int = 4, restarts: int = 64,
                      iters: int = 150, seed: int = 0) -> ThetaSearchResult:
    """Lower bound for the norm of the matrix of functionals Re( . conj(z_kl)).

    The norm is the sup over m and contractive complex m x m test matrices
    of the realized real block norm; the search runs seeded random
    unitaries through projected ascent, for every m up to m_max.  Each
    evaluation happens at a feasible (contractive) test matrix, so every
    reported value, per restart included, is a true lower bound.
    """
    z_re = as_matrix(z_re)
    z_im = as_matrix(z_im)
    if z_re.shape != z_im.shape or z_re.shape[0] != z_re.shape[1]:
        raise ValueError("the two blocks must be square and equal shape")
    if not z_re.any() and not z_im.any():
        return ThetaSearchResult(0.0, 1, [], np.eye(1), np.zeros((1, 1)))
    best = -np.inf
    best_m = 1
    best_w = np.eye(1, dtype=complex)
    restart_values = []
    for m in range(1, m_max + 1):
        candidates = [np.eye(m, dtype=complex)]
        for r in range(restarts):
            rng = derived_rng(seed, m, r)
            g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            qmat, _ = np.linalg.qr(g)
            candidates.append(qmat)
        for idx, w0 in enumerate(candidates):
            w = _project_complex_contraction(w0)
            run_best = 0.0
            step = 0.3
            decay = (1e-10 / step) ** (1.0 / iters)
            for _ in range(iters):
                g_mat = _theta_value_matrix(z_re, z_im, w)
                s, uvec, vvec = top_singular_triple(g_mat)
                if s > run_best:
                    run_best = s
                    if s > best:
                        best, best_m, best_w = s, m, w.copy()
                smat = uvec.reshape(z_re.shape[0], m)
                tmat = vvec.reshape(z_re.shape[0], m)
                grad = (smat.T @ z_re @ tmat) + 1j * (smat.T @ z_im @ tmat)
                gn = np.linalg.norm(grad)
                if gn < 1e-18:
                    break
                w = _project_complex_contraction(w + step * grad / gn)
                step *= decay
            if idx > 0:
                restart_values.append(run_best)
    return ThetaSearchResult(float(best), best_m, restart_values,
                             best_w.real.copy(), best_w.imag.copy())


def theta_dual_norm_lower(z_re, z_im, m_max: int = 4, restarts: int = 64,
                          seed: int = 0) -> float:
    return theta_dual_search(z_re, z_im, m_max=m_max, restarts=restarts,
                             seed=seed).lower


# ----------------------------------------------------------------------
# JSON forms
# ----------------------------------------------------------------------

def opspace_to_json(space: OpSpace) -> dict:
    p, q = space.ambient
    out = {"ambient": {"rows": p, "cols": q},
           "basis": [mat_to_json(b) for b in space.basis],
           "complexified": bool(space.is_complexified)}
    if space.conjugation is not None:
        out["conjugation"] = [[float(v) for v in row]
                              for row in space.conjugation]
    return out


def opspace_from_json(obj: dict) -> OpSpace:
    if not isinstance(obj, dict) or "basis" not in obj:
        raise ValueError('operator space JSON needs a "basis" list')
    basis = [mat_from_json(b) for b in obj["basis"]]
    if "ambient" in obj:
        amb = (int(obj["ambient"]["rows"]), int(obj["ambient"]["cols"]))
        for b in basis:
            if b.shape != amb:
                raise ValueError(f"basis matrix shape {b.shape} does not "
                                 f"match ambient {amb}")
    conj = obj.get("conjugation")
    return OpSpace(np.stack(basis),
                   is_complexified=bool(obj.get("complexified", False)),
                   conjugation=None if conj is None else np.asarray(conj, float))


def elem_to_json(x: MatElem) -> dict:
    return {"level": x.level,
            "coeffs": [[[float(v) for v in cell] for cell in row]
                       for row in x.coeffs]}


def elem_from_json(space: OpSpace, obj: dict) -> MatElem:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise ValueError('element JSON needs a "coeffs" tensor')
    c = np.asarray(obj["coeffs"], dtype=float)
    if "level" in obj and c.shape[0] != int(obj["level"]):
        raise ValueError("declared level does not match coefficient shape")
    return MatElem(space, c)


def cbmap_to_json(u: CBMap) -> dict:
    return {"matrix": [[float(v) for v in row] for row in u.matrix],
            "domain": opspace_to_json(u.domain),
            "codomain": opspace_to_json(u.codomain)}


def cbmap_from_json(obj: dict, domain: OpSpace | None = None,
                    codomain: OpSpace | None = None,
                    base_dir: str = ".") -> CBMap:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValueError('map JSON needs a "matrix"')

    def resolve(slot, given):
        if given is not None:
            return given
        val = obj.get(slot)
        if val is None:
            raise ValueError(f'map JSON needs "{slot}" (inline or file path) '
                             f'when no space is supplied')
        if isinstance(val, str):
            import json
            with open(os.path.join(base_dir, val)) as fh:
                return opspace_from_json(json.load(fh))
        return opspace_from_json(val)

    dom = resolve("domain", domain)
    cod = resolve("codomain", codomain)
    return CBMap(dom, cod, np.asarray(obj["matrix"], dtype=float))
