"""Named invariant suites behind the ``verify`` command.

Each suite returns a list of CheckResult rows; a row records the measured
deviation, the tolerance it is held to, and enough parameters to rerun
it.  The acceptance tests drive these same functions, so the CLI and the
test suite certify the exact same computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, mideal, opspace, quantization, systems
from .linalg import contraction_iff_positive, is_real_positive, op_norm
from .opspace import (CBMap, MatElem, OpSpace, check_ruan_axioms,
                      complexification_norm, complexified_elem,
                      complexify_map, complexify_space, direct_sum_elem,
                      direct_sum_spaces, elem, full_matrix_space,
                      cb_norm_lower_search, level_norm, quotient_level_norm,
                      random_elem, span_space)
from .quantization import (ell_infty, ell_one, min_level_norm, realize_min,
                           reproduce_l12_nonuniqueness, w2_complex_norm,
                           max_l1_norm_bounds, BanachSpace)
from .rng import derived_rng


@dataclass
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)


def _check(name: str, deviation: float, tolerance: float, **details) -> CheckResult:
    deviation = float(deviation)
    return CheckResult(name, deviation, float(tolerance),
                       bool(deviation <= tolerance), details)


def _scalar_space() -> OpSpace:
    return span_space([[[1.0]]])


def _mult_map_coeffs(space: OpSpace, a: np.ndarray, b: np.ndarray) -> CBMap:
    """x -> a x b as a CBMap (requires the span to be closed under it)."""
    d = space.dim
    m = np.zeros((d, d))
    for k in range(d):
        img = a @ space.basis[k] @ b
        c, res = space.coefficients(img)
        if res > 1e-10 * (1.0 + np.linalg.norm(img)):
            raise ValueError("span is not closed under this multiplication")
        m[:, k] = c
    return CBMap(space, space, m)


# ----------------------------------------------------------------------
# linalg
# ----------------------------------------------------------------------

def suite_linalg(seed: int) -> list[CheckResult]:
    rng = derived_rng(seed, 101)
    out = []

    dev = 0.0
    for _ in range(200):
        p, q = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        m = rng.standard_normal((p, q))
        alpha = float(rng.uniform(-100.0, 100.0))
        base = op_norm(m)
        if base < 1e-14:
            continue
        dev = max(dev, abs(op_norm(alpha * m) - abs(alpha) * base) /
                  (abs(alpha) * base + 1e-300))
    out.append(_check("operator norm is absolutely homogeneous", dev, 1e-12,
                      samples=200))

    dev = 0.0
    for _ in range(200):
        p, q = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        m1 = rng.standard_normal((p, q))
        m2 = rng.standard_normal((int(rng.integers(1, 5)),
                                  int(rng.integers(1, 5))))
        blk = np.zeros((m1.shape[0] + m2.shape[0], m1.shape[1] + m2.shape[1]))
        blk[:m1.shape[0], :m1.shape[1]] = m1
        blk[m1.shape[0]:, m1.shape[1]:] = m2
        dev = max(dev, abs(op_norm(blk) - max(op_norm(m1), op_norm(m2))))
    out.append(_check("block-diagonal norm is the max of the blocks", dev,
                      1e-12, samples=200))

    for lo, hi, label in [(0.9, 1.1, "near the contraction boundary"),
                          (0.5, 1.5, "across norms in [0.5, 1.5]")]:
        disagreements = 0
        for _ in range(500):
            p, q = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            m = rng.standard_normal((p, q))
            base = op_norm(m)
            if base < 1e-14:
                continue
            m *= float(rng.uniform(lo, hi)) / base
            by_norm, by_positivity = contraction_iff_positive(m, tol=1e-9)
            if by_norm != by_positivity:
                disagreements += 1
        out.append(_check(f"contraction iff block positivity, {label}",
                          disagreements, 0.0, samples=500, tol_used=1e-9))

    failures = 0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        b = rng.standard_normal((n, n))
        m = b.T @ b
        a = rng.standard_normal((n, n))
        if not is_real_positive(a.T @ m @ a, tol=1e-9 * (1 + op_norm(a)) ** 2):
            failures += 1
    out.append(_check("congruence preserves real positivity", failures, 0.0,
                      samples=100))
    return out


# ----------------------------------------------------------------------
# opspace
# ----------------------------------------------------------------------

def _fixture_spaces() -> list[tuple[str, OpSpace]]:
    return [
        ("scalars", _scalar_space()),
        ("M2(R)", full_matrix_space(2)),
        ("M_{1,2}(R)", full_matrix_space(1, 2)),
        ("min ell_inf_2", realize_min(ell_infty(2))),
        ("min ell_1_2", realize_min(ell_one(2))),
    ]


def suite_opspace(seed: int) -> list[CheckResult]:
    out = []
    spaces = _fixture_spaces()

    conj_dev = 0.0
    ext_dev = 0.0
    pairs_per_cell = -(-1000 // (len(spaces) * 3))   # at least 1000 pairs total
    for si, (_, sp) in enumerate(spaces):
        xc = complexify_space(sp)
        rng = derived_rng(seed, 111, si)
        for lvl in (1, 2, 3):
            for _ in range(pairs_per_cell):
                x = random_elem(sp, lvl, rng)
                y = random_elem(sp, lvl, rng)
                plus = level_norm(complexified_elem(xc, x, y))
                minus = level_norm(opspace.conjugate_elem(
                    complexified_elem(xc, x, y)))
                conj_dev = max(conj_dev, abs(plus - minus))
                zero = MatElem(sp, np.zeros_like(x.coeffs))
                ext_dev = max(ext_dev, abs(
                    level_norm(complexified_elem(xc, x, zero)) -
                    level_norm(x)))
    out.append(_check("complexified norms are conjugation invariant",
                      conj_dev, 1e-10,
                      pairs=pairs_per_cell * len(spaces) * 3, levels=3))
    out.append(_check("complexification extends the original norm",
                      ext_dev, 1e-12,
                      pairs=pairs_per_cell * len(spaces) * 3))

    ruan_targets = [("M2(R)", full_matrix_space(2)),
                    ("complexified M2(R)", complexify_space(full_matrix_space(2))),
                    ("min ell_inf_2", realize_min(ell_infty(2)))]
    for name, sp in ruan_targets:
        rep = check_ruan_axioms(sp, max_level=3, samples=100, seed=seed,
                                tol=1e-10)
        out.append(_check(f"matrix norm axioms hold on {name}",
                          max(rep.direct_sum_deviation,
                              rep.scalar_action_deviation), 1e-10,
                          samples=rep.samples))

    m2 = full_matrix_space(2)
    transpose = CBMap(m2, m2, np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], float))
    values = [cb_norm_lower_search(transpose, lvl, restarts=8, seed=seed).value
              for lvl in (1, 2, 3)]
    mono_dev = max(0.0, max(values[i] - values[i + 1] for i in range(2)))
    out.append(_check("amplification bounds grow with the level", mono_dev,
                      0.0, values=values))
    out.append(_check("transpose map doubles at level 2",
                      max(0.0, 2.0 - values[1]), 1e-6, value=values[1]))

    rng = derived_rng(seed, 112)
    ratio_dev = 0.0
    for _ in range(20):
        a = rng.standard_normal((2, 2))
        a /= op_norm(a)
        b = rng.standard_normal((2, 2))
        b /= op_norm(b)
        u = _mult_map_coeffs(m2, a, b)
        uc = complexify_map(u)
        for _ in range(10):
            z = random_elem(uc.domain, 2, rng)
            nz = level_norm(z)
            if nz < 1e-12:
                continue
            ratio_dev = max(ratio_dev, level_norm(uc(z)) / nz - 1.0)
    out.append(_check("complexified complete contractions stay contractive",
                      max(0.0, ratio_dev), 1e-9, maps=20, level=2))

    rng = derived_rng(seed, 113)
    m2c = complexify_space(m2)
    qdev = 0.0
    for _ in range(50):
        y_row = rng.standard_normal((1, 4))
        x = random_elem(m2, 1, rng)
        y = random_elem(m2, 1, rng)
        yc = np.zeros((2, 8))
        yc[0, :4] = y_row
        yc[1, 4:] = y_row
        r1 = quotient_level_norm(m2c, yc, complexified_elem(m2c, x, y))
        blk = np.zeros((2, 2, 4))
        blk[:1, :1, :] = x.coeffs
        blk[1:, 1:, :] = x.coeffs
        blk[:1, 1:, :] = -y.coeffs
        blk[1:, :1, :] = y.coeffs
        r2 = quotient_level_norm(m2, y_row, MatElem(m2, blk))
        qdev = max(qdev, abs(r1.value - r2.value))
    out.append(_check("quotient norms agree with the complexified quotient",
                      qdev, 1e-6, cases=50))

    rng = derived_rng(seed, 114)
    dsum = direct_sum_spaces([m2, m2])
    sdev = 0.0
    for _ in range(50):
        x = random_elem(m2, 2, rng)
        y = random_elem(m2, 2, rng)
        c = np.concatenate([x.coeffs, y.coeffs], axis=2)
        sdev = max(sdev, abs(level_norm(MatElem(dsum, c)) -
                             max(level_norm(x), level_norm(y))))
    two = direct_sum_spaces([_scalar_space(), _scalar_space()])
    sdev = max(sdev, abs(level_norm(elem(two, [3.0, -4.0])) - 4.0))
    out.append(_check("direct sum norms are the max over summands", sdev,
                      1e-12, samples=50))
    return out


# ----------------------------------------------------------------------
# quantization
# ----------------------------------------------------------------------

def suite_quantization(seed: int) -> list[CheckResult]:
    out = []
    rng = derived_rng(seed, 121)
    e_inf, e_one = ell_infty(2), ell_one(2)
    hexagon = BanachSpace(2, [[1.0, 0.0], [0.5, 1.0], [-0.5, 1.0]])

    dev = 0.0
    for sp in (e_inf, e_one, hexagon):
        for _ in range(70):
            v = rng.standard_normal(sp.dim)
            dev = max(dev, abs(min_level_norm(sp, v.reshape(1, 1, -1)) -
                               sp.norm(v)))
    out.append(_check("minimal structure extends the Banach norm", dev,
                      1e-12, vectors=210))

    dev = 0.0
    for sp in (e_inf, e_one, hexagon):
        xs = realize_min(sp)
        for _ in range(34):
            n = int(rng.integers(1, 4))
            c = rng.standard_normal((n, n, sp.dim))
            dev = max(dev, abs(level_norm(elem(xs, c)) -
                               min_level_norm(sp, c)))
    out.append(_check("diagonal realization matches the dual-ball formula",
                      dev, 1e-12, elements=102))

    for name, sp in [("scalars", BanachSpace(1, [[1.0]])),
                     ("ell_inf_2", e_inf), ("ell_1_2", e_one)]:
        dev = quantization.min_complexification_check(sp, max_level=3,
                                                      samples=200, seed=seed)
        out.append(_check(f"minimal quantization commutes with "
                          f"complexification on {name}", dev, 1e-10,
                          samples=200, levels=3))

    dev = 0.0
    for _ in range(100):
        x = rng.standard_normal(2)
        y = rng.standard_normal(2)
        dev = max(dev, abs(w2_complex_norm(e_one, x, y) -
                           w2_complex_norm(e_one, x, -y)))
    out.append(_check("circled complexification norm is even in y", dev,
                      0.0, samples=100))

    dev = 0.0
    domains = [("M2(R)", full_matrix_space(2), "nuclear"),
               ("M_{1,2}(R)", full_matrix_space(1, 2), "nuclear"),
               ("min ell_inf_2", realize_min(e_inf), "l1")]
    for _, dom, dual in domains:
        for t in range(5):
            u_mat = rng.standard_normal((2, dom.dim))
            u = CBMap(dom, realize_min(e_inf), u_mat)
            norm1 = 0.0
            for f in e_inf.representatives:
                w = u_mat.T @ f
                if dual == "nuclear":
                    p, q = dom.ambient
                    norm1 = max(norm1, float(np.sum(np.linalg.svd(
                        w.reshape(p, q), compute_uv=False))))
                else:
                    norm1 = max(norm1, float(np.sum(np.abs(w))))
            for lvl in (1, 2, 3):
                for _ in range(5):
                    x = random_elem(dom, lvl, rng)
                    nx = level_norm(x)
                    if nx < 1e-12:
                        continue
                    dev = max(dev, level_norm(u(x)) / nx - norm1)
    out.append(_check("maps into minimal spaces gain nothing at higher "
                      "levels", max(0.0, dev), 1e-9, maps=15, levels=3))

    bracket_dev = 0.0
    sign_dev = 0.0
    for t in range(5):
        mats = [rng.standard_normal((2, 2)) for _ in range(2)]
        res = max_l1_norm_bounds(mats, m_max=2, restarts=8, seed=seed + t)
        bracket_dev = max(bracket_dev, res.lower - res.upper)
        scalars = [rng.standard_normal((1, 1)) for _ in range(3)]
        res1 = max_l1_norm_bounds(scalars, m_max=1, restarts=4, seed=seed + t)
        sign_dev = max(sign_dev, abs(res1.lower -
                                     sum(abs(float(s[0, 0])) for s in scalars)))
    out.append(_check("maximal bracket is ordered (lower <= upper)",
                      max(0.0, bracket_dev), 0.0, tuples=5))
    out.append(_check("sign search attains the scalar l1 norm", sign_dev,
                      1e-12, tuples=5))

    small = max_l1_norm_bounds([quantization.PAIR_A, quantization.PAIR_B],
                               m_max=2, restarts=8, seed=seed).lower
    big = max_l1_norm_bounds([quantization.PAIR_A, quantization.PAIR_B],
                             m_max=3, restarts=16, seed=seed).lower
    out.append(_check("maximal lower bound refines monotonically",
                      max(0.0, small - big), 0.0, small=small, big=big))

    rep = reproduce_l12_nonuniqueness(seed=seed)
    out.append(_check("two-dimensional l1 minimal norm of the witness pair "
                      "is sqrt(2)", abs(rep.min_norm - np.sqrt(2.0)), 1e-9))
    out.append(_check("two-dimensional l1 maximal lower bound reaches 2",
                      max(0.0, 2.0 - rep.max_lower), 1e-6))
    out.append(_check("two-dimensional l1 maximal upper bound equals 2",
                      abs(rep.max_upper - 2.0), 1e-12))
    out.append(_check("minimal and maximal structures split by at least "
                      "0.58", max(0.0, 0.58 - rep.gap), 0.0, gap=rep.gap))
    return out


# ----------------------------------------------------------------------
# mideal
# ----------------------------------------------------------------------

SYMMETRIZATION = np.array([[1, 0, 0, 0], [0, .5, .5, 0],
                           [0, .5, .5, 0], [0, 0, 0, 1]], float)
DIAG_MULT = np.diag([1.0, 1.0, 0.0, 0.0])


def suite_mideal(seed: int, projection_matrix=None) -> list[CheckResult]:
    out = []
    m2 = full_matrix_space(2)

    p_good = mideal.projection(m2, DIAG_MULT)
    cert = mideal.certify_left_m_projection(p_good, max_level=3, samples=200,
                                            restarts=8, seed=seed, tol=1e-9)
    out.append(_check("left multiplication by diag(1,0) certifies at "
                      "levels 1-3", 0.0 if cert.certified else 1.0, 0.0,
                      verdict=cert.verdict, samples=200))

    p_symm = mideal.projection(m2, SYMMETRIZATION)
    cert_s = mideal.certify_left_m_projection(p_symm, max_level=3,
                                              samples=200, restarts=8,
                                              seed=seed, tol=1e-9)
    refuted_ok = (cert_s.verdict == "refuted" and cert_s.refuted_level == 1)
    wdev = abs((cert_s.observed or 0.0) - np.sqrt(0.5)) if refuted_ok else 1.0
    out.append(_check("symmetrization refutes at level 1 with witness "
                      "value sqrt(1/2)", wdev, 1e-9,
                      verdict=cert_s.verdict, level=cert_s.refuted_level,
                      observed=cert_s.observed))
    if refuted_ok:
        redev = abs(mideal.reverify_certification(p_symm, cert_s) -
                    cert_s.observed)
        out.append(_check("stored refutation witnesses re-verify", redev,
                          1e-12))

    rng = derived_rng(seed, 131)
    dom_dev = 0.0
    for _ in range(10):
        a = rng.standard_normal((4, 2))
        b = rng.standard_normal((2, 4))
        pm = a @ np.linalg.inv(b @ a) @ b
        proj = mideal.projection(m2, pm)
        nu, _, _ = mideal.build_nu_mu_tau(proj)
        for _ in range(5):
            x = random_elem(m2, int(rng.integers(1, 3)), rng)
            px = proj.underlying(x)
            rest = MatElem(m2, x.coeffs - px.coeffs)
            dom_dev = max(dom_dev, max(level_norm(px), level_norm(rest)) -
                          level_norm(nu(x)))
    out.append(_check("column embedding dominates both column norms",
                      max(0.0, dom_dev), 1e-12, projections=10))

    _, mu_good, _ = mideal.build_nu_mu_tau(p_good)
    c2 = mu_good.domain
    ineq_dev = 0.0
    for _ in range(50):
        x = random_elem(m2, 2, rng)
        y = random_elem(m2, 2, rng)
        col = mideal.column_embed(x, y, c2)
        ineq_dev = max(ineq_dev,
                       level_norm(mu_good(col)) - level_norm(col))
    out.append(_check("certified projections average columns contractively",
                      max(0.0, ineq_dev), 1e-10, samples=50))

    bad = 0
    for e in (np.diag([1.0, 0.0]), np.eye(2), np.zeros((2, 2)),
              np.array([[0.5, 0.5], [0.5, 0.5]])):
        u = _mult_map_coeffs(m2, e, np.eye(2))
        if not mideal.verify_multiplier_witness(m2, u, e):
            bad += 1
        cert_e = mideal.certify_left_m_projection(
            mideal.projection(m2, u.matrix), max_level=2, samples=100,
            restarts=6, seed=seed, tol=1e-9)
        if not cert_e.certified:
            bad += 1
    out.append(_check("orthogonal projection witnesses never refute", bad,
                      0.0, witnesses=4, levels=2))

    for name, sp in [("scalars", _scalar_space()), ("M2(R)", m2)]:
        sc = mideal.shuffle_iso(sp, samples=50, seed=seed)
        out.append(_check(f"column/complexification shuffle is exact on "
                          f"{name}",
                          max(sc.basis_deviation, sc.sample_norm_deviation),
                          1e-12, samples=50))

    dev = 0.0
    for t in range(20):
        u = CBMap(m2, m2, derived_rng(seed, 132, t).standard_normal((4, 4)))
        dev = max(dev, mideal.projection_complexification_consistency(
            u, samples=10, seed=seed))
    out.append(_check("corner maps commute with complexification", dev,
                      1e-12, maps=20))

    taus = []
    for lvl in (1, 2, 3):
        taus.append(mideal.tau_u_level_cb(
            CBMap(m2, m2, DIAG_MULT), lvl, restarts=6, seed=seed))
    out.append(_check("corner map of a multiplier stays contractive",
                      max(0.0, max(taus) - 1.0), 1e-9, values=taus))
    v2 = mideal.tau_u_level_cb(CBMap(m2, m2, 2 * np.eye(4)), 1, restarts=6,
                               seed=seed)
    out.append(_check("corner map detects a doubled multiplier",
                      max(0.0, 2.0 - v2), 1e-6, value=v2))
    v1 = mideal.tau_u_level_cb(opspace.identity_map(m2), 2, restarts=6,
                               seed=seed)
    out.append(_check("corner map of the identity has norm one",
                      abs(v1 - 1.0), 1e-9, value=v1))

    ut = systems.op_algebra(span_space([[[1, 0], [0, 0]], [[0, 1], [0, 0]],
                                        [[0, 0], [0, 1]]]))
    wrong = 0
    if not mideal.is_right_ideal(ut, [[0.0, 1.0, 0.0]]):
        wrong += 1
    if mideal.is_right_ideal(ut, [[1.0, 0.0, 0.0]]):
        wrong += 1
    if not mideal.is_right_ideal(ut, np.eye(3)):
        wrong += 1
    out.append(_check("right ideals of the triangular algebra classify "
                      "correctly", wrong, 0.0))

    if projection_matrix is not None:
        p_user = mideal.projection(m2, np.asarray(projection_matrix, float))
        cert_u = mideal.certify_left_m_projection(
            p_user, max_level=2, samples=100, restarts=6, seed=seed,
            tol=1e-9)
        out.append(_check("user-supplied projection certifies",
                          0.0 if cert_u.certified else 1.0, 0.0,
                          verdict=cert_u.verdict))
    return out


# ----------------------------------------------------------------------
# systems
# ----------------------------------------------------------------------

def suite_systems(seed: int) -> list[CheckResult]:
    out = []
    m2 = full_matrix_space(2)
    alg_m2 = systems.op_algebra(m2)
    ut = systems.op_algebra(span_space([[[1, 0], [0, 0]], [[0, 1], [0, 0]],
                                        [[0, 0], [0, 1]]]))

    for name, alg in [("M2(R)", alg_m2), ("the triangular algebra", ut)]:
        rep = systems.check_brs_level(alg, level=2, samples=100, seed=seed)
        dev = max(float(alg.structure_residuals.max()), rep.max_violation)
        out.append(_check(f"matrix levels of {name} are Banach algebras",
                          dev, 1e-10, samples=rep.samples))

    ce_alg = systems.op_algebra(span_space([[[0.5]]]), structure=[[[1.0]]])
    rep = systems.check_brs_level(ce_alg, level=1, samples=100, seed=seed)
    out.append(_check("rescaled scalar algebra violates submultiplicativity "
                      "by 1/4", max(0.0, 0.25 - rep.max_violation), 1e-12,
                      violation=rep.max_violation))

    e12 = span_space([[[0, 1], [0, 0]]])
    alg_e12 = systems.op_algebra(e12)
    u1 = systems.unitize(alg_e12)
    dims_dev = abs(u1.dim - 2) + abs(systems.unitize(alg_m2).dim - 4)
    a1c = complexify_space(u1.space)
    ac1 = systems.unitize(systems.op_algebra(complexify_space(e12)))
    dims_dev += abs(a1c.dim - ac1.dim) + abs(a1c.dim - 2 * u1.dim)
    perm = [0, 2, 1, 3]
    rng = derived_rng(seed, 141)
    norm_dev = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 3))
        c = rng.standard_normal((n, n, 4))
        cc = np.zeros_like(c)
        for i, j in enumerate(perm):
            cc[:, :, j] = c[:, :, i]
        norm_dev = max(norm_dev, abs(level_norm(MatElem(a1c, c)) -
                                     level_norm(MatElem(ac1.space, cc))))
    out.append(_check("unitization commutes with complexification",
                      dims_dev + (0.0 if norm_dev <= 1e-12 else norm_dev),
                      0.0, norm_agreements=100, norm_deviation=norm_dev))

    ps_r = systems.build_paulsen_system(_scalar_space())
    ps_m2 = systems.build_paulsen_system(m2)
    out.append(_check("system corners have dimension 2 dim(X) + 2",
                      abs(ps_r.space.dim - 4) + abs(ps_m2.space.dim - 10),
                      0.0))

    sc = _scalar_space()
    rep_id = systems.paulsen_positivity_transfer(
        opspace.identity_map(sc), levels=2, samples=30, seed=seed)
    rep_half = systems.paulsen_positivity_transfer(
        CBMap(sc, sc, np.array([[0.5]])), levels=2, samples=30, seed=seed)
    rep_two = systems.paulsen_positivity_transfer(
        CBMap(sc, sc, np.array([[2.0]])), levels=1, samples=30, seed=seed)
    dev = rep_id.failures + rep_half.failures + (0 if rep_two.failures else 1)
    out.append(_check("positivity transfers exactly for contractions",
                      dev, 0.0, expansive_witness_eig=rep_two.witness_min_eig))

    phi = CBMap(m2, m2, np.diag([1.0, 0.0, 0.0, 1.0]))
    ce = systems.choi_effros_product(alg_m2, phi, tol=1e-10, trials=500,
                                     seed=seed)
    ce_dev = max(ce.associativity_deviation, ce.unit_law_deviation,
                 ce.involution_deviation, ce.cstar_identity_deviation,
                 ce.bimodule_deviation)
    out.append(_check("diagonal expectation re-product is a C*-product",
                      ce_dev, 1e-10, trials=500, mode=ce.mode))
    # a multiplicative idempotent reproduces the ambient product
    diag_alg = systems.op_algebra(span_space([np.diag([1.0, 0.0]),
                                              np.diag([0.0, 1.0])]))
    table_dev = 0.0
    for j in range(2):
        for k in range(2):
            via_phi = phi.matrix @ alg_m2.product_coeffs(
                np.eye(4)[3 * j].reshape(1, 1, 4),
                np.eye(4)[3 * k].reshape(1, 1, 4)).ravel()
            direct = alg_m2.product_coeffs(
                np.eye(4)[3 * j].reshape(1, 1, 4),
                np.eye(4)[3 * k].reshape(1, 1, 4)).ravel()
            table_dev = max(table_dev, float(np.max(np.abs(via_phi - direct))))
    out.append(_check("multiplicative idempotents keep the original "
                      "product table", table_dev, 1e-12))
    phi_tr = CBMap(m2, m2, np.array([[.5, 0, 0, .5], [0, 0, 0, 0],
                                     [0, 0, 0, 0], [.5, 0, 0, .5]]))
    ce_tr = systems.choi_effros_product(alg_m2, phi_tr, tol=1e-10,
                                        trials=200, seed=seed)
    out.append(_check("normalized trace re-product is scalar "
                      "multiplication", 0.0 if ce_tr.passed else 1.0, 0.0,
                      range_dim=ce_tr.range_dim))

    corner = span_space([[[1, 0], [0, 0]], [[0, 1], [0, 0]]])
    bad = span_space([[[1, 0], [0, 0]], [[0, 1], [1, 0]]])
    tro_dev = 0.0
    if not systems.is_tro(e12):
        tro_dev += 1
    if not systems.is_tro(corner):
        tro_dev += 1
    rep = systems.tro_closure_report(bad)
    e22 = np.array([[0.0, 0.0], [0.0, 1.0]])
    if rep.is_tro or rep.witness_product is None:
        tro_dev += 1
    else:
        tro_dev += float(np.max(np.abs(rep.witness_product - e22)))
    for alg in (alg_m2, diag_alg):
        if not systems.is_tro(alg.space):
            tro_dev += 1
    out.append(_check("triple closure classifies the rank-one, corner and "
                      "mixed spans", tro_dev, 1e-12,
                      witness=None if rep.witness_product is None else
                      rep.witness_product.tolist()))

    st = systems.generated_subtriple(bad)
    st_dev = abs(st.dim - 4)
    st_dev += abs(systems.generated_subtriple(e12).dim - 1)
    st_dev += abs(systems.generated_subtriple(m2).dim - 4)
    st_dev += abs(systems.generated_subtriple(st).dim - st.dim)
    out.append(_check("generated subtriples close at the right dimension",
                      st_dev, 0.0, mixed_span_dim=st.dim))

    tro_corner = systems.TROSpace(corner)
    g = systems.shilov_inner_product(tro_corner, elem(corner, [1.0, 0.0]),
                                     elem(corner, [0.0, 1.0]))
    sh_dev = float(np.max(np.abs(g.matrix - np.array([[0.0, 1.0],
                                                      [0.0, 0.0]]))))
    rng = derived_rng(seed, 142)
    psd_failures = 0
    for _ in range(100):
        y = elem(corner, rng.standard_normal(2))
        gy = systems.shilov_inner_product(tro_corner, y, y)
        if not is_real_positive(gy.matrix, tol=1e-9):
            psd_failures += 1
        if not gy.in_span:
            psd_failures += 1
    out.append(_check("concrete inner products are positive and stay in "
                      "the product span", sh_dev + psd_failures, 1e-12,
                      samples=100))

    rng = derived_rng(seed, 143)
    eqn1_failures = 0
    for _ in range(100):
        p, q = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        x = rng.standard_normal((p, q))
        nx = op_norm(x)
        if nx < 1e-14:
            continue
        x *= float(rng.uniform(0.0, 1.0)) / nx
        if not is_real_positive(linalg.contraction_block(x), tol=1e-9):
            eqn1_failures += 1
    out.append(_check("contractions produce positive block extensions",
                      eqn1_failures, 0.0, samples=100))
    return out


SUITES = {
    "linalg": suite_linalg,
    "opspace": suite_opspace,
    "quantization": suite_quantization,
    "mideal": suite_mideal,
    "systems": suite_systems,
}


def run_suite(name: str, seed: int, projection_matrix=None) -> list[CheckResult]:
    if name == "mideal":
        return suite_mideal(seed, projection_matrix=projection_matrix)
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{sorted(SUITES)} or 'all'")
    return SUITES[name](seed)


def run_all(seed: int) -> dict[str, list[CheckResult]]:
    return {name: SUITES[name](seed) for name in
            ("linalg", "opspace", "quantization", "mideal", "systems")}
