"""Invariant metrics, Lorentz signature checks, and Levi-Civita curvature.

The invariant-metric equations for a pair are solved exactly over the
rational-function field; when the catalog records the family in its
conventional parameter letters, that parameterization is verified to span
the same solution space and is then used for all downstream output, so the
engine's formulas come out in the familiar letters (a, b, c, d).

Curvature conventions, pinned once and checked by the golden tests:
  R(X, Y) = [a_X, a_Y] - a_{[X,Y]_m} - ad([X,Y]_h)   (a = Nomizu map)
  ricci(X, Y) = trace(Z -> R(Z, X) Y)
  scalar = g^{ij} ricci_{ij}
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exact import RF_ZERO, RatFunc, parse_ratfunc, rf
from .linalg import FieldMatrix, det, inverse, nullspace, rank
from .liecat import LiePair, U_LABELS, isotropy_rep


class NoInvariantMetric(ValueError):
    """Only the zero bilinear form is invariant."""


class SingularMetric(ValueError):
    """det g vanishes identically on the family."""


class BadMetricShape(ValueError):
    """A supplied metric shape is not the general invariant solution."""


class SignatureVerdict(Enum):
    LORENTZIAN = "lorentzian"
    RIEMANNIAN = "riemannian"
    NEUTRAL = "neutral"
    DEGENERATE = "degenerate"


@dataclass
class MetricFamily:
    g: FieldMatrix
    free_params: list
    det_g: RatFunc
    lorentz: str | None = None

    def g_inverse(self) -> FieldMatrix:
        if self.det_g.is_zero():
            raise SingularMetric("metric family is identically degenerate")
        return inverse(self.g)


@dataclass
class CurvatureReport:
    nomizu: list          # alpha_i as 4x4 matrices (columns: alpha(u_i)u_j)
    operators: dict       # (i, j) i<j -> R(u_i, u_j) as FieldMatrix
    ricci: FieldMatrix
    scalar: RatFunc

    def operator(self, i: int, j: int) -> FieldMatrix:
        if i == j:
            return FieldMatrix.zeros(4, 4)
        if i < j:
            return self.operators[(i, j)]
        return -self.operators[(j, i)]


# -- helpers -------------------------------------------------------------------


def linear_parts(x: RatFunc, unknowns: set) -> dict:
    """Coefficients of each unknown in an expression linear in `unknowns`.

    The constant part is returned under the key None; raises ValueError when
    the expression is not linear (or an unknown occurs in the denominator).
    """
    if x.den.variables() & unknowns:
        raise ValueError("unknown appears in a denominator")
    groups: dict = {}
    from .exact import Poly
    for mono, coeff in x.num.terms.items():
        hit = None
        rest = []
        for name, exp in mono:
            if name in unknowns:
                if hit is not None or exp != 1:
                    raise ValueError("expression is not linear in the unknowns")
                hit = name
            else:
                rest.append((name, exp))
        groups.setdefault(hit, {})[tuple(rest)] = coeff
    return {key: RatFunc(Poly(terms), x.den)
            for key, terms in groups.items()}


_UPPER = [(i, j) for i in range(4) for j in range(i, 4)]


def invariance_residuals(pair: LiePair, g: FieldMatrix) -> list:
    """t(ad e_i) g + g (ad e_i) for every isotropy generator."""
    return [rho.transpose() * g + g * rho for rho in isotropy_rep(pair)]


def solve_invariant_metric(pair: LiePair, shape: FieldMatrix | None = None,
                           lorentz: str | None = None) -> MetricFamily:
    """General invariant symmetric bilinear form on the complement.

    When `shape` is given (the family written in its conventional letters) it
    is verified against the computed solution space and then adopted, so
    parameter names match the published tables.  Without a shape, free
    parameters are named a, b, c, ... in unknown order.
    """
    case_params = {p.name for p in pair.params}
    unknown_names = [f"G{i}{j}" for i, j in _UPPER]
    entries = [[None] * 4 for _ in range(4)]
    for i, j in _UPPER:
        v = RatFunc.var(f"G{i}{j}")
        entries[i][j] = v
        entries[j][i] = v
    gsym = FieldMatrix(4, 4, entries)

    rows = []
    unknown_set = set(unknown_names)
    for res in invariance_residuals(pair, gsym):
        for i, j in _UPPER:
            parts = linear_parts(res.entries[i][j], unknown_set)
            if None in parts and not parts[None].is_zero():
                raise AssertionError("invariance system is not homogeneous")
            row = [parts.get(name, RF_ZERO) for name in unknown_names]
            if any(not c.is_zero() for c in row):
                rows.append(row)
    if rows:
        basis = nullspace(FieldMatrix(len(rows), len(unknown_names), rows))
    else:
        basis = nullspace(FieldMatrix.zeros(1, len(unknown_names)))
    if not basis:
        raise NoInvariantMetric(pair.case_id)

    if shape is not None:
        params = _verify_shape(pair, shape, basis, case_params)
        g = shape
    else:
        letters = [c for c in "abcdefghij" if c not in case_params]
        params = letters[:len(basis)]
        g = FieldMatrix.zeros(4, 4)
        acc = [[RF_ZERO] * 4 for _ in range(4)]
        for name, vec in zip(params, basis):
            p = RatFunc.var(name)
            for idx, (i, j) in enumerate(_UPPER):
                if not vec[idx].is_zero():
                    acc[i][j] = acc[i][j] + p * vec[idx]
                    if i != j:
                        acc[j][i] = acc[i][j]
        g = FieldMatrix(4, 4, acc)
    return MetricFamily(g=g, free_params=list(params), det_g=det(g),
                        lorentz=lorentz)


def _verify_shape(pair: LiePair, shape: FieldMatrix, basis: list,
                  case_params: set) -> list:
    if not shape.is_symmetric():
        raise BadMetricShape(f"{pair.case_id}: shape is not symmetric")
    for res in invariance_residuals(pair, shape):
        if not res.is_zero():
            raise BadMetricShape(f"{pair.case_id}: shape is not invariant")
    params = sorted(v for m in shape.entries for x in m for v in x.variables()
                    if v not in case_params)
    params = sorted(set(params))
    if len(params) != len(basis):
        raise BadMetricShape(
            f"{pair.case_id}: shape has {len(params)} parameters, "
            f"solution space has dimension {len(basis)}")
    # the shape must be linear in its parameters with independent coefficients
    coeff_rows = []
    for p in params:
        row = []
        for i, j in _UPPER:
            parts = linear_parts(shape.entries[i][j], set(params))
            if None in parts and not parts[None].is_zero():
                raise BadMetricShape(f"{pair.case_id}: shape has a constant part")
            row.append(parts.get(p, RF_ZERO))
        coeff_rows.append(row)
    m = FieldMatrix(len(params), len(_UPPER), coeff_rows)
    if rank(m) != len(params):
        raise BadMetricShape(f"{pair.case_id}: shape parameters are dependent")
    return params


# -- signature ---------------------------------------------------------------------


def signature_at(g: FieldMatrix, sample: dict) -> tuple:
    """Exact (n_plus, n_minus, n_zero) of the symmetric matrix at a sample.

    Uses Descartes' rule on the characteristic polynomial; exact because a
    real symmetric matrix has only real eigenvalues.
    """
    values = g.evaluate(sample)
    x = RatFunc.var("_x")
    xm = FieldMatrix(4, 4, [[
        (x if i == j else RF_ZERO) - rf(values[i][j]) for j in range(4)]
        for i in range(4)])
    charpoly = det(xm)
    coeffs = [Fraction(0)] * 5
    for mono, c in charpoly.num.terms.items():
        deg = mono[0][1] if mono else 0
        coeffs[deg] = c / charpoly.den.constant_value()
    n_zero = 0
    for c in coeffs:
        if c == 0:
            n_zero += 1
        else:
            break
    nonzero = [c for c in coeffs if c != 0]
    n_pos = sum(1 for p, q in zip(nonzero, nonzero[1:]) if (p < 0) != (q < 0))
    # p(-x): flip signs of odd-degree coefficients
    flipped = [(-c if deg % 2 else c) for deg, c in enumerate(coeffs) if c != 0]
    n_neg = sum(1 for p, q in zip(flipped, flipped[1:]) if (p < 0) != (q < 0))
    return (n_pos, n_neg, n_zero)


def lorentz_check(family: MetricFamily, sample: dict) -> SignatureVerdict:
    n_pos, n_neg, n_zero = signature_at(family.g, sample)
    if n_zero:
        return SignatureVerdict.DEGENERATE
    if {n_pos, n_neg} == {1, 3}:
        return SignatureVerdict.LORENTZIAN
    if n_pos == 4 or n_neg == 4:
        return SignatureVerdict.RIEMANNIAN
    return SignatureVerdict.NEUTRAL


_COND_RE = re.compile(r"^\s*(.+?)\s*(!=|<|>)\s*(.+?)\s*$")


def lorentz_condition_holds(condition: str, sample: dict) -> bool:
    """Evaluate a recorded condition like 'b*d > c^2' at a rational sample."""
    m = _COND_RE.match(condition)
    if not m:
        raise ValueError(f"cannot parse condition {condition!r}")
    lhs = parse_ratfunc(m.group(1)).evaluate(sample)
    rhs = parse_ratfunc(m.group(3)).evaluate(sample)
    op = m.group(2)
    if op == "!=":
        return lhs != rhs
    return lhs < rhs if op == "<" else lhs > rhs


# -- Levi-Civita curvature --------------------------------------------------------------


def _m_projection(coeffs: dict) -> list:
    return [coeffs.get(lbl, RF_ZERO) for lbl in U_LABELS]


def _h_projection(pair: LiePair, coeffs: dict) -> list:
    return [coeffs.get(lbl, RF_ZERO) for lbl in pair.e_labels]


def levi_civita(pair: LiePair, family: MetricFamily) -> CurvatureReport:
    """Nomizu map from the Koszul formula, curvature, Ricci, scalar."""
    if family.det_g.is_zero():
        raise SingularMetric(pair.case_id)
    g = family.g
    g_inv = family.g_inverse()
    rhos = isotropy_rep(pair)

    def pair_bracket(i: int, j: int) -> dict:
        return pair.bracket(U_LABELS[i], U_LABELS[j])

    def g_vec(vec: list, k: int) -> RatFunc:
        out = RF_ZERO
        for idx, c in enumerate(vec):
            if not c.is_zero():
                out = out + c * g.entries[idx][k]
        return out

    half = rf(Fraction(1, 2))
    alphas = []
    for i in range(4):
        cols = []
        for j in range(4):
            rhs = []
            bij = _m_projection(pair_bracket(i, j))
            for k in range(4):
                bjk = _m_projection(pair_bracket(j, k))
                bki = _m_projection(pair_bracket(k, i))
                rhs.append(g_vec(bij, k) - g_vec(bjk, i) + g_vec(bki, j))
            col = [half * s for s in FieldMatrix(4, 4, g_inv.entries).apply(rhs)]
            cols.append(col)
        alphas.append(FieldMatrix(4, 4, [[cols[j][i] for j in range(4)]
                                         for i in range(4)]))

    def combo(mats: list, coeffs: list) -> FieldMatrix:
        out = FieldMatrix.zeros(4, 4)
        for m, c in zip(mats, coeffs):
            if not c.is_zero():
                out = out + m.scale(c)
        return out

    operators = {}
    for i in range(4):
        for j in range(i + 1, 4):
            br = pair_bracket(i, j)
            op = alphas[i].commutator(alphas[j])
            op = op - combo(alphas, _m_projection(br))
            op = op - combo(rhos, _h_projection(pair, br))
            operators[(i, j)] = op

    def op(i: int, j: int) -> FieldMatrix:
        if i == j:
            return FieldMatrix.zeros(4, 4)
        return operators[(i, j)] if i < j else -operators[(j, i)]

    ricci_rows = []
    for i in range(4):
        row = []
        for j in range(4):
            s = RF_ZERO
            for k in range(4):
                if k != i:
                    s = s + op(k, i).entries[k][j]
            row.append(s)
        ricci_rows.append(row)
    ricci = FieldMatrix(4, 4, ricci_rows)

    scalar = RF_ZERO
    for i in range(4):
        for j in range(4):
            x = g_inv.entries[i][j]
            if not x.is_zero():
                scalar = scalar + x * ricci.entries[i][j]
    return CurvatureReport(nomizu=alphas, operators=operators,
                           ricci=ricci, scalar=scalar)
