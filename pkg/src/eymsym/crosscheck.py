"""Independent numeric recomputation of the pipeline over plain Fractions.

This is a deliberately separate code path: structure constants, isotropy
matrices, the Koszul construction, curvature, Ricci, the energy-momentum
tensor, and both field-equation residuals are recomputed with ordinary
Fraction arithmetic and index loops (no Poly/RatFunc, no FieldMatrix), at
concrete rational parameter values.  Comparing it with the symbolic pipeline
evaluated at the same point gives an end-to-end exactness check.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

from .exact import PoleAtPoint
from .liecat import CatalogEntry, U_LABELS

_EPS = {}
for _p in permutations(range(4)):
    _s = 1
    for _i in range(4):
        for _j in range(_i + 1, 4):
            if _p[_i] > _p[_j]:
                _s = -_s
    _EPS[_p] = _s


def _zeros(n: int, m: int) -> list:
    return [[Fraction(0)] * m for _ in range(n)]


def _mat_mul(a: list, b: list) -> list:
    n, k, m = len(a), len(b), len(b[0])
    out = _zeros(n, m)
    for i in range(n):
        for p in range(k):
            x = a[i][p]
            if x:
                for j in range(m):
                    if b[p][j]:
                        out[i][j] += x * b[p][j]
    return out


def _mat_sub(a: list, b: list) -> list:
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def _mat_scale(a: list, c: Fraction) -> list:
    return [[c * x for x in r] for r in a]


def _mat_add_into(acc: list, a: list) -> None:
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            acc[i][j] += x


def _gauss_solve(a: list, rhs: list) -> list | None:
    """Solve a x = rhs over Fractions; None when inconsistent/deficient."""
    n, m = len(a), len(a[0])
    aug = [list(row) + [r] for row, r in zip(a, rhs)]
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        piv = aug[r][c]
        aug[r] = [x / piv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][m]:
            return None
    if len(pivots) != m:
        return None
    x = [Fraction(0)] * m
    for k, c in enumerate(pivots):
        x[c] = aug[k][m]
    return x


def _inverse(mat: list) -> list | None:
    n = len(mat)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        x = _gauss_solve(mat, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


class NumericCase:
    """All pipeline quantities recomputed numerically from the brackets."""

    def __init__(self, entry: CatalogEntry, sample: dict):
        self.entry = entry
        self.sample = sample
        pair = entry.pair
        self.e_labels = pair.e_labels

        self.brackets = {}
        for x in pair.basis:
            for y in pair.basis:
                coeffs = pair.bracket(x, y)
                self.brackets[(x, y)] = {
                    lbl: v.evaluate(sample) for lbl, v in coeffs.items()}

        self.rho = []
        for e in self.e_labels:
            mat = _zeros(4, 4)
            for j, u in enumerate(U_LABELS):
                for lbl, v in self.brackets[(e, u)].items():
                    mat[U_LABELS.index(lbl)][j] = v
            self.rho.append(mat)

        self.g = entry.golden.metric.evaluate(sample)
        self.ginv = _inverse(self.g)
        if self.ginv is None:
            raise ZeroDivisionError("degenerate metric sample")

        self._koszul()
        self._ricci()

    def m_part(self, x: str, y: str) -> list:
        br = self.brackets[(x, y)]
        return [br.get(lbl, Fraction(0)) for lbl in U_LABELS]

    def h_part(self, x: str, y: str) -> list:
        br = self.brackets[(x, y)]
        return [br.get(lbl, Fraction(0)) for lbl in self.e_labels]

    def _koszul(self) -> None:
        def gv(vec: list, k: int) -> Fraction:
            return sum((vec[p] * self.g[p][k] for p in range(4)), Fraction(0))

        self.alpha = []
        for i in range(4):
            mat = _zeros(4, 4)
            for j in range(4):
                rhs = []
                bij = self.m_part(U_LABELS[i], U_LABELS[j])
                for k in range(4):
                    bjk = self.m_part(U_LABELS[j], U_LABELS[k])
                    bki = self.m_part(U_LABELS[k], U_LABELS[i])
                    rhs.append(gv(bij, k) - gv(bjk, i) + gv(bki, j))
                col = [sum((self.ginv[r][k] * rhs[k] for k in range(4)),
                           Fraction(0)) / 2 for r in range(4)]
                for r in range(4):
                    mat[r][j] = col[r]
            self.alpha.append(mat)

    def curvature_ops(self, maps: list) -> dict:
        """R(u_i,u_j) for the connection given by numeric maps."""
        ops = {}
        for i in range(4):
            for j in range(i + 1, 4):
                op = _mat_sub(_mat_mul(maps[i], maps[j]),
                              _mat_mul(maps[j], maps[i]))
                mp = self.m_part(U_LABELS[i], U_LABELS[j])
                for k in range(4):
                    if mp[k]:
                        op = _mat_sub(op, _mat_scale(maps[k], mp[k]))
                hp = self.h_part(U_LABELS[i], U_LABELS[j])
                for k, c in enumerate(hp):
                    if c:
                        op = _mat_sub(op, _mat_scale(self.rho[k], c))
                ops[(i, j)] = op
        return ops

    def _ricci(self) -> None:
        ops = self.curvature_ops(self.alpha)

        def op(i: int, j: int) -> list:
            if i == j:
                return _zeros(4, 4)
            return ops[(i, j)] if i < j else _mat_scale(ops[(j, i)], Fraction(-1))

        self.lc_ops = ops
        self.ricci = _zeros(4, 4)
        for i in range(4):
            for j in range(4):
                self.ricci[i][j] = sum(
                    (op(k, i)[k][j] for k in range(4) if k != i), Fraction(0))
        self.scalar = sum(
            (self.ginv[i][j] * self.ricci[i][j]
             for i in range(4) for j in range(4)), Fraction(0))

    # -- energy-momentum ----------------------------------------------------

    def structure(self, ops: dict, basis: list) -> dict | None:
        """Expand numeric curvature components in a numeric holonomy basis."""
        if not basis:
            return {} if all(
                all(x == 0 for row in m for x in row) for m in ops.values()) \
                else None
        a = [[basis[b][i][j] for b in range(len(basis))]
             for i in range(4) for j in range(4)]
        out = {}
        for key, m in ops.items():
            rhs = [m[i][j] for i in range(4) for j in range(4)]
            sol = _gauss_solve(a, rhs)
            if sol is None:
                return None
            out[key] = sol
        return out

    def stress(self, structure: dict, weights: list) -> list:
        dim = len(weights)
        rc = [[[Fraction(0)] * 4 for _ in range(4)] for _ in range(dim)]
        for (i, j), coeffs in structure.items():
            for a, c in enumerate(coeffs):
                rc[a][i][j] = c
                rc[a][j][i] = -c
        s_total = Fraction(0)
        for a in range(dim):
            for k in range(4):
                for l in range(4):
                    for h in range(4):
                        for m in range(4):
                            s_total += (weights[a] * rc[a][k][l] * rc[a][h][m]
                                        * self.ginv[k][h] * self.ginv[l][m])
        t = _zeros(4, 4)
        for i in range(4):
            for j in range(4):
                first = Fraction(0)
                for a in range(dim):
                    for k in range(4):
                        for l in range(4):
                            first += (weights[a] * rc[a][i][k] * rc[a][j][l]
                                      * self.ginv[k][l])
                t[i][j] = first / 2 - self.g[i][j] * s_total / 8
        return t

    def first_residual(self, lam: Fraction, kap: Fraction, t: list) -> list:
        out = _zeros(4, 4)
        for i in range(4):
            for j in range(4):
                out[i][j] = (self.ricci[i][j]
                             + (lam - self.scalar / 2) * self.g[i][j]
                             - kap * t[i][j])
        return out

    def star(self, ops: dict) -> dict:
        def comp(i: int, j: int) -> list:
            if i == j:
                return _zeros(4, 4)
            return ops[(i, j)] if i < j else _mat_scale(ops[(j, i)], Fraction(-1))

        out = {}
        for k in range(4):
            for l in range(k + 1, 4):
                acc = _zeros(4, 4)
                for i in range(4):
                    for j in range(4):
                        sign = _EPS.get((i, j, k, l), 0)
                        if not sign:
                            continue
                        for ip in range(4):
                            for jp in range(4):
                                if ip == jp:
                                    continue
                                f = (Fraction(sign, 2) * self.ginv[i][ip]
                                     * self.ginv[j][jp])
                                if f:
                                    _mat_add_into(acc, _mat_scale(comp(ip, jp), f))
                out[(k, l)] = acc
        return out

    def second_residual(self, maps: list, star: dict) -> dict:
        def s_comp(p: int, q: int) -> list:
            if p == q:
                return _zeros(4, 4)
            return star[(p, q)] if p < q else _mat_scale(star[(q, p)],
                                                         Fraction(-1))

        def s_vec(vec: list, q: int) -> list:
            acc = _zeros(4, 4)
            for p, c in enumerate(vec):
                if c:
                    _mat_add_into(acc, _mat_scale(s_comp(p, q), c))
            return acc

        def term(x: int, y: int, z: int) -> list:
            syz = s_comp(y, z)
            out = _mat_sub(_mat_mul(maps[x], syz), _mat_mul(syz, maps[x]))
            col_y = [maps[x][r][y] for r in range(4)]
            col_z = [maps[x][r][z] for r in range(4)]
            out = _mat_sub(out, s_vec(col_y, z))
            for i, row in enumerate(s_vec(col_z, y)):
                for j, v in enumerate(row):
                    out[i][j] += v
            return out

        res = {}
        for i in range(4):
            for j in range(i + 1, 4):
                for k in range(j + 1, 4):
                    acc = term(i, j, k)
                    acc = _mat_sub(acc, term(j, i, k))
                    for r, row in enumerate(term(k, i, j)):
                        for c, v in enumerate(row):
                            acc[r][c] += v
                    acc = _mat_sub(acc, s_vec(self.m_part(U_LABELS[i], U_LABELS[j]), k))
                    for r, row in enumerate(s_vec(self.m_part(U_LABELS[i], U_LABELS[k]), j)):
                        for c, v in enumerate(row):
                            acc[r][c] += v
                    acc = _mat_sub(acc, s_vec(self.m_part(U_LABELS[j], U_LABELS[k]), i))
                    res[(i, j, k)] = acc
        return res


def sample_point(entry: CatalogEntry, rng: random.Random,
                 avoid: list | None = None) -> dict:
    """Random rational parameter values keeping det g and `avoid` nonzero."""
    names = sorted({v for row in entry.golden.metric.entries for x in row
                    for v in x.variables()})
    names += [p.name for p in entry.pair.params if p.name not in names]
    det = entry.golden.det
    for _ in range(200):
        sample = {n: Fraction(rng.choice([x for x in range(-9, 10) if x]),
                              rng.randint(1, 4)) for n in names}
        try:
            if det is not None and det.evaluate(sample) == 0:
                continue
            if any(x.evaluate(sample) == 0 for x in (avoid or [])):
                continue
        except PoleAtPoint:
            continue
        return sample
    raise RuntimeError("could not draw a nondegenerate sample")


def crosscheck_case(entry: CatalogEntry, report, sample: dict) -> list:
    """Compare the symbolic CaseReport with the numeric path at a sample.

    Returns a list of mismatch descriptions (empty = everything agrees).
    """
    problems = []
    num = NumericCase(entry, sample)

    if report.lc.ricci.evaluate(sample) != num.ricci:
        problems.append("ricci")
    if report.lc.scalar.evaluate(sample) != num.scalar:
        problems.append("scalar")

    # canonical member: maps are zero, curvature comes from the brackets alone
    zero_maps = [_zeros(4, 4) for _ in range(4)]
    ops = num.curvature_ops(zero_maps)
    basis_num = [b.evaluate(sample) for b in report.hol_basis]
    structure = num.structure(ops, basis_num)
    if structure is None:
        problems.append("holonomy expansion degenerates at sample")
        return problems
    weights = [Fraction(2)] * len(basis_num)
    t_num = num.stress(structure, weights)
    if report.T.evaluate(sample) != t_num:
        problems.append("stress tensor")

    if report.verdict.is_solution:
        lam = report.verdict.lambda_.evaluate(sample)
        kap = report.verdict.kappa.evaluate(sample)
        res = num.first_residual(lam, kap, t_num)
        if any(x != 0 for row in res for x in row):
            problems.append("first-equation residual")

    from .eym import hodge_star_2form, second_eym_residual

    star_num = num.star(ops)
    star_form = hodge_star_2form(report.form, report.family)
    star_sym = {key: m.evaluate(sample)
                for key, m in star_form.components.items()}
    if star_sym != star_num:
        problems.append("hodge star")
    res_num = num.second_residual(zero_maps, star_num)
    res_sym = second_eym_residual(entry.pair, report.conn.canonical_member(),
                                  star_form)
    for key, mat in res_sym.items():
        if mat.evaluate(sample) != res_num[key]:
            problems.append(f"second-equation residual at {key}")
            break
    return problems
