"""Invariant metric connections, their curvature, and holonomy.

solve_connections returns the general solution of the combined linear system

    Lambda(ad(e) u) = [rho(e), Lambda(u)]        (equivariance)
    t(Lambda(u)) g + g Lambda(u) = 0             (values skew w.r.t. g)

over the rational-function field, with free parameters v1, v2, ... attached
in the deterministic order produced by the nullspace basis.  Curvature is
computed with the connection parameters symbolic; the canonical member
(all parameters zero) always belongs to the family and is what the
energy-momentum pipeline evaluates when curvature turns out to depend on
the connection parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import RF_ZERO, RatFunc
from .linalg import FieldMatrix, nullspace, solve_linear
from .liecat import LiePair, U_LABELS, isotropy_rep
from .geom import MetricFamily, linear_parts


class NonClosing(RuntimeError):
    """Holonomy closure failed to stabilize (guards implementation bugs)."""


@dataclass
class ConnectionFamily:
    maps: list            # Lambda(u_1..u_4), entries linear in free_params
    free_params: list

    @property
    def dim(self) -> int:
        return len(self.free_params)

    def member(self, assignment: dict) -> list:
        full = {name: assignment.get(name, 0) for name in self.free_params}
        return [m.subs(full) for m in self.maps]

    def canonical_member(self) -> list:
        """The member with every free parameter zero."""
        return self.member({})

    def basis_map(self, param: str) -> list:
        """The four coefficient matrices attached to one free parameter."""
        one = {name: (1 if name == param else 0) for name in self.free_params}
        zero = self.canonical_member()
        at_one = [m.subs(one) for m in self.maps]
        return [a - z for a, z in zip(at_one, zero)]


@dataclass
class CurvatureForm:
    components: dict      # (i, j) with i < j  ->  FieldMatrix
    holonomy_basis: list | None = None
    structure: dict | None = None   # (i, j) -> coefficients in holonomy_basis

    def component(self, i: int, j: int) -> FieldMatrix:
        if i == j:
            return FieldMatrix.zeros(4, 4)
        return self.components[(i, j)] if i < j else -self.components[(j, i)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.values())

    def variables(self) -> set:
        out: set = set()
        for c in self.components.values():
            for row in c.entries:
                for x in row:
                    out |= x.variables()
        return out


def solve_connections(pair: LiePair, family: MetricFamily) -> ConnectionFamily:
    """General solution of equivariance + g-skewness, parameters v1..vd."""
    unknowns = [f"L{s}_{i}{j}" for s in range(4) for i in range(4) for j in range(4)]
    unknown_set = set(unknowns)
    sym_maps = [FieldMatrix(4, 4, [[RatFunc.var(f"L{s}_{i}{j}") for j in range(4)]
                                   for i in range(4)]) for s in range(4)]
    rhos = isotropy_rep(pair)
    g = family.g

    residuals = []
    for a, e in enumerate(pair.e_labels):
        for s, u in enumerate(U_LABELS):
            # [rho(e), Lambda(u_s)] - Lambda([e, u_s])
            res = rhos[a] * sym_maps[s] - sym_maps[s] * rhos[a]
            for lbl, c in pair.bracket(e, u).items():
                res = res - sym_maps[U_LABELS.index(lbl)].scale(c)
            residuals.append(res)
    for s in range(4):
        residuals.append(sym_maps[s].transpose() * g + g * sym_maps[s])

    rows = []
    seen = set()
    for res in residuals:
        for i in range(4):
            for j in range(4):
                parts = linear_parts(res.entries[i][j], unknown_set)
                parts.pop(None, None)
                if not parts:
                    continue
                row = tuple(parts.get(name, RF_ZERO) for name in unknowns)
                if row not in seen:
                    seen.add(row)
                    rows.append(list(row))
    if rows:
        basis = nullspace(FieldMatrix(len(rows), len(unknowns), rows))
    else:
        basis = nullspace(FieldMatrix.zeros(1, len(unknowns)))

    params = [f"v{k + 1}" for k in range(len(basis))]
    maps = []
    for s in range(4):
        acc = [[RF_ZERO] * 4 for _ in range(4)]
        for name, vec in zip(params, basis):
            p = RatFunc.var(name)
            for i in range(4):
                for j in range(4):
                    c = vec[16 * s + 4 * i + j]
                    if not c.is_zero():
                        acc[i][j] = acc[i][j] + p * c
        maps.append(FieldMatrix(4, 4, acc))
    return ConnectionFamily(maps=maps, free_params=params)


def curvature(pair: LiePair, maps: list) -> CurvatureForm:
    """R(u_i, u_j) = [L_i, L_j] - L([u_i,u_j]_m) - rho([u_i,u_j]_h)."""
    rhos = isotropy_rep(pair)
    components = {}
    for i in range(4):
        for j in range(i + 1, 4):
            br = pair.bracket(U_LABELS[i], U_LABELS[j])
            op = maps[i].commutator(maps[j])
            for lbl, c in br.items():
                if lbl in U_LABELS:
                    op = op - maps[U_LABELS.index(lbl)].scale(c)
                else:
                    op = op - rhos[pair.e_labels.index(lbl)].scale(c)
            components[(i, j)] = op
    return CurvatureForm(components=components)


def depends_on_connection_params(form: CurvatureForm,
                                 conn: ConnectionFamily) -> bool:
    return bool(form.variables() & set(conn.free_params))


def _vec(m: FieldMatrix) -> list:
    return [m.entries[i][j] for i in range(4) for j in range(4)]


class _Span:
    """Incremental row space over the RatFunc field (running RREF)."""

    def __init__(self):
        self.rows = []          # reduced rows
        self.pivots = []        # pivot column per row

    def _reduce(self, vec: list) -> list:
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not c.is_zero():
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def contains(self, vec: list) -> bool:
        return all(x.is_zero() for x in self._reduce(vec))

    def add(self, vec: list) -> bool:
        """Insert if independent; returns True when the span grew."""
        v = self._reduce(vec)
        for p, x in enumerate(v):
            if not x.is_zero():
                v = [y / x for y in v]
                self.rows.append(v)
                self.pivots.append(p)
                return True
        return False

    @property
    def dim(self) -> int:
        return len(self.rows)


def holonomy(form: CurvatureForm, isotropy_mats: list,
             max_rounds: int = 16) -> tuple:
    """Bracket closure of the span of the curvature components.

    The returned basis prefers isotropy matrices when they lie in the
    closed span (so reports read in terms of rho(e_i)), completed
    deterministically by RREF representatives.
    """
    gens = [c for c in form.components.values() if not c.is_zero()]
    span = _Span()
    mats = []
    for gmat in gens:
        if span.add(_vec(gmat)):
            mats.append(gmat)
    for _ in range(max_rounds):
        grew = False
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                br = mats[i].commutator(mats[j])
                if not br.is_zero() and span.add(_vec(br)):
                    mats.append(br)
                    grew = True
        if not grew:
            break
    else:
        raise NonClosing("holonomy closure did not stabilize")

    basis = []
    chosen = _Span()
    for rho in isotropy_mats:
        if not rho.is_zero() and span.contains(_vec(rho)) and chosen.add(_vec(rho)):
            basis.append(rho)
    if chosen.dim < span.dim:
        for row in span.rows:
            if chosen.add(list(row)):
                basis.append(FieldMatrix(4, 4, [row[4 * i:4 * i + 4]
                                                for i in range(4)]))
            if chosen.dim == span.dim:
                break
    return basis, span.dim


def expand_in_basis(form: CurvatureForm, basis: list) -> dict:
    """Coefficients R^alpha_{ij} of each component in the holonomy basis."""
    structure = {}
    if not basis:
        for key, comp in form.components.items():
            if not comp.is_zero():
                raise NonClosing("nonzero curvature with empty holonomy basis")
            structure[key] = []
        return structure
    cols = FieldMatrix(16, len(basis), [[_vec(b)[r] for b in basis]
                                        for r in range(16)])
    for key, comp in form.components.items():
        sol, _ = solve_linear(cols, _vec(comp))
        if sol is None:
            raise NonClosing("curvature component outside the holonomy span")
        structure[key] = sol
    return structure
