"""Reductive pairs, validators, and the bundled case catalog.

A pair lives on the basis e_1..e_n (isotropy subalgebra) and u_1..u_4
(reductive complement); brackets are stored as structure constants with
RatFunc coefficients so that continuous case parameters (t, lam) stay exact
symbols.  The catalog is a line-oriented text file (see ``data/catalog.txt``)
carrying, per case, the brackets plus reference data used by the regression
and report machinery: the invariant-metric shape in its conventional
parameter letters, the Lorentz condition, Ricci/scalar values, the expected
first-equation outcome, and the global space name where one is recorded.
"""

from __future__ import annotations

import fnmatch
import re
from dataclasses import dataclass, field
from importlib import resources

from .exact import ParseError, RatFunc, parse_ratfunc, rf
from .linalg import FieldMatrix

U_LABELS = ("u1", "u2", "u3", "u4")


class CatalogParseError(ValueError):
    """Catalog file is malformed; message carries the location."""


class UnknownCase(KeyError):
    """Requested case id is not in the catalog."""


class NotReductive(ValueError):
    """[h, m] does not stay inside m."""


@dataclass(frozen=True)
class CaseParam:
    name: str
    range_text: str


@dataclass
class LiePair:
    """A reductive pair given by structure constants over e_1..e_n, u_1..u_4."""

    case_id: str
    dim_h: int
    brackets: dict  # (x, y) -> {label: RatFunc}, stored once per unordered pair
    params: list = field(default_factory=list)

    @property
    def e_labels(self) -> tuple:
        return tuple(f"e{i}" for i in range(1, self.dim_h + 1))

    @property
    def basis(self) -> tuple:
        return self.e_labels + U_LABELS

    def bracket(self, x: str, y: str) -> dict:
        """[x, y] as a coefficient dict over the basis (empty means zero)."""
        if x == y:
            return {}
        got = self.brackets.get((x, y))
        if got is not None:
            return got
        got = self.brackets.get((y, x))
        if got is not None:
            return {k: -v for k, v in got.items()}
        return {}

    def bracket_vec(self, coeffs: dict, y: str) -> dict:
        """[v, y] for v given as a coefficient dict (bilinear extension)."""
        out: dict = {}
        for x, c in coeffs.items():
            if c.is_zero():
                continue
            for label, v in self.bracket(x, y).items():
                s = out.get(label)
                out[label] = c * v if s is None else s + c * v
        return {k: v for k, v in out.items() if not v.is_zero()}


@dataclass
class CaseGolden:
    """Per-case reference data for regression checks and reports."""

    metric: FieldMatrix | None = None
    det: RatFunc | None = None
    lorentz: str | None = None
    ricci: FieldMatrix | None = None
    scalar: RatFunc | None = None
    hol_dim: int | None = None
    verdict: str | None = None  # "solution" or "no_solution:<reason>"
    lambda_: RatFunc | None = None
    kappa: RatFunc | None = None
    conditions: list = field(default_factory=list)
    space: str | None = None
    notes: list = field(default_factory=list)


@dataclass
class CatalogEntry:
    pair: LiePair
    golden: CaseGolden


@dataclass(frozen=True)
class Table1Row:
    family: str
    cases_text: str
    lorentz: str


@dataclass
class Catalog:
    entries: list
    table1: list

    def case_ids(self) -> list:
        return [e.pair.case_id for e in self.entries]

    def get(self, case_id: str) -> CatalogEntry:
        for e in self.entries:
            if e.pair.case_id == case_id:
                return e
        raise UnknownCase(case_id)

    def filter(self, pattern: str | None) -> list:
        if not pattern:
            return list(self.entries)
        return [e for e in self.entries
                if fnmatch.fnmatchcase(e.pair.case_id, pattern)]


@dataclass
class ValidationReport:
    case_id: str
    checks: dict = field(default_factory=dict)  # name -> (ok, witness text)

    def record(self, name: str, ok: bool, witness: str = "") -> None:
        self.checks[name] = (ok, witness)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def failures(self) -> list:
        return [(name, witness) for name, (ok, witness) in self.checks.items()
                if not ok]


# -- catalog file parsing ------------------------------------------------------

_QUOTED = re.compile(r'"([^"]*)"')


def _linear_combo(text: str, labels: tuple, where: str) -> dict:
    """Parse a linear combination of basis labels with RatFunc coefficients."""
    try:
        value = parse_ratfunc(text)
    except ParseError as exc:
        raise CatalogParseError(f"{where}: {exc}") from exc
    label_set = set(labels)
    if value.den.variables() & label_set:
        raise CatalogParseError(f"{where}: basis label in a denominator")
    groups: dict = {}
    for mono, coeff in value.num.terms.items():
        found = None
        rest = []
        for name, exp in mono:
            if name in label_set:
                if found is not None or exp != 1:
                    raise CatalogParseError(f"{where}: not linear in basis labels")
                found = name
            else:
                rest.append((name, exp))
        if found is None:
            raise CatalogParseError(f"{where}: constant term in a bracket")
        part = groups.setdefault(found, {})
        key = tuple(rest)
        part[key] = part.get(key, 0) + coeff
    out = {}
    for label, terms in groups.items():
        num = RatFunc(_poly_from_terms(terms), value.den)
        if not num.is_zero():
            out[label] = num
    return out


def _poly_from_terms(terms: dict):
    from .exact import Poly
    return Poly({m: c for m, c in terms.items() if c})


def _parse_matrix(text: str, where: str) -> FieldMatrix:
    body = text.strip()
    if not body.startswith("[") or not body.endswith("]"):
        raise CatalogParseError(f"{where}: matrix literal must be [r1; r2; ...]")
    rows = []
    for row_text in body[1:-1].split(";"):
        cells = [c.strip() for c in _split_top_level(row_text)]
        try:
            rows.append([parse_ratfunc(c) for c in cells])
        except ParseError as exc:
            raise CatalogParseError(f"{where}: {exc}") from exc
    if any(len(r) != len(rows[0]) for r in rows):
        raise CatalogParseError(f"{where}: ragged matrix literal")
    return FieldMatrix(len(rows), len(rows[0]), rows)


def _split_top_level(text: str) -> list:
    """Split on commas that are not inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


NO_SOLUTION_REASONS = ("trivial_stress_energy", "inconsistent", "flat_curvature")


def parse_catalog(text: str, source: str = "<catalog>") -> Catalog:
    entries: list = []
    table1: list = []
    current_pair: LiePair | None = None
    current_golden: CaseGolden | None = None

    def flush():
        if current_pair is not None:
            entries.append(CatalogEntry(current_pair, current_golden))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        where = f"{source}:{lineno}"
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "table1":
            m = re.match(r'"([^"]+)"\s+cases\s+"([^"]+)"\s+lorentz\s+"([^"]+)"', rest)
            if not m:
                raise CatalogParseError(f"{where}: bad table1 row")
            table1.append(Table1Row(*m.groups()))
            continue
        if head == "case":
            flush()
            m = re.match(r'"([^"]+)"\s+dim_h\s+(\d+)$', rest)
            if not m:
                raise CatalogParseError(f"{where}: bad case header")
            current_pair = LiePair(case_id=m.group(1), dim_h=int(m.group(2)),
                                   brackets={})
            current_golden = CaseGolden()
            continue
        if current_pair is None:
            raise CatalogParseError(f"{where}: directive outside a case block")
        if head == "note":
            m = _QUOTED.match(rest)
            if not m:
                raise CatalogParseError(f"{where}: note needs a quoted string")
            current_golden.notes.append(m.group(1))
        elif head == "param":
            m = re.match(r'(\w+)\s+range\s+"([^"]*)"$', rest)
            if not m:
                raise CatalogParseError(f"{where}: bad param line")
            current_pair.params.append(CaseParam(m.group(1), m.group(2)))
        elif head == "bracket":
            m = re.match(r'(\w+)\s+(\w+)\s*=\s*(.+)$', rest)
            if not m:
                raise CatalogParseError(f"{where}: bad bracket line")
            x, y, rhs = m.groups()
            basis = current_pair.basis
            if x not in basis or y not in basis:
                raise CatalogParseError(f"{where}: unknown basis label {x} or {y}")
            if (x, y) in current_pair.brackets or (y, x) in current_pair.brackets:
                raise CatalogParseError(f"{where}: duplicate bracket [{x},{y}]")
            current_pair.brackets[(x, y)] = _linear_combo(rhs, basis, where)
        elif head == "golden":
            _parse_golden(rest, current_golden, where)
        elif head == "space":
            m = _QUOTED.match(rest)
            if not m:
                raise CatalogParseError(f"{where}: space needs a quoted string")
            current_golden.space = m.group(1)
        else:
            raise CatalogParseError(f"{where}: unknown directive {head!r}")
    flush()
    return Catalog(entries, table1)


def _parse_golden(rest: str, golden: CaseGolden, where: str) -> None:
    m = re.match(r'(\w+)\s*=\s*(.+)$', rest)
    if not m:
        raise CatalogParseError(f"{where}: bad golden line")
    key, value = m.group(1), m.group(2).strip()
    try:
        if key == "metric":
            golden.metric = _parse_matrix(value, where)
        elif key == "ricci":
            golden.ricci = _parse_matrix(value, where)
        elif key == "det":
            golden.det = parse_ratfunc(value)
        elif key == "scalar":
            golden.scalar = parse_ratfunc(value)
        elif key == "lorentz":
            mq = _QUOTED.match(value)
            if not mq:
                raise CatalogParseError(f"{where}: lorentz needs a quoted string")
            golden.lorentz = mq.group(1)
        elif key == "hol_dim":
            golden.hol_dim = int(value)
        elif key == "verdict":
            if value != "solution":
                if not value.startswith("no_solution:") or \
                        value.split(":", 1)[1] not in NO_SOLUTION_REASONS:
                    raise CatalogParseError(f"{where}: bad verdict {value!r}")
            golden.verdict = value
        elif key == "lambda":
            golden.lambda_ = parse_ratfunc(value)
        elif key == "kappa":
            golden.kappa = parse_ratfunc(value)
        elif key == "conditions":
            golden.conditions = [parse_ratfunc(c) for c in _split_top_level(value)]
        else:
            raise CatalogParseError(f"{where}: unknown golden key {key!r}")
    except ParseError as exc:
        raise CatalogParseError(f"{where}: {exc}") from exc


def catalog_load(path: str | None = None) -> Catalog:
    """Load the bundled catalog, or the file at `path` when given."""
    if path is None:
        text = (resources.files("eymsym") / "data" / "catalog.txt").read_text()
        source = "catalog.txt"
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        source = path
    return parse_catalog(text, source)


# -- validators --------------------------------------------------------------------


def isotropy_rep(pair: LiePair) -> list:
    """Matrices of ad(e_i) restricted to the complement, in the u-basis."""
    mats = []
    for e in pair.e_labels:
        cols = []
        for u in U_LABELS:
            coeffs = pair.bracket(e, u)
            bad = [lbl for lbl in coeffs if lbl not in U_LABELS]
            if bad:
                raise NotReductive(
                    f"{pair.case_id}: [{e},{u}] has isotropy component on {bad}")
            cols.append([coeffs.get(lbl, rf(0)) for lbl in U_LABELS])
        mats.append(FieldMatrix(4, 4, [[cols[j][i] for j in range(4)]
                                       for i in range(4)]))
    return mats


def validate_pair(pair: LiePair) -> ValidationReport:
    """Check antisymmetry, Jacobi, reductivity, and the symmetric-pair property."""
    report = ValidationReport(pair.case_id)
    basis = pair.basis

    bad = [key for key in pair.brackets if key[0] == key[1]
           and any(not v.is_zero() for v in pair.brackets[key].values())]
    both = [(x, y) for (x, y) in pair.brackets if (y, x) in pair.brackets]
    report.record("antisymmetry", not bad and not both,
                  f"bad pairs {bad + both}" if bad or both else "")

    witness = ""
    jacobi_ok = True
    n = len(basis)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                x, y, z = basis[i], basis[j], basis[k]
                total: dict = {}
                for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                    for lbl, v in pair.bracket_vec(pair.bracket(a, b), c).items():
                        total[lbl] = total.get(lbl, rf(0)) + v
                if any(not v.is_zero() for v in total.values()):
                    jacobi_ok = False
                    witness = f"({x},{y},{z})"
                    break
            if not jacobi_ok:
                break
        if not jacobi_ok:
            break
    report.record("jacobi", jacobi_ok, witness)

    reductive_ok, witness = True, ""
    for e in pair.e_labels:
        for u in U_LABELS:
            if any(lbl not in U_LABELS for lbl in pair.bracket(e, u)):
                reductive_ok, witness = False, f"[{e},{u}]"
    report.record("reductive", reductive_ok, witness)

    symmetric_ok, witness = True, ""
    for i in range(4):
        for j in range(i + 1, 4):
            coeffs = pair.bracket(U_LABELS[i], U_LABELS[j])
            if any(lbl in U_LABELS for lbl in coeffs):
                symmetric_ok, witness = False, f"({U_LABELS[i]},{U_LABELS[j]})"
    report.record("symmetric", symmetric_ok, witness)
    return report


def rep_is_homomorphism(pair: LiePair, mats: list | None = None) -> bool:
    """rho([e_i, e_j]) equals the matrix commutator for all generator pairs."""
    mats = mats if mats is not None else isotropy_rep(pair)
    e_labels = pair.e_labels
    for i in range(pair.dim_h):
        for j in range(i + 1, pair.dim_h):
            coeffs = pair.bracket(e_labels[i], e_labels[j])
            expect = FieldMatrix.zeros(4, 4)
            for lbl, c in coeffs.items():
                expect = expect + mats[e_labels.index(lbl)].scale(c)
            if mats[i].commutator(mats[j]) != expect:
                return False
    return True


def rep_is_faithful(pair: LiePair, mats: list | None = None) -> bool:
    """The isotropy matrices are linearly independent."""
    from .linalg import rank
    mats = mats if mats is not None else isotropy_rep(pair)
    stacked = FieldMatrix(len(mats), 16, [
        [m.entries[i][j] for i in range(4) for j in range(4)] for m in mats])
    return rank(stacked) == len(mats)
