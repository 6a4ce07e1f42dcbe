"""Dense exact linear algebra over the rational-function field.

Everything here is deterministic: pivoting always takes the first row with a
nonzero entry in column order (arithmetic is exact, so there is no numerical
reason to prefer large pivots), and nullspace bases set free variables to one
in column order.  Matrices in this engine stay small (at most 24x24 or so for
the equivariance systems), so no sparse formats are used.
"""

from __future__ import annotations

from .exact import RF_ONE, RF_ZERO, RatFunc, rf


class NonSquare(ValueError):
    """Operation requires a square matrix."""


class Singular(ValueError):
    """Matrix is singular as a matrix over the rational-function field."""


class FieldMatrix:
    """Row-major dense matrix with RatFunc entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: list):
        if rows < 1 or cols < 1 or len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("inconsistent matrix dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows) -> "FieldMatrix":
        data = [[rf(x) for x in row] for row in rows]
        return cls(len(data), len(data[0]), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FieldMatrix":
        return cls(rows, cols, [[RF_ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "FieldMatrix":
        data = [[RF_ZERO] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = RF_ONE
        return cls(n, n, data)

    # -- access ----------------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> list:
        return list(self.entries[i])

    def col(self, j: int) -> list:
        return [self.entries[i][j] for i in range(self.rows)]

    def copy(self) -> "FieldMatrix":
        return FieldMatrix(self.rows, self.cols, [list(r) for r in self.entries])

    # -- structure ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.entries))

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(self.rows, self.cols, [
            [a + b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(self.rows, self.cols, [
            [a - b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(self.rows, self.cols,
                           [[-a for a in r] for r in self.entries])

    def __mul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = [[RF_ZERO] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.entries[i]
            for k in range(self.cols):
                x = row[k]
                if x.is_zero():
                    continue
                orow = other.entries[k]
                for j in range(other.cols):
                    y = orow[j]
                    if not y.is_zero():
                        out[i][j] = out[i][j] + x * y
        return FieldMatrix(self.rows, other.cols, out)

    def scale(self, c: RatFunc) -> "FieldMatrix":
        c = rf(c)
        return FieldMatrix(self.rows, self.cols,
                           [[c * a for a in r] for r in self.entries])

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.cols, self.rows,
                           [[self.entries[i][j] for i in range(self.rows)]
                            for j in range(self.cols)])

    def commutator(self, other: "FieldMatrix") -> "FieldMatrix":
        return self * other - other * self

    def apply(self, vec: list) -> list:
        """Matrix times column vector (list of RatFunc)."""
        out = []
        for i in range(self.rows):
            s = RF_ZERO
            for j in range(self.cols):
                x = self.entries[i][j]
                if not x.is_zero() and not vec[j].is_zero():
                    s = s + x * vec[j]
            out.append(s)
        return out

    def subs(self, assignment: dict) -> "FieldMatrix":
        return FieldMatrix(self.rows, self.cols,
                           [[a.subs(assignment) for a in r] for r in self.entries])

    def evaluate(self, assignment: dict) -> list:
        """Evaluate every entry to a Fraction; returns a list-of-lists."""
        return [[a.evaluate(assignment) for a in r] for r in self.entries]

    def render(self) -> str:
        """Aligned text grid."""
        cells = [[str(a) for a in r] for r in self.entries]
        widths = [max(len(cells[i][j]) for i in range(self.rows))
                  for j in range(self.cols)]
        lines = []
        for r in cells:
            lines.append("[ " + "  ".join(c.rjust(w) for c, w in zip(r, widths)) + " ]")
        return "\n".join(lines)

    def __repr__(self):
        return f"FieldMatrix({self.rows}x{self.cols})"


def rref(m: FieldMatrix) -> tuple:
    """Reduced row echelon form and the list of pivot columns.

    Forward pass eliminates below each pivot without normalizing, then a
    backward pass divides through and clears above, so all divisions happen
    against settled pivots.
    """
    a = [list(r) for r in m.entries]
    rows, cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if not a[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            x = a[i][c]
            if x.is_zero():
                continue
            f = x / piv
            a[i][c] = RF_ZERO
            for j in range(c + 1, cols):
                y = a[r][j]
                if not y.is_zero():
                    a[i][j] = a[i][j] - f * y
        pivots.append(c)
        r += 1
        if r == rows:
            break
    # backward pass: normalize pivots to 1 and clear above
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        piv = a[k][c]
        if piv != RF_ONE:
            a[k] = [x / piv for x in a[k]]
        for i in range(k):
            x = a[i][c]
            if x.is_zero():
                continue
            a[i][c] = RF_ZERO
            for j in range(c + 1, cols):
                y = a[k][j]
                if not y.is_zero():
                    a[i][j] = a[i][j] - x * y
    return FieldMatrix(rows, cols, a), pivots


def rank(m: FieldMatrix) -> int:
    return len(rref(m)[1])


def nullspace(m: FieldMatrix) -> list:
    """Basis of the right kernel; free variables set to 1 in column order."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [RF_ZERO] * m.cols
        v[fc] = RF_ONE
        for k, pc in enumerate(pivots):
            v[pc] = -r.entries[k][fc]
        basis.append(v)
    return basis


def det(m: FieldMatrix) -> RatFunc:
    """Exact determinant via Bareiss fraction-free elimination."""
    if m.rows != m.cols:
        raise NonSquare(f"determinant of {m.rows}x{m.cols} matrix")
    n = m.rows
    a = [list(r) for r in m.entries]
    sign = 1
    prev = RF_ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = None
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    swap = i
                    break
            if swap is None:
                return RF_ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
            a[i][k] = RF_ZERO
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def inverse(m: FieldMatrix) -> FieldMatrix:
    """Exact inverse; raises Singular when det vanishes identically."""
    if m.rows != m.cols:
        raise NonSquare(f"inverse of {m.rows}x{m.cols} matrix")
    n = m.rows
    aug = FieldMatrix(n, 2 * n, [
        list(m.entries[i]) + [RF_ONE if i == j else RF_ZERO for j in range(n)]
        for i in range(n)])
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise Singular("matrix is singular over the rational-function field")
    return FieldMatrix(n, n, [row[n:] for row in red.entries])


def solve_linear(a: FieldMatrix, b: list) -> tuple:
    """Solve a x = b for x over the RatFunc field.

    Returns (solution vector or None, pivot entries used).  None means the
    system is inconsistent.  Underdetermined systems get free variables set
    to zero (deterministic); callers that care about uniqueness should check
    the rank themselves.
    """
    aug = FieldMatrix(a.rows, a.cols + 1,
                      [list(a.entries[i]) + [rf(b[i])] for i in range(a.rows)])
    red, pivots = rref(aug)
    if a.cols in pivots:
        return None, pivots
    x = [RF_ZERO] * a.cols
    for k, c in enumerate(pivots):
        x[c] = red.entries[k][a.cols]
    return x, pivots
