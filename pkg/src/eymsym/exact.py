"""Exact arithmetic: rationals, sparse multivariate polynomials, rational functions.

Every symbolic quantity in the engine is a RatFunc: a reduced fraction of
multivariate polynomials over Q in named parameters (a, b, c, d, t, v1, ...).
All arithmetic is exact; there is no floating point anywhere.

Canonical form (unique representation per mathematical value):
  * polynomials store no zero coefficients; monomials are compared in graded
    lexicographic order over lexicographically sorted parameter names;
  * a RatFunc has gcd(num, den) = 1 with common content removed (all
    coefficients are integers with overall content 1) and the denominator's
    leading coefficient positive.

The text grammar (str() / parse_ratfunc) is infix with `*`, `^` and a
parenthesized denominator, e.g. ``(a - b)/(2*a*b)``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import cmp_to_key

Rational = Fraction

# A monomial is a tuple of (name, exponent) pairs, sorted by name, exponents > 0.
Monomial = tuple

_ONE_MONO: Monomial = ()


class DivisionByZero(ZeroDivisionError):
    """Division by the zero polynomial / rational function."""


class MissingParam(KeyError):
    """An evaluation point does not assign every parameter that occurs."""


class PoleAtPoint(ZeroDivisionError):
    """The denominator vanishes at the requested evaluation point."""


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _mono_cmp(m1: Monomial, m2: Monomial) -> int:
    """Graded lex: compare total degree, then exponents along sorted names."""
    d1 = sum(e for _, e in m1)
    d2 = sum(e for _, e in m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    e1, e2 = dict(m1), dict(m2)
    for name in sorted(set(e1) | set(e2)):
        a, b = e1.get(name, 0), e2.get(name, 0)
        if a != b:
            # larger exponent on the lexicographically earliest name wins
            return 1 if a > b else -1
    return 0


_mono_key = cmp_to_key(_mono_cmp)


class Poly:
    """Immutable sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict):
        self.terms = terms
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return _P_ZERO

    @staticmethod
    def const(value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return _P_ZERO
        return Poly({_ONE_MONO: c})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ONE_MONO in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[_ONE_MONO]

    def variables(self) -> set:
        out: set = set()
        for mono in self.terms:
            for name, _ in mono:
                out.add(name)
        return out

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in mono) for mono in self.terms)

    def leading(self) -> tuple:
        """(monomial, coefficient) of the graded-lex leading term."""
        if not self.terms:
            return (_ONE_MONO, Fraction(0))
        mono = max(self.terms, key=_mono_key)
        return (mono, self.terms[mono])

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s = s + c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        if not other.terms:
            return self
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            if s is None:
                out[mono] = -c
            else:
                s = s - c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({mono: -c for mono, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return _P_ZERO
        # constant fast paths keep matrix elimination cheap
        if len(self.terms) == 1 and _ONE_MONO in self.terms:
            c = self.terms[_ONE_MONO]
            return Poly({m: c * v for m, v in other.terms.items()})
        if len(other.terms) == 1 and _ONE_MONO in other.terms:
            c = other.terms[_ONE_MONO]
            return Poly({m: c * v for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                s = out.get(mono)
                if s is None:
                    out[mono] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
        return Poly(out)

    def scale(self, c: Fraction) -> "Poly":
        if c == 0 or not self.terms:
            return _P_ZERO
        return Poly({m: c * v for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- evaluation / substitution ------------------------------------------

    def evaluate(self, assignment: dict) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            v = c
            for name, e in mono:
                if name not in assignment:
                    raise MissingParam(name)
                v = v * Fraction(assignment[name]) ** e
            total += v
        return total

    def subs(self, assignment: dict) -> "Poly":
        """Substitute Fractions for a subset of the variables."""
        out = _P_ZERO
        for mono, c in self.terms.items():
            coeff = c
            rest = []
            for name, e in mono:
                if name in assignment:
                    coeff = coeff * Fraction(assignment[name]) ** e
                else:
                    rest.append((name, e))
            if coeff:
                out = out + Poly({tuple(rest): coeff})
        return out

    # -- content / division ---------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive (0 for the zero poly)."""
        if not self.terms:
            return Fraction(0)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def primitive(self) -> "Poly":
        """Integer-primitive part with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return self.scale(1 / c)

    def divexact(self, divisor: "Poly") -> "Poly":
        """Exact polynomial division; raises ValueError if not divisible."""
        if divisor.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        rem = self
        quot = _P_ZERO
        dmono, dcoef = divisor.leading()
        dexp = dict(dmono)
        while not rem.is_zero():
            rmono, rcoef = rem.leading()
            rexp = dict(rmono)
            q = {}
            for name, e in dexp.items():
                r = rexp.get(name, 0) - e
                if r < 0:
                    raise ValueError("not an exact polynomial division")
                if r:
                    q[name] = r
            for name, e in rexp.items():
                if name not in dexp and e:
                    q[name] = e
            qpoly = Poly({tuple(sorted(q.items())): rcoef / dcoef})
            quot = quot + qpoly
            rem = rem - qpoly * divisor
        return quot

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[mono]
            factors = []
            for name, e in mono:
                factors.append(name if e == 1 else f"{name}^{e}")
            if not factors:
                coef_txt = str(abs(c))
            elif abs(c) == 1:
                coef_txt = ""
            elif abs(c).denominator == 1:
                coef_txt = str(abs(c))
            else:
                coef_txt = f"({abs(c)})"
            body = "*".join(([coef_txt] if coef_txt else []) + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        first = parts[0]
        out = ("-" + first[2:]) if first.startswith("- ") else first[2:]
        for p in parts[1:]:
            out += " " + p
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


_P_ZERO = Poly({})
_P_ONE = Poly({_ONE_MONO: Fraction(1)})


# -- polynomial gcd ----------------------------------------------------------


def _split_by_var(p: Poly, x: str) -> dict:
    """View p as univariate in x: {exp: Poly in the remaining variables}."""
    out: dict = {}
    for mono, c in p.terms.items():
        e = 0
        rest = []
        for name, exp in mono:
            if name == x:
                e = exp
            else:
                rest.append((name, exp))
        part = out.setdefault(e, {})
        key = tuple(rest)
        part[key] = part.get(key, Fraction(0)) + c
    return {e: Poly({m: c for m, c in terms.items() if c}) for e, terms in out.items()}


def _join_by_var(parts: dict, x: str) -> Poly:
    out = _P_ZERO
    for e, coeff in parts.items():
        if coeff.is_zero():
            continue
        xmono = Poly({((x, e),): Fraction(1)}) if e else _P_ONE
        out = out + coeff * xmono
    return out


def _pseudo_rem(a: dict, b: dict, x: str) -> dict:
    """Canonical pseudo-remainder lc(b)^(delta+1) a mod b (views in x)."""
    db = max(b)
    lb = b[db]
    steps_needed = max(a) - db + 1
    k = 0
    while a and max(a) >= db:
        da = max(a)
        la = a[da]
        k += 1
        # a := lb*a - la*x^(da-db)*b
        new: dict = {}
        for e, c in a.items():
            new[e] = c * lb
        for e, c in b.items():
            t = new.get(e + da - db, _P_ZERO) - la * c
            new[e + da - db] = t
        a = {e: c for e, c in new.items() if not c.is_zero()}
    for _ in range(steps_needed - k):
        a = {e: c * lb for e, c in a.items()}
    return a


def _pow(p: Poly, n: int) -> Poly:
    out = _P_ONE
    for _ in range(n):
        out = out * p
    return out


def _view_content(parts: dict) -> Poly:
    c = _P_ZERO
    for coeff in parts.values():
        c = poly_gcd(c, coeff)
        if c.is_constant() and not c.is_zero():
            return _P_ONE
    return c


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Gcd over Q[params], normalized integer-primitive with positive lead.

    Subresultant pseudo-remainder sequence (controlled coefficient growth,
    no per-step content extraction); inputs in this engine stay small.
    """
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return _P_ONE
    if f.terms == g.terms:
        return f.primitive()
    fvars = f.variables()
    gvars = g.variables()
    common = fvars & gvars
    if not common:
        return _P_ONE
    x = sorted(common)[-1]
    fu = _split_by_var(f, x)
    gu = _split_by_var(g, x)

    cf = _view_content(fu)
    cg = _view_content(gu)
    c = poly_gcd(cf, cg)
    a = {e: v.divexact(cf) for e, v in fu.items()}
    b = {e: v.divexact(cg) for e, v in gu.items()}
    if max(a) < max(b):
        a, b = b, a

    # trial division settles the common fully-cancelling cases cheaply
    try:
        _join_by_var(a, x).divexact(_join_by_var(b, x))
    except ValueError:
        pass
    else:
        pp_b = _join_by_var(b, x)
        pp_b = pp_b.divexact(_view_content(b)) if not _view_content(b).is_constant() else pp_b
        return (c * pp_b.primitive()).primitive()

    gg, hh = _P_ONE, _P_ONE
    while True:
        delta = max(a) - max(b)
        r = _pseudo_rem(a, b, x)
        if not r:
            g_in_x = _join_by_var(b, x)
            break
        if max(r) == 0:
            g_in_x = _P_ONE  # nonzero x-free remainder: primitive parts coprime
            break
        divisor = gg * _pow(hh, delta)
        a, b = b, {e: v.divexact(divisor) for e, v in r.items()}
        gg = a[max(a)]
        if delta == 1:
            hh = gg
        elif delta > 1:
            hh = _pow(gg, delta).divexact(_pow(hh, delta - 1))
    if not g_in_x.is_constant():
        rc = _view_content(_split_by_var(g_in_x, x))
        if not rc.is_constant():
            g_in_x = g_in_x.divexact(rc)
    return (c * g_in_x.primitive()).primitive()


# -- rational functions -------------------------------------------------------


class RatFunc:
    """Reduced fraction of two Polys; the universal scalar of the engine."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly = _P_ONE, _canonical: bool = False):
        if _canonical:
            self.num, self.den = num, den
        else:
            self.num, self.den = _reduce(num, den)
        self._hash = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def const(value) -> "RatFunc":
        c = Fraction(value)
        if c == 0:
            return RF_ZERO
        return RatFunc(Poly({_ONE_MONO: Fraction(c.numerator)}),
                       Poly.const(c.denominator), _canonical=True)

    @staticmethod
    def var(name: str) -> "RatFunc":
        return RatFunc(Poly.var(name), _P_ONE, _canonical=True)

    # -- structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        if self.is_zero():
            return Fraction(0)
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if not self.num.terms:
            return other
        if not other.num.terms:
            return self
        if self.den.terms == other.den.terms:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        if not other.num.terms:
            return self
        if self.den.terms == other.den.terms:
            return RatFunc(self.num - other.num, self.den)
        return RatFunc(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _canonical=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if not self.num.terms or not other.num.terms:
            return RF_ZERO
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        if not self.num.terms:
            return RF_ZERO
        return RatFunc(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatFunc)
                and self.num.terms == other.num.terms
                and self.den.terms == other.den.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- evaluation ----------------------------------------------------------------

    def evaluate(self, assignment: dict) -> Fraction:
        den = self.den.evaluate(assignment)
        if den == 0:
            raise PoleAtPoint(f"denominator {self.den} vanishes at {assignment}")
        return self.num.evaluate(assignment) / den

    def subs(self, assignment: dict) -> "RatFunc":
        den = self.den.subs(assignment)
        if den.is_zero():
            raise PoleAtPoint(f"denominator {self.den} vanishes under {assignment}")
        return RatFunc(self.num.subs(assignment), den)

    # -- rendering ------------------------------------------------------------------

    def __str__(self) -> str:
        if self.den == _P_ONE:
            return str(self.num)
        num_txt = str(self.num)
        if len(self.num.terms) > 1:
            num_txt = f"({num_txt})"
        den_txt = str(self.den)
        if not _simple_denominator(self.den):
            den_txt = f"({den_txt})"
        return f"{num_txt}/{den_txt}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _simple_denominator(p: Poly) -> bool:
    """True when the denominator renders unambiguously without parentheses."""
    if len(p.terms) != 1:
        return False
    mono, c = next(iter(p.terms.items()))
    if not mono:
        return c.denominator == 1 and c >= 0
    return c == 1 and len(mono) == 1


def _reduce(num: Poly, den: Poly) -> tuple:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return (_P_ZERO, _P_ONE)
    if den.is_constant():
        c = den.constant_value()
        num = num.scale(1 / c)
        den = _P_ONE
    else:
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.divexact(g)
            den = den.divexact(g)
        if den.is_constant():
            num = num.scale(1 / den.constant_value())
            den = _P_ONE
    # joint integer scaling: content 1 across both, positive den leading coeff
    cn = num.content()
    cd = den.content()
    c = Fraction(math.gcd(cn.numerator, cd.numerator),
                 cn.denominator * cd.denominator //
                 math.gcd(cn.denominator, cd.denominator))
    if den.leading()[1] < 0:
        c = -c
    return (num.scale(1 / c), den.scale(1 / c))


RF_ZERO = RatFunc(_P_ZERO, _P_ONE, _canonical=True)
RF_ONE = RatFunc(_P_ONE, _P_ONE, _canonical=True)


def rf(value) -> RatFunc:
    """Coerce an int/Fraction/str/RatFunc to RatFunc."""
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, str):
        return parse_ratfunc(value)
    return RatFunc.const(value)


# -- named operation surface -----------------------------------------------------


def ratfunc_arith(x: RatFunc, y: RatFunc, op: str) -> RatFunc:
    """Exact field arithmetic; `op` is one of add/sub/mul/div."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def ratfunc_eval(x: RatFunc, assignment: dict) -> Fraction:
    return x.evaluate(assignment)


def ratfunc_is_zero(x: RatFunc) -> bool:
    return x.is_zero()


# -- parsing ---------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Malformed rational-function expression."""


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character at {text[pos:]!r}")
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self) -> RatFunc:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            out = RF_ONE
            for _ in range(value):
                out = out * base
            return out
        return base

    def atom(self) -> RatFunc:
        kind, value = self.take()
        if kind == "num":
            return RatFunc.const(value)
        if kind == "name":
            return RatFunc.var(value)
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("expected ')'")
            return inner
        raise ParseError(f"unexpected token {value!r}")


def parse_ratfunc(text: str) -> RatFunc:
    """Parse the canonical text grammar back into a RatFunc."""
    parser = _Parser(_tokenize(text))
    if not parser.tokens:
        raise ParseError("empty expression")
    value = parser.expr()
    if parser.pos != len(parser.tokens):
        raise ParseError(f"trailing tokens in {text!r}")
    return value
