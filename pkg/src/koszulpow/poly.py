"""Exact coefficient domains and sparse multivariate polynomials.

Coefficients are exact: ``Fraction`` over the rationals, Python ints over
the integers, and canonical residues ``0..p-1`` over a prime field.  A
polynomial is a dict mapping exponent tuples to nonzero coefficients; the
zero polynomial is the empty dict.  Terms serialize in descending graded
lexicographic order, so printing is canonical and ``parse(str(p)) == p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

Exponents = tuple[int, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Domain:
    """An exact coefficient domain: 'Q', 'Z', or 'Fp' with a prime p."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "Fp"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"Fp needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"{self.kind} takes no modulus")

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Fp")

    def coerce(self, value):
        """Bring an int/Fraction into this domain's canonical form."""
        if self.kind == "Q":
            return Fraction(value)
        if self.kind == "Fp":
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.p}")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return value % self.p
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ValueError(f"{value} is not an integer")
            return value.numerator
        return int(value)

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "Fp" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "Fp" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "Fp" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "Fp" else -a

    def div(self, a, b):
        if self.kind == "Fp":
            return a * pow(b, -1, self.p) % self.p
        if self.kind == "Q":
            return Fraction(a) / b
        if a % b != 0:
            raise ValueError(f"{a} not divisible by {b} over Z")
        return a // b

    def coeff_str(self, a) -> str:
        return str(a)

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else {"Q": "QQ", "Z": "ZZ"}[self.kind]


QQ = Domain("Q")
ZZ = Domain("Z")


def GF(p: int) -> Domain:
    return Domain("Fp", p)


def parse_domain(text: str) -> Domain:
    """Parse a domain spec like 'Q', 'Z', 'Fp:5'."""
    if text == "Q":
        return QQ
    if text == "Z":
        return ZZ
    if text.startswith("Fp:"):
        return GF(int(text[3:]))
    raise ValueError(f"unknown field spec {text!r} (use Q, Z, or Fp:p)")


# ---------------------------------------------------------------------------
# Monomials: exponent tuples of fixed length.

def mono_degree(m: Exponents) -> int:
    return sum(m)


def mono_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def grlex_key(m: Exponents):
    """Sort key for descending graded-lex order (use with reverse=True)."""
    return (sum(m), m)


def monomials_of_degree(n_vars: int, d: int) -> list[Exponents]:
    """All exponent tuples of total degree d, in descending lex order.

    Descending lex puts x1-dominant monomials first, matching the canonical
    printed term order.
    """
    if d < 0:
        return []
    if n_vars == 0:
        return [()] if d == 0 else []
    out = []
    for e1 in range(d, -1, -1):
        for rest in monomials_of_degree(n_vars - 1, d - e1):
            out.append((e1,) + rest)
    return out


def count_monomials(n_vars: int, d: int) -> int:
    if d < 0:
        return 0
    return comb(n_vars + d - 1, d) if n_vars > 0 else (1 if d == 0 else 0)


class Polynomial:
    """A sparse multivariate polynomial over an exact domain.

    Immutable in practice: arithmetic returns new objects and never mutates
    the term dict after construction.
    """

    __slots__ = ("n_vars", "domain", "terms")

    def __init__(self, n_vars: int, domain: Domain, terms: dict[Exponents, object]):
        self.n_vars = n_vars
        self.domain = domain
        clean = {}
        zero = domain.zero()
        for m, c in terms.items():
            if len(m) != n_vars:
                raise ValueError(f"exponent tuple {m} has wrong length for {n_vars} vars")
            c = domain.coerce(c)
            if c != zero:
                clean[m] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_vars: int, domain: Domain) -> Polynomial:
        return cls(n_vars, domain, {})

    @classmethod
    def constant(cls, n_vars: int, domain: Domain, value) -> Polynomial:
        return cls(n_vars, domain, {(0,) * n_vars: value})

    @classmethod
    def one(cls, n_vars: int, domain: Domain) -> Polynomial:
        return cls.constant(n_vars, domain, 1)

    @classmethod
    def variable(cls, n_vars: int, domain: Domain, index: int) -> Polynomial:
        """The variable x_index, 1-based."""
        if not 1 <= index <= n_vars:
            raise ValueError(f"variable x{index} out of range 1..{n_vars}")
        e = [0] * n_vars
        e[index - 1] = 1
        return cls(n_vars, domain, {tuple(e): 1})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self):
        """The coefficient of the monomial 1 (domain zero if absent)."""
        return self.terms.get((0,) * self.n_vars, self.domain.zero())

    def total_degree(self) -> int:
        """Max term degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None if inhomogeneous.

        The zero polynomial is homogeneous of every degree; returns None
        for it as well, so check is_zero() first when it matters.
        """
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def coefficient(self, m: Exponents):
        return self.terms.get(tuple(m), self.domain.zero())

    def _check_compatible(self, other: Polynomial):
        if self.domain != other.domain:
            raise ValueError(f"domain mismatch: {self.domain} vs {other.domain}")
        if self.n_vars != other.n_vars:
            raise ValueError(f"variable count mismatch: {self.n_vars} vs {other.n_vars}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check_compatible(other)
        dom = self.domain
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = dom.add(out.get(m, dom.zero()), c)
        return Polynomial(self.n_vars, dom, out)

    def __neg__(self) -> Polynomial:
        dom = self.domain
        return Polynomial(self.n_vars, dom, {m: dom.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check_compatible(other)
        dom = self.domain
        out: dict[Exponents, object] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = dom.add(out.get(m, dom.zero()), dom.mul(ca, cb))
        return Polynomial(self.n_vars, dom, out)

    def scale(self, scalar) -> Polynomial:
        dom = self.domain
        c0 = dom.coerce(scalar)
        return Polynomial(self.n_vars, dom, {m: dom.mul(c, c0) for m, c in self.terms.items()})

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative exponent")
        out = Polynomial.one(self.n_vars, self.domain)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.n_vars == other.n_vars
                and self.domain == other.domain and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n_vars, self.domain, frozenset(self.terms.items())))

    # -- printing ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponents, object]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                       for i, e in enumerate(m) if e != 0]
            neg = (isinstance(c, (int, Fraction)) and c < 0
                   and self.domain.kind != "Fp")
            mag = -c if neg else c
            if not factors:
                body = self.domain.coeff_str(mag)
            elif mag == self.domain.one():
                body = "*".join(factors)
            else:
                body = "*".join([self.domain.coeff_str(mag)] + factors)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self}, vars={self.n_vars}, dom={self.domain})"


# ---------------------------------------------------------------------------
# Parser for the polynomial grammar:
#   expr   := term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ('^' INT)?
#   atom   := INT ('/' INT)? | VAR | '(' expr ')' | '-' atom
# '^' binds tightest, then '*', then '+'/'-'; unary minus allowed.  The
# rational literal INT/INT extends the integer grammar so that printed
# Q-coefficients round-trip.

class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, object, int]] = []
        i, n = 0, len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
            elif c.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("int", int(text[i:j]), i))
                i = j
            elif c == "x":
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ParseError("variable needs an index, e.g. x1", i)
                self.toks.append(("var", int(text[i + 1:j]), i))
                i = j
            elif c in "+-*^()/":
                self.toks.append((c, c, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {c!r}", i)
        self.k = 0

    def peek(self) -> str | None:
        return self.toks[self.k][0] if self.k < len(self.toks) else None

    def next(self) -> tuple[str, object, int]:
        if self.k >= len(self.toks):
            raise ParseError("unexpected end of input", len(self.text))
        tok = self.toks[self.k]
        self.k += 1
        return tok

    @property
    def pos(self) -> int:
        return self.toks[self.k][2] if self.k < len(self.toks) else len(self.text)


def parse_poly(text: str, n_vars: int, domain: Domain = QQ) -> Polynomial:
    """Parse polynomial text into canonical form.

    Raises ParseError (with position) on syntax errors, out-of-range
    variables, and negative exponents.
    """
    toks = _Tokens(text)

    def atom() -> Polynomial:
        kind, value, pos = toks.next()
        if kind == "int":
            if toks.peek() == "/":
                toks.next()
                k2, v2, p2 = toks.next()
                if k2 != "int":
                    raise ParseError("expected integer denominator", p2)
                return Polynomial.constant(n_vars, domain, Fraction(value, v2))
            return Polynomial.constant(n_vars, domain, value)
        if kind == "var":
            if not 1 <= value <= n_vars:
                raise ParseError(f"variable x{value} out of range 1..{n_vars}", pos)
            return Polynomial.variable(n_vars, domain, value)
        if kind == "(":
            p = expr()
            k2, _, p2 = toks.next()
            if k2 != ")":
                raise ParseError("expected ')'", p2)
            return p
        if kind == "-":
            return -atom()
        raise ParseError(f"unexpected token {value!r}", pos)

    def factor() -> Polynomial:
        base = atom()
        if toks.peek() == "^":
            toks.next()
            sign = 1
            if toks.peek() == "-":
                toks.next()
                sign = -1
            kind, value, pos = toks.next()
            if kind != "int":
                raise ParseError("expected integer exponent", pos)
            if sign < 0:
                raise ParseError("negative exponent", pos)
            return base ** value
        return base

    def term() -> Polynomial:
        p = factor()
        while toks.peek() == "*":
            toks.next()
            p = p * factor()
        return p

    def expr() -> Polynomial:
        negate = False
        if toks.peek() == "-":
            toks.next()
            negate = True
        p = term()
        if negate:
            p = -p
        while toks.peek() in ("+", "-"):
            op, _, _ = toks.next()
            q = term()
            p = p + q if op == "+" else p - q
        return p

    result = expr()
    if toks.peek() is not None:
        raise ParseError(f"trailing input {toks.toks[toks.k][1]!r}", toks.pos)
    return result


# ---------------------------------------------------------------------------
# Regular sequences.

@dataclass(frozen=True)
class RegularSequenceSpec:
    """A homogeneous sequence u_1..u_n in k[x1..x_nvars] generating the ideal.

    ``certified`` is True for the built-in monomial shapes (variables,
    prime-power variables), where regularity is automatic.  Explicit
    sequences are accepted as asserted-by-user; the Koszul homology probe
    (homology module) offers a necessary-condition check.
    """

    n_vars: int
    domain: Domain
    gens: tuple[Polynomial, ...]
    degrees: tuple[int, ...]
    kind: str               # 'variables' | 'powers' | 'explicit'
    certified: bool
    powers: tuple[int, ...] | None = None

    @property
    def n_gens(self) -> int:
        return len(self.gens)

    @property
    def monomial_regime(self) -> bool:
        """True when every generator is x_i^{a_i} (normal forms are monomial)."""
        return self.kind in ("variables", "powers")

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @classmethod
    def variables(cls, n_vars: int, domain: Domain = QQ) -> RegularSequenceSpec:
        if n_vars < 1:
            raise ValueError("need at least one generator")
        gens = tuple(Polynomial.variable(n_vars, domain, i + 1) for i in range(n_vars))
        return cls(n_vars, domain, gens, (1,) * n_vars, "variables", True,
                   powers=(1,) * n_vars)

    @classmethod
    def variable_powers(cls, exponents: tuple[int, ...],
                        domain: Domain = QQ) -> RegularSequenceSpec:
        if len(exponents) < 1:
            raise ValueError("need at least one generator")
        if any(a < 1 for a in exponents):
            raise ValueError("powers must be >= 1")
        n = len(exponents)
        gens = tuple(Polynomial.variable(n, domain, i + 1) ** a
                     for i, a in enumerate(exponents))
        return cls(n, domain, gens, tuple(exponents), "powers", True,
                   powers=tuple(exponents))

    @classmethod
    def explicit(cls, polys: list[Polynomial]) -> RegularSequenceSpec:
        if len(polys) < 1:
            raise ValueError("need at least one generator")
        n_vars, domain = polys[0].n_vars, polys[0].domain
        degrees = []
        for u in polys:
            if u.n_vars != n_vars or u.domain != domain:
                raise ValueError("generators live in different rings")
            if u.is_zero():
                raise ValueError("zero polynomial in sequence")
            d = u.homogeneous_degree()
            if d is None:
                raise ValueError(f"inhomogeneous generator {u}")
            if d < 1:
                raise ValueError(f"generator {u} has degree 0")
            degrees.append(d)
        return cls(n_vars, domain, tuple(polys), tuple(degrees), "explicit", False)

    def with_domain(self, domain: Domain) -> RegularSequenceSpec:
        """The same sequence with coefficients coerced into another domain."""
        gens = tuple(Polynomial(u.n_vars, domain, dict(u.terms)) for u in self.gens)
        return RegularSequenceSpec(self.n_vars, domain, gens, self.degrees,
                                   self.kind, self.certified, self.powers)


def regular_sequence_spec(source: str, n_vars: int = 0, domain: Domain = QQ,
                          powers: tuple[int, ...] | None = None,
                          polys: list[Polynomial] | None = None) -> RegularSequenceSpec:
    """Build a RegularSequenceSpec from one of the three source shapes."""
    if source == "variables":
        return RegularSequenceSpec.variables(n_vars, domain)
    if source == "powers":
        if powers is None:
            raise ValueError("powers source needs exponents")
        return RegularSequenceSpec.variable_powers(powers, domain)
    if source == "explicit":
        if not polys:
            raise ValueError("explicit source needs polynomials")
        return RegularSequenceSpec.explicit(polys)
    raise ValueError(f"unknown source {source!r}")


def random_polynomial(rng, n_vars: int, domain: Domain, max_degree: int = 3,
                      n_terms: int = 4) -> Polynomial:
    """Small random polynomial for property tests (deterministic given rng)."""
    terms: dict[Exponents, object] = {}
    for _ in range(rng.randrange(n_terms + 1)):
        d = rng.randrange(max_degree + 1)
        monos = monomials_of_degree(n_vars, d)
        m = monos[rng.randrange(len(monos))]
        c = rng.randrange(-9, 10)
        terms[m] = terms.get(m, 0) + c
    return Polynomial(n_vars, domain, terms)


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
