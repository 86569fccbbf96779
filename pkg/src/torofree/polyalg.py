"""Exact sparse polynomial arithmetic over Q with shift automorphisms.

Polynomials live in Q[H_1..H_l, d_1..d_n].  A polynomial is a map from
exponent tuples (length l + n, H-block first) to nonzero Fraction
coefficients; the zero polynomial is the empty map.  This canonical form
makes equality testing exact: two values are equal iff their term maps are.

The shift automorphisms are

    sigma_i^k : H_i -> H_i - k        (fixes every other variable)
    tau^a     : d_j -> d_j - a_j      (componentwise)

implemented by binomial expansion with exact integer binomials.  The
serialized text form is a sum of terms in graded-lex order (total degree
descending, then lexicographic on the exponent tuple with H_1 largest),
e.g. ``3/2*H1^2*d1 - d2 + 5``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, StructureError

Exponent = tuple[int, ...]
Rat = Fraction

_VAR_RE = re.compile(r"^(H|d)(\d+)(?:\^(-?\d+))?$")
_RAT_RE = re.compile(r"^-?\d+(?:/\d+)?$")


@dataclass(frozen=True)
class VarId:
    """A named variable: kind "H" (index 1..l) or "d" (index 1..n)."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("H", "d"):
            raise StructureError(f"unknown variable kind {self.kind!r}")
        if self.index < 1:
            raise StructureError(f"variable index must be positive, got {self.index}")

    def position(self, l: int, n: int) -> int:
        """Slot of this variable in an exponent tuple of ranks (l, n)."""
        if self.kind == "H":
            if self.index > l:
                raise StructureError(f"H{self.index} out of range for l={l}")
            return self.index - 1
        if self.index > n:
            raise StructureError(f"d{self.index} out of range for n={n}")
        return l + self.index - 1


def _order_key(exp: Exponent):
    # Graded lex, descending: sort() with this key lists the leading term first.
    return (-sum(exp), tuple(-e for e in exp))


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("l", "n", "terms")

    def __init__(self, l: int, n: int, terms: dict[Exponent, Rat] | None = None):
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "n", n)
        clean: dict[Exponent, Rat] = {}
        if terms:
            width = l + n
            for exp, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(exp) != width or any(e < 0 for e in exp):
                    raise StructureError(f"bad exponent {exp} for ranks ({l},{n})")
                clean[tuple(exp)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(l: int, n: int) -> "Poly":
        return Poly(l, n)

    @staticmethod
    def const(l: int, n: int, value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return Poly(l, n)
        return Poly(l, n, {(0,) * (l + n): c})

    @staticmethod
    def variable(l: int, n: int, var: VarId) -> "Poly":
        exp = [0] * (l + n)
        exp[var.position(l, n)] = 1
        return Poly(l, n, {tuple(exp): Fraction(1)})

    @staticmethod
    def H(l: int, n: int, i: int) -> "Poly":
        return Poly.variable(l, n, VarId("H", i))

    @staticmethod
    def d(l: int, n: int, j: int) -> "Poly":
        return Poly.variable(l, n, VarId("d", j))

    # -- basic protocol ----------------------------------------------------

    @property
    def ranks(self) -> tuple[int, int]:
        return (self.l, self.n)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.l, self.n, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.l, self.n) == (other.l, other.n) and self.terms == other.terms

    def __hash__(self):
        return hash((self.l, self.n, frozenset(self.terms.items())))

    def _check_ranks(self, other: "Poly"):
        if (self.l, self.n) != (other.l, other.n):
            raise StructureError(
                f"rank mismatch: ({self.l},{self.n}) vs ({other.l},{other.n})"
            )

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check_ranks(other)
            return other
        return Poly.const(self.l, self.n, other)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return Poly(self.l, self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.l, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exponent, Rat] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, Fraction(0)) + ca * cb
        return Poly(self.l, self.n, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly.zero(self.l, self.n)
        return Poly(self.l, self.n, {e: c * k for e, k in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise DomainError("negative polynomial power")
        out = Poly.const(self.l, self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- structure ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Rat]]:
        return sorted(self.terms.items(), key=lambda t: _order_key(t[0]))

    def __iter__(self) -> Iterator[tuple[Exponent, Rat]]:
        return iter(self.sorted_terms())

    def coeff(self, exp: Exponent) -> Rat:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Rat:
        return self.terms.get((0,) * (self.l + self.n), Fraction(0))

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading(self) -> tuple[Exponent, Rat]:
        """Leading (exponent, coefficient) in graded-lex order; zero poly is an error."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        exp = min(self.terms, key=_order_key)
        return exp, self.terms[exp]

    def is_monic(self) -> bool:
        return bool(self.terms) and self.leading()[1] == 1

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def as_scalar(self) -> Rat | None:
        """The constant value if this poly is constant, else None."""
        if self.is_constant():
            return self.constant_term()
        return None

    def eval(self, point: Sequence) -> Rat:
        """Evaluate at a point given as l+n rationals (H-block first)."""
        vals = [Fraction(v) for v in point]
        if len(vals) != self.l + self.n:
            raise StructureError("evaluation point has wrong length")
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for e, v in zip(exp, vals):
                if e:
                    term *= v**e
            total += term
        return total

    def coeffs_in(self, var: VarId) -> dict[int, "Poly"]:
        """Split into { power of var : polynomial in the remaining variables }."""
        pos = var.position(self.l, self.n)
        out: dict[int, dict[Exponent, Rat]] = {}
        for exp, c in self.terms.items():
            k = exp[pos]
            rest = exp[:pos] + (0,) + exp[pos + 1 :]
            out.setdefault(k, {})[rest] = c
        return {k: Poly(self.l, self.n, t) for k, t in out.items()}

    # -- variable shifts ---------------------------------------------------

    def shift(self, deltas: Sequence[int]) -> "Poly":
        """Substitute every variable v_p by v_p - deltas[p] (binomial expansion)."""
        if len(deltas) != self.l + self.n:
            raise StructureError("shift vector has wrong length")
        if not any(deltas):
            return self
        out: dict[Exponent, Rat] = {}
        for exp, c in self.terms.items():
            # expansion of prod_p (v_p - delta_p)^{e_p}
            partial: dict[Exponent, Rat] = {(0,) * len(exp): c}
            for pos, (e, dlt) in enumerate(zip(exp, deltas)):
                if e == 0:
                    continue
                if dlt == 0:
                    partial = {
                        k[:pos] + (e,) + k[pos + 1 :]: v for k, v in partial.items()
                    }
                    continue
                nxt: dict[Exponent, Rat] = {}
                for k, v in partial.items():
                    for j in range(e + 1):
                        w = v * comb(e, j) * Fraction(-dlt) ** (e - j)
                        key = k[:pos] + (j,) + k[pos + 1 :]
                        nxt[key] = nxt.get(key, Fraction(0)) + w
                partial = nxt
            for k, v in partial.items():
                out[k] = out.get(k, Fraction(0)) + v
        return Poly(self.l, self.n, out)

    # -- text form ---------------------------------------------------------

    def text(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for exp, c in self.sorted_terms():
            factors = []
            for pos, e in enumerate(exp):
                if e == 0:
                    continue
                if pos < self.l:
                    name = f"H{pos + 1}"
                else:
                    name = f"d{pos - self.l + 1}"
                factors.append(name if e == 1 else f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not chunks:
                chunks.append(body if c > 0 else "-" + body)
            else:
                chunks.append(("+ " if c > 0 else "- ") + body)
        return " ".join(chunks)

    __str__ = text

    def __repr__(self):
        return f"Poly({self.l},{self.n}: {self.text()})"

    @staticmethod
    def parse(text: str, l: int, n: int) -> "Poly":
        """Parse the serialized text form (inverse of text())."""
        s = text.strip()
        if not s:
            raise StructureError("empty polynomial literal")
        if s == "0":
            return Poly.zero(l, n)
        # normalize: make every term start with an explicit sign, then split
        s = s.replace("-", "+-")
        raw = [p.strip() for p in s.split("+")]
        if any(not p for p in raw[1:]) or (len(raw) > 1 and not raw[0] and not raw[1]):
            raise StructureError(f"dangling sign in {text!r}")
        parts = [p for p in raw if p]
        if not parts:
            raise StructureError(f"dangling sign in {text!r}")
        result = Poly.zero(l, n)
        for part in parts:
            sign = Fraction(1)
            if part.startswith("-"):
                sign = Fraction(-1)
                part = part[1:].strip()
            if not part:
                raise StructureError(f"dangling sign in {text!r}")
            coeff = sign
            exp = [0] * (l + n)
            for factor in (f.strip() for f in part.split("*")):
                if _RAT_RE.match(factor):
                    coeff *= Fraction(factor)
                    continue
                m = _VAR_RE.match(factor)
                if not m:
                    raise StructureError(f"bad factor {factor!r} in {text!r}")
                kind, idx, power = m.group(1), int(m.group(2)), m.group(3)
                e = 1 if power is None else int(power)
                if e < 0:
                    raise StructureError(f"negative exponent in {factor!r}")
                exp[VarId(kind, idx).position(l, n)] += e
            result = result + Poly(l, n, {tuple(exp): coeff})
        return result


# -- spec-level operations -------------------------------------------------


def poly_arith(op: str, p: Poly, q) -> Poly:
    """Dispatch {add, sub, mul, scale} on polynomials (q may be a rational)."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise StructureError(f"unknown arithmetic op {op!r}")


def shift_sigma(i: int, k: int, p: Poly) -> Poly:
    """Apply sigma_i^k: H_i -> H_i - k."""
    pos = VarId("H", i).position(p.l, p.n)
    deltas = [0] * (p.l + p.n)
    deltas[pos] = k
    return p.shift(deltas)


def shift_tau(a: Sequence[int], p: Poly) -> Poly:
    """Apply tau^a: d_j -> d_j - a_j for each j."""
    if len(a) != p.n:
        raise StructureError(f"tau vector length {len(a)} != n={p.n}")
    deltas = [0] * p.l + [int(x) for x in a]
    return p.shift(deltas)


def deg_in(v: VarId, p: Poly) -> int:
    """Highest exponent of v in p; -1 when p = 0."""
    pos = v.position(p.l, p.n)
    if not p.terms:
        return -1
    return max(exp[pos] for exp in p.terms)


def shift_difference(mode: str, k: int, i: int, p: Poly) -> Poly:
    """Difference operators built from w_i = sigma_i.

    mode "power_minus_id":  (sigma_i^k - Id)(p), k != 0
    mode "difference_power": (sigma_i - Id)^k (p), k >= 0
    """
    if mode == "power_minus_id":
        if k == 0:
            raise DomainError("power_minus_id requires k != 0")
        return shift_sigma(i, k, p) - p
    if mode == "difference_power":
        if k < 0:
            raise DomainError("difference_power requires k >= 0")
        out = p
        for _ in range(k):
            out = shift_sigma(i, 1, out) - out
        return out
    raise StructureError(f"unknown shift_difference mode {mode!r}")


def try_divide(q: Poly, p: Poly) -> Poly | None:
    """Return q / p when p divides q exactly, else None."""
    q._check_ranks(p)
    if p.is_zero():
        raise DomainError("division by zero polynomial")
    if q.is_zero():
        return Poly.zero(q.l, q.n)
    lead_exp, lead_c = p.leading()
    quot: dict[Exponent, Rat] = {}
    rem = q
    while not rem.is_zero():
        rexp, rc = rem.leading()
        diff = tuple(a - b for a, b in zip(rexp, lead_exp))
        if any(e < 0 for e in diff):
            return None
        c = rc / lead_c
        quot[diff] = c
        rem = rem - p * Poly(q.l, q.n, {diff: c})
    return Poly(q.l, q.n, quot)


def divides(p: Poly, q: Poly) -> bool:
    """True iff p divides q exactly."""
    return try_divide(q, p) is not None
