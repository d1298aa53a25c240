"""Expression IR over zeta atoms and general Dirichlet polynomials.

Grammar (whitespace insensitive):

    expr   := ("+"|"-")? term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := base ("^" INT)?
    base   := NUMBER | "(" expr ")"
            | "zeta" "(" affine ")"
            | "hurwitz" "(" affine "," RATIONAL ")"
            | "xi" "(" affine ")"
            | "ezd" "(" INT ")"
            | "barnes" "(" INT "," RATIONAL ")"
            | "sphere" "(" INT ")"
            | "symmat" "(" INT "," ("Ln"|"Ln*") "," SIGN "," SIGN ")"
            | "dirichlet" "[" pair ("," pair)* "]"
    affine := linear polynomial in "s" with rational coefficients, e.g. 2*s-1
    pair   := "(" NUMBER "," NUMBER ")"        # (coefficient a_k, exponent l_k)

Only integer powers >= 1 exist, matching polynomial combinations of the
atoms; affine arguments are restricted to rational alpha*s + beta.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .config import ComplexValue, EvalConfig, DEFAULT_CONFIG, cv_add, cv_mul, cv_neg, cv_pow
from .errors import ArityError, ExprSyntaxError, PoleProximity, UnknownFamily
from .families import (
    BarnesParams,
    SymMatrixParams,
    barnes_zeta,
    ez_diagonal,
    sphere_spectral,
    symmat_pole_candidates,
    symmat_zeta,
)
from .zeta import completed_zeta, hurwitz_zeta, riemann_zeta


# ---------------------------------------------------------------------------
# IR nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class DirichletPoly:
    pairs: tuple[tuple[complex, float], ...]   # sum a_k * exp(-l_k * s); entire


@dataclass(frozen=True)
class ZetaAtom:
    kind: str                  # "zeta" | "hurwitz" | "xi"
    alpha: Fraction            # argument alpha*s + beta, alpha != 0
    beta: Fraction
    a: Fraction | None = None  # hurwitz shift

    def arg(self, s: complex) -> complex:
        return float(self.alpha) * s + float(self.beta)


@dataclass(frozen=True)
class FamilyAtom:
    kind: str                  # "ezd" | "barnes" | "sphere" | "symmat"
    params: tuple


@dataclass(frozen=True)
class Add:
    children: tuple


@dataclass(frozen=True)
class Mul:
    children: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    k: int


@dataclass(frozen=True)
class Neg:
    child: object


ZetaExpr = object   # structural alias; every node type above qualifies


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_SYMBOLS = "+-*^()[],/"


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _SYMBOLS:
            toks.append((c, c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            toks.append(("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    # --- grammar ---

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"trailing input {tok[1]!r}", tok[2])
        return node

    def expr(self):
        children = []
        negate_first = False
        if self.peek()[0] in "+-":
            negate_first = self.next()[0] == "-"
        node = self.term()
        children.append(Neg(node) if negate_first else node)
        while self.peek()[0] in "+-":
            op = self.next()[0]
            node = self.term()
            children.append(Neg(node) if op == "-" else node)
        return children[0] if len(children) == 1 else Add(tuple(children))

    def term(self):
        children = [self.factor()]
        while self.peek()[0] == "*":
            self.next()
            children.append(self.factor())
        return children[0] if len(children) == 1 else Mul(tuple(children))

    def factor(self):
        node = self.base()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("num")
            if "." in tok[1]:
                raise ExprSyntaxError("power must be a positive integer", tok[2])
            k = int(tok[1])
            if k < 1:
                raise ExprSyntaxError("power must be >= 1", tok[2])
            node = Pow(node, k)
        return node

    def base(self):
        tok = self.peek()
        if tok[0] == "num":
            self.next()
            return Const(complex(float(tok[1])))
        if tok[0] == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        if tok[0] == "name":
            return self.call()
        raise ExprSyntaxError(f"unexpected token {tok[1]!r}", tok[2])

    def call(self):
        name_tok = self.next()
        name = name_tok[1]
        if name == "s":
            raise ExprSyntaxError(
                "bare 's' is only valid inside a zeta/hurwitz/xi argument", name_tok[2]
            )
        if name == "dirichlet":
            return self.dirichlet_body()
        if name not in ("zeta", "hurwitz", "xi", "ezd", "barnes", "sphere", "symmat"):
            raise UnknownFamily(f"unknown function {name!r} at position {name_tok[2]}")
        self.expect("(")
        if name == "zeta":
            alpha, beta = self.affine()
            self.expect(")")
            return ZetaAtom("zeta", alpha, beta)
        if name == "xi":
            alpha, beta = self.affine()
            self.expect(")")
            return ZetaAtom("xi", alpha, beta)
        if name == "hurwitz":
            alpha, beta = self.affine()
            self.expect(",")
            a = self.rational()
            self.expect(")")
            if not 0 < a <= 1:
                raise ArityError(f"hurwitz shift must be in (0, 1], got {a}")
            return ZetaAtom("hurwitz", alpha, beta, a=a)
        if name == "ezd":
            r = self.integer()
            self.expect(")")
            return FamilyAtom("ezd", (r,))
        if name == "barnes":
            r = self.integer()
            self.expect(",")
            a = self.rational()
            self.expect(")")
            if a <= 0:
                raise ArityError("barnes shift must be > 0")
            return FamilyAtom("barnes", (r, a))
        if name == "sphere":
            n = self.integer()
            self.expect(")")
            return FamilyAtom("sphere", (n,))
        # symmat(n, Ln|Ln*, SIGN, SIGN)
        n = self.integer()
        self.expect(",")
        lat_tok = self.expect("name")
        lattice = lat_tok[1]
        if lattice != "Ln":
            raise ArityError(f"lattice must be Ln or Ln*, got {lattice!r}")
        if self.peek()[0] == "*":
            self.next()
            lattice = "Ln*"
        self.expect(",")
        eta = self.sign()
        self.expect(",")
        theta = self.sign()
        self.expect(")")
        return FamilyAtom("symmat", (n, lattice, eta, theta))

    def dirichlet_body(self):
        self.expect("[")
        pairs = []
        while True:
            self.expect("(")
            a = self.signed_number()
            self.expect(",")
            lam = self.signed_number()
            self.expect(")")
            pairs.append((complex(a), float(lam)))
            if self.peek()[0] == ",":
                self.next()
                continue
            break
        self.expect("]")
        return DirichletPoly(tuple(pairs))

    def integer(self) -> int:
        tok = self.expect("num")
        if "." in tok[1]:
            raise ExprSyntaxError("expected an integer", tok[2])
        return int(tok[1])

    def signed_number(self) -> float:
        sign = 1.0
        if self.peek()[0] in "+-":
            sign = -1.0 if self.next()[0] == "-" else 1.0
        tok = self.expect("num")
        return sign * float(tok[1])

    def rational(self) -> Fraction:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.next()[0] == "-" else 1
        tok = self.expect("num")
        val = Fraction(tok[1])
        if self.peek()[0] == "/":
            self.next()
            den = self.expect("num")
            if "." in den[1]:
                raise ExprSyntaxError("rational denominator must be an integer", den[2])
            val /= int(den[1])
        return sign * val

    def sign(self) -> int:
        tok = self.next()
        if tok[0] in "+-":
            if self.peek()[0] == "num":
                one = self.next()
                if one[1] != "1":
                    raise ExprSyntaxError("sign must be +1 or -1", one[2])
            return -1 if tok[0] == "-" else 1
        if tok[0] == "num" and tok[1] == "1":
            return 1
        raise ExprSyntaxError("expected a sign (+1 or -1)", tok[2])

    def affine(self) -> tuple[Fraction, Fraction]:
        """Parse a rational-linear expression in s up to the next ',' or ')'."""
        alpha = Fraction(0)
        beta = Fraction(0)
        saw_term = False
        while True:
            tok = self.peek()
            if tok[0] in (",", ")", "end"):
                break
            sign = 1
            if tok[0] in "+-":
                self.next()
                sign = -1 if tok[0] == "-" else 1
                tok = self.peek()
            if tok[0] == "name" and tok[1] == "s":
                self.next()
                coef = Fraction(1)
                if self.peek()[0] == "/":
                    self.next()
                    den = self.expect("num")
                    coef /= int(den[1])
                alpha += sign * coef
            elif tok[0] == "num":
                coef = self.rational()
                if self.peek()[0] == "*":
                    self.next()
                    svar = self.expect("name")
                    if svar[1] != "s":
                        raise ExprSyntaxError("expected 's' after coefficient", svar[2])
                    alpha += sign * coef
                else:
                    beta += sign * coef
            else:
                raise ExprSyntaxError(f"bad affine term {tok[1]!r}", tok[2])
            saw_term = True
        if not saw_term:
            raise ExprSyntaxError("empty affine argument", self.peek()[2])
        if alpha == 0:
            raise ExprSyntaxError("affine argument must involve s", self.peek()[2])
        return alpha, beta


def parse_expr(text: str):
    """Parse expression text into the IR; raises ExprSyntaxError with position."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing (round-trips through parse_expr)
# ---------------------------------------------------------------------------

def _fmt_rational(q: Fraction) -> str:
    return str(q)          # "3", "-1/2", ...


def _fmt_affine(alpha: Fraction, beta: Fraction) -> str:
    if alpha == 1:
        out = "s"
    elif alpha == -1:
        out = "-s"
    else:
        out = f"{_fmt_rational(alpha)}*s"
    if beta > 0:
        out += f"+{_fmt_rational(beta)}"
    elif beta < 0:
        out += f"-{_fmt_rational(-beta)}"
    return out


def _fmt_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def to_text(e) -> str:
    """Render the IR back to grammar-conforming text."""
    if isinstance(e, Const):
        return _fmt_number(e.value.real)
    if isinstance(e, DirichletPoly):
        inner = ",".join(f"({_fmt_number(a.real)},{_fmt_number(l)})" for a, l in e.pairs)
        return f"dirichlet[{inner}]"
    if isinstance(e, ZetaAtom):
        arg = _fmt_affine(e.alpha, e.beta)
        if e.kind == "hurwitz":
            return f"hurwitz({arg},{_fmt_rational(e.a)})"
        return f"{e.kind}({arg})"
    if isinstance(e, FamilyAtom):
        if e.kind == "ezd":
            return f"ezd({e.params[0]})"
        if e.kind == "barnes":
            return f"barnes({e.params[0]},{_fmt_rational(e.params[1])})"
        if e.kind == "sphere":
            return f"sphere({e.params[0]})"
        n, lattice, eta, theta = e.params
        return f"symmat({n},{lattice},{'+1' if eta > 0 else '-1'},{'+1' if theta > 0 else '-1'})"
    if isinstance(e, Add):
        parts = []
        for i, c in enumerate(e.children):
            if isinstance(c, Neg):
                parts.append("-" + _paren_if(c.child, (Add,)))
            else:
                parts.append(("+" if i else "") + to_text(c))
        return "".join(parts)
    if isinstance(e, Mul):
        return "*".join(_paren_if(c, (Add, Neg)) for c in e.children)
    if isinstance(e, Pow):
        return _paren_if(e.base, (Add, Mul, Neg)) + f"^{e.k}"
    if isinstance(e, Neg):
        return "-" + _paren_if(e.child, (Add,))
    raise TypeError(f"not an expression node: {e!r}")


def _paren_if(e, kinds: tuple) -> str:
    text = to_text(e)
    return f"({text})" if isinstance(e, kinds) else text


# ---------------------------------------------------------------------------
# Pole bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoleCandidate:
    location: complex
    source: str


@dataclass(frozen=True)
class PoleSet:
    entries: tuple[PoleCandidate, ...]

    def locations(self) -> list[complex]:
        return [c.location for c in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _atom_poles(e, path: str):
    if isinstance(e, ZetaAtom):
        alpha, beta = float(e.alpha), float(e.beta)
        roots = [(1.0 - beta) / alpha]
        if e.kind == "xi":
            roots.append(-beta / alpha)     # Gamma-side pole at argument 0
        return [PoleCandidate(complex(r), f"{path}:{to_text(e)}") for r in sorted(roots)]
    if isinstance(e, FamilyAtom):
        kind = e.kind
        if kind == "ezd":
            locs = [1.0 / k for k in range(1, e.params[0] + 1)]
        elif kind == "barnes":
            locs = [float(k) for k in range(1, e.params[0] + 1)]
        elif kind == "sphere":
            locs = [(j + 1) / 2.0 for j in range(e.params[0])]
        else:
            locs = symmat_pole_candidates(e.params[0])
        return [PoleCandidate(complex(l), f"{path}:{to_text(e)}") for l in sorted(locs)]
    return []


def _collect_poles(e, path: str, out: list):
    if isinstance(e, (ZetaAtom, FamilyAtom)):
        out.extend(_atom_poles(e, path))
    elif isinstance(e, Add):
        for i, c in enumerate(e.children):
            _collect_poles(c, f"{path}.Add[{i}]", out)
    elif isinstance(e, Mul):
        for i, c in enumerate(e.children):
            _collect_poles(c, f"{path}.Mul[{i}]", out)
    elif isinstance(e, Pow):
        _collect_poles(e.base, f"{path}.Pow", out)
    elif isinstance(e, Neg):
        _collect_poles(e.child, f"{path}.Neg", out)
    # Const / DirichletPoly: entire, nothing to record


@lru_cache(maxsize=512)
def pole_set(e) -> PoleSet:
    """Complete, conservative pole-candidate list (never auto-cancelled)."""
    out: list[PoleCandidate] = []
    _collect_poles(e, "", out)
    seen = set()
    unique = []
    for c in out:
        key = (c.location, c.source)
        if key not in seen:
            seen.add(key)
            unique.append(c)
    unique.sort(key=lambda c: (c.location.real, c.location.imag, c.source))
    return PoleSet(tuple(unique))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _eval_node(e, s: complex, cfg: EvalConfig) -> ComplexValue:
    if isinstance(e, Const):
        return ComplexValue.of(e.value, 0.0)
    if isinstance(e, DirichletPoly):
        val = 0j
        mass = 0.0
        for a, lam in e.pairs:
            term = a * cmath.exp(-lam * s)
            val += term
            mass += abs(term)
        return ComplexValue.of(val, 4e-16 * mass)
    if isinstance(e, ZetaAtom):
        arg = e.arg(s)
        if e.kind == "zeta":
            return riemann_zeta(arg, cfg)
        if e.kind == "hurwitz":
            return hurwitz_zeta(arg, float(e.a), cfg)
        return completed_zeta(arg, cfg)
    if isinstance(e, FamilyAtom):
        if e.kind == "ezd":
            return ez_diagonal(e.params[0], s, cfg)
        if e.kind == "barnes":
            return barnes_zeta(BarnesParams(e.params[0], float(e.params[1])), s, cfg)
        if e.kind == "sphere":
            return sphere_spectral(e.params[0], s, cfg)
        n, lattice, eta, theta = e.params
        return symmat_zeta(SymMatrixParams(n, lattice, eta, theta), s, cfg)
    if isinstance(e, Add):
        return cv_add(*(_eval_node(c, s, cfg) for c in e.children))
    if isinstance(e, Mul):
        acc = _eval_node(e.children[0], s, cfg)
        for c in e.children[1:]:
            acc = cv_mul(acc, _eval_node(c, s, cfg))
        return acc
    if isinstance(e, Pow):
        return cv_pow(_eval_node(e.base, s, cfg), e.k)
    if isinstance(e, Neg):
        return cv_neg(_eval_node(e.child, s, cfg))
    raise TypeError(f"not an expression node: {e!r}")


def eval_expr(e, s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> ComplexValue:
    """Evaluate with first-order error propagation; guards every pole candidate."""
    s = complex(s)
    for cand in pole_set(e):
        if abs(s - cand.location) < cfg.pole_guard:
            raise PoleProximity(
                f"s={s:.6g} within pole_guard of candidate {cand.location:.6g} "
                f"from {cand.source}",
                location=cand.location, source=cand.source,
            )
    return _eval_node(e, s, cfg)
