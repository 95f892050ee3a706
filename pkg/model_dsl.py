"""Text format for DGAs, finite algebras, biquotient data and torus automorphisms.

    model NAME {                      fd NAME {
      gen IDENT : DEGREE [d = POLY]     basis IDENT : DEGREE
      top N                             mul IDENT IDENT = POLY
    }                                   top N
                                      }
    biquotient NAME {
      bh IDENT : DEGREE
      q IDENT : DEGREE dbar = POLY
    }

One declaration per line; `#` starts a comment. The unit of an fd
algebra is implicit and named "1".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import exact_linalg as la
from cohomology_engine import DGA, BiquotientData, make_dga
from errors import DuplicateGenerator, ModelSyntaxError, UnknownSymbol
from fd_algebra import FDAlgebra, make_fd_algebra
from gca_kernel import Element, FreeGCA, format_element
from taylor_machine import ProductAutomorphism, make_product_automorphism, product_algebra, torus_basis

TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>[{}:=+\-*^/])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, sym, nl, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise ModelSyntaxError(line, pos - line_start + 1, ["token"], text[pos])
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            tokens.append(Token("nl", "\\n", line, col))
            line += 1
            line_start = m.end()
        elif kind in ("num", "ident", "sym"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# polynomial syntax tree, resolved once every name is known
Factor = Tuple[str, int, int, int]  # name, power, line, col
Term = Tuple[Fraction, Tuple[Factor, ...]]


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, expected: Sequence[str]) -> ModelSyntaxError:
        t = self.tok
        return ModelSyntaxError(t.line, t.col, expected, t.text if t.kind != "eof" else "end of input")

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: Optional[str] = None, label: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            raise self.error([label or text or kind])
        t = self.tok
        self.pos += 1
        return t

    def skip_newlines(self) -> None:
        while self.at("nl"):
            self.pos += 1

    def end_of_line(self) -> None:
        if self.at("eof"):
            return
        self.expect("nl", label="end of line")

    # file = NL* block NL* EOF
    def parse_file(self) -> "ModelFile":
        self.skip_newlines()
        if not self.at("ident") or self.tok.text not in ("model", "fd", "biquotient"):
            raise self.error(["model", "fd", "biquotient"])
        kind = self.tok.text
        self.pos += 1
        name = self.expect("ident", label="NAME").text
        self.expect("sym", "{")
        self.end_of_line()
        if kind == "model":
            result = self.model_body(name)
        elif kind == "fd":
            result = self.fd_body(name)
        else:
            result = self.biquotient_body(name)
        self.skip_newlines()
        if not self.at("eof"):
            raise self.error(["end of input"])
        return result

    # DEGREE = NUM, at least 1
    def degree(self) -> int:
        t = self.expect("num", label="DEGREE")
        if int(t.text) < 1:
            raise ModelSyntaxError(t.line, t.col, ["positive DEGREE"], t.text)
        return int(t.text)

    def declared(self, names: Dict[str, Any], t: Token) -> None:
        if t.text in names:
            raise DuplicateGenerator(t.text, t.line)

    # model_body = { gen IDENT ':' DEGREE ['d' '=' POLY] NL | top NUM NL } '}'
    def model_body(self, name: str) -> "ModelFile":
        gens: Dict[str, int] = {}
        polys: Dict[str, List[Term]] = {}
        top = None
        while True:
            self.skip_newlines()
            if self.at("sym", "}"):
                self.pos += 1
                break
            if self.at("ident", "gen"):
                self.pos += 1
                t = self.expect("ident", label="IDENT")
                self.declared(gens, t)
                self.expect("sym", ":")
                gens[t.text] = self.degree()
                if self.at("ident", "d"):
                    self.pos += 1
                    self.expect("sym", "=")
                    polys[t.text] = self.poly()
            elif self.at("ident", "top"):
                self.pos += 1
                top = int(self.expect("num", label="NUM").text)
            else:
                raise self.error(["gen", "top", "}"])
            self.end_of_line()
        algebra = FreeGCA.of(gens.items())
        d = {g: resolve_poly(algebra, terms) for g, terms in polys.items()}
        return ModelFile(name, "model", make_dga(algebra, d), top)

    # fd_body = { basis IDENT ':' DEGREE NL | mul IDENT IDENT '=' POLY NL | top NUM NL } '}'
    def fd_body(self, name: str) -> "ModelFile":
        basis: Dict[str, int] = {"1": 0}
        products: List[Tuple[Token, Token, List[Term]]] = []
        top = None
        while True:
            self.skip_newlines()
            if self.at("sym", "}"):
                self.pos += 1
                break
            if self.at("ident", "basis"):
                self.pos += 1
                t = self.expect("ident", label="IDENT")
                self.declared(basis, t)
                self.expect("sym", ":")
                basis[t.text] = self.degree()
            elif self.at("ident", "mul"):
                self.pos += 1
                a = self.expect("ident", label="IDENT")
                b = self.expect("ident", label="IDENT")
                self.expect("sym", "=")
                products.append((a, b, self.poly()))
            elif self.at("ident", "top"):
                self.pos += 1
                top = int(self.expect("num", label="NUM").text)
            else:
                raise self.error(["basis", "mul", "top", "}"])
            self.end_of_line()
        mul: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
        for a, b, terms in products:
            for t in (a, b):
                if t.text not in basis:
                    raise UnknownSymbol(t.text, t.line, t.col)
            mul[(a.text, b.text)] = resolve_linear(basis, terms)
        return ModelFile(name, "fd", make_fd_algebra(list(basis.items()), mul), top)

    # biquotient_body = { bh IDENT ':' DEGREE NL | q IDENT ':' DEGREE 'dbar' '=' POLY NL } '}'
    def biquotient_body(self, name: str) -> "ModelFile":
        bh: Dict[str, int] = {}
        q: Dict[str, int] = {}
        polys: Dict[str, List[Term]] = {}
        while True:
            self.skip_newlines()
            if self.at("sym", "}"):
                self.pos += 1
                break
            if self.at("ident", "bh") or self.at("ident", "q"):
                which = self.tok.text
                self.pos += 1
                t = self.expect("ident", label="IDENT")
                self.declared({**bh, **q}, t)
                self.expect("sym", ":")
                if which == "bh":
                    bh[t.text] = self.degree()
                else:
                    q[t.text] = self.degree()
                    self.expect("ident", "dbar")
                    self.expect("sym", "=")
                    polys[t.text] = self.poly()
            else:
                raise self.error(["bh", "q", "}"])
            self.end_of_line()
        base = FreeGCA.of(bh.items())
        dbar = {g: resolve_poly(base, terms) for g, terms in polys.items()}
        return ModelFile(name, "biquotient", BiquotientData.make(list(bh.items()), list(q.items()), dbar), None)

    # POLY = TERM { ('+' | '-') TERM }
    def poly(self) -> List[Term]:
        terms = [self.term(self.sign())]
        while self.at("sym", "+") or self.at("sym", "-"):
            negative = self.tok.text == "-"
            self.pos += 1
            terms.append(self.term(-1 if negative else 1))
        return terms

    def sign(self) -> int:
        if self.at("sym", "-"):
            self.pos += 1
            return -1
        return 1

    # TERM = RATIONAL [MONO] | MONO
    def term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        if self.at("num"):
            coeff *= self.rational()
            if not self.at("ident"):
                return coeff, ()
        if not self.at("ident"):
            raise self.error(["RATIONAL", "IDENT"])
        return coeff, self.mono()

    # RATIONAL = NUM ['/' NUM]
    def rational(self) -> Fraction:
        num = int(self.expect("num").text)
        if self.at("sym", "/"):
            self.pos += 1
            den = self.expect("num", label="NUM")
            if int(den.text) == 0:
                raise ModelSyntaxError(den.line, den.col, ["nonzero NUM"], den.text)
            return Fraction(num, int(den.text))
        return Fraction(num)

    # MONO = FACTOR { ['*'] FACTOR },  FACTOR = IDENT ['^' NUM]
    def mono(self) -> Tuple[Factor, ...]:
        factors = [self.factor()]
        while self.at("sym", "*") or self.at("ident"):
            if self.at("sym", "*"):
                self.pos += 1
            factors.append(self.factor())
        return tuple(factors)

    def factor(self) -> Factor:
        t = self.expect("ident", label="IDENT")
        power = 1
        if self.at("sym", "^"):
            self.pos += 1
            power = int(self.expect("num", label="NUM").text)
        return t.text, power, t.line, t.col


def resolve_poly(algebra: FreeGCA, terms: Sequence[Term]) -> Element:
    total = algebra.zero()
    for coeff, factors in terms:
        x = algebra.one().scale(coeff)
        for name, power, line, col in factors:
            if name not in algebra.names:
                raise UnknownSymbol(name, line, col)
            x = x * algebra.gen(name) ** power
        total = total + x
    return total


def resolve_linear(basis: Dict[str, int], terms: Sequence[Term]) -> Dict[str, Fraction]:
    out: Dict[str, Fraction] = {}
    for coeff, factors in terms:
        if len(factors) > 1 or any(p != 1 for _, p, _, _ in factors):
            _, _, line, col = factors[0]
            raise ModelSyntaxError(line, col, ["single basis element"], "product")
        name = factors[0][0] if factors else "1"
        if factors and name not in basis:
            raise UnknownSymbol(name, factors[0][2], factors[0][3])
        out[name] = out.get(name, Fraction(0)) + coeff
    return out


@dataclass(frozen=True)
class ModelFile:
    name: str
    kind: str  # "model", "fd" or "biquotient"
    obj: Any
    top: Optional[int] = None


def parse_model(text: str) -> ModelFile:
    return Parser(text).parse_file()


def format_model(mf: ModelFile) -> str:
    lines = [f"{mf.kind} {mf.name} {{"]
    if mf.kind == "model":
        M: DGA = mf.obj
        for g in M.algebra.generators:
            img = M.image(g.name)
            tail = "" if img.is_zero() else f" d = {format_element(img)}"
            lines.append(f"  gen {g.name} : {g.degree}{tail}")
    elif mf.kind == "fd":
        H: FDAlgebra = mf.obj
        for i, name in enumerate(H.names):
            if i != H.unit:
                lines.append(f"  basis {name} : {H.degrees[i]}")
        for i in range(H.dim):
            for j in range(i, H.dim):
                if H.unit in (i, j):
                    continue
                prod = H.product(i, j)
                if prod:
                    vec = tuple(prod.get(k, Fraction(0)) for k in range(H.dim))
                    lines.append(f"  mul {H.names[i]} {H.names[j]} = {H.format_vector(vec)}")
    else:
        data: BiquotientData = mf.obj
        for g in data.bh_generators:
            lines.append(f"  bh {g.name} : {g.degree}")
        for name, img in data.dbar:
            degree = next(g.degree for g in data.q_generators if g.name == name)
            lines.append(f"  q {name} : {degree} dbar = {format_element(img)}")
    if mf.top is not None:
        lines.append(f"  top {mf.top}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# automorphism files
#
#   torus N
#   NAME = POLY      (POLY over basis names of H and torus generators x1..xN)


def parse_automorphism(text: str, H: FDAlgebra) -> ProductAutomorphism:
    p = Parser(text)
    p.skip_newlines()
    p.expect("ident", "torus")
    d = int(p.expect("num", label="NUM").text)
    p.end_of_line()
    torus = torus_basis(d)
    P = product_algebra(H, d)
    T = torus.algebra
    symbols: Dict[str, la.Vector] = {}
    for i, name in enumerate(H.names):
        symbols[name] = P.basis_vector(i * T.dim + T.unit)
    for j in range(1, d + 1):
        symbols[f"x{j}"] = P.basis_vector(H.unit * T.dim + T.names.index(f"x{j}"))
    values: Dict[str, la.Vector] = {}
    while True:
        p.skip_newlines()
        if p.at("eof"):
            break
        t = p.expect("ident", label="IDENT")
        if t.text not in H.names:
            raise UnknownSymbol(t.text, t.line, t.col)
        p.expect("sym", "=")
        total = la.zero_vector(P.dim)
        for coeff, factors in p.poly():
            x = la.scale(coeff, P.unit_vector())
            for name, power, line, col in factors:
                if name not in symbols:
                    raise UnknownSymbol(name, line, col)
                for _ in range(power):
                    x = P.multiply(x, symbols[name])
            total = la.add(total, x)
        values[t.text] = total
        p.end_of_line()
    return make_product_automorphism(H, torus, values)


def parse_polynomial(text: str, algebra: FreeGCA) -> Element:
    """A single POLY over the generators of `algebra`."""
    p = Parser(text)
    terms = p.poly()
    if not p.at("eof"):
        raise p.error(["+", "-", "end of input"])
    return resolve_poly(algebra, terms)
