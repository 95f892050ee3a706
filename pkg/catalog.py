"""Built-in example models.

Parametrised entries take an integer after a space or a colon, e.g.
"bazaikin 2", "sphere:5", "cpn 3".
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Dict, Tuple

from errors import UnknownCatalogEntry
from fd_algebra import FDAlgebra, make_fd_algebra, tensor
from model_dsl import ModelFile, format_model, parse_model

SU6_SU3SU3 = """\
# SU(6)/(SU(3)xSU(3))
model su6_su3su3 {
  gen y4 : 4
  gen y6 : 6
  gen x7 : 7 d = y4^2
  gen x9 : 9 d = 2 y4*y6
  gen x11 : 11 d = y6^2
  top 19
}
"""

YAMAGUCHI14 = """\
model yamaguchi14 {
  gen x : 2
  gen y : 3
  gen z : 3 d = x^2
  gen a : 4 d = x*y
  gen b : 5 d = x*a + y*z
  gen c : 7 d = a^2 + 2 y*b
  top 14
}
"""

ESCHENBURG = """\
# rationally S^2 x S^5
model eschenburg {
  gen x2 : 2
  gen y3 : 3 d = x2^2
  gen y5 : 5
  top 7
}
"""

SU2_U1 = """\
biquotient su2_u1 {
  bh u : 2
  q q3 : 3 dbar = u^2
}
"""

SU3_S1 = """\
biquotient su3_s1 {
  bh u : 2
  q q3 : 3 dbar = u^2
  q q5 : 5 dbar = u^3
}
"""


def bazaikin(l: int) -> str:
    coeff = {1: "", -1: "-"}.get(l, f"{l} ")
    tail = "" if l == 0 else f" d = {coeff}x2^5"
    return (
        f"model bazaikin_{l if l >= 0 else 'm' + str(-l)} {{\n"
        "  gen x2 : 2\n"
        "  gen y5 : 5 d = x2^3\n"
        f"  gen y9 : 9{tail}\n"
        "  top 13\n"
        "}\n"
    )


def sphere_algebra(n: int, name: str = "s") -> FDAlgebra:
    return make_fd_algebra([("1", 0), (name, n)], {})


def cpn_algebra(n: int) -> FDAlgebra:
    names = ["1", "x"] + [f"x_{i}" for i in range(2, n + 1)]
    basis = [(names[i], 2 * i) for i in range(n + 1)]
    mul = {
        (names[i], names[j]): {names[i + j]: Fraction(1)}
        for i in range(1, n + 1) for j in range(1, n + 1) if i + j <= n
    }
    return make_fd_algebra(basis, mul)


def _fd(name: str, H: FDAlgebra) -> str:
    return format_model(ModelFile(name, "fd", H, H.top_degree))


def sphere(n: int) -> str:
    return _fd(f"sphere_{n}", sphere_algebra(n))


def cpn(n: int) -> str:
    return _fd(f"cp_{n}", cpn_algebra(n))


def s3s3s10s11() -> str:
    H = tensor(tensor(sphere_algebra(3, "a"), sphere_algebra(3, "b")),
               tensor(sphere_algebra(10, "p"), sphere_algebra(11, "q")))
    return _fd("s3s3s10s11", H)


def s3s5s7() -> str:
    H = tensor(tensor(sphere_algebra(3, "a"), sphere_algebra(5, "b")), sphere_algebra(7, "c"))
    return _fd("s3s5s7", H)


FIXED: Dict[str, Callable[[], str]] = {
    "su6_su3su3": lambda: SU6_SU3SU3,
    "yamaguchi14": lambda: YAMAGUCHI14,
    "eschenburg": lambda: ESCHENBURG,
    "su2_u1": lambda: SU2_U1,
    "su3_s1": lambda: SU3_S1,
    "s3s3s10s11": s3s3s10s11,
    "s3s5s7": s3s5s7,
}

PARAMETRISED: Dict[str, Tuple[Callable[[int], str], int]] = {
    # builder, smallest allowed parameter
    "bazaikin": (bazaikin, -(10 ** 6)),
    "sphere": (sphere, 1),
    "cpn": (cpn, 1),
}


def entries() -> Tuple[str, ...]:
    return tuple(sorted(FIXED)) + tuple(f"{name} <n>" for name in sorted(PARAMETRISED))


def catalog_source(name: str) -> str:
    key = name.strip()
    if key in FIXED:
        return FIXED[key]()
    m = re.fullmatch(r"([a-z_0-9]+?)[ :]+(-?\d+)", key)
    if m and m.group(1) in PARAMETRISED:
        builder, lowest = PARAMETRISED[m.group(1)]
        value = int(m.group(2))
        if value >= lowest:
            return builder(value)
    raise UnknownCatalogEntry(name, entries())


def catalog(name: str) -> ModelFile:
    return parse_model(catalog_source(name))
