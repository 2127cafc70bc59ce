"""Named test groups and the group-expression grammar.

Grammar::

    expr := C(n) | D(2n) | Q8 | S(n) | A(n) | E(p,k)
          | DP(expr,expr) | SDC(r,t,e) | PERM({"degree": d, "generators": [...]})

``D(m)`` is the dihedral group of order ``m``; ``SDC(r,t,e)`` is
``C_r x| C_t`` with the generator of ``C_t`` acting as ``a -> a^e``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import PrimePartition, is_prime
from .errors import DomainError
from .groups import FiniteGroup, group_from_permutations
from .subgroups import Subgroup, generated


@dataclass(frozen=True)
class GroupExpr:
    """Node of a group expression: constructor name plus arguments."""

    kind: str
    args: tuple = ()

    def __str__(self) -> str:
        if self.kind == "Q8":
            return "Q8"
        if self.kind == "PERM":
            return f"PERM({json.dumps(self.args[0], separators=(',', ':'), sort_keys=True)})"
        return f"{self.kind}({','.join(str(a) for a in self.args)})"


def _cycle(points: list[int], degree: int, offset: int = 0) -> list[int]:
    img = list(range(degree))
    for i, p in enumerate(points):
        img[p + offset] = points[(i + 1) % len(points)] + offset
    return img


def multiplicative_order(e: int, r: int) -> int:
    if np.gcd(e, r) != 1:
        return 0
    k, x = 1, e % r
    while x != 1 % r:
        x = x * e % r
        k += 1
    return k


# -- parsing ----------------------------------------------------------------

_TOKEN_INT = re.compile(r"\s*(\d+)\s*")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def _ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def _expect(self, ch: str):
        self._ws()
        if not self.s.startswith(ch, self.i):
            raise DomainError(f"expected {ch!r} at position {self.i} in {self.s!r}")
        self.i += len(ch)

    def _int(self) -> int:
        m = _TOKEN_INT.match(self.s, self.i)
        if not m:
            raise DomainError(f"expected an integer at position {self.i} in {self.s!r}")
        self.i = m.end()
        return int(m.group(1))

    def expr(self) -> GroupExpr:
        self._ws()
        m = re.compile(r"[A-Z][A-Z0-9]*").match(self.s, self.i)
        if not m:
            raise DomainError(f"expected a constructor at position {self.i} in {self.s!r}")
        name = m.group(0)
        self.i = m.end()
        if name == "Q8":
            return GroupExpr("Q8")
        if name == "DP":
            self._expect("(")
            a = self.expr()
            self._expect(",")
            b = self.expr()
            self._expect(")")
            return GroupExpr("DP", (a, b))
        if name == "PERM":
            self._expect("(")
            depth, start = 0, self.i
            while self.i < len(self.s):
                c = self.s[self.i]
                depth += c in "([{"
                depth -= c in ")]}"
                if depth < 0:
                    break
                self.i += 1
            try:
                literal = json.loads(self.s[start:self.i])
                literal = {"degree": int(literal["degree"]),
                           "generators": [list(map(int, g)) for g in literal["generators"]]}
            except (ValueError, KeyError, TypeError) as exc:
                raise DomainError(f"bad PERM literal: {exc}") from None
            self._expect(")")
            return GroupExpr("PERM", (literal,))
        arity = {"C": 1, "D": 1, "S": 1, "A": 1, "E": 2, "SDC": 3}.get(name)
        if arity is None:
            raise DomainError(f"unknown group constructor {name!r}")
        self._expect("(")
        args = [self._int()]
        for _ in range(arity - 1):
            self._expect(",")
            args.append(self._int())
        self._expect(")")
        return GroupExpr(name, tuple(args))


def parse_group(text: str) -> GroupExpr:
    p = _Parser(text)
    e = p.expr()
    p._ws()
    if p.i != len(text):
        raise DomainError(f"trailing input in group spec {text!r}")
    validate_expr(e)
    return e


def validate_expr(e: GroupExpr) -> None:
    k, a = e.kind, e.args
    if k in ("C", "S", "A") and a[0] < 1:
        raise DomainError(f"{e}: argument must be positive")
    if k == "D" and (a[0] < 2 or a[0] % 2):
        raise DomainError(f"{e}: dihedral order must be even and >= 2")
    if k == "E" and (not is_prime(a[0]) or a[1] < 1):
        raise DomainError(f"{e}: needs a prime and a positive rank")
    if k == "SDC":
        r, t, ex = a
        if not is_prime(r) or not is_prime(t):
            raise DomainError(f"{e}: r and t must be prime")
        if ex % r == 1 % r or pow(ex, t, r) != 1:
            raise DomainError(f"{e}: need e^t = 1 and e != 1 (mod r)")
    if k == "DP":
        validate_expr(a[0])
        validate_expr(a[1])


# -- building ---------------------------------------------------------------

def _semidirect_cyclic(r: int, t: int, e: int) -> FiniteGroup:
    # (a, b) = x^a y^b with y^-1 x y = x^e, so y^b x^a' = x^(a' f^b) y^b for f = e^-1
    n = r * t
    f = pow(e, -1, r)
    fb = [pow(f, b, r) for b in range(t)]
    a = np.arange(n) // t
    b = np.arange(n) % t
    fa = np.array(fb)[b]
    prod_a = (a[:, None] + fa[:, None] * a[None, :]) % r
    prod_b = (b[:, None] + b[None, :]) % t
    table = prod_a * t + prod_b
    return FiniteGroup.from_table(table)


def _quaternion() -> FiniteGroup:
    # handles: 0=1, 1=-1, 2=i, 3=-i, 4=j, 5=-j, 6=k, 7=-k
    basis = ["1", "i", "j", "k"]
    mult = {("1", x): (x, 1) for x in basis}
    mult.update({(x, "1"): (x, 1) for x in basis})
    mult.update({("i", "i"): ("1", -1), ("j", "j"): ("1", -1), ("k", "k"): ("1", -1),
                 ("i", "j"): ("k", 1), ("j", "k"): ("i", 1), ("k", "i"): ("j", 1),
                 ("j", "i"): ("k", -1), ("k", "j"): ("i", -1), ("i", "k"): ("j", -1)})

    def handle(x, s):
        return 2 * basis.index(x) + (0 if s == 1 else 1)
    table = np.zeros((8, 8), dtype=np.int64)
    for h1 in range(8):
        x1, s1 = basis[h1 // 2], 1 - 2 * (h1 % 2)
        for h2 in range(8):
            x2, s2 = basis[h2 // 2], 1 - 2 * (h2 % 2)
            x, s = mult[(x1, x2)]
            table[h1, h2] = handle(x, s * s1 * s2)
    return FiniteGroup.from_table(table)


def _as_perm_group(G: FiniteGroup) -> FiniteGroup:
    """Re-enumerate a table-built group through its regular representation."""
    return FiniteGroup.from_permutation_list(G.perms)


def _direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    dg, dh = G.degree, H.degree
    gens = []
    for g in _gen_images(G):
        gens.append(list(g) + list(range(dg, dg + dh)))
    for h in _gen_images(H):
        gens.append(list(range(dg)) + [x + dg for x in h])
    return group_from_permutations(dg + dh, gens)


def _gen_images(G: FiniteGroup) -> list[list[int]]:
    from .subgroups import whole
    return [G.perms[g].tolist() for g in whole(G).generators()]


def _build(e: GroupExpr) -> FiniteGroup:
    k, a = e.kind, e.args
    if k == "C":
        n = a[0]
        return group_from_permutations(n, [_cycle(list(range(n)), n)] if n > 1 else [])
    if k == "D":
        n = a[0] // 2
        if n >= 3:
            reflection = [(-i) % n for i in range(n)]
            return group_from_permutations(n, [_cycle(list(range(n)), n), reflection])
        if n == 1:
            return group_from_permutations(2, [[1, 0]])
        return group_from_permutations(4, [[1, 0, 3, 2], [2, 3, 0, 1]])
    if k == "Q8":
        return _as_perm_group(_quaternion())
    if k == "S":
        n = a[0]
        gens = [_cycle([0, 1], n), _cycle(list(range(n)), n)] if n > 1 else []
        return group_from_permutations(n, gens)
    if k == "A":
        n = a[0]
        return group_from_permutations(n, [_cycle([0, 1, i], n) for i in range(2, n)])
    if k == "E":
        p, r = a
        return group_from_permutations(p * r, [_cycle(list(range(p)), p * r, offset=p * i)
                                              for i in range(r)])
    if k == "SDC":
        return _as_perm_group(_semidirect_cyclic(*a))
    if k == "DP":
        return _direct_product(build(a[0]), build(a[1]))
    if k == "PERM":
        lit = a[0]
        return group_from_permutations(lit["degree"], lit["generators"])
    raise DomainError(f"unknown constructor {k}")  # pragma: no cover


@lru_cache(maxsize=256)
def _build_cached(text: str) -> FiniteGroup:
    G = _build(parse_group(text))
    G.name = text
    return G


def build(expr: GroupExpr | str) -> FiniteGroup:
    """Build (and cache) the group for an expression or expression string."""
    text = str(parse_group(expr) if isinstance(expr, str) else expr)
    return _build_cached(text)


def expected_order(e: GroupExpr | str) -> int:
    if isinstance(e, str):
        e = parse_group(e)
    k, a = e.kind, e.args
    from math import factorial
    return {
        "C": lambda: a[0], "D": lambda: a[0], "Q8": lambda: 8,
        "S": lambda: factorial(a[0]), "A": lambda: max(1, factorial(a[0]) // 2),
        "E": lambda: a[0] ** a[1], "SDC": lambda: a[0] * a[1],
        "DP": lambda: expected_order(a[0]) * expected_order(a[1]),
        "PERM": lambda: None,
    }[k]()


STANDARD_SUITE = (
    [f"C({n})" for n in range(1, 13)]
    + ["E(2,2)", "E(3,2)", "D(8)", "D(10)", "D(12)", "Q8", "S(3)", "S(4)", "A(4)", "A(5)",
       "SDC(5,2,4)", "SDC(11,5,3)", "SDC(7,3,2)", "DP(A(4),SDC(11,5,3))"]
)

STANDARD_SIGMAS = ("sigma1", "pi:{2,3}", "pi:{2,5}", "onepi:{2,3}", "classes:[{2,5,11}]")


def standard_suite() -> list[tuple[GroupExpr, FiniteGroup]]:
    out = []
    for text in STANDARD_SUITE:
        e = parse_group(text)
        G = build(e)
        if G.order != expected_order(e):
            raise DomainError(f"{text} built with order {G.order}")
        out.append((e, G))
    return out


@dataclass
class Example12:
    group: FiniteGroup
    A: Subgroup
    B: Subgroup
    sigma: PrimePartition


def example12_analog() -> Example12:
    """``A(4) x (C11 x| C5)``: A(4) plays ``Q x| C_p`` with ``q=2, p=3``.

    ``A`` is a complement ``C5`` of the second factor, ``B`` an order-2
    subgroup of the Klein four-group, and sigma is ``{{2,5,11}, rest}``.
    """
    G = build("DP(A(4),SDC(11,5,3))")
    # first 4 points carry A(4), the remaining 55 the regular C11 x| C5
    orders = G.element_orders
    perms = G.perms
    moves_a4 = (perms[:, :4] != np.arange(4)).any(axis=1)
    moves_sdc = (perms[:, 4:] != np.arange(4, perms.shape[1])).any(axis=1)
    t = int(np.flatnonzero((orders == 5) & ~moves_a4)[0])
    b = int(np.flatnonzero((orders == 2) & ~moves_sdc)[0])
    sigma = PrimePartition((frozenset({2, 5, 11}),))
    return Example12(G, generated(G, [t]), generated(G, [b]), sigma)


def example12_full(limit: int = 200_000) -> tuple[FiniteGroup, int, int]:
    """A full-size instance with ``p > q, r, t``: ``(F_3^6 x| C7) x (C5 x| C2)``.

    Order 51030, beyond lattice scale; returns the group plus the handles of
    an element generating ``A = C_t`` and one generating a subgroup ``B`` of
    order ``q`` in ``Q``. Only element-level operations are practical here.
    """
    # C7 acts on F_3[x]/(x^6+...+1), the faithful simple module of dimension 6
    dim = 6
    size = 3 ** dim
    vecs = np.array(np.unravel_index(np.arange(size), (3,) * dim)).T[:, ::-1]

    def index(v):
        return int(np.ravel_multi_index(tuple(v[::-1] % 3), (3,) * dim))

    def companion(v):
        # multiply by x modulo 1 + x + ... + x^6
        top = v[-1]
        w = np.roll(v, 1)
        w[0] = 0
        return (w - top) % 3

    translate = [index((v + np.eye(dim, dtype=int)[0]) % 3) for v in vecs]
    rotate = [index(companion(v)) for v in vecs]
    deg = size + 5
    g_trans = translate + list(range(size, deg))
    g_rot = rotate + list(range(size, deg))
    c5 = list(range(size)) + [size + (i + 1) % 5 for i in range(5)]
    refl = list(range(size)) + [size + (-i) % 5 for i in range(5)]
    G = group_from_permutations(deg, [g_trans, g_rot, c5, refl], limit=limit)
    A_gen = int(G.lookup(np.array([refl]))[0])
    B_gen = int(G.lookup(np.array([g_trans]))[0])
    return G, A_gen, B_gen
