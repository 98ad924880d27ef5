"""The polytope zeta function Z(S, l)(T) = sum_(m>=1) s_m T^m as an exact
rational series, where s_m sums U^(-m*l(gamma)) over the (1/m)-lattice points
of a bounded cell set S.

For faces that are products of points and open intervals, s_m restricted to a
residue class m = sigma + R*t (R the lcm of endpoint denominators) is an
exact combination of terms P(t) * U^(g*t): lattice endpoints k0(m), k1(m) are
affine in t on the class, so per-coordinate geometric sums close up.  Summing
t^d * z^t with z = U^g T^R via the Eulerian numerators A_d(z)/(1-z)^(d+1)
turns each class into a DaggerSeries directly -- no truncation, no fitting.

Faces that mix coordinates are enumerated to finitely many s_m and fitted
with ds_fit against structural candidate factors read off the face's closure
vertices: a vertex v with form value s and denominator lcm b contributes the
factor (1 - U^(-s*b) T^b) at multiplicity dim+1.

Either way the result is checked against the limit identity
lim_(T->inf) Z = -chi(S).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor, lcm
from typing import Iterable, Optional, Sequence

from ..algebra.dagger import DaggerSeries, ds_fit
from ..algebra.laurent import LaurentPoly
from ..errors import (
    LimitMismatchError, LimitUndefined, ResourceLimitError, UnboundedInputError,
)
from .cells import (
    Face, PolySet, RationalCell, _frac, arrangement_faces, face_pieces,
    lattice_points,
)

_ENUM_ORDER_CAP = 400


@dataclass(frozen=True)
class AffineFormPW:
    """Piecewise integer affine form: on each guard, l(x) = <a, x> + b."""

    n: int
    pieces: tuple[tuple[RationalCell, tuple[int, ...], int], ...]

    @classmethod
    def make(cls, n: int, pieces: Iterable[tuple]) -> "AffineFormPW":
        done = []
        for guard, a, b in pieces:
            a = tuple(int(x) for x in a)
            if guard.n != n or len(a) != n:
                raise ValueError("form piece dimension mismatch")
            done.append((guard, a, int(b)))
        return cls(n, tuple(done))

    @classmethod
    def linear(cls, coeffs: Sequence[int], b: int = 0) -> "AffineFormPW":
        n = len(coeffs)
        return cls.make(n, [(RationalCell(n), coeffs, b)])

    @classmethod
    def constant(cls, n: int, b: int = 0) -> "AffineFormPW":
        return cls.make(n, [(RationalCell(n), (0,) * n, b)])

    def value_at(self, point: Sequence) -> Fraction:
        p = tuple(_frac(x) for x in point)
        for guard, a, b in self.pieces:
            if guard.contains(p):
                return sum((ai * xi for ai, xi in zip(a, p)), Fraction(b))
        raise ValueError("point not covered by any form piece")

    def to_json(self) -> dict:
        return {"pieces": [{"guard": g.to_json(), "a": list(a), "b": b}
                           for g, a, b in self.pieces]}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "AffineFormPW":
        pieces = [(RationalCell.from_json(p["guard"], n),
                   tuple(int(x) for x in p["a"]), int(p.get("b", 0)))
                  for p in data["pieces"]]
        return cls.make(n, pieces)


# ---------------------------------------------------------------------------
# rational functions of U alone: LaurentPoly / prod (1 - U^e)^k, e != 0

def _ufactor(e: int) -> LaurentPoly:
    return LaurentPoly({0: 1, e: -1})


class _URat:
    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Optional[Counter] = None):
        self.num = num
        self.den = den if den is not None else Counter()

    @classmethod
    def monomial(cls, e: int, coeff: int = 1) -> "_URat":
        return cls(LaurentPoly({e: coeff}))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __mul__(self, other: "_URat") -> "_URat":
        return _URat(self.num * other.num, self.den + other.den)

    def __neg__(self) -> "_URat":
        return _URat(-self.num, Counter(self.den))

    def __add__(self, other: "_URat") -> "_URat":
        common = self.den | other.den
        n1, n2 = self.num, other.num
        for e, k in (common - self.den).items():
            n1 = n1 * _ufactor(e) ** k
        for e, k in (common - other.den).items():
            n2 = n2 * _ufactor(e) ** k
        return _URat(n1 + n2, common)

    def scale_monomial(self, e: int, coeff: int = 1) -> "_URat":
        return _URat(self.num.shifted(e) * coeff, Counter(self.den))


class _USeries:
    """T-rational accumulator with _URat coefficients: a dict t -> _URat over
    a common multiset of (g, R) factors meaning (1 - U^g T^R)."""

    __slots__ = ("num", "den")

    def __init__(self):
        self.num: dict[int, _URat] = {}
        self.den: Counter = Counter()

    def _mul_in_factor(self, g: int, R: int) -> None:
        out: dict[int, _URat] = {}
        for t, c in self.num.items():
            cur = out.get(t)
            out[t] = c if cur is None else cur + c
            shifted = -c.scale_monomial(g)
            cur = out.get(t + R)
            out[t + R] = shifted if cur is None else cur + shifted
        self.num = {t: c for t, c in out.items() if not c.is_zero()}

    def add(self, num: dict[int, _URat], den: Counter) -> None:
        missing_self = den - self.den
        new_den = self.den | den
        for (g, R), k in missing_self.items():
            for _ in range(k):
                self._mul_in_factor(g, R)
        other = dict(num)
        for (g, R), k in (new_den - den).items():
            for _ in range(k):
                out: dict[int, _URat] = {}
                for t, c in other.items():
                    cur = out.get(t)
                    out[t] = c if cur is None else cur + c
                    shifted = -c.scale_monomial(g)
                    cur = out.get(t + R)
                    out[t + R] = shifted if cur is None else cur + shifted
                other = {t: c for t, c in out.items() if not c.is_zero()}
        for t, c in other.items():
            cur = self.num.get(t)
            c = c if cur is None else cur + c
            if c.is_zero():
                self.num.pop(t, None)
            else:
                self.num[t] = c
        self.den = new_den

    def to_dagger(self) -> DaggerSeries:
        if not self.num:
            return DaggerSeries.zero()
        common_u: Counter = Counter()
        for c in self.num.values():
            common_u |= c.den
        dpoly = LaurentPoly.one()
        for e, k in common_u.items():
            dpoly = dpoly * _ufactor(e) ** k
        out: dict[int, LaurentPoly] = {}
        for t, c in self.num.items():
            scaled = c.num
            for e, k in (common_u - c.den).items():
                scaled = scaled * _ufactor(e) ** k
            # the common U-denominator divides every coefficient exactly
            # because each s_m is a Laurent polynomial in U
            out[t] = scaled.divide_exact(dpoly)
        return DaggerSeries(out, list(self.den.elements()))


def _eulerian(d: int) -> list[int]:
    """Coefficients of A_d(z) with sum_(t>=0) t^d z^t = A_d(z)/(1-z)^(d+1)."""
    a = [1]
    for k in range(1, d + 1):
        deriv = [i * a[i] for i in range(1, len(a))]
        # A_k = z * (A'(1-z) + k*A)
        combined = [0] * (len(a) + 1)
        for i, v in enumerate(deriv):
            combined[i] += v
            combined[i + 1] -= v
        for i, v in enumerate(a):
            combined[i] += k * v
        a = [0] + combined
        while a and a[-1] == 0:
            a.pop()
    return a


# ---------------------------------------------------------------------------
# closed-form engine for separable faces

def _family_face_series(pieces: Sequence[tuple], a_coeffs: Sequence[int],
                        b_const: int) -> _USeries:
    """Exact zeta of one open face that is a product of points and open
    intervals, all bounded."""
    R = 1
    for lo, hi, is_point in pieces:
        R = lcm(R, lo.denominator, hi.denominator)
    acc = _USeries()
    one = _URat(LaurentPoly.one())
    for sigma in range(R):
        t0 = 1 if sigma == 0 else 0
        # each term: (coefficient in U, exponent slope g, poly in t)
        terms: list[tuple[_URat, int, list[_URat]]] = [(one, 0, [one])]
        for (lo, hi, is_point), a in zip(pieces, a_coeffs):
            if is_point:
                qv = lo.denominator
                if sigma % qv:
                    terms = []
                    break
                # U^(-a*m*v) with m*v = sigma*v + (R*v)*t
                sv = int(sigma * lo)
                rv = int(R * lo)
                terms = [(c.scale_monomial(-a * sv), g - a * rv, poly)
                         for c, g, poly in terms]
                continue
            a0, a1 = int(R * lo), int(R * hi)
            b0 = floor(sigma * lo) + 1
            b1 = ceil(sigma * hi) - 1
            if a == 0:
                # lattice count (a1-a0)*t + (b1-b0+1), linear in t
                lin = [_URat(LaurentPoly.from_int(b1 - b0 + 1)),
                       _URat(LaurentPoly.from_int(a1 - a0))]
                new_terms = []
                for c, g, poly in terms:
                    prod = [_URat(LaurentPoly.zero())
                            for _ in range(len(poly) + 1)]
                    for i, pc in enumerate(poly):
                        for j, lc in enumerate(lin):
                            prod[i + j] = prod[i + j] + pc * lc
                    while len(prod) > 1 and prod[-1].is_zero():
                        prod.pop()
                    new_terms.append((c, g, prod))
                terms = new_terms
                continue
            # geometric: (U^(-a*k0) - U^(-a*(k1+1))) / (1 - U^(-a))
            e = -a
            den = Counter({e: 1})
            lead = _URat(LaurentPoly({-a * b0: 1}), den)
            trail = _URat(LaurentPoly({-a * (b1 + 1): -1}), den)
            terms = [(c * piece_c, g + dg, poly)
                     for c, g, poly in terms
                     for piece_c, dg in ((lead, -a * a0), (trail, -a * a1))]
        if b_const:
            terms = [(c.scale_monomial(-b_const * sigma), g - b_const * R, poly)
                     for c, g, poly in terms]
        for c, g, poly in terms:
            for d, pc in enumerate(poly):
                coeff = c * pc
                if coeff.is_zero():
                    continue
                num = {}
                for j, alpha in enumerate(_eulerian(d)):
                    if alpha:
                        num[sigma + R * j] = coeff.scale_monomial(g * j, alpha)
                acc.add(num, Counter({(g, R): d + 1}))
                if t0 == 1 and d == 0:
                    acc.add({sigma: -coeff}, Counter())
    return acc


# ---------------------------------------------------------------------------
# enumerate-and-fit path for non-separable faces

def _solve_square(rows: Sequence[tuple], n: int) -> Optional[tuple[Fraction, ...]]:
    mat = [[Fraction(c) for c in coeffs] + [Fraction(rhs)] for coeffs, rhs in rows]
    for col in range(n):
        pivot = next((i for i in range(col, n) if mat[i][col]), None)
        if pivot is None:
            return None
        mat[col], mat[pivot] = mat[pivot], mat[col]
        pr = mat[col]
        for i in range(n):
            if i != col and mat[i][col]:
                f = mat[i][col] / pr[col]
                mat[i] = [x - f * y for x, y in zip(mat[i], pr)]
    return tuple(mat[i][n] / mat[i][i] for i in range(n))


def _closure_vertices(cell: RationalCell) -> list[tuple[Fraction, ...]]:
    rows = list(cell.eq) + list(cell.lt) + list(cell.le)
    n = cell.n
    seen = set()
    out = []
    for combo in combinations(rows, n):
        v = _solve_square(combo, n)
        if v is None or v in seen:
            continue
        dot = lambda c: sum(ci * xi for ci, xi in zip(c, v))
        if (all(dot(c) == d for c, d in cell.eq)
                and all(dot(c) <= d for c, d in (*cell.lt, *cell.le))):
            seen.add(v)
            out.append(v)
    return out


def _form_value(a: Sequence[int], b: int, point: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, point)), Fraction(b))


def _enumerated_face_series(face: Face, a: Sequence[int], b: int,
                            M: int) -> DaggerSeries:
    cands: Counter = Counter()
    for v in _closure_vertices(face.cell):
        bv = lcm(*(x.denominator for x in v), 1)
        s = _form_value(a, b, v)
        fac = (int(-s * bv), bv)
        mult = face.dim + 1
        if cands[fac] < mult:
            cands[fac] = mult
    if not cands:
        raise UnboundedInputError("face has no closure vertices; set unbounded?")
    den_deg = sum(f[1] * k for f, k in cands.items())
    order = max(M, 2 * den_deg + 8)
    if order > _ENUM_ORDER_CAP:
        raise ResourceLimitError(
            "enumeration order for the fitting path exceeds the supported scale")
    single = PolySet(face.cell.n, (face.cell,))
    prefix = [LaurentPoly.zero()]
    for m in range(1, order + 1):
        acc: dict[int, int] = {}
        for p in lattice_points(single, m):
            ml = m * _form_value(a, b, p)
            if ml.denominator != 1:
                raise AssertionError("m * l(gamma) must be integral")
            e = -int(ml)
            acc[e] = acc.get(e, 0) + 1
        prefix.append(LaurentPoly(acc))
    return ds_fit(prefix, list(cands.elements()))


# ---------------------------------------------------------------------------

def zeta_polytope(S: PolySet, form: AffineFormPW, M: int = 16) -> DaggerSeries:
    """Exact Z(S, form)(T); raises LimitMismatchError when the result fails
    the limit identity lim_(T->inf) Z = -chi(S) (a bug signal), and
    UnboundedInputError when S is unbounded.

    M is the enumeration depth offered to faces that need the explicit
    fitting path (at least the fitting margin of 4); faces handled in closed
    form do not consume it.
    """
    if form.n != S.n:
        raise ValueError("form dimension does not match the set")
    if M < 4:
        raise ValueError("M must be at least the fitting margin 4")
    live = [c for c in S.cells if not c.is_empty()]
    if not live:
        return DaggerSeries.zero()
    guards = [g for g, _, _ in form.pieces]
    faces = arrangement_faces(live + guards, S.n)
    chi_val = 0
    parts: list[DaggerSeries] = []
    for face in faces:
        if not any(face.inside(c) for c in live):
            continue
        owners = [i for i, (g, _, _) in enumerate(form.pieces) if face.inside(g)]
        if len(owners) != 1:
            raise ValueError(
                "form pieces must disjointly cover the set "
                f"(a face hit {len(owners)} guards)")
        _, a, b = form.pieces[owners[0]]
        chi_val += (-1) ** face.dim
        pieces = face_pieces(face)
        if pieces is not None:
            for lo, hi, _ in pieces:
                if lo is None or hi is None:
                    raise UnboundedInputError("zeta_polytope requires a bounded set")
            parts.append(_family_face_series(pieces, a, b).to_dagger())
        else:
            parts.append(_enumerated_face_series(face, a, b, M))
    if not parts:
        return DaggerSeries.zero()
    # balanced reduction keeps common-denominator growth shallow
    while len(parts) > 1:
        parts = [parts[i] + parts[i + 1] if i + 1 < len(parts) else parts[i]
                 for i in range(0, len(parts), 2)]
    total = parts[0].peeled()
    try:
        lim = total.limit()
    except LimitUndefined as exc:
        raise LimitMismatchError(f"zeta series has positive degree: {exc}") from exc
    if lim != LaurentPoly.from_int(-chi_val):
        raise LimitMismatchError(
            f"limit {lim} differs from -chi(S) = {-chi_val}")
    return total


def zeta_terms(S: PolySet, form: AffineFormPW, up_to: int) -> list[LaurentPoly]:
    """s_0..s_up_to by direct lattice enumeration (independent cross-check)."""
    out = [LaurentPoly.zero()]
    for m in range(1, up_to + 1):
        acc: dict[int, int] = {}
        for p in lattice_points(S, m):
            ml = m * form.value_at(p)
            if ml.denominator != 1:
                raise AssertionError("m * l(gamma) must be integral")
            e = -int(ml)
            acc[e] = acc.get(e, 0) + 1
        out.append(LaurentPoly(acc))
    return out
