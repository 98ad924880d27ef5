"""Exact solution counts for jet constraint systems over finite fields.

count_points reduces the level system symbolically: forced values and
linear eliminations propagate exactly, branches that split on whether a
coefficient vanishes recombine by inclusion-exclusion, and the final one-
or two-variable residue is counted with vectorized field arithmetic.
Variables no solved equation touches contribute plain powers of q.
naive_count enumerates the full grid and is the reference oracle.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping

import numpy as np

from ..errors import ResourceLimitError
from .gf import make_field
from .system import JetConstraintSystem

GRID_CAP = 2_000_000
_CHUNK = 1 << 17


class _Budget:
    __slots__ = ("left", "memo")

    def __init__(self, n: int):
        self.left = n
        # inclusion-exclusion branches revisit identical subsystems
        self.memo: dict = {}

    def spend(self, n: int) -> None:
        self.left -= n
        if self.left < 0:
            raise ResourceLimitError("count budget exhausted")


class FP:
    """Polynomial over a finite field: {exponent tuple: nonzero element}."""

    __slots__ = ("F", "n", "c")

    def __init__(self, F, n: int, c: dict):
        self.F = F
        self.n = n
        self.c = c

    @classmethod
    def from_int_poly(cls, F, poly) -> "FP":
        c = {}
        for e, v in poly.items():
            fv = F.from_int(v)
            if fv:
                c[tuple(e)] = fv
        return cls(F, poly.n_vars, c)

    @classmethod
    def const(cls, F, n: int, value: int) -> "FP":
        return cls(F, n, {(0,) * n: value} if value else {})

    def is_zero(self) -> bool:
        return not self.c

    def const_value(self) -> int | None:
        """The field element if the polynomial is constant, else None."""
        if not self.c:
            return 0
        if len(self.c) == 1:
            (e, v), = self.c.items()
            if not any(e):
                return v
        return None

    def vars_used(self) -> frozenset:
        return frozenset(i for e in self.c for i, k in enumerate(e) if k)

    def deg_in(self, v: int) -> int:
        return max((e[v] for e in self.c), default=0)

    def coeffs_by_power(self, v: int) -> dict[int, "FP"]:
        out: dict[int, dict] = {}
        for e, c in self.c.items():
            rest = e[:v] + (0,) + e[v + 1:]
            out.setdefault(e[v], {})[rest] = c
        return {d: FP(self.F, self.n, m) for d, m in out.items()}

    def single_term(self):
        if len(self.c) == 1:
            (e, v), = self.c.items()
            return e, v
        return None

    def add(self, other: "FP") -> "FP":
        F = self.F
        c = dict(self.c)
        for e, v in other.c.items():
            w = F.add(c.get(e, 0), v)
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        return FP(F, self.n, c)

    def neg(self) -> "FP":
        F = self.F
        return FP(F, self.n, {e: F.neg(v) for e, v in self.c.items()})

    def scale(self, elt: int) -> "FP":
        if elt == 0:
            return FP(self.F, self.n, {})
        F = self.F
        return FP(F, self.n, {e: F.mul(v, elt) for e, v in self.c.items()})

    def mul(self, other: "FP") -> "FP":
        F = self.F
        c: dict = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                w = F.add(c.get(e, 0), F.mul(v1, v2))
                if w:
                    c[e] = w
                else:
                    c.pop(e, None)
        return FP(F, self.n, c)

    def pow(self, k: int) -> "FP":
        out = FP.const(self.F, self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out

    def substitute(self, v: int, rep: "FP") -> "FP":
        """Plug rep in for variable v (Horner on the power grouping)."""
        by = self.coeffs_by_power(v)
        top = max(by)
        acc = FP(self.F, self.n, {})
        for d in range(top, -1, -1):
            if d != top:
                acc = acc.mul(rep)
            if d in by:
                acc = acc.add(by[d])
        return acc

    def cleared_substitute(self, v: int, r: "FP", cpoly: "FP") -> "FP":
        """c^D * self with v replaced by -r/c, D = deg_v(self); polynomial."""
        by = self.coeffs_by_power(v)
        D = max(by)
        neg_r = r.neg()
        acc = FP(self.F, self.n, {})
        for d, hd in by.items():
            term = hd.mul(neg_r.pow(d)).mul(cpoly.pow(D - d))
            acc = acc.add(term)
        return acc

    def evaluate_vec(self, coords: Mapping[int, np.ndarray],
                     npoints: int) -> np.ndarray:
        F = self.F
        acc = np.zeros(npoints, dtype=np.int64)
        for e, c in self.c.items():
            term: np.ndarray | None = None
            for v, k in enumerate(e):
                if k:
                    f = F.pow_v(coords[v], k)
                    term = f if term is None else F.mul_v(term, f)
            if term is None:
                term = np.full(npoints, c, dtype=np.int64)
            else:
                term = F.mulc_v(term, c)
            acc = F.add_v(acc, term)
        return acc


def _fold_system(sys: JetConstraintSystem, F) -> list[FP]:
    """Level equations as field polynomials equal to zero."""
    eqs = []
    for g, t in zip(sys.level_polys, sys.targets):
        e = FP.from_int_poly(F, g).add(FP.const(F, sys.n_jet_vars, F.from_int(-t)))
        eqs.append(e)
    return eqs


def _uni_roots(eq: FP, v: int, budget: _Budget) -> list[int]:
    """All roots of a univariate equation by vectorized scan."""
    F = eq.F
    st = eq.single_term()
    if st is not None:
        # c * v^d = 0 forces v = 0
        return [0]
    budget.spend(F.q * len(eq.c) // 16 + 1)
    vals = eq.evaluate_vec({v: F.all_elements()}, F.q)
    return [int(x) for x in np.nonzero(vals == 0)[0]]


def _chi2_pair_count(eq: FP, v: int, w: int, budget: _Budget) -> int:
    """Points of one equation in two variables, quadratic in v.

    For each value of w the v-count is the usual quadratic root count
    through the quadratic character of the discriminant.
    """
    F = eq.F
    q = F.q
    budget.spend(q * (len(eq.c) + 4) // 16 + 1)
    by = eq.coeffs_by_power(v)
    coords = {w: F.all_elements()}
    zero = np.zeros(q, dtype=np.int64)
    A = by[2].evaluate_vec(coords, q) if 2 in by else zero
    B = by[1].evaluate_vec(coords, q) if 1 in by else zero
    C = by[0].evaluate_vec(coords, q) if 0 in by else zero
    disc = F.add_v(F.mul_v(B, B),
                   F.mulc_v(F.mul_v(A, C), F.neg(F.from_int(4))))
    counts = np.zeros(q, dtype=np.int64)
    quad = A != 0
    counts[quad] = 1 + F.chi2_v(disc[quad])
    lin = (~quad) & (B != 0)
    counts[lin] = 1
    degen = (~quad) & (~lin)
    counts[degen] = np.where(C[degen] == 0, q, 0)
    return int(counts.sum())


def _grid_count(eqs: list[FP], vs: list[int], F, budget: _Budget) -> int:
    """Chunked full enumeration over the listed variables."""
    q = F.q
    total = q ** len(vs)
    nterms = sum(len(e.c) for e in eqs) + 1
    budget.spend(total * nterms // 16 + 1)
    count = 0
    start = 0
    while start < total:
        width = min(_CHUNK, total - start)
        idx = np.arange(start, start + width, dtype=np.int64)
        coords: dict[int, np.ndarray] = {}
        rem = idx
        for v in vs:
            coords[v] = rem % q
            rem = rem // q
        mask = np.ones(width, dtype=bool)
        for e in eqs:
            mask &= e.evaluate_vec(coords, width) == 0
            if not mask.any():
                break
        count += int(mask.sum())
        start += width
    return count


def _quad_private_grid(eqs: list[FP], i: int, v: int, vs: list[int],
                       F, budget: _Budget) -> int:
    """Grid over vs, counting roots of eqs[i] (quadratic in v) pointwise.

    v must appear in no other equation, so each grid point satisfying the
    other equations contributes its quadratic v-root count 1 + chi2(disc).
    """
    q = F.q
    by = eqs[i].coeffs_by_power(v)
    others = eqs[:i] + eqs[i + 1:]
    total = q ** len(vs)
    nterms = sum(len(e.c) for e in eqs) + 6
    budget.spend(total * nterms // 16 + 1)
    minus4 = F.neg(F.from_int(4))
    count = 0
    start = 0
    while start < total:
        width = min(_CHUNK, total - start)
        idx = np.arange(start, start + width, dtype=np.int64)
        coords: dict[int, np.ndarray] = {}
        rem = idx
        for w in vs:
            coords[w] = rem % q
            rem = rem // q
        mask = np.ones(width, dtype=bool)
        for e in others:
            mask &= e.evaluate_vec(coords, width) == 0
            if not mask.any():
                break
        start += width
        if not mask.any():
            continue
        zero = np.zeros(width, dtype=np.int64)
        A = by[2].evaluate_vec(coords, width) if 2 in by else zero
        B = by[1].evaluate_vec(coords, width) if 1 in by else zero
        C = by[0].evaluate_vec(coords, width) if 0 in by else zero
        disc = F.add_v(F.mul_v(B, B), F.mulc_v(F.mul_v(A, C), minus4))
        counts = np.zeros(width, dtype=np.int64)
        quad = mask & (A != 0)
        counts[quad] = 1 + F.chi2_v(disc[quad])
        lin = mask & (A == 0) & (B != 0)
        counts[lin] = 1
        degen = mask & (A == 0) & (B == 0)
        counts[degen] = np.where(C[degen] == 0, q, 0)
        count += int(counts.sum())
    return count


def _solve(eqs: Iterable[FP], live: frozenset, F, budget: _Budget) -> int:
    eqs = list(eqs)
    key = (frozenset(tuple(sorted(e.c.items())) for e in eqs), live)
    hit = budget.memo.get(key)
    if hit is not None:
        return hit
    out = _solve_uncached(eqs, live, F, budget)
    budget.memo[key] = out
    return out


def _solve_uncached(eqs: list[FP], live: frozenset, F, budget: _Budget) -> int:
    budget.spend(10)
    q = F.q
    work: list[FP] = []
    for e in eqs:
        cv = e.const_value()
        if cv is None:
            work.append(e)
        elif cv != 0:
            return 0
    used: set = set()
    for e in work:
        used |= e.vars_used()
    factor = q ** (len(live) - len(used))
    if not work:
        return factor
    live = frozenset(used)

    def recurse(new_eqs: list[FP], drop: int | None) -> int:
        sub_live = live - {drop} if drop is not None else live
        return _solve(new_eqs, sub_live, F, budget)

    # univariate equations: substitute roots, or just count if the
    # variable appears nowhere else
    for i, e in enumerate(work):
        vs = e.vars_used()
        if len(vs) != 1:
            continue
        (v,) = vs
        used_elsewhere = any(v in o.vars_used()
                             for j, o in enumerate(work) if j != i)
        rest = work[:i] + work[i + 1:]
        roots = _uni_roots(e, v, budget)
        if not roots:
            return 0
        if not used_elsewhere:
            return factor * len(roots) * recurse(rest, v)
        total = 0
        for r in roots:
            total += recurse([o.substitute(v, FP.const(F, o.n, r))
                              for o in rest], v)
        return factor * total

    # linear variable with a constant coefficient: exact elimination
    for i, e in enumerate(work):
        for v in sorted(e.vars_used()):
            if e.deg_in(v) != 1:
                continue
            by = e.coeffs_by_power(v)
            c = by[1].const_value()
            if c is None:
                continue
            r = by.get(0, FP(F, e.n, {}))
            rep = r.scale(F.neg(F.inv(c)))
            rest = [o.substitute(v, rep) if v in o.vars_used() else o
                    for j, o in enumerate(work) if j != i]
            return factor * recurse(rest, v)

    # quadratic variable with constant leading coefficient and a
    # discriminant of the shape (constant) * (monomial)^2
    if q % 2:
        for i, e in enumerate(work):
            for v in sorted(e.vars_used()):
                if e.deg_in(v) != 2:
                    continue
                by = e.coeffs_by_power(v)
                alpha = by[2].const_value()
                if alpha is None:
                    continue
                beta = by.get(1, FP(F, e.n, {}))
                gamma = by.get(0, FP(F, e.n, {}))
                disc = beta.mul(beta).add(
                    gamma.scale(F.neg(F.mul(F.from_int(4), alpha))))
                inv2a = F.inv(F.add(alpha, alpha))
                center = beta.scale(F.neg(inv2a))
                rest = [o for j, o in enumerate(work) if j != i]
                if disc.is_zero():
                    sub = [o.substitute(v, center) if v in o.vars_used() else o
                           for o in rest]
                    return factor * recurse(sub, v)
                st = disc.single_term()
                if st is None:
                    continue
                ed, d = st
                if any(k % 2 for k in ed):
                    continue
                half = tuple(k // 2 for k in ed)
                M = FP(F, e.n, {half: 1})
                chi = F.chi2(d)
                if chi == 1:
                    s0 = F.sqrt(d)
                    total = 0
                    for sgn_root in (s0, F.neg(s0)):
                        root = center.add(M.scale(F.mul(sgn_root, inv2a)))
                        sub = [o.substitute(v, root) if v in o.vars_used()
                               else o for o in rest]
                        total += recurse(sub, v)
                    root = center.add(M.scale(F.mul(s0, inv2a)))
                    overlap = [o.substitute(v, root) if v in o.vars_used()
                               else o for o in rest] + [M]
                    total -= recurse(overlap, v)
                    return factor * total
                # non-square constant: roots exist only where M vanishes
                sub = [o.substitute(v, center) if v in o.vars_used() else o
                       for o in rest] + [M]
                return factor * recurse(sub, v)

    # linear variable with polynomial coefficient: split on the
    # coefficient vanishing and recombine with signs
    for i, e in enumerate(work):
        for v in sorted(e.vars_used()):
            if e.deg_in(v) != 1:
                continue
            by = e.coeffs_by_power(v)
            c = by[1]
            r = by.get(0, FP(F, e.n, {}))
            rest = [o for j, o in enumerate(work) if j != i]
            sub = [o.cleared_substitute(v, r, c) if v in o.vars_used() else o
                   for o in rest]
            total = recurse(sub, v)
            total -= recurse(sub + [c], v)
            total += _solve(rest + [c, r], live, F, budget)
            return factor * total

    # two-variable single equation, quadratic in one of them
    if len(used) == 2 and len(work) == 1 and q % 2:
        v1, v2 = sorted(used)
        e = work[0]
        for v, w in ((v1, v2), (v2, v1)):
            if e.deg_in(v) <= 2:
                return factor * _chi2_pair_count(e, v, w, budget)

    # variable quadratic in one equation and absent from the rest:
    # eliminate it by pointwise root counts over a grid of the others
    if q % 2:
        for i, e in enumerate(work):
            for v in sorted(e.vars_used()):
                if e.deg_in(v) != 2:
                    continue
                if any(v in o.vars_used()
                       for j, o in enumerate(work) if j != i):
                    continue
                rest_vars = sorted(used - {v})
                if q ** len(rest_vars) <= GRID_CAP:
                    return factor * _quad_private_grid(
                        work, i, v, rest_vars, F, budget)

    if q ** len(used) <= GRID_CAP:
        return factor * _grid_count(work, sorted(used), F, budget)

    raise ResourceLimitError(
        f"no applicable reduction for {len(work)} equations in "
        f"{len(used)} variables over a field of size {q}")


def count_points(sys: JetConstraintSystem, q: int,
                 node_budget: int = 1_000_000_000) -> int:
    """Number of F_q points of the level system; exact."""
    F = make_field(q)
    budget = _Budget(node_budget)
    eqs = _fold_system(sys, F)
    live = frozenset(range(sys.n_jet_vars))
    return _solve(eqs, live, F, budget)


def naive_count(sys: JetConstraintSystem, q: int,
                space_cap: int = 10_000_000) -> int:
    """Reference count by full enumeration of the jet space."""
    if sys.search_space(q) > space_cap:
        raise ResourceLimitError(
            f"search space {sys.search_space(q)} exceeds the cap {space_cap}")
    F = make_field(q)
    eqs = [e for e in _fold_system(sys, F) if not e.is_zero()]
    for e in eqs:
        cv = e.const_value()
        if cv is not None and cv != 0:
            return 0
    eqs = [e for e in eqs if e.const_value() is None]
    budget = _Budget(1 << 62)
    return _grid_count(eqs, list(range(sys.n_jet_vars)), F, budget)
