"""Membership in the dual cone of sums of nonnegative circuit polynomials,
the dual SAGE cone, and the closed-form univariate-quartic oracles.

For one circuit with vertices alpha(1..k) and inner point beta, a vector v
indexed by the support is dual-feasible for that circuit iff there are
v* >= |v_beta| and tau in R^n with

    v* log(v* / v_alpha(j))  <=  (beta - alpha(j)) . tau      for all j

under the extended log conventions at zero.  The tau quantifier is
eliminated by a minimax LP (closed form on a line, a dense two-phase
simplex otherwise); for odd inner points the v* quantifier is handled by
golden-section search on the convex infeasibility profile.  For even inner
points v_beta is itself nonnegative, so v* is pinned to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .circuits import Circuit, CircuitCatalog, enumerate_circuits
from .entropy import DEFAULT_TOL, xlogx_over
from .minimax_lp import minimax_simplex
from .polynomials import DualVector, SupportSet

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DualWitness:
    """A certifying (v*, tau) pair for one circuit's dual condition."""

    circuit_index: int
    v_star: float
    tau: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {"circuit": self.circuit_index, "v_star": self.v_star, "tau": list(self.tau)}


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    witnesses: tuple[DualWitness, ...] = ()
    violated_circuit: Circuit | None = None

    def to_json_dict(self) -> dict:
        if self.member:
            return {"member": True, "witnesses": [w.to_json_dict() for w in self.witnesses]}
        return {
            "member": False,
            "violated_circuit": self.violated_circuit.to_json_dict() if self.violated_circuit else None,
        }


def lp_min_infeasibility(rows: Sequence[tuple[Sequence[float], float]]) -> tuple[float, tuple[float, ...]]:
    """min over tau of max_j (b_j - a_j . tau), plus an attaining tau.

    The epigraph form is always feasible; -inf means every row can be
    satisfied with arbitrarily large slack, and the returned tau already
    clears them all by at least 1.
    """
    if not rows:
        raise ValueError("need at least one row")
    n = len(rows[0][0])
    if any(len(a) != n for a, _ in rows):
        raise ValueError("rows have mismatched dimensions")
    if n == 1:
        return _minimax_line([(float(a[0]), float(b)) for a, b in rows])
    return minimax_simplex([[float(x) for x in a] for a, _ in rows], [float(b) for _, b in rows])


def _minimax_line(rows: list[tuple[float, float]]) -> tuple[float, tuple[float, ...]]:
    """1-D minimax of the lines b_j - a_j * tau.

    The optimum is the largest crossing of a decreasing with an increasing
    line, or the highest flat row; with slopes of one sign only, the value
    runs off to the flat level or to -inf.
    """
    pos = [(a, b) for a, b in rows if a > 0.0]
    neg = [(a, b) for a, b in rows if a < 0.0]
    flat = max((b for a, b in rows if a == 0.0), default=-math.inf)
    best = flat
    best_tau: float | None = None
    for ai, bi in pos:
        for aj, bj in neg:
            val = (ai * bj - aj * bi) / (ai - aj)
            if val > best:
                best = val
                best_tau = (bi - bj) / (ai - aj)
    if best == -math.inf:
        if pos:
            return -math.inf, (max((b + 1.0) / a for a, b in pos),)
        return -math.inf, (min((b + 1.0) / a for a, b in neg),)
    if best_tau is None:
        lo = max(((b - best) / a for a, b in pos), default=-math.inf)
        hi = min(((b - best) / a for a, b in neg), default=math.inf)
        if lo > hi:  # float fuzz at a three-way tie
            best_tau = 0.5 * (lo + hi)
        else:
            best_tau = min(max(0.0, lo), hi)
    return best, (best_tau,)


def circuit_row_infeasibility(circuit: Circuit, v: DualVector, v_star: float) -> tuple[float, tuple[float, ...]]:
    """min over tau of max_j (v* log(v*/v_alpha(j)) - (beta - alpha(j)) . tau).

    +inf when some row is itself +inf, i.e. a zero vertex value with v* > 0.
    """
    rows = []
    for vert in circuit.vertices:
        s = max(v[vert], 0.0)
        b = xlogx_over(float(v_star), s)
        if math.isinf(b):
            return math.inf, (0.0,) * circuit.n
        a = tuple(float(bi - ai) for bi, ai in zip(circuit.inner, vert))
        rows.append((a, b))
    return lp_min_infeasibility(rows)


def circuit_dual_membership(
    circuit: Circuit,
    v: DualVector,
    tol: float = DEFAULT_TOL,
    search_even: bool = False,
) -> tuple[bool, DualWitness | None]:
    """Dual-cone test for a single circuit, with a certifying witness.

    `search_even` also runs the golden-section search over v* >= v_beta for
    even inner points instead of pinning v* = v_beta; the verdict is the
    same either way (pinning is optimal), the flag just exercises it.
    """
    zeros = (0.0,) * circuit.n
    if circuit.k == 1:
        val = v[circuit.vertices[0]]
        if val >= -tol:
            return True, DualWitness(-1, max(val, 0.0), zeros)
        return False, None
    for vert in circuit.vertices:
        if v[vert] < -tol:
            return False, None
    v_beta = v[circuit.inner]
    if circuit.beta_even and v_beta < -tol:
        return False, None
    target = abs(v_beta)
    if target <= 1e-12:
        # Pairings never see v_beta; the closure point with v* = 0 certifies.
        return True, DualWitness(-1, 0.0, zeros)
    if circuit.beta_even and not search_even:
        gap, tau = circuit_row_infeasibility(circuit, v, target)
        if gap <= tol:
            return True, DualWitness(-1, target, tau)
        return False, None

    smax = max(max(v[vert], 0.0) for vert in circuit.vertices)
    hi = 2.0 * max(target, math.e * smax)
    best_gap, best_v, best_tau = math.inf, target, zeros

    def probe(vs: float) -> float:
        nonlocal best_gap, best_v, best_tau
        gap, tau = circuit_row_infeasibility(circuit, v, vs)
        if gap < best_gap:
            best_gap, best_v, best_tau = gap, vs, tau
        return gap

    if probe(target) <= tol:
        return True, DualWitness(-1, best_v, best_tau)
    lo_x, hi_x = target, hi
    x1 = hi_x - _GOLDEN * (hi_x - lo_x)
    x2 = lo_x + _GOLDEN * (hi_x - lo_x)
    f1, f2 = probe(x1), probe(x2)
    for _ in range(200):
        if best_gap <= tol or hi_x - lo_x <= 1e-13 * max(1.0, hi):
            break
        if f1 <= f2:
            hi_x, x2, f2 = x2, x1, f1
            x1 = hi_x - _GOLDEN * (hi_x - lo_x)
            f1 = probe(x1)
        else:
            lo_x, x1, f1 = x1, x2, f2
            x2 = lo_x + _GOLDEN * (hi_x - lo_x)
            f2 = probe(x2)
    if best_gap <= tol:
        return True, DualWitness(-1, best_v, best_tau)
    return False, None


def sonc_dual_membership(
    support: SupportSet,
    v: DualVector,
    tol: float = DEFAULT_TOL,
    catalog: CircuitCatalog | None = None,
) -> MembershipReport:
    """Full dual-cone membership over a support.

    Requires every even-exponent coordinate to be (tol-)nonnegative (the
    single-vertex circuits) and the per-circuit condition for every circuit
    with k >= 2, reported in canonical catalog order.
    """
    if v.support != support:
        raise ValueError("dual vector is not indexed by the given support")
    if catalog is None:
        catalog = enumerate_circuits(support)
    elif catalog.support != support:
        raise ValueError("catalog was built for a different support")
    witnesses = []
    for idx, circuit in enumerate(catalog.circuits):
        if circuit.k == 1:
            if v[circuit.inner] < -tol:
                return MembershipReport(False, (), circuit)
            continue
        ok, wit = circuit_dual_membership(circuit, v, tol)
        if not ok:
            return MembershipReport(False, (), circuit)
        witnesses.append(replace(wit, circuit_index=idx))
    return MembershipReport(True, tuple(witnesses), None)


def quartic_dual_membership(v: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """Closed-form dual-cone test for univariate quartics (support 0..4)."""
    if len(v) != 5:
        raise ValueError("expected a vector of length 5")
    v0, v1, v2, v3, v4 = (float(x) for x in v)
    scale = max(1.0, max(abs(x) for x in (v0, v1, v2, v3, v4)) ** 4)
    thr = -tol * scale
    checks = (
        v0,
        v2,
        v4,
        v0 * v2 - v1 ** 2,
        v0 ** 3 * v4 - v1 ** 4,
        v0 * v4 - v2 ** 2,
        v0 * v4 ** 3 - v3 ** 4,
        v2 * v4 - v3 ** 2,
    )
    return all(x >= thr for x in checks)


def psd_dual_quartic(v: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """Principal-minor test for the 3x3 Hankel moment matrix of (v0..v4)."""
    if len(v) != 5:
        raise ValueError("expected a vector of length 5")
    v0, v1, v2, v3, v4 = (float(x) for x in v)
    scale = max(1.0, max(abs(x) for x in (v0, v1, v2, v3, v4)) ** 4)
    thr = -tol * scale
    checks = (
        v0,
        v2,
        v4,
        v0 * v2 - v1 ** 2,
        v0 * v4 - v2 ** 2,
        v2 * v4 - v3 ** 2,
        v0 * v2 * v4 + 2.0 * v1 * v2 * v3 - v2 ** 3 - v0 * v3 ** 2 - v1 ** 2 * v4,
    )
    return all(x >= thr for x in checks)


def sage_dual_membership(support: SupportSet, v: DualVector, tol: float = DEFAULT_TOL) -> bool:
    """Dual SAGE membership over a finite support: for every index i some
    tau(i) satisfies v_i log(v_i/v_j) <= (alpha(i) - alpha(j)) . tau(i)."""
    if v.support != support:
        raise ValueError("dual vector is not indexed by the given support")
    pts = support.points
    vals = [v[p] for p in pts]
    if any(x < 0.0 for x in vals):
        raise ValueError("dual SAGE vectors must be entrywise nonnegative")
    if len(pts) == 1:
        return True
    for i, (pi, vi) in enumerate(zip(pts, vals)):
        rows = []
        blocked = False
        for j, (pj, vj) in enumerate(zip(pts, vals)):
            if i == j:
                continue
            b = xlogx_over(vi, vj)
            if math.isinf(b):
                blocked = True
                break
            rows.append((tuple(float(x - y) for x, y in zip(pi, pj)), b))
        if blocked:
            return False
        gap, _ = lp_min_infeasibility(rows)
        if gap > tol:
            return False
    return True
