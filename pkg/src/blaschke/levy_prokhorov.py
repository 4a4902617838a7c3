"""Levy-Prokhorov distance between finite measures on the sphere.

For eps > 0 the pair (mu, nu) is feasible when mu(A) <= nu(A_eps) + eps and
nu(A) <= mu(A_eps) + eps for every Borel A, where A_eps is the open chordal
eps-neighbourhood.  For atomic measures the worst set is a union of atoms, and

    max_A mu(A) - nu(A_eps) = mu(S^{n-1}) - F,

where F is the maximum flow through the bipartite graph joining atoms at
chordal distance < eps (source capacities mu_i, sink capacities nu_j).  The same
flow serves the reversed inequality, whose deficiency is nu(S^{n-1}) - F.

The deficiency only changes when eps crosses a pairwise atom distance, so the
infimum is found exactly by searching these critical levels rather than by
bisecting on eps.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .bodies import DiscreteSphericalMeasure, Polytope, surface_area_measure
from .projection import Zonotope, generating_measure

__all__ = [
    "LpDistanceResult",
    "lp_feasible",
    "lp_distance",
    "delta_lp",
    "delta_bar_lp",
    "WEIGHT_SCALE",
]

# weights enter the flow as integers, so flow values are exact
WEIGHT_SCALE = 10 ** 12


@dataclass(frozen=True)
class LpDistanceResult:
    """``value`` is the infimum; ``certificate_eps`` is a feasible eps within
    ``bisection_tolerance`` of it (the infimum itself is not always attained)."""

    value: float
    certificate_eps: float
    bisection_tolerance: float

    def __float__(self):
        return self.value


class _Flow:
    """Integer max-flow on a bipartite graph whose middle edges are uncapacitated.

    Edges may be added at any time; the current flow stays feasible, so the
    maximum is recomputed by augmenting from where it stood.
    """

    def __init__(self, a, b):
        self.a = list(a)
        self.b = list(b)
        self.adj = [set() for _ in self.a]
        self.radj = [set() for _ in self.b]
        self.flow = {}
        self.out_a = [0] * len(self.a)
        self.in_b = [0] * len(self.b)
        self.value = 0

    def copy(self) -> "_Flow":
        c = _Flow.__new__(_Flow)
        c.a, c.b = self.a, self.b
        c.adj = [set(s) for s in self.adj]
        c.radj = [set(s) for s in self.radj]
        c.flow = dict(self.flow)
        c.out_a, c.in_b = list(self.out_a), list(self.in_b)
        c.value = self.value
        return c

    def add_edges(self, pairs):
        for i, j in pairs:
            self.adj[i].add(j)
            self.radj[j].add(i)

    def _augment_once(self) -> bool:
        # BFS over left nodes; reach a right node with spare sink capacity
        parent = {}
        queue = deque(i for i in range(len(self.a)) if self.out_a[i] < self.a[i])
        seen_a = set(queue)
        seen_b = set()
        for i in queue:
            parent[("a", i)] = None
        while queue:
            i = queue.popleft()
            for j in self.adj[i]:
                if j in seen_b:
                    continue
                seen_b.add(j)
                parent[("b", j)] = i
                if self.in_b[j] < self.b[j]:
                    self._push(parent, j)
                    return True
                # walk back along an edge that already carries flow into j
                for i2 in self.radj[j]:
                    if i2 not in seen_a and self.flow.get((i2, j), 0) > 0:
                        seen_a.add(i2)
                        parent[("a", i2)] = j
                        queue.append(i2)
        return False

    def _push(self, parent, j_end):
        # collect the alternating path, then push its bottleneck
        path = []
        j = j_end
        while True:
            i = parent[("b", j)]
            path.append((i, j))
            back = parent[("a", i)]
            if back is None:
                break
            path.append((i, back, "rev"))
            j = back
        i_start = path[-1][0]
        amount = min(self.a[i_start] - self.out_a[i_start], self.b[j_end] - self.in_b[j_end])
        for step in path:
            if len(step) == 3:
                amount = min(amount, self.flow[(step[0], step[1])])
        for step in path:
            key = (step[0], step[1])
            if len(step) == 3:
                self.flow[key] -= amount
            else:
                self.flow[key] = self.flow.get(key, 0) + amount
        self.out_a[i_start] += amount
        self.in_b[j_end] += amount
        self.value += amount

    def maximize(self) -> int:
        while self._augment_once():
            pass
        return self.value


def _integer_weights(mu):
    return [int(round(w * WEIGHT_SCALE)) for w in mu.weights]


def _chords(mu, nu):
    return np.linalg.norm(mu.directions[:, None, :] - nu.directions[None, :, :], axis=2)


def _check_pair(mu, nu):
    if not isinstance(mu, DiscreteSphericalMeasure) or not isinstance(nu, DiscreteSphericalMeasure):
        raise TypeError("measures required")
    if len(mu) and len(nu) and mu.dim != nu.dim:
        raise ValueError("dimension mismatch")


def lp_feasible(mu: DiscreteSphericalMeasure, nu: DiscreteSphericalMeasure, eps: float) -> bool:
    """Whether both Levy-Prokhorov inequalities hold at ``eps`` for every set."""
    _check_pair(mu, nu)
    if not eps > 0:
        raise ValueError("eps must be positive")
    a, b = _integer_weights(mu), _integer_weights(nu)
    flow = _Flow(a, b)
    if len(a) and len(b):
        flow.add_edges(zip(*np.nonzero(_chords(mu, nu) < eps)))
    f = flow.maximize()
    slack = int(round(eps * WEIGHT_SCALE))
    return sum(a) - f <= slack and sum(b) - f <= slack


def lp_distance(mu: DiscreteSphericalMeasure, nu: DiscreteSphericalMeasure,
                tol: float = 1e-9) -> LpDistanceResult:
    """The Levy-Prokhorov distance, exact up to the integer weight quantization.

    For eps in (d_k, d_{k+1}] between consecutive distinct atom distances the
    graph is fixed, so the pair is feasible there iff eps >= D_k, the larger
    deficiency.  The first level with D_k <= d_{k+1} gives the infimum
    max(d_k, D_k); levels are searched by bisection since that condition is
    monotone in k.
    """
    _check_pair(mu, nu)
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = _integer_weights(mu), _integer_weights(nu)
    ta, tb = sum(a), sum(b)
    if not len(a) or not len(b):
        v = max(ta, tb) / WEIGHT_SCALE
        return LpDistanceResult(v, v + tol, tol)
    d = _chords(mu, nu)
    levels = np.unique(np.concatenate([[0.0], d.ravel()]))
    order = np.argsort(d, axis=None)
    dsorted = d.ravel()[order]
    pairs = np.column_stack(np.unravel_index(order, d.shape))

    def upper(k):
        return levels[k + 1] if k + 1 < len(levels) else np.inf

    def deficiency(flow):
        return max(ta - flow.value, tb - flow.value) / WEIGHT_SCALE

    def flow_at(k, base, base_k):
        # edges with distance <= levels[k], warm-started from the flow at base_k
        lo = 0 if base_k < 0 else np.searchsorted(dsorted, levels[base_k], side="right")
        hi = np.searchsorted(dsorted, levels[k], side="right")
        f = base.copy()
        f.add_edges(map(tuple, pairs[lo:hi]))
        f.maximize()
        return f

    empty = _Flow(a, b)
    lo_k, lo_flow = -1, empty  # largest level known to fail
    hi_k = len(levels) - 1     # the last level always succeeds
    hi_flow = None
    while hi_k - lo_k > 1:
        mid = (lo_k + hi_k) // 2
        f = flow_at(mid, lo_flow, lo_k)
        if deficiency(f) <= upper(mid):
            hi_k, hi_flow = mid, f
        else:
            lo_k, lo_flow = mid, f
    if hi_flow is None:
        hi_flow = flow_at(hi_k, lo_flow, lo_k)
    dk = deficiency(hi_flow)
    value = float(max(levels[hi_k], dk))
    if dk > levels[hi_k]:
        cert = dk
    else:
        cert = float(min(levels[hi_k] + tol, 0.5 * (levels[hi_k] + upper(hi_k))))
    return LpDistanceResult(value, float(cert), tol)


def delta_lp(k: Polytope, l: Polytope, tol: float = 1e-9) -> float:
    """Levy-Prokhorov distance of the surface area measures."""
    return lp_distance(surface_area_measure(k), surface_area_measure(l), tol).value


def delta_bar_lp(y: Zonotope, z: Zonotope, tol: float = 1e-9) -> float:
    """Levy-Prokhorov distance of the generating measures."""
    return lp_distance(generating_measure(y), generating_measure(z), tol).value
