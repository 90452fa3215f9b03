"""Re-derivation of complex-kick BAB schemes.

Fixing real, palindromic flow coefficients a_i leaves the kick coefficients
b_i free to solve the order-condition polynomials.  The resulting small
polynomial systems (2 or 3 complex unknowns after symmetry reduction and
consistency elimination) are solved by multi-start Newton iteration with
the analytic Jacobian; the free parameter a_1 of the 4-stage family is then
tuned to minimise |Re(p_abaaa)|, the real part being what survives the
post-step projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DesignScanUnreliable, NoSolutionFound, NoStableSolution
from .order_conditions import order_poly_jacobian, order_polys
from .schemes import Scheme

NEWTON_TOL = 1e-14
NEWTON_MAXITER = 50
DEDUP_DIST = 1e-8


@dataclass
class DesignProblem:
    stages: int                  # 4 or 6
    fixed_a: tuple               # reduced real a values: (a1,) or (a1, a2, a3)

    def __post_init__(self):
        if self.stages == 4:
            if len(self.fixed_a) == 1:
                self.fixed_a = (self.fixed_a[0], 0.5 - self.fixed_a[0])
            if len(self.fixed_a) != 2 or abs(sum(self.fixed_a) - 0.5) > 1e-13:
                raise ValueError("4-stage design needs a1 (a2 = 1/2 - a1)")
        elif self.stages == 6:
            if len(self.fixed_a) != 3 or abs(sum(self.fixed_a) - 0.5) > 1e-13:
                raise ValueError("6-stage design needs (a1, a2, a3) with sum 1/2")
        else:
            raise ValueError("only 4- and 6-stage designs are supported")
        if any(not 0.0 < ai < 1.0 for ai in self.fixed_a):
            raise ValueError("fixed a values must lie in (0, 1)")

    @property
    def n_unknowns(self):
        return self.stages // 2

    @property
    def n_conditions(self):
        # p_aba, p_abb for 4 stages; plus p_abaaa for 6
        return self.stages // 2

    def kick_nodes(self):
        """Nodes of the m+1 kicks of the symmetric BAB composition."""
        half = np.cumsum(np.concatenate(([0.0], self.fixed_a)))
        full = np.concatenate((half, (1.0 - half[:-1])[::-1]))
        return full

    def full_b(self, bu):
        """Expand unknowns (b_1..b_k) into the palindromic kick vector."""
        bu = np.asarray(bu, dtype=complex)
        center = 1.0 - 2.0 * bu.sum()
        return np.concatenate((bu, [center], bu[::-1]))


@dataclass
class DesignSolution:
    b: tuple                     # symmetry-reduced kicks incl. the centre value
    residual_norm: float
    re_p_abaaa: float
    all_solutions: list = field(default_factory=list)

    def scheme(self, problem, name="designed"):
        return Scheme(name, "BAB", problem.stages, tuple(problem.fixed_a),
                      tuple(self.b), 4, True)


def _system(problem, bu):
    b = problem.full_b(bu)
    c = problem.kick_nodes()
    polys = order_polys(b, c)
    res = np.array(polys[:problem.n_conditions], dtype=complex)
    full_jac = order_poly_jacobian(b, c)[:problem.n_conditions]
    k = problem.n_unknowns
    m1 = len(b)
    jac = np.empty((problem.n_conditions, k), dtype=complex)
    for j in range(k):
        # unknown j sits at positions j and m1-1-j; the centre kick
        # carries -2 of every unknown through consistency elimination
        jac[:, j] = full_jac[:, j] + full_jac[:, m1 - 1 - j] - 2.0 * full_jac[:, k]
    return res, jac, b, polys


def _newton(problem, b0):
    bu = np.asarray(b0, dtype=complex)
    res, jac, _, _ = _system(problem, bu)
    rnorm = np.abs(res).max()
    for _ in range(NEWTON_MAXITER):
        if rnorm < NEWTON_TOL:
            return bu, rnorm
        try:
            delta = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError:
            return None, rnorm
        scale = 1.0
        for _ in range(20):
            trial = bu - scale * delta
            tres, tjac, _, _ = _system(problem, trial)
            tnorm = np.abs(tres).max()
            if tnorm < rnorm or rnorm < NEWTON_TOL:
                break
            scale *= 0.5
        else:
            return None, rnorm
        bu, res, jac, rnorm = trial, tres, tjac, tnorm
    return (bu, rnorm) if rnorm < NEWTON_TOL else (None, rnorm)


def solve_b(problem, starts=64, seed=0):
    """Solve the order conditions for the kicks of a fixed-a BAB design."""
    rng = np.random.default_rng(seed)
    k = problem.n_unknowns
    found = []
    for _ in range(starts):
        radius = np.sqrt(rng.uniform(size=k))
        angle = rng.uniform(0.0, 2.0 * np.pi, size=k)
        b0 = radius * np.exp(1j * angle)
        bu, rnorm = _newton(problem, b0)
        if bu is None:
            continue
        if all(np.abs(bu - prev).max() > DEDUP_DIST for prev in found):
            found.append(bu)
    if not found:
        raise NoSolutionFound(
            f"no converged solution in {starts} Newton starts (stages={problem.stages})")
    found.sort(key=lambda z: (z[0].real, z[0].imag))
    all_reduced = [tuple(problem.full_b(bu)[:k + 1]) for bu in found]
    accepted = [bu for bu in found if problem.full_b(bu).real.min() > 0.0]
    if not accepted:
        raise NoStableSolution("all solutions have some Re(b_i) <= 0", all_reduced)
    # canonical branch: Im(b1) <= 0 picks one of the conjugate pair deterministically
    best = min(accepted, key=lambda z: z[0].imag)
    if best[0].imag > 0.0:
        best = np.conjugate(best)
    res, _, b_full, polys = _system(problem, best)
    return DesignSolution(
        b=tuple(b_full[:k + 1]),
        residual_norm=float(np.abs(res).max()),
        re_p_abaaa=float(polys[2].real),
        all_solutions=all_reduced,
    )


OBJECTIVES = {
    # "re": the default objective.  Minimising the signed real part
    # locates the interior stationary point of Re(p_abaaa); the |Re| global
    # minimum is a sign crossing elsewhere in (0, 1/2) and not a useful
    # design point.
    "re": lambda sol: sol.re_p_abaaa,
    "abs_re": lambda sol: abs(sol.re_p_abaaa),
}

_SENTINEL_FAIL = object()


def _objective(a1, starts, seed, measure):
    try:
        sol = solve_b(DesignProblem(4, (a1, 0.5 - a1)), starts=starts, seed=seed)
    except NoStableSolution:
        return None            # solved, but inadmissible: excluded, not a failure
    except NoSolutionFound:
        return _SENTINEL_FAIL
    return measure(sol)


def scan_a1(grid_points=200, refine_tol=1e-10, starts=24, seed=0, margin=1e-3,
            objective="re"):
    """Grid-then-golden-section minimisation of the p_abaaa objective over a1."""
    measure = OBJECTIVES[objective] if isinstance(objective, str) else objective
    grid = np.linspace(margin, 0.5 - margin, grid_points)
    values = [_objective(a1, starts, seed, measure) for a1 in grid]
    failures = sum(v is _SENTINEL_FAIL for v in values)
    if failures > 0.1 * grid_points:
        raise DesignScanUnreliable(
            f"{failures}/{grid_points} grid points failed to solve")
    usable = [(v, a1) for v, a1 in zip(values, grid)
              if v is not None and v is not _SENTINEL_FAIL]
    if not usable:
        raise DesignScanUnreliable("no admissible solution anywhere on the grid")
    _, a_best = min(usable)
    idx = int(np.argmin(np.abs(grid - a_best)))
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, grid_points - 1)]

    def fval(x):
        v = _objective(x, starts, seed, measure)
        return np.inf if v is None or v is _SENTINEL_FAIL else v

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = fval(x1), fval(x2)
    while hi - lo > refine_tol:
        if f2 < f1:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = fval(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = fval(x1)
    a1_opt = 0.5 * (lo + hi)
    # golden section is noise-limited near a flat quadratic minimum; a few
    # successive parabolic-vertex fits recover the last digits
    for delta in (1e-3, 1e-4, 1e-5):
        f0, f1_, f2_ = fval(a1_opt - delta), fval(a1_opt), fval(a1_opt + delta)
        denom = f0 - 2.0 * f1_ + f2_
        if np.isfinite(denom) and denom > 0.0:
            shift = 0.5 * delta * (f0 - f2_) / denom
            if abs(shift) < 2.0 * delta:
                a1_opt = a1_opt + shift
    sol = solve_b(DesignProblem(4, (a1_opt, 0.5 - a1_opt)), starts=starts, seed=seed)
    return a1_opt, sol
