"""The three benchmark problems and their high-accuracy reference oracle.

Each problem supplies the frozen-exponential kernel for the dominant part,
a B-kick valid for complex durations (closed forms, analytically continued
in the duration), the full unsplit right-hand side for the classical
cross-check integrator, initial data, and default parameters.
"""

from __future__ import annotations

import hashlib
import math
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ReferenceInconsistent, StepFailed
from .propagators import CirculantLaplacian, exp_2x2, exp_circulant
from .schemes import builtin_scheme

TWO_PI = 2.0 * math.pi

# reference-oracle recipe
REF_SPLIT_STEPS = 2 ** 16
REF_OSC_RK4_STEPS = 2 ** 20
REF_PDE_RK4_MIN_STEPS = 2 ** 12
REF_AGREE_TOL = 1e-10
REF_MAGIC = b"CXSPLITR"


@dataclass
class OscillatorProblem:
    """Perturbed oscillator: q'' + Omega(t)^2 q = -eps * sum_j sin(q - omega_j t)."""

    epsilon: float = 0.25
    s: int = 3
    q0: float = 0.0
    p0: float = 11.2075
    t0: float = 0.0
    tf: float = TWO_PI

    commuting = False
    dim = 2

    def __post_init__(self):
        self.omega_j = [7.0 * j for j in range(1, self.s + 1)]

    @staticmethod
    def big_omega(t):
        return 1.0 + 0.5 * math.cos(1.5 * t)

    def u0(self):
        return np.array([self.q0, self.p0], dtype=complex)

    def a_frozen_exp(self, times, weights, duration, state):
        omega_sq = sum(w * self.big_omega(t) ** 2 for t, w in zip(times, weights))
        q, p = exp_2x2(omega_sq, duration, (state[0], state[1]))
        return np.array([q, p], dtype=complex)

    def b_kick(self, t_frozen, tau, state):
        q, p = state[0], state[1]
        kick = sum(np.sin(q - w * t_frozen) for w in self.omega_j)
        return np.array([q, p - tau * self.epsilon * kick], dtype=complex)

    def rhs(self, t, u):
        q, p = u
        force = -self.big_omega(t) ** 2 * q \
            - self.epsilon * sum(np.sin(q - w * t) for w in self.omega_j)
        return np.array([p, force], dtype=u.dtype)

    def key(self):
        return "osc"

    def params(self):
        return ("osc", self.epsilon, self.s, self.q0, self.p0, self.t0, self.tf)


@dataclass
class ParabolicProblem:
    """u_t = alpha(t)^2 Lap u + V(x, t) u on the periodic unit interval."""

    n_grid: int = 100
    mu: float = 1.0 / 6.0
    w: float = 2.0
    t0: float = 0.0
    tf: float = 1.0

    commuting = True

    def __post_init__(self):
        self.dx = 1.0 / self.n_grid
        self.x = self.dx * np.arange(1, self.n_grid + 1)
        self.lap = CirculantLaplacian(self.n_grid, self.dx)
        self.dim = self.n_grid

    def alpha(self, t):
        return 0.25 + self.mu * math.cos(self.w * t)

    def potential(self, t):
        return 0.1 * (3.0 * (1.0 - math.exp(-t)) + np.sin(TWO_PI * self.x))

    def u0(self):
        return np.sin(TWO_PI * self.x).astype(complex)

    def a_frozen_exp(self, times, weights, duration, state):
        coeff = sum(w * self.alpha(t) ** 2 for t, w in zip(times, weights))
        return exp_circulant(self.lap, duration * coeff, state)

    def a_exact_flow(self, t0, h, state):
        # exact non-autonomous flow: exp(int_t0^{t0+h} alpha(s)^2 ds * Lap)
        nodes, wts = np.polynomial.legendre.leggauss(20)
        s = t0 + 0.5 * h * (nodes + 1.0)
        integral = 0.5 * h * sum(w * self.alpha(t) ** 2 for t, w in zip(s, wts))
        return exp_circulant(self.lap, integral, state)

    def b_kick(self, t_frozen, tau, state):
        return state * np.exp(tau * self.potential(t_frozen))

    def apply_laplacian(self, u):
        return (np.roll(u, 1) + np.roll(u, -1) - 2.0 * u) / self.dx ** 2

    def rhs(self, t, u):
        return self.alpha(t) ** 2 * self.apply_laplacian(u) + self.potential(t) * u

    def stiff_rk4_steps(self):
        # stability bound of explicit RK4 on the diffusion spectrum; the
        # floor keeps the temporal error negligible on coarse grids, where
        # the stability bound alone would be accuracy-limited
        alpha_sq_max = (0.25 + abs(self.mu)) ** 2
        stiff = int(math.ceil(4.0 * (self.tf - self.t0) / self.dx ** 2 * alpha_sq_max))
        return max(stiff, REF_PDE_RK4_MIN_STEPS)

    def key(self):
        return "parabolic"

    def params(self):
        return ("parabolic", self.n_grid, self.mu, self.w, self.t0, self.tf)


@dataclass
class FisherProblem(ParabolicProblem):
    """u_t = alpha(t)^2 Lap u + gamma(t) u (1 - u), the Fisher reaction."""

    beta: float = 1.0

    def gamma(self, t):
        return (2.0 - math.exp(-self.beta * t)) / 100.0

    def b_kick(self, t_frozen, tau, state):
        # exact logistic flow with gamma frozen at a real time
        grow = np.exp(self.gamma(t_frozen) * tau)
        denom = 1.0 + state * (grow - 1.0)
        if np.any(np.abs(denom) <= 1e-12):
            raise StepFailed("singular logistic denominator")
        return state * grow / denom

    def rhs(self, t, u):
        return self.alpha(t) ** 2 * self.apply_laplacian(u) + self.gamma(t) * u * (1.0 - u)

    def key(self):
        return "fisher"

    def params(self):
        return ("fisher", self.n_grid, self.mu, self.w, self.beta, self.t0, self.tf)


def make_problem(name, **overrides):
    table = {"osc": OscillatorProblem, "parabolic": ParabolicProblem,
             "fisher": FisherProblem}
    if name not in table:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(table)}")
    return table[name](**overrides)


# ---------------------------------------------------------------------------
# Reference solution: two independent oracles that must agree.
# ---------------------------------------------------------------------------

def rk4_integrate(rhs, u0, t0, tf, n_steps):
    """Classical fourth-order one-step method on the full right-hand side."""
    u = np.asarray(u0).copy()
    h = (tf - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = rhs(t, u)
        k2 = rhs(t + 0.5 * h, u + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, u + 0.5 * h * k2)
        k4 = rhs(t + h, u + h * k3)
        u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return u


def _rk4_steps_for(problem):
    if isinstance(problem, ParabolicProblem):
        return problem.stiff_rk4_steps()
    return REF_OSC_RK4_STEPS


def _splitting_oracle(problem):
    from .stepper import StepperConfig, integrate

    cfg = StepperConfig(scheme=builtin_scheme("SM4"), a_flow_kind="cf4")
    state, _ = integrate(cfg, problem, problem.u0(), problem.t0, problem.tf,
                         REF_SPLIT_STEPS)
    return state.values.real


def _classical_oracle(problem):
    u = rk4_integrate(problem.rhs, problem.u0().real.astype(float),
                      problem.t0, problem.tf, _rk4_steps_for(problem))
    return np.asarray(u, dtype=float)


def default_cache_dir():
    env = os.environ.get("CXSPLIT_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cxsplit"


def _cache_path(problem, cache_dir):
    payload = repr(problem.params() + (REF_SPLIT_STEPS, _rk4_steps_for(problem)))
    digest = hashlib.sha256(payload.encode()).hexdigest()[:16]
    return Path(cache_dir) / f"{problem.key()}_{digest}.ref", digest


def _write_cache(path, digest, values):
    path.parent.mkdir(parents=True, exist_ok=True)
    blob = REF_MAGIC + digest.encode() + np.asarray(values, dtype="<f8").tobytes()
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)       # write-then-rename for concurrent sweeps
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _read_cache(path, digest):
    blob = path.read_bytes()
    if blob[:8] != REF_MAGIC or blob[8:24] != digest.encode():
        return None
    return np.frombuffer(blob[24:], dtype="<f8").copy()


def reference_solution(problem, cache_dir=None, verbose=False):
    """Final-time reference state, cross-validated by two independent oracles.

    Oracle one is the best builtin splitting scheme run at a very fine step;
    oracle two is a classical one-step method on the unsplit right-hand side.
    Disagreement beyond the tolerance is a hard failure.
    """
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path, digest = _cache_path(problem, cache_dir)
    if path.exists():
        cached = _read_cache(path, digest)
        if cached is not None:
            return cached
    split = _splitting_oracle(problem)
    classical = _classical_oracle(problem)
    gap = float(np.linalg.norm(split - classical))
    if verbose:
        print(f"reference[{problem.key()}]: oracle agreement {gap:.3e}")
    if gap > REF_AGREE_TOL:
        raise ReferenceInconsistent(
            f"{problem.key()}: oracle disagreement {gap:.3e} > {REF_AGREE_TOL:.1e}")
    _write_cache(path, digest, split)
    return split
