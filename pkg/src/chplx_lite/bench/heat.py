"""1-D heat diffusion: native reference implementation."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from ..runtime import kernels, pool
from ..runtime.parallel import forall_blocks
from .results import BenchResult


@dataclass
class HeatParams:
    nx: int = 1_000_000
    nt: int = 100
    alpha: float = 0.5
    dt: float = 0.5
    h: float = 1.0
    denominator: str = "h2"   # "h2" (second difference) or "2h"

    def __post_init__(self):
        if self.nx < 3:
            raise ValueError("heat needs nx >= 3")
        if not (self.dt > 0 and self.h > 0):
            raise ValueError("dt and h must be positive")
        if self.denominator not in ("h2", "2h"):
            raise ValueError("denominator is 'h2' or '2h'")
        if self.denominator == "h2" and self.dt * self.alpha / (self.h * self.h) > 0.5:
            warnings.warn("dt*alpha/h^2 > 0.5: explicit scheme is unstable", stacklevel=2)

    @property
    def denom(self) -> float:
        return self.h * self.h if self.denominator == "h2" else 2.0 * self.h


def initial_field(nx: int) -> np.ndarray:
    """Sawtooth start: u[i] = i mod 10."""
    return (np.arange(nx, dtype=np.int64) % 10).astype(np.float64)


def heat_step(u: np.ndarray, p: HeatParams, out: np.ndarray | None = None, impl=None):
    """One explicit Euler step; the two end points are copied unchanged."""
    impl = impl or kernels.active
    if len(u) != p.nx:
        raise ValueError(f"field has {len(u)} points, expected {p.nx}")
    if out is None:
        out = u.copy()
    else:
        out[0], out[-1] = u[0], u[-1]
    dt, alpha, denom = p.dt, p.alpha, p.denom
    forall_blocks(p.nx - 2, lambda a, b: impl.heat_block(u, out, a + 1, b + 1, dt, alpha,
                                                          denom))
    return out


def heat_reference(u, p: HeatParams) -> list[float]:
    """Scalar loops over Python floats, nt steps."""
    u = [float(v) for v in u]
    denom = p.denom
    for _ in range(p.nt):
        new = u[:]
        for i in range(1, p.nx - 1):
            new[i] = u[i] + p.dt * p.alpha * (u[i - 1] - 2.0 * u[i] + u[i + 1]) / denom
        u = new
    return u


def run_heat(p: HeatParams, threads: int, impl=None) -> BenchResult:
    """nt steps with two buffers; ``output`` holds the final field."""
    u = initial_field(p.nx)
    unew = u.copy()
    with pool.pool_session(threads):
        t0 = time.perf_counter()
        for _ in range(p.nt):
            heat_step(u, p, unew, impl)
            u, unew = unew, u
        seconds = time.perf_counter() - t0
    return BenchResult("heat", threads, max(seconds, 1e-9), None, u)
