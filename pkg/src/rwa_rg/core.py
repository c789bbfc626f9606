"""Domain types, parameter validation and the fast/slow time mapping.

All times are dimensionless, measured in units of the inverse Rabi (or
Jaynes-Cummings) frequency.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

ArrayLike = Union[float, complex, np.ndarray]

# Above this coupling the asymptotic series are not expected to hold.
STRONG_COUPLING_EPSILON = 0.5


class ParameterError(ValueError):
    """Invalid model, grid or solver parameters."""


class UnsupportedOrderError(ParameterError):
    """Requested expansion order is not available."""


class StrongCouplingWarning(UserWarning):
    """epsilon is large enough that the perturbative series break down."""


class Model(enum.Enum):
    RABI = "rabi"
    JAYNES_CUMMINGS = "jc"


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless detunings of either model.

    ``delta`` is the near-resonant detuning and ``big_delta`` the
    counter-rotating frequency; the small parameter ``epsilon`` is always
    derived as ``1 / big_delta``.
    """

    delta: float
    big_delta: float
    model: Model = Model.RABI

    @property
    def epsilon(self) -> float:
        return 1.0 / self.big_delta

    @classmethod
    def from_epsilon(cls, epsilon: float, delta: float = 0.0,
                     model: Model = Model.RABI) -> "ModelParams":
        if not epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
        return cls(delta=delta, big_delta=1.0 / epsilon, model=model)

    @property
    def resonant(self) -> bool:
        return self.delta == 0.0


def validate_params(params: ModelParams) -> ModelParams:
    """Check ``params`` and return them unchanged.

    Raises :class:`ParameterError` for a non-positive or non-finite
    ``big_delta``. Emits a :class:`StrongCouplingWarning` when
    ``epsilon >= 0.5``, where the expansions are known to fail.
    """
    bd = params.big_delta
    if not np.isfinite(bd) or bd <= 0:
        raise ParameterError(f"big_delta must be positive and finite, got {bd!r}")
    if not np.isfinite(params.delta):
        raise ParameterError(f"delta must be finite, got {params.delta!r}")
    if params.epsilon >= STRONG_COUPLING_EPSILON:
        warnings.warn(
            f"epsilon = {params.epsilon:g} is in the strong-coupling regime; "
            "the renormalized expansions are not expected to converge",
            StrongCouplingWarning,
            stacklevel=2,
        )
    return params


def require_resonance(params: ModelParams) -> None:
    if not params.resonant:
        raise ParameterError(
            f"closed-form series exist only at resonance (delta = 0), got delta = {params.delta!r}"
        )


@dataclass(frozen=True)
class TwoTimes:
    """Fast time ``t1`` and slow time ``t2``; scalars or equal-shape arrays."""

    t1: ArrayLike
    t2: ArrayLike


def map_times(tau: ArrayLike, epsilon: float) -> TwoTimes:
    """Map physical dimensionless time ``tau`` to ``(t1, t2) = (tau/eps, tau)``."""
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0):
        raise ParameterError("tau must be non-negative")
    if tau_arr.ndim == 0:
        return TwoTimes(t1=float(tau_arr) / epsilon, t2=float(tau_arr))
    return TwoTimes(t1=tau_arr / epsilon, t2=tau_arr.copy())


def check_two_times(times: TwoTimes, epsilon: float, tol: float = 1e-9) -> None:
    """Reject ``(t1, t2)`` pairs that are not on the line ``t2 = eps * t1``."""
    t1 = np.asarray(times.t1, dtype=float)
    t2 = np.asarray(times.t2, dtype=float)
    if np.any(np.abs(t2 - epsilon * t1) > tol * np.maximum(1.0, np.abs(t2))):
        raise ParameterError(
            f"inconsistent times: t2 must equal epsilon * t1 (epsilon = {epsilon!r})"
        )


@dataclass(frozen=True)
class AmplitudePair:
    """Ground (``a``) and excited (``b``) amplitudes, scalar or per-sample arrays."""

    a: ArrayLike
    b: ArrayLike

    @property
    def prob_a(self):
        return np.abs(self.a) ** 2

    @property
    def prob_b(self):
        return np.abs(self.b) ** 2


@dataclass(frozen=True)
class LadderState:
    """Truncated Jaynes-Cummings amplitudes ``a_n``, ``b_n`` for ``n = 0..n_max``."""

    n_max: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.n_max < 1:
            raise ParameterError(f"n_max must be >= 1, got {self.n_max}")
        if len(self.a) != self.n_max + 1 or len(self.b) != self.n_max + 1:
            raise ParameterError("ladder arrays must have length n_max + 1")

    @classmethod
    def single_photon(cls, n_max: int) -> "LadderState":
        """Ground-state atom with one photon: ``a_1 = 1``, all else zero."""
        a = np.zeros(n_max + 1, dtype=complex)
        b = np.zeros(n_max + 1, dtype=complex)
        a[1] = 1.0
        return cls(n_max, a, b)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.a, complex), np.asarray(self.b, complex)])

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "LadderState":
        m = len(y) // 2
        return cls(m - 1, np.array(y[:m]), np.array(y[m:]))

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.a) ** 2) + np.sum(np.abs(self.b) ** 2))


class Spacing(enum.Enum):
    UNIFORM = "uniform"


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    n_samples: int
    spacing: Spacing = Spacing.UNIFORM

    def __post_init__(self):
        if not self.t_start >= 0:
            raise ParameterError("t_start must be >= 0")
        if not self.t_end > self.t_start:
            raise ParameterError("t_end must exceed t_start")
        if self.n_samples < 2:
            raise ParameterError("a time grid needs at least two samples")

    @classmethod
    def uniform(cls, t_end: float, n_samples: int = 2000, t_start: float = 0.0) -> "TimeGrid":
        return cls(float(t_start), float(t_end), int(n_samples))

    @property
    def times(self) -> np.ndarray:
        t = np.linspace(self.t_start, self.t_end, self.n_samples)
        t[-1] = self.t_end
        return t


class Method(enum.Enum):
    NUMERIC = "numeric"
    RWA = "rwa"
    SINGLE_SCALE = "single_scale"
    TWO_SCALE = "two_scale"
    RENORMALIZED = "renormalized"
    RICCATI_NUMERIC = "riccati_numeric"
    RICCATI_RENORMALIZED = "riccati_renormalized"


ORDERED_METHODS = (Method.SINGLE_SCALE, Method.TWO_SCALE)


@dataclass(frozen=True)
class MethodTag:
    """A method together with its expansion order, when it has one."""

    kind: Method
    order: Optional[int] = None

    def __post_init__(self):
        if self.kind in ORDERED_METHODS and self.order is None:
            object.__setattr__(self, "order", 2)
        if self.kind not in ORDERED_METHODS and self.order is not None:
            raise ParameterError(f"{self.kind.value} does not take an order")

    @property
    def label(self) -> str:
        if self.order is None:
            return self.kind.value
        return f"{self.kind.value}({self.order})"

    @classmethod
    def parse(cls, text: str, default_order: int = 2) -> "MethodTag":
        text = text.strip().lower().replace("-", "_")
        order = None
        if text.endswith(")") and "(" in text:
            text, _, rest = text.partition("(")
            order = int(rest[:-1])
        try:
            kind = Method(text)
        except ValueError:
            raise ParameterError(f"unknown method {text!r}") from None
        if kind in ORDERED_METHODS and order is None:
            order = default_order
        return cls(kind, order)

    @property
    def is_series(self) -> bool:
        return self.kind not in (Method.NUMERIC, Method.RICCATI_NUMERIC)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Trajectory:
    """Amplitudes of one method on a shared time grid.

    For the Rabi model ``a`` and ``b`` have shape ``(n_samples,)``; for the
    Jaynes-Cummings ladder they have shape ``(n_samples, n_max + 1)``.
    ``valid`` marks samples where the method produced a value (the Riccati
    solvers flag samples near poles).
    """

    grid: TimeGrid
    a: np.ndarray
    b: np.ndarray
    method: MethodTag
    params: ModelParams
    valid: Optional[np.ndarray] = None
    channels: Optional[Sequence[int]] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.a) != self.grid.n_samples or len(self.b) != self.grid.n_samples:
            raise ParameterError("trajectory length must match the grid")

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def is_ladder(self) -> bool:
        return np.ndim(self.a) == 2

    @property
    def prob_a(self) -> np.ndarray:
        return np.abs(self.a) ** 2

    @property
    def prob_b(self) -> np.ndarray:
        return np.abs(self.b) ** 2

    @property
    def total_probability(self) -> np.ndarray:
        if self.is_ladder:
            return self.prob_a.sum(axis=1) + self.prob_b.sum(axis=1)
        return self.prob_a + self.prob_b

    @property
    def states(self) -> list:
        if self.is_ladder:
            n_max = self.a.shape[1] - 1
            return [LadderState(n_max, a, b) for a, b in zip(self.a, self.b)]
        return [AmplitudePair(complex(a), complex(b)) for a, b in zip(self.a, self.b)]
