"""
Core data models for gaussons.

These Pydantic models describe every value that flows between the closed
forms, the tau ODE, the split-step solver and the experiment harness. Fields
are validated on construction and models are frozen, so a value handed to a
solver cannot be changed underneath it.
"""

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

DEGENERACY_TOL = 1e-12


class PotentialSign(str, Enum):
    """Sign of the harmonic potential V(x) = sign * omega^2 |x|^2 / 2."""

    REPULSIVE = "repulsive"
    CONFINING = "confining"
    NONE = "none"

    @property
    def factor(self) -> float:
        """Multiplier of omega^2 |x|^2 / 2 in the potential.

        >>> PotentialSign.REPULSIVE.factor
        -1.0
        >>> PotentialSign.NONE.factor
        0.0
        """
        return {"repulsive": -1.0, "confining": 1.0, "none": 0.0}[self.value]


class Regime(str, Enum):
    """Stationary-state regime of the repulsive equation."""

    TWO_GAUSSONS = "two_gaussons"
    DEGENERATE = "degenerate"
    NO_STATIONARY = "no_stationary"
    FLAT_GAUSSON = "flat_gausson"


class Branch(str, Enum):
    """Which root of the Gausson equation a profile belongs to."""

    MINUS = "minus"
    PLUS = "plus"
    DEGENERATE = "degenerate"
    CONFINED = "confined"


class TrajectoryKind(str, Enum):
    """Long-time behaviour of a tau trajectory."""

    STATIONARY = "stationary"
    PERIODIC = "periodic"
    UNBOUNDED = "unbounded"


class FixedPointKind(str, Enum):
    """Linear type of a stationary point of the tau ODE."""

    CENTER = "center"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


class TransformKind(str, Enum):
    """Exact invariances of the repulsive equation."""

    SIZE = "size"
    GALILEAN = "galilean"
    TRANSLATION = "translation"
    TENSOR = "tensor"


def regime_of(lam: float, omega: float) -> Regime:
    """
    Classify (lambda, omega) into a stationary-state regime.

    Degeneracy -lambda = omega is detected with a relative tolerance so that
    parameters read from text files land in the right regime.

    >>> regime_of(-2.0, 1.0).value
    'two_gaussons'
    >>> regime_of(-1.0, 1.0).value
    'degenerate'
    >>> regime_of(-1.0, 2.0).value
    'no_stationary'
    >>> regime_of(-1.0, 0.0).value
    'flat_gausson'
    """
    if omega == 0.0:
        return Regime.FLAT_GAUSSON if lam < 0 else Regime.NO_STATIONARY
    if lam >= 0:
        return Regime.NO_STATIONARY
    gap = -lam - omega
    if abs(gap) <= DEGENERACY_TOL * max(1.0, abs(lam)):
        return Regime.DEGENERATE
    return Regime.TWO_GAUSSONS if gap > 0 else Regime.NO_STATIONARY


class PhysParams(BaseModel):
    """
    Coefficients of the equation.

    i u_t + 1/2 Lap u = V(x) u + lam u ln|u|^2, with
    V(x) = potential_sign.factor * omega^2 |x|^2 / 2.

    Attributes:
        lam: Nonlinearity coefficient (lambda)
        omega: Potential strength, non-negative
        dim: Space dimension d
        potential_sign: Repulsive (default), confining, or no potential
    """

    model_config = ConfigDict(frozen=True)

    lam: float = Field(description="Nonlinearity coefficient lambda")
    omega: float = Field(default=1.0, ge=0.0, description="Potential strength")
    dim: int = Field(default=1, ge=1, description="Space dimension d")
    potential_sign: PotentialSign = PotentialSign.REPULSIVE

    @model_validator(mode="after")
    def _check_potential(self) -> "PhysParams":
        if self.potential_sign == PotentialSign.NONE and self.omega != 0.0:
            raise ValueError("potential_sign 'none' requires omega = 0")
        return self

    @property
    def regime(self) -> Regime:
        """Regime implied by (lam, omega)."""
        return regime_of(self.lam, self.omega)

    @property
    def potential_factor(self) -> float:
        """Coefficient c in V(x) = c |x|^2 (already includes omega^2 / 2)."""
        return self.potential_sign.factor * self.omega**2 / 2.0


class Grid(BaseModel):
    """
    Uniform periodic grid on the box [-L/2, L/2)^dim.

    >>> g = Grid(length=8.0, points=16)
    >>> g.dx
    0.5
    >>> g.shape
    (16,)
    """

    model_config = ConfigDict(frozen=True)

    length: float = Field(gt=0.0, description="Box length L per axis")
    points: int = Field(ge=2, description="Points N per axis, a power of two")
    dim: int = Field(default=1, ge=1, le=2)

    @field_validator("points")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"grid points must be a power of two, got {v}")
        return v

    @property
    def dx(self) -> float:
        return self.length / self.points

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.dx**self.dim

    def axis(self) -> np.ndarray:
        """Sample positions along one axis."""
        return -self.length / 2.0 + self.dx * np.arange(self.points)

    def coordinates(self) -> List[np.ndarray]:
        """One coordinate array per axis, each of full grid shape."""
        axes = [self.axis()] * self.dim
        return list(np.meshgrid(*axes, indexing="ij"))

    def radius_squared(self) -> np.ndarray:
        return sum(x**2 for x in self.coordinates())

    def frequencies(self) -> np.ndarray:
        """Angular wavenumbers along one axis, in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.dx)

    def frequency_squared(self) -> np.ndarray:
        xi = [self.frequencies()] * self.dim
        return sum(k**2 for k in np.meshgrid(*xi, indexing="ij"))


class WaveField(BaseModel):
    """
    Complex field sampled on a Grid.

    Values are stored as a read-only complex array of the grid's shape.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.complex128)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_shape(self) -> "WaveField":
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        return self

    @classmethod
    def zeros(cls, grid: Grid) -> "WaveField":
        return cls(grid=grid, values=np.zeros(grid.shape, dtype=np.complex128))

    def with_values(self, values: np.ndarray) -> "WaveField":
        """New field on the same grid."""
        return WaveField(grid=self.grid, values=values)

    def scaled(self, c: complex) -> "WaveField":
        return self.with_values(c * self.values)


class GaussonSpec(BaseModel):
    """
    A stationary Gausson phi_{k,nu}.

    Attributes:
        k: Gaussian decay rate, root of k^2 + 2 lam k +- omega^2 = 0
        nu: Solitary-wave frequency
        branch: Which root the profile belongs to
    """

    model_config = ConfigDict(frozen=True)

    k: float = Field(gt=0.0)
    nu: float = 0.0
    branch: Branch = Branch.PLUS


class TauState(BaseModel):
    """Inverse-width parameter tau and its velocity."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(gt=0.0)
    tau_dot: float = 0.0


class GaussianAnsatz(BaseModel):
    """
    Reduced state of a Gaussian solution u = b e^{-a x^2 / 2}.

    a = 1/tau^2 - i tau_dot/tau and |b| = b0_mod sqrt(tau0 / tau).
    """

    model_config = ConfigDict(frozen=True)

    state: TauState
    theta: float = 0.0
    b0_mod: float = Field(gt=0.0)
    tau0: float = Field(gt=0.0)

    @property
    def amplitude(self) -> float:
        """Modulus |b| at the current tau."""
        return self.b0_mod * math.sqrt(self.tau0 / self.state.tau)

    @property
    def a(self) -> complex:
        tau = self.state.tau
        return complex(1.0 / tau**2, -self.state.tau_dot / tau)


class TrajectoryClass(BaseModel):
    """Verdict of classify_trajectory."""

    model_config = ConfigDict(frozen=True)

    kind: TrajectoryKind
    period: Optional[float] = Field(default=None, gt=0.0)
    growth_rate: Optional[float] = None

    @model_validator(mode="after")
    def _check_payload(self) -> "TrajectoryClass":
        if (self.period is not None) != (self.kind == TrajectoryKind.PERIODIC):
            raise ValueError("period is present iff the trajectory is periodic")
        if (self.growth_rate is not None) != (self.kind == TrajectoryKind.UNBOUNDED):
            raise ValueError("growth_rate is present iff the trajectory is unbounded")
        return self


class TauTrajectory(BaseModel):
    """Sampled tau trajectory with its first integral."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: np.ndarray
    tau: np.ndarray
    tau_dot: np.ndarray
    first_integral: np.ndarray
    max_drift: float = Field(
        ge=0.0, description="max |C(t) - C(0)| over every step, not only recorded ones"
    )

    @property
    def relative_drift(self) -> float:
        """Drift of the first integral relative to max(1, |C(0)|)."""
        return self.max_drift / max(1.0, abs(float(self.first_integral[0])))

    @property
    def final_state(self) -> TauState:
        return TauState(tau=float(self.tau[-1]), tau_dot=float(self.tau_dot[-1]))

    def states(self) -> List[Tuple[float, TauState]]:
        return [
            (float(t), TauState(tau=float(a), tau_dot=float(b)))
            for t, a, b in zip(self.t, self.tau, self.tau_dot)
        ]


class FixedPoint(BaseModel):
    """Stationary point of the tau ODE with its linear type."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(gt=0.0)
    omega_eff: float
    kind: FixedPointKind


class PhasePortrait(BaseModel):
    """Orbits and fixed points of the tau ODE for one parameter set."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    params: PhysParams
    orbits: List[TauTrajectory] = Field(default_factory=list)
    fixed_points: List[FixedPoint] = Field(default_factory=list)


class SolverConfig(BaseModel):
    """
    Settings of the split-step solver.

    Attributes:
        dt: Time step
        t_end: Final time of evolve
        reg: Relative floor of the logarithm, shared with the energy
        boundary_mass_limit: Largest mass fraction tolerated in the outer band
        record_every: Record observables every this many steps
        keep_snapshots: Keep the field at every recorded time, not only the last
        substep: Split dt into equal substeps no larger than the stability
            heuristic; records stay at multiples of dt
    """

    model_config = ConfigDict(frozen=True)

    dt: float = Field(default=1e-3, gt=0.0)
    t_end: float = Field(default=1.0, ge=0.0)
    reg: float = Field(default=1e-14, ge=0.0)
    boundary_mass_limit: float = Field(default=1e-6, gt=0.0, lt=1.0)
    record_every: int = Field(default=1, ge=1)
    keep_snapshots: bool = False
    substep: bool = True


class ObservableRecord(BaseModel):
    """Observables of a field at one recorded time."""

    model_config = ConfigDict(frozen=True)

    t: float
    mass: float
    energy: float
    sigma_norm: float
    xmean: float
    variance: float
    supnorm: float


class EvolutionResult(BaseModel):
    """
    Observable series produced by an evolver.

    Fields at the recorded times are kept only when the solver was asked to;
    the last field is always kept.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    snapshots: List[Tuple[float, WaveField]] = Field(default_factory=list)
    observables: List[ObservableRecord] = Field(default_factory=list)
    final_field: Optional[WaveField] = None

    @property
    def final(self) -> WaveField:
        if self.final_field is not None:
            return self.final_field
        return self.snapshots[-1][1]

    @property
    def times(self) -> List[float]:
        if self.observables:
            return [r.t for r in self.observables]
        return [t for t, _ in self.snapshots]


class NehariWitness(BaseModel):
    """
    Member of the Gaussian family gamma(x) = eps exp(-|x - x0|^2 / 2).

    >>> NehariWitness(eps=0.1, x0=(4.5,), nu=0.0, d=1).d
    1
    """

    model_config = ConfigDict(frozen=True)

    eps: float = Field(gt=0.0)
    x0: Tuple[float, ...]
    nu: float = 0.0
    d: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_center(self) -> "NehariWitness":
        if len(self.x0) != self.d:
            raise ValueError(f"x0 has {len(self.x0)} components, expected {self.d}")
        return self

    @property
    def center_norm2(self) -> float:
        return float(sum(c * c for c in self.x0))


class WitnessRow(BaseModel):
    """One line of a witness scan."""

    model_config = ConfigDict(frozen=True)

    eps: float
    x0: float
    mass: float
    nehari_residual: Optional[float] = None


class InvarianceDefect(BaseModel):
    """Commutation defect of one transform in one regime."""

    model_config = ConfigDict(frozen=True)

    regime: str
    transform: str
    defect: float = Field(ge=0.0)
    tolerance: float = Field(gt=0.0)

    @property
    def passed(self) -> bool:
        return self.defect <= self.tolerance


class PlotSpec(BaseModel):
    """
    Static plot drawn from a report table.

    kind "line" plots columns y against x of one table; kind "orbits" draws
    every orbit table as a tau_dot versus tau curve.
    """

    model_config = ConfigDict(frozen=True)

    kind: str = Field(default="line", pattern="^(line|orbits)$")
    table: str = ""
    x: str = "t"
    y: List[str] = Field(default_factory=list)
    logx: bool = False
    logy: bool = False
    title: str = ""


class ExperimentReport(BaseModel):
    """
    Result of one experiment command.

    Attributes:
        command: Subcommand name
        passed: Whether every tolerance check passed
        summary: Flat key/value pairs written to summary.txt
        tables: Named tables, each a list of rows, written as CSV
        orbit_tables: Orbit files of a phase portrait, keyed by file stem
        plots: PNG files to draw, keyed by file stem
        fields: Field snapshots (time, field) written as field CSVs
    """

    command: str
    passed: bool
    summary: Dict[str, Any] = Field(default_factory=dict)
    tables: Dict[str, List[Dict[str, Any]]] = Field(default_factory=dict)
    orbit_tables: Dict[str, List[Dict[str, float]]] = Field(default_factory=dict)
    plots: Dict[str, PlotSpec] = Field(default_factory=dict)
    fields: Dict[str, Tuple[float, WaveField]] = Field(default_factory=dict)


def _split_floats(v: Any) -> Any:
    if isinstance(v, str):
        return [float(part) for part in v.split(",") if part.strip()]
    return v


class ExperimentConfig(BaseModel):
    """
    Configuration shared by every experiment command.

    Keys mirror the text configuration file. Dotted keys (grid.L) and the
    reserved word lambda are accepted through aliases.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    # Physics
    lam: float = Field(default=-2.0, alias="lambda")
    omega: float = Field(default=1.0, ge=0.0)
    dim: int = Field(default=1, ge=1, le=2)
    potential: PotentialSign = PotentialSign.REPULSIVE

    # PDE grid and solver
    grid_L: float = Field(default=40.0, gt=0.0, alias="grid.L")
    grid_N: int = Field(default=1024, ge=2, alias="grid.N")
    dt: float = Field(default=1e-3, gt=0.0)
    t_end: float = Field(default=2.0, gt=0.0)
    reg: float = Field(default=1e-14, ge=0.0)
    boundary_mass_limit: float = Field(default=1e-6, gt=0.0, lt=1.0)
    record_every: int = Field(default=10, ge=1)
    tol: float = Field(default=1e-5, gt=0.0)

    # Invariances
    c: float = Field(default=1.5, description="Size-gauge constant")
    v: float = Field(default=0.05, description="Galilean velocity")
    x0: float = Field(default=0.05, description="Translation amplitude")
    k0: float = Field(default=1.0, gt=0.0, description="Decay rate of the test datum")
    tensor_L: float = Field(default=32.0, gt=0.0, alias="tensor.L")
    tensor_N: int = Field(default=256, ge=2, alias="tensor.N")
    invariance_t: float = Field(default=1.0, gt=0.0, description="Comparison time")

    # Instability experiments
    branch: Branch = Branch.PLUS
    eta: float = Field(default=0.5, gt=0.0)
    t_max: float = Field(default=10.0, gt=0.0)
    boost: bool = False
    perturbation: float = Field(default=1e-4, gt=0.0)
    degenerate_kick: float = Field(default=1e-3, gt=0.0)

    # Tau ODE
    ode_dt: float = Field(default=5e-4, gt=0.0)
    ode_t_end: float = Field(default=20.0, gt=0.0)
    tau_range: List[float] = Field(default_factory=lambda: [0.25, 3.0])
    taudot_max: float = Field(default=2.0, gt=0.0)
    n_tau: int = Field(default=10, ge=1)
    n_taudot: int = Field(default=10, ge=1)
    n_orbits: int = Field(default=12, ge=2)
    fit_start: float = Field(default=5.0, ge=0.0)
    fit_end: float = Field(default=10.0, gt=0.0)
    contrast_tau0: float = Field(default=0.4, gt=0.0)
    contrast_t_end: float = Field(default=40.0, gt=0.0)

    # Nehari
    nu: float = 0.0
    eps: List[float] = Field(default_factory=lambda: [0.1, 0.01, 0.001])

    # Harness
    workers: int = Field(default=1, ge=1)
    output_dir: str = "results"

    @field_validator("eps", "tau_range", mode="before")
    @classmethod
    def _split_lists(cls, v: Any) -> Any:
        return _split_floats(v)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        self.phys_params()
        if len(self.tau_range) != 2 or not 0 < self.tau_range[0] < self.tau_range[1]:
            raise ValueError("tau_range must be two increasing positive values")
        if any(e <= 0 for e in self.eps):
            raise ValueError("eps values must be positive")
        if self.fit_end <= self.fit_start:
            raise ValueError("fit_end must exceed fit_start")
        Grid(length=self.grid_L, points=self.grid_N, dim=1)
        Grid(length=self.tensor_L, points=self.tensor_N, dim=2)
        return self

    def phys_params(self, **overrides: Any) -> PhysParams:
        values = dict(
            lam=self.lam,
            omega=self.omega,
            dim=self.dim,
            potential_sign=self.potential,
        )
        values.update(overrides)
        return PhysParams(**values)

    def grid(self, dim: int = 1) -> Grid:
        return Grid(length=self.grid_L, points=self.grid_N, dim=dim)

    def tensor_grid(self, dim: int = 2) -> Grid:
        return Grid(length=self.tensor_L, points=self.tensor_N, dim=dim)

    def solver_config(self, **overrides: Any) -> SolverConfig:
        values = dict(
            dt=self.dt,
            t_end=self.t_end,
            reg=self.reg,
            boundary_mass_limit=self.boundary_mass_limit,
            record_every=self.record_every,
        )
        values.update(overrides)
        return SolverConfig(**values)


class DriftFlag(BaseModel):
    """A recorded time at which a conserved quantity drifted past its tolerance."""

    model_config = ConfigDict(frozen=True)

    t: float
    quantity: str
    relative_drift: float
    tolerance: float
