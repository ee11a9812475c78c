"""
Commutation checks of the exact invariances against a numerical evolver.

A transform T is an invariance when evolving T(u0) gives T applied to the
evolution of u0. The InvarianceContext evolves a baseline datum once, then
compares each transformed evolution with the transformed baseline. The L2
gap between the two sides is the commutation defect.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from gaussons.core.solver_interfaces import IEvolver, IStepObserver
from gaussons.core.transform_interfaces import ITransform
from gaussons.impl.transforms import (
    GalileanTransform,
    SizeTransform,
    TranslationTransform,
    tensor_product,
)
from gaussons.models.data_models import (
    EvolutionResult,
    Grid,
    InvarianceDefect,
    PhysParams,
    TransformKind,
    WaveField,
)
from gaussons.physics import functionals as fn

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-5


class InvarianceContext:
    """
    Context for commutation checks on one datum, evolver and horizon.

    The InvarianceContext:
    1. Takes a baseline datum u0 and an evolver
    2. Evolves u0 to time t once and caches the result
    3. For each transform, evolves T(u0) and compares with T(evolve(u0))
    4. Keeps a history of the defects it measured

    Example Usage:
        solver = StrangSplittingSolver(params, grid, config)
        ctx = InvarianceContext(u0, solver, t=1.0, label="lam=-2,omega=1")
        defect = ctx.check(TranslationTransform(0.05, params.omega))
        print(f"{defect.transform}: {defect.defect:.2e}")
    """

    def __init__(
        self,
        u0: WaveField,
        evolver: IEvolver,
        t: float,
        label: str = "",
        tolerance: float = DEFAULT_TOLERANCE,
        observers: Optional[Sequence[IStepObserver]] = None,
    ):
        """
        Initialize the context.

        Args:
            u0: Baseline datum
            evolver: Evolver bound to the parameters under test
            t: Comparison time
            label: Regime label copied into every defect
            tolerance: Largest defect that passes
            observers: Observers attached to the baseline run only
        """
        if t < 0:
            raise ValueError(f"comparison time must be non-negative, got {t}")
        self.u0 = u0
        self.evolver = evolver
        self.t = t
        self.label = label
        self.tolerance = tolerance
        self.observers = list(observers or [])
        self.history: List[InvarianceDefect] = []
        self._baseline: Optional[EvolutionResult] = None

    @property
    def baseline_result(self) -> EvolutionResult:
        """The baseline run with its observables, computed on first use."""
        if self._baseline is None:
            self._baseline = self.evolver.evolve(
                self.u0, observers=self.observers, t_end=self.t
            )
        return self._baseline

    @property
    def baseline(self) -> WaveField:
        """evolve(u0) at time t."""
        return self.baseline_result.final

    def check(
        self, transform: ITransform, name: Optional[str] = None
    ) -> InvarianceDefect:
        """
        Measure the commutation defect of one transform.

        Args:
            transform: The invariance to test
            name: Label of the defect, transform.name by default

        Returns:
            InvarianceDefect: ||evolve(T u0) - T evolve(u0)|| at time t
        """
        start = transform.apply(self.u0, 0.0)
        if np.array_equal(start.values, self.u0.values):
            lhs = self.baseline
        else:
            lhs = self.evolver.evolve(start, t_end=self.t).final
        rhs = transform.apply(self.baseline, self.t)
        return self._store(name or transform.name, fn.l2_distance(lhs, rhs))

    def check_many(self, transforms: Sequence[ITransform]) -> List[InvarianceDefect]:
        return [self.check(tr) for tr in transforms]

    def _store(self, name: str, defect: float) -> InvarianceDefect:
        result = InvarianceDefect(
            regime=self.label,
            transform=name,
            defect=defect,
            tolerance=self.tolerance,
        )
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(
            level,
            f"[InvarianceContext] {self.label} {name}: defect {defect:.3e} "
            f"(tolerance {self.tolerance:.1e})",
        )
        self.history.append(result)
        return result

    def get_history(self) -> List[InvarianceDefect]:
        return self.history.copy()

    def reset_baseline(self, u0: WaveField) -> None:
        """Switch to a new datum; the history is cleared."""
        self.u0 = u0
        self._baseline = None
        self.history = []


def tensor_defect(
    factors: Sequence[WaveField],
    evolver_1d: IEvolver,
    evolver_2d: IEvolver,
    t: float,
) -> float:
    """
    ||evolve_2d(u1 x u2) - evolve_1d(u1) x evolve_1d(u2)|| at time t.
    """
    lhs = evolver_2d.evolve(tensor_product(factors), t_end=t).final
    evolved = [evolver_1d.evolve(f, t_end=t).final for f in factors]
    return fn.l2_distance(lhs, tensor_product(evolved))


def check_tensor(
    factors: Sequence[WaveField],
    evolver_1d: IEvolver,
    evolver_2d: IEvolver,
    t: float,
    label: str = "",
    tolerance: float = DEFAULT_TOLERANCE,
) -> InvarianceDefect:
    """Tensorization defect packaged like the other transforms."""
    defect = tensor_defect(factors, evolver_1d, evolver_2d, t)
    logger.info(f"[check_tensor] {label} tensor: defect {defect:.3e}")
    return InvarianceDefect(
        regime=label,
        transform=TransformKind.TENSOR.value,
        defect=defect,
        tolerance=tolerance,
    )


def gaussian_datum(grid: Grid, k0: float = 1.0) -> WaveField:
    """Real Gaussian e^{-k0 |x|^2 / 2} used as the commutation datum."""
    return WaveField(grid=grid, values=np.exp(-k0 * grid.radius_squared() / 2.0))


def create_size_transform(params: PhysParams, c: complex = 1.5) -> SizeTransform:
    """Size gauge for the parameters' lambda.

    >>> create_size_transform(PhysParams(lam=-2.0, omega=1.0)).name
    'size'
    """
    return SizeTransform(c, params.lam)


def create_galilean_transform(
    params: PhysParams, v: float = 0.05
) -> GalileanTransform:
    return GalileanTransform(v, params.omega)


def create_translation_transform(
    params: PhysParams, x0: float = 0.05
) -> TranslationTransform:
    return TranslationTransform(x0, params.omega)


def create_identity_transforms(params: PhysParams) -> List[ITransform]:
    """
    Identity members of each family: c = 1, v = 0, x0 = 0.

    >>> [tr.is_identity() for tr in create_identity_transforms(PhysParams(lam=-2.0))]
    [True, True, True]
    """
    return [
        SizeTransform(1.0, params.lam),
        GalileanTransform(0.0, params.omega),
        TranslationTransform(0.0, params.omega),
    ]


TransformFactory = Callable[[PhysParams], ITransform]


def default_transforms(
    c: complex = 1.5, v: float = 0.05, x0: float = 0.05
) -> Dict[str, TransformFactory]:
    """Factories of the three field transforms keyed by kind."""
    return {
        TransformKind.SIZE.value: lambda p: create_size_transform(p, c),
        TransformKind.GALILEAN.value: lambda p: create_galilean_transform(p, v),
        TransformKind.TRANSLATION.value: lambda p: create_translation_transform(p, x0),
    }
