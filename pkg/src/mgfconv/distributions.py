"""Distribution models and indexed families.

Every model exposes a vectorized ``cdf``; continuous models with a known
density expose ``logpdf``/``density``, and invertible ones a ``quantile``.
Models are frozen dataclasses and safe to share between threads.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Callable, ClassVar

import numpy as np
from scipy import special

from .quadrature import Status
from .values import MgfValue, Route

__all__ = [
    "Continuity",
    "DistributionModel",
    "Frechet",
    "ParetoSeq",
    "Lognormal",
    "Uniform",
    "Normal",
    "Exponential",
    "PointMass",
    "CltExponential",
    "Tabulated",
    "LoadReport",
    "DistributionFamily",
    "DEFAULT_N_SET",
    "DensityRequiredError",
    "NoQuantileError",
    "TabulatedCdfError",
    "frechet_cdf",
    "pareto_seq_cdf",
    "quantile",
    "clt_exponential_mgf",
    "make_family",
    "load_tabulated",
    "parse_model",
]

DEFAULT_N_SET = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)

CLT_SIGN_NOTE = (
    "limit quoted as exp(-t^2/2) has the wrong sign: the standard normal MGF is "
    "exp(t^2/2), which is the target used here"
)


class DensityRequiredError(ValueError):
    pass


class NoQuantileError(ValueError):
    pass


class TabulatedCdfError(ValueError):
    pass


class Continuity(str, Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"
    MIXED = "mixed"

    def __str__(self) -> str:
        return self.value


def _finish(x, out):
    return float(out) if np.ndim(x) == 0 else out


class DistributionModel:
    """Base class; concrete models are frozen dataclasses."""

    family_tag: ClassVar[str] = ""
    continuity: ClassVar[Continuity] = Continuity.CONTINUOUS
    has_density: ClassVar[bool] = False
    has_quantile: ClassVar[bool] = False

    @property
    def support_lo(self) -> float:
        raise NotImplementedError

    @property
    def support_hi(self) -> float:
        return math.inf

    @property
    def params(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.repr}

    @property
    def model_id(self) -> str:
        defaults = {f.name: f.default for f in fields(self)}
        shown = {k: v for k, v in self.params.items() if defaults.get(k) != v
                 or k in ("n", "loc")}
        if not shown:
            return self.family_tag
        inner = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in shown.items())
        return f"{self.family_tag}[{inner}]"

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Abscissae where the CDF has kinks or jumps."""
        return ()

    def cdf(self, x):
        raise NotImplementedError

    def cdf_left(self, x):
        """Left limit F(x-); equal to ``cdf`` for continuous models."""
        return self.cdf(x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, 1.0 - np.asarray(self.cdf(x)))

    def logpdf(self, x):
        raise DensityRequiredError(f"{self.model_id} has no density")

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, np.exp(np.asarray(self.logpdf(x))))

    def quantile(self, u):
        raise NoQuantileError(f"{self.model_id} has no declared quantile function")

    def closed_form_mgf(self, t: float) -> float | None:
        """Exact M(t) (``inf`` where it diverges), or None when unavailable.

        A finite value too large for a double raises OverflowError."""
        return None


def frechet_cdf(x):
    """Standard Frechet CDF: 0 for x <= 0, exp(-1/x) otherwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / x[pos])
    return _finish(x, out)


def _pareto_log_cdf(n: int, x: np.ndarray) -> np.ndarray:
    # n x rounding to 1 just above the support edge gives log 0 = -inf, i.e. F = 0
    with np.errstate(divide="ignore"):
        return n * np.log1p(-1.0 / (n * x))


def pareto_seq_cdf(n: int, x):
    """(1 - 1/(n x))^n for x > 1/n, else 0."""
    n = _check_index(n)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = x > 1.0 / n
    out[inside] = np.exp(_pareto_log_cdf(n, x[inside]))
    return _finish(x, out)


def _check_index(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"family index must be a positive integer, got {n!r}")
    return int(n)


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise ValueError("quantile requires 0 < u < 1")
    return u


@dataclass(frozen=True)
class Frechet(DistributionModel):
    family_tag: ClassVar[str] = "frechet"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    @property
    def support_lo(self) -> float:
        return 0.0

    def cdf(self, x):
        return frechet_cdf(x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        pos = x > 0
        with np.errstate(over="ignore"):
            out[pos] = -np.expm1(-1.0 / x[pos])
        return _finish(x, out)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, -np.inf)
        pos = x > 0
        xp = x[pos]
        with np.errstate(over="ignore"):
            out[pos] = -2.0 * np.log(xp) - 1.0 / xp
        return _finish(x, out)

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, -1.0 / np.log(u))


@dataclass(frozen=True)
class ParetoSeq(DistributionModel):
    """Member ``n`` of the sequence F_n(x) = (1 - 1/(n x))^n on x > 1/n.

    ``n = 1`` is the Pareto law on [1, inf); the density
    x^-2 (1 - 1/(n x))^(n-1) is taken as 0 on (0, 1/n].
    """

    n: int = 1
    family_tag: ClassVar[str] = "pareto_seq"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "n", _check_index(self.n))

    @property
    def support_lo(self) -> float:
        return 1.0 / self.n

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (1.0 / self.n,)

    def cdf(self, x):
        return pareto_seq_cdf(self.n, x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        inside = x > self.support_lo
        out[inside] = -np.expm1(_pareto_log_cdf(self.n, x[inside]))
        return _finish(x, out)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, -np.inf)
        inside = x > self.support_lo
        xi = x[inside]
        out[inside] = (self.n - 1) * np.log1p(-1.0 / (self.n * xi)) - 2.0 * np.log(xi)
        return _finish(x, out)

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, 1.0 / (self.n * -np.expm1(np.log(u) / self.n)))


@dataclass(frozen=True)
class Lognormal(DistributionModel):
    """X = exp(mu + sigma Z), Z standard normal."""

    mu: float = 0.0
    sigma: float = 1.0
    family_tag: ClassVar[str] = "lognormal"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def support_lo(self) -> float:
        return 0.0

    def _z(self, x):
        with np.errstate(divide="ignore"):
            return (np.log(x) - self.mu) / self.sigma

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = special.ndtr(self._z(x[pos]))
        return _finish(x, out)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        pos = x > 0
        out[pos] = special.ndtr(-self._z(x[pos]))
        return _finish(x, out)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, -np.inf)
        pos = x > 0
        z = self._z(x[pos])
        out[pos] = -0.5 * z * z - np.log(x[pos] * self.sigma) - 0.5 * math.log(2 * math.pi)
        return _finish(x, out)

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, np.exp(self.mu + self.sigma * special.ndtri(u)))


@dataclass(frozen=True)
class Uniform(DistributionModel):
    a: float = 0.0
    b: float = 1.0
    family_tag: ClassVar[str] = "uniform"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("uniform requires a < b")

    @property
    def support_lo(self) -> float:
        return self.a

    @property
    def support_hi(self) -> float:
        return self.b

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0))

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.a) & (x <= self.b)
        return _finish(x, np.where(inside, -math.log(self.b - self.a), -np.inf))

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, self.a + (self.b - self.a) * u)


@dataclass(frozen=True)
class Normal(DistributionModel):
    mu: float = 0.0
    sigma: float = 1.0
    family_tag: ClassVar[str] = "normal"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def support_lo(self) -> float:
        return -math.inf

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, special.ndtr((x - self.mu) / self.sigma))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, special.ndtr((self.mu - x) / self.sigma))

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.mu) / self.sigma
        return _finish(x, -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2 * math.pi))

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, self.mu + self.sigma * special.ndtri(u))

    def closed_form_mgf(self, t: float) -> float:
        return math.exp(self.mu * t + 0.5 * (self.sigma * t) ** 2)


@dataclass(frozen=True)
class Exponential(DistributionModel):
    rate: float = 1.0
    family_tag: ClassVar[str] = "exponential"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")

    @property
    def support_lo(self) -> float:
        return 0.0

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0)), 0.0))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, np.exp(-self.rate * np.maximum(x, 0)))

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf))

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, -np.log1p(-u) / self.rate)

    def closed_form_mgf(self, t: float) -> float:
        return self.rate / (self.rate - t) if t < self.rate else math.inf


@dataclass(frozen=True)
class PointMass(DistributionModel):
    """Degenerate law at ``loc`` with a right-continuous step CDF."""

    loc: float = 0.0
    family_tag: ClassVar[str] = "point_mass"
    continuity: ClassVar[Continuity] = Continuity.DISCRETE

    @property
    def support_lo(self) -> float:
        return self.loc

    @property
    def support_hi(self) -> float:
        # half-open support [loc, loc+) keeps support_lo < support_hi
        return float(np.nextafter(self.loc, math.inf))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.loc,)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, (x >= self.loc).astype(float))

    def cdf_left(self, x):
        x = np.asarray(x, dtype=float)
        return _finish(x, (x > self.loc).astype(float))

    def closed_form_mgf(self, t: float) -> float:
        return math.exp(t * self.loc)


@dataclass(frozen=True)
class CltExponential(DistributionModel):
    """Y_n = (X_1 + ... + X_n - n) / sqrt(n) for unit exponentials X_i.

    The sum is Gamma(n, 1), so the CDF is a regularized incomplete gamma.
    """

    n: int = 1
    family_tag: ClassVar[str] = "clt_exponential"
    has_density: ClassVar[bool] = True
    has_quantile: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "n", _check_index(self.n))

    @property
    def base(self) -> Exponential:
        return Exponential(1.0)

    @property
    def support_lo(self) -> float:
        return -math.sqrt(self.n)

    def _sum(self, y):
        return self.n + math.sqrt(self.n) * y

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        s = np.maximum(self._sum(x), 0.0)
        return _finish(x, special.gammainc(self.n, s))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        s = np.maximum(self._sum(x), 0.0)
        return _finish(x, special.gammaincc(self.n, s))

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        s = self._sum(x)
        out = np.full_like(x, -np.inf)
        pos = s > 0
        sp = s[pos]
        out[pos] = (0.5 * math.log(self.n) + (self.n - 1) * np.log(sp) - sp
                    - special.gammaln(self.n))
        return _finish(x, out)

    def quantile(self, u):
        u = _check_u(u)
        return _finish(u, (special.gammaincinv(self.n, u) - self.n) / math.sqrt(self.n))

    def closed_form_mgf(self, t: float) -> float:
        v = clt_exponential_mgf(self.n, t)
        return v.value


@dataclass(frozen=True)
class Tabulated(DistributionModel):
    """Piecewise-linear CDF through knots ``(xs[i], fs[i])``.

    Treated as continuous between the first and last knot; any mass below
    ``fs[0]`` sits at ``xs[0]`` and any mass above ``fs[-1]`` at ``xs[-1]``.
    """

    xs: tuple[float, ...] = field(default=(0.0, 1.0), repr=False)
    fs: tuple[float, ...] = field(default=(0.0, 1.0), repr=False)
    source: str = ""
    family_tag: ClassVar[str] = "tabulated"

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        fs = tuple(float(v) for v in self.fs)
        _validate_table(xs, fs)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "fs", fs)

    @property
    def params(self) -> dict:
        return {"source": self.source} if self.source else {}

    @property
    def continuity(self) -> Continuity:  # type: ignore[override]
        if self.fs[0] <= 1e-6 and self.fs[-1] >= 1 - 1e-6:
            return Continuity.CONTINUOUS
        return Continuity.MIXED

    @property
    def support_lo(self) -> float:
        return self.xs[0]

    @property
    def support_hi(self) -> float:
        return self.xs[-1]

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.xs[0], self.xs[-1])

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.xs, self.fs)
        out = np.where(x < self.xs[0], 0.0, out)
        out = np.where(x >= self.xs[-1], 1.0, out)
        return _finish(x, out)

    def cdf_left(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.xs, self.fs)
        out = np.where(x <= self.xs[0], 0.0, out)
        out = np.where(x > self.xs[-1], 1.0, out)
        return _finish(x, out)


def _validate_table(xs, fs):
    if len(xs) != len(fs) or len(xs) < 2:
        raise TabulatedCdfError("tabulated CDF needs at least two (x, F) rows")
    if not all(math.isfinite(v) for v in xs + fs):
        raise TabulatedCdfError("tabulated CDF values must be finite")
    if any(b <= a for a, b in zip(xs[:-1], xs[1:])):
        raise TabulatedCdfError("x must be strictly increasing")
    if any(b < a for a, b in zip(fs[:-1], fs[1:])):
        raise TabulatedCdfError("F must be nondecreasing")
    if fs[0] < 0 or fs[-1] > 1:
        raise TabulatedCdfError("F must lie within [0, 1]")


@dataclass(frozen=True)
class LoadReport:
    path: str
    rows: int
    lower_truncated: bool
    upper_truncated: bool
    messages: tuple[str, ...] = ()


def load_tabulated(path: str | Path) -> tuple[Tabulated, LoadReport]:
    """Read a ``x,F`` CSV file into a :class:`Tabulated` model."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header != ["x", "F"]:
                raise TabulatedCdfError(f"{path}: header must be 'x,F', got {','.join(header)!r}")
            xs, fs = [], []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 2:
                    raise TabulatedCdfError(f"{path}:{lineno}: expected 2 columns")
                try:
                    xs.append(float(row[0]))
                    fs.append(float(row[1]))
                except ValueError as exc:
                    raise TabulatedCdfError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise TabulatedCdfError(f"cannot read {path}: {exc}") from None
    model = Tabulated(tuple(xs), tuple(fs), source=str(path))
    messages = []
    lower = fs[0] > 1e-6
    upper = fs[-1] < 1 - 1e-6
    if lower:
        messages.append(f"first F = {fs[0]:g} > 1e-6: support truncated below at x = {xs[0]:g}")
    if upper:
        messages.append(f"last F = {fs[-1]:g} < 1: remaining mass placed at x = {xs[-1]:g}")
    return model, LoadReport(str(path), len(xs), lower, upper, tuple(messages))


def quantile(model: DistributionModel, u):
    """Inverse CDF of ``model`` at ``u`` in (0, 1)."""
    return model.quantile(u)


def clt_exponential_mgf(n: int, t: float) -> MgfValue:
    """Closed-form MGF of (S_n - n)/sqrt(n), S_n a sum of n unit exponentials.

    exp(-t sqrt(n)) (1 - t/sqrt(n))^(-n) for t < sqrt(n), divergent beyond.
    """
    n = _check_index(n)
    root = math.sqrt(n)
    if t >= root:
        return MgfValue.divergent(Route.CLOSED_FORM, f"t >= sqrt(n) = {root:g}")
    log_m = -t * root - n * math.log1p(-t / root)
    return MgfValue(Status.FINITE, math.exp(log_m), 0.0, Route.CLOSED_FORM)


@dataclass(frozen=True)
class DistributionFamily:
    """Indexed sequence n -> F_n with a candidate weak limit.

    ``declared_limit`` is None when the sequence has no proper limit.
    """

    family_id: str
    index_set: tuple[int, ...]
    member_factory: Callable[[int], DistributionModel] = field(repr=False)
    declared_limit: DistributionModel | None
    mgf_route: Route | None = None
    notes: tuple[str, ...] = ()

    def member(self, n: int) -> DistributionModel:
        return self.member_factory(_check_index(n))

    def members(self) -> list[DistributionModel]:
        return [self.member(n) for n in self.index_set]


def make_family(family_id: str, params: dict | None = None) -> DistributionFamily:
    """Build a built-in family.

    ``params`` may carry ``index_set`` (positive integers), ``declared_limit``
    (a model replacing the default limit) and, for ``constant``, ``model``.
    """
    params = dict(params or {})
    index_set = tuple(sorted({_check_index(n) for n in params.pop("index_set", DEFAULT_N_SET)}))
    if not index_set:
        raise ValueError("index_set must be nonempty")
    override = params.pop("declared_limit", None)
    if override is not None and not isinstance(override, DistributionModel):
        raise ValueError("declared_limit must be a DistributionModel")

    if family_id == "pareto_to_frechet":
        family = DistributionFamily(family_id, index_set, ParetoSeq, Frechet())
    elif family_id == "degenerate_drift":
        family = DistributionFamily(
            family_id, index_set, lambda n: PointMass(-float(n)), None,
            notes=("point mass at -n escapes to -infinity; no proper weak limit",))
    elif family_id == "clt_exponential":
        family = DistributionFamily(family_id, index_set, CltExponential, Normal(),
                                    mgf_route=Route.CLOSED_FORM, notes=(CLT_SIGN_NOTE,))
    elif family_id == "constant":
        model = params.pop("model", None)
        if not isinstance(model, DistributionModel):
            raise ValueError("constant family requires params['model']")
        family = DistributionFamily(family_id, index_set, lambda n: model, model)
    else:
        raise ValueError(f"unknown family {family_id!r}")
    if params:
        raise ValueError(f"unexpected parameters for {family_id}: {sorted(params)}")
    if override is not None:
        family = DistributionFamily(family.family_id, family.index_set, family.member_factory,
                                    override, family.mgf_route, family.notes)
    return family


_SIMPLE_MODELS: dict[str, Callable[[], DistributionModel]] = {
    "frechet": Frechet,
    "lognormal": Lognormal,
    "uniform": Uniform,
    "normal": Normal,
    "exponential": Exponential,
}


def parse_model(selector: str) -> DistributionModel:
    """Parse a selector such as ``frechet``, ``pareto_seq:5``,
    ``point_mass:-3``, ``clt_exponential:4`` or ``tabulated:path.csv``."""
    name, _, arg = selector.partition(":")
    if name in _SIMPLE_MODELS and not arg:
        return _SIMPLE_MODELS[name]()
    try:
        if name == "pareto_seq":
            return ParetoSeq(int(arg))
        if name == "clt_exponential":
            return CltExponential(int(arg))
        if name == "point_mass":
            return PointMass(float(arg))
    except ValueError as exc:
        raise ValueError(f"bad model selector {selector!r}: {exc}") from None
    if name == "tabulated" and arg:
        return load_tabulated(arg)[0]
    raise ValueError(f"unknown model {selector!r}")
