"""Probability models on the utility space.

Three cultures are supported: the uniform measure on the sphere of H, which
generalises the Impartial Culture, the Von Mises-Fisher distribution around
a pole, and the Mallows distribution over strict orders. Every model can put
a given probability on the indifference point.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, ive, logsumexp

from django_utility_space.conf import get_thread_count
from django_utility_space.constants import (
    BLOCK_SIZE,
    INDIFFERENCE_TOL,
    MALLOWS_MAX_M,
    CultureKind,
    MallowsMethod,
)
from django_utility_space.exceptions import (
    DimensionError,
    DimensionMismatchError,
    IndifferencePointError,
    InvalidSpecError,
    NonStrictOrderError,
    SizeLimitError,
    UtilitySpaceError,
)
from django_utility_space.geometry import UtilityPoint, canonicalize, hyperplane_basis
from django_utility_space.ordinal import PreferenceOrder, enumerate_strict_orders, order_index
from django_utility_space.population import Population
from django_utility_space.rng import RandomStream, validate_seed

logger = logging.getLogger(__name__)

# Relative accuracy of the quadratures behind the VMF normaliser.
QUADRATURE_RTOL = 1e-10

Pole = Union[UtilityPoint, PreferenceOrder]


@dataclass(frozen=True)
class CultureSpec:
    """Parameters of a culture.

    pole is a UtilityPoint for VMF, a strict PreferenceOrder for Mallows and
    None for the uniform culture.
    """

    kind: CultureKind
    m: int
    kappa: float = 0.0
    pole: Optional[Pole] = None
    indifference_prob: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        """Validate the parameters against the kind of culture."""
        try:
            object.__setattr__(self, "kind", CultureKind(self.kind))
        except ValueError as exc:
            raise InvalidSpecError(f"Unknown culture '{self.kind}'.") from exc
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 2:
            raise InvalidSpecError(f"A culture needs at least 2 candidates, got {self.m}.")

        kappa = float(self.kappa)
        if not math.isfinite(kappa) or kappa < 0:
            raise InvalidSpecError(
                f"The concentration must be finite and nonnegative, got {kappa}."
            )
        object.__setattr__(self, "kappa", kappa)

        prob = float(self.indifference_prob)
        if not 0.0 <= prob <= 1.0:
            raise InvalidSpecError(f"The indifference probability must be in [0, 1], got {prob}.")
        object.__setattr__(self, "indifference_prob", prob)
        object.__setattr__(self, "seed", validate_seed(self.seed))

        self._validate_pole()

    def _validate_pole(self) -> None:
        if self.kind is CultureKind.UNIFORM:
            if self.pole is not None:
                raise InvalidSpecError("The uniform culture takes no pole.")
            return

        if self.kind is CultureKind.VMF:
            if not isinstance(self.pole, UtilityPoint):
                raise InvalidSpecError("The VMF culture needs a utility point as its pole.")
            if self.pole.is_indifference:
                raise InvalidSpecError(
                    "The pole of a VMF culture cannot be the indifference point."
                )
        elif self.kind is CultureKind.MALLOWS:
            if not isinstance(self.pole, PreferenceOrder):
                raise InvalidSpecError("The Mallows culture needs a preference order as its pole.")
            if not self.pole.is_strict:
                raise InvalidSpecError(
                    f"The Mallows pole must be a strict order, got {self.pole}."
                )

        if self.pole.m != self.m:
            raise InvalidSpecError(f"The pole has {self.pole.m} candidates, the culture {self.m}.")

    @property
    def is_ordinal(self) -> bool:
        """Return True if the culture draws preference orders rather than points."""
        return self.kind is CultureKind.MALLOWS

    def stream(self) -> RandomStream:
        """Return the root random stream of this culture."""
        return RandomStream(self.seed)

    def to_dict(self) -> Dict[str, Any]:
        """Serialise to a JSON-compatible dict."""
        pole: Any = None
        if isinstance(self.pole, UtilityPoint):
            pole = list(self.pole.values)
        elif isinstance(self.pole, PreferenceOrder):
            pole = str(self.pole)
        return {
            "kind": self.kind.value,
            "m": self.m,
            "kappa": self.kappa,
            "pole": pole,
            "indifference_prob": self.indifference_prob,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CultureSpec":
        """Build a spec from the dict written by to_dict.

        A VMF pole may be any raw utility vector, it is canonicalised.

        :raises InvalidSpecError: If a key is missing or a value is invalid.
        """
        try:
            kind = CultureKind(data["kind"])
            m = data["m"]
            return cls(
                kind=kind,
                m=m,
                kappa=data.get("kappa", 0.0),
                pole=parse_pole(kind, data.get("pole"), m),
                indifference_prob=data.get("indifference_prob", 0.0),
                seed=data.get("seed", 0),
            )
        except InvalidSpecError:
            raise
        except KeyError as exc:
            raise InvalidSpecError(f"Culture specification is missing {exc}.") from exc
        except (TypeError, ValueError) as exc:
            raise InvalidSpecError(f"Invalid culture specification: {exc}") from exc


def parse_pole(kind: CultureKind, raw: Any, m: Optional[int] = None) -> Optional[Pole]:
    """Interpret a pole given as text or a list.

    VMF poles are raw utility vectors, as a list or as comma separated
    values, and are canonicalised. Mallows poles are order strings such as
    '1>2>3'. A pole of the wrong type is an InvalidSpecError.
    """
    kind = CultureKind(kind)
    if raw is None or raw == "":
        return None

    if kind is CultureKind.VMF:
        try:
            if isinstance(raw, str):
                values = [float(value) for value in raw.split(",")]
            else:
                values = [float(value) for value in raw]
            pole = canonicalize(values)
        except (TypeError, ValueError) as exc:
            raise InvalidSpecError(
                f"The VMF pole must be a list of utilities, got {raw!r}."
            ) from exc
        if pole.is_indifference:
            raise InvalidSpecError("The pole of a VMF culture cannot be the indifference point.")
        return pole

    if kind is CultureKind.MALLOWS:
        if not isinstance(raw, str):
            raise InvalidSpecError(
                f"The Mallows pole must be an order such as '1>2>3', got {raw!r}."
            )
        try:
            return PreferenceOrder.parse(raw)
        except UtilitySpaceError as exc:
            raise InvalidSpecError(str(exc)) from exc

    raise InvalidSpecError("The uniform culture takes no pole.")


def _require_kind(spec: CultureSpec, kind: CultureKind) -> None:
    if spec.kind is not kind:
        raise InvalidSpecError(f"Expected a {kind.value} culture, got {spec.kind.value}.")


# Uniform culture


def _uniform_vectors(m: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw count points of the uniform measure on the sphere of H.

    Each point is an m-vector of standard normals projected on H and
    normalised. Rows whose projection vanishes are drawn again.
    """
    vectors = np.empty((count, m))
    filled = 0
    while filled < count:
        draws = rng.standard_normal((count - filled, m))
        draws -= draws.mean(axis=1, keepdims=True)
        norms = np.linalg.norm(draws, axis=1)
        keep = norms > INDIFFERENCE_TOL
        accepted = draws[keep] / norms[keep, np.newaxis]
        vectors[filled : filled + accepted.shape[0]] = accepted
        filled += accepted.shape[0]
    return vectors


def sample_uniform(m: int, stream: RandomStream) -> UtilityPoint:
    """Draw one point of the uniform culture over m candidates.

    :raises DimensionError: If m < 2.
    """
    if m < 2:
        raise DimensionError(f"The uniform culture needs at least 2 candidates, got {m}.")
    return UtilityPoint.from_vector(_uniform_vectors(m, 1, stream.generator)[0])


# Von Mises-Fisher culture


def _wood_cosines(kappa: float, dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw <u, pole> for a VMF law on the unit sphere of R^dim, dim >= 2.

    Rejection sampler of Ulrich as revised by Wood.
    """
    b = (dim - 1) / (2.0 * kappa + math.sqrt(4.0 * kappa * kappa + (dim - 1) ** 2))
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + (dim - 1) * math.log(1.0 - x0 * x0)
    shape = (dim - 1) / 2.0

    cosines = np.empty(count)
    filled = 0
    attempts = 0
    while filled < count:
        needed = count - filled
        z = rng.beta(shape, shape, size=needed)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        log_u = np.log1p(-rng.random(needed))
        accepted = w[kappa * w + (dim - 1) * np.log(1.0 - x0 * w) - c >= log_u]
        cosines[filled : filled + accepted.size] = accepted
        filled += accepted.size
        attempts += needed

    if count:
        logger.debug("VMF rejection sampler accepted %d of %d proposals", count, attempts)
    return cosines


def _pole_reflection(pole_coordinates: np.ndarray) -> Optional[np.ndarray]:
    """Return the Householder vector mapping e_1 to the pole, None for the identity."""
    h = -pole_coordinates.copy()
    h[0] += 1.0
    if np.linalg.norm(h) <= 1e-15:
        return None
    return h


def _vmf_vectors(spec: CultureSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw count canonical vectors from the VMF culture of spec."""
    pole = spec.pole.vector
    if spec.m == 2:
        # The sphere of H is two points, the pole and its inverse.
        forward = 1.0 / (1.0 + math.exp(-2.0 * spec.kappa))
        signs = np.where(rng.random(count) < forward, 1.0, -1.0)
        return signs[:, np.newaxis] * pole

    basis = hyperplane_basis(spec.m)
    dim = spec.m - 1
    cosines = _wood_cosines(spec.kappa, dim, count, rng)

    tangent = rng.standard_normal((count, dim - 1))
    norms = np.linalg.norm(tangent, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    tangent /= norms
    sines = np.sqrt(np.clip(1.0 - cosines * cosines, 0.0, None))
    local = np.column_stack([cosines, sines[:, np.newaxis] * tangent])

    h = _pole_reflection(basis.T @ pole)
    if h is not None:
        local -= (2.0 / (h @ h)) * np.outer(local @ h, h)

    vectors = local @ basis.T
    vectors -= vectors.mean(axis=1, keepdims=True)
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    return vectors


def sample_vmf(spec: CultureSpec, stream: RandomStream) -> UtilityPoint:
    """Draw one point from the VMF culture of spec.

    :raises InvalidSpecError: If spec is not a VMF culture.
    """
    _require_kind(spec, CultureKind.VMF)
    return UtilityPoint.from_vector(_vmf_vectors(spec, 1, stream.generator)[0])


def _colatitude_integral(
    kappa: float, m: int, lower: float = 0.0, upper: float = math.pi
) -> float:
    """Return the integral of exp(kappa (cos t - 1)) sin^(m-3) t over [lower, upper]."""
    if upper <= lower:
        return 0.0
    exponent = m - 3

    def integrand(theta: float) -> float:
        return math.exp(kappa * (math.cos(theta) - 1.0)) * math.sin(theta) ** exponent

    # The mass sits within a few 1/sqrt(kappa) of the pole.
    points = None
    if kappa > 0:
        peak = min(math.pi, 10.0 / math.sqrt(kappa))
        if lower < peak < upper:
            points = [peak]
    value, _ = quad(
        integrand, lower, upper, points=points, epsabs=0.0, epsrel=QUADRATURE_RTOL, limit=200
    )
    return value


def _log_sine_power_integral(m: int) -> float:
    """Return log of the integral of sin^(m-3) over [0, pi]."""
    return 0.5 * math.log(math.pi) + gammaln((m - 2) / 2.0) - gammaln((m - 1) / 2.0)


@lru_cache(maxsize=256)
def vmf_log_normalizer(kappa: float, m: int) -> float:
    """Return log C_kappa for the VMF law over m candidates.

    C_kappa normalises exp(kappa <u, pole>) against the uniform probability
    measure of the sphere of H, so 1 / C_kappa is the mean of that exponential
    under the uniform culture.
    """
    if m < 2:
        raise DimensionError(f"The VMF culture needs at least 2 candidates, got {m}.")
    if kappa < 0 or not math.isfinite(kappa):
        raise InvalidSpecError(f"The concentration must be finite and nonnegative, got {kappa}.")
    if kappa == 0:
        return 0.0
    if m == 2:
        # 1 / C = cosh(kappa)
        return -(kappa + math.log1p(math.exp(-2.0 * kappa)) - math.log(2.0))
    return -(kappa + math.log(_colatitude_integral(kappa, m)) - _log_sine_power_integral(m))


def vmf_log_density(u: UtilityPoint, spec: CultureSpec) -> float:
    """Return the log density of the VMF culture at u, relative to the uniform culture.

    :raises InvalidSpecError: If spec is not a VMF culture.
    :raises IndifferencePointError: If u is the indifference point.
    """
    _require_kind(spec, CultureKind.VMF)
    if u.m != spec.m:
        raise DimensionMismatchError(f"Expected {spec.m} candidates, got {u.m}.")
    if u.is_indifference:
        raise IndifferencePointError("The VMF density is not defined at the indifference point.")
    inner = math.fsum(a * b for a, b in zip(u.values, spec.pole.values))
    return vmf_log_normalizer(spec.kappa, spec.m) + spec.kappa * inner


def vmf_expected_resultant_length(kappa: float, m: int) -> float:
    """Return the length of the mean resultant vector of the VMF law.

    This is I_(p/2)(kappa) / I_(p/2-1)(kappa) with p = m - 1 the dimension of H.
    """
    if m < 2:
        raise DimensionError(f"The VMF culture needs at least 2 candidates, got {m}.")
    if kappa == 0:
        return 0.0
    order = (m - 1) / 2.0
    return float(ive(order, kappa) / ive(order - 1.0, kappa))


def vmf_cosine_cdf(t: float, kappa: float, m: int) -> float:
    """Return P(<u, pole> <= t) under the VMF law over m candidates."""
    if m < 2:
        raise DimensionError(f"The VMF culture needs at least 2 candidates, got {m}.")
    if t < -1.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    if m == 2:
        return 1.0 / (1.0 + math.exp(2.0 * kappa))

    theta = math.acos(t)
    return _colatitude_integral(kappa, m, theta, math.pi) / _colatitude_integral(kappa, m)


# Mallows culture


def _check_mallows_size(m: int) -> None:
    if m > MALLOWS_MAX_M:
        raise SizeLimitError(
            f"The Mallows culture is limited to {MALLOWS_MAX_M} candidates, got {m}."
        )


@lru_cache(maxsize=None)
def _permutation_table(m: int) -> np.ndarray:
    """Return every permutation of range(m) as rows, in lexicographic order."""
    table = np.array(list(itertools.permutations(range(m))), dtype=np.int64)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def _kendall_distances(pole: PreferenceOrder) -> np.ndarray:
    """Return the Kendall distance from the pole to every order of enumerate_strict_orders."""
    m = pole.m
    # positions[k, c] is the rank of candidate c + 1 in the k-th order.
    positions = np.argsort(_permutation_table(m), axis=1)
    ranking = [candidate - 1 for candidate in pole.as_permutation()]
    distances = np.zeros(positions.shape[0], dtype=np.int64)
    for above, below in itertools.combinations(ranking, 2):
        distances += positions[:, above] > positions[:, below]
    distances.setflags(write=False)
    return distances


def _mallows_log_weights(spec: CultureSpec) -> np.ndarray:
    return -spec.kappa * _kendall_distances(spec.pole)


def mallows_log_normalizer(kappa: float, m: int) -> float:
    """Return log of the sum of exp(-kappa d) over all strict orders, in closed form.

    The sum factorises as the product over i = 1..m of sum_(v < i) exp(-kappa v).
    """
    if m < 1:
        raise DimensionError(f"The number of candidates must be positive, got {m}.")
    return math.fsum(float(logsumexp(-kappa * np.arange(i))) for i in range(1, m + 1))


def mallows_probabilities(spec: CultureSpec) -> np.ndarray:
    """Return the Mallows probability of every order of enumerate_strict_orders(m)."""
    _require_kind(spec, CultureKind.MALLOWS)
    _check_mallows_size(spec.m)
    log_weights = _mallows_log_weights(spec)
    return np.exp(log_weights - logsumexp(log_weights))


def mallows_pmf(order: PreferenceOrder, spec: CultureSpec) -> float:
    """Return the probability of a strict order under the Mallows culture.

    The normalisation sums over all m! strict orders.

    :raises SizeLimitError: If m > 8.
    :raises NonStrictOrderError: If the order has ties.
    """
    _require_kind(spec, CultureKind.MALLOWS)
    if order.m != spec.m:
        raise DimensionMismatchError(f"Expected an order of {spec.m} candidates, got {order.m}.")
    _check_mallows_size(spec.m)
    if not order.is_strict:
        raise NonStrictOrderError(
            f"The Mallows culture only gives mass to strict orders, not {order}."
        )
    return float(mallows_probabilities(spec)[order_index(order)])


@lru_cache(maxsize=None)
def _insertion_table(m: int) -> np.ndarray:
    """Map insertion codes to rankings.

    Row r is the ranking, best first and as indices into the pole, built by
    inserting the (i+1)-th pole candidate above v_i of the candidates already
    placed, where (v_1, ..., v_m) is r written in the mixed radix (1, 2, ..., m).
    """
    rows = []
    for code in itertools.product(*(range(radix) for radix in range(1, m + 1))):
        ranking: List[int] = []
        for item, displaced in enumerate(code):
            ranking.insert(len(ranking) - displaced, item)
        rows.append(ranking)
    table = np.array(rows, dtype=np.int64)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def _insertion_orders(pole: PreferenceOrder) -> Tuple[PreferenceOrder, ...]:
    labels = np.array(pole.as_permutation())
    return tuple(
        PreferenceOrder.from_permutation(labels[row].tolist()) for row in _insertion_table(pole.m)
    )


def _mallows_insertion(
    spec: CultureSpec, count: int, rng: np.random.Generator
) -> List[PreferenceOrder]:
    """Draw orders by repeated insertion.

    The displacements v_i are independent, with P(v) proportional to exp(-kappa v).
    """
    m = spec.m
    uniforms = rng.random((count, m))
    codes = np.zeros(count, dtype=np.int64)
    for item in range(m):
        weights = np.exp(-spec.kappa * np.arange(item + 1))
        cdf = np.cumsum(weights / weights.sum())
        displaced = np.minimum(np.searchsorted(cdf, uniforms[:, item], side="right"), item)
        codes = codes * (item + 1) + displaced
    orders = _insertion_orders(spec.pole)
    return [orders[code] for code in codes]


def _mallows_enumeration(
    spec: CultureSpec, count: int, rng: np.random.Generator
) -> List[PreferenceOrder]:
    orders = enumerate_strict_orders(spec.m)
    picks = rng.choice(len(orders), size=count, p=mallows_probabilities(spec))
    return [orders[pick] for pick in picks]


def _mallows_orders(
    spec: CultureSpec, count: int, rng: np.random.Generator, method: MallowsMethod
) -> List[PreferenceOrder]:
    if spec.m > MALLOWS_MAX_M:
        raise InvalidSpecError(
            f"The Mallows culture is limited to {MALLOWS_MAX_M} candidates, got {spec.m}."
        )
    if MallowsMethod(method) is MallowsMethod.ENUMERATION:
        return _mallows_enumeration(spec, count, rng)
    return _mallows_insertion(spec, count, rng)


def sample_mallows(
    spec: CultureSpec, stream: RandomStream, method: MallowsMethod = MallowsMethod.INSERTION
) -> PreferenceOrder:
    """Draw one strict order from the Mallows culture of spec.

    Both methods draw from the same law. INSERTION uses the repeated
    insertion model, ENUMERATION picks among all m! orders.

    :raises InvalidSpecError: If spec is not a Mallows culture with m <= 8.
    """
    _require_kind(spec, CultureKind.MALLOWS)
    return _mallows_orders(spec, 1, stream.generator, method)[0]


# Populations


def _sample_block(
    spec: CultureSpec, size: int, rng: np.random.Generator, method: MallowsMethod
) -> Union[Population, List[PreferenceOrder]]:
    """Draw one block of agents: the indifference draws first, then the continuous ones."""
    indifferent = rng.random(size) < spec.indifference_prob
    count = size - int(indifferent.sum())

    if spec.kind is CultureKind.MALLOWS:
        drawn = iter(_mallows_orders(spec, count, rng, method))
        tie = PreferenceOrder.indifferent(spec.m)
        return [tie if flag else next(drawn) for flag in indifferent]

    if spec.kind is CultureKind.VMF:
        drawn_vectors = _vmf_vectors(spec, count, rng)
    else:
        drawn_vectors = _uniform_vectors(spec.m, count, rng)
    vectors = np.zeros((size, spec.m))
    vectors[~indifferent] = drawn_vectors
    return Population(vectors, indifferent)


def sample_population(
    spec: CultureSpec,
    n: int,
    stream: Optional[RandomStream] = None,
    threads: Optional[int] = None,
    method: MallowsMethod = MallowsMethod.INSERTION,
) -> Union[Population, List[PreferenceOrder]]:
    """Draw n independent agents from a culture.

    Each agent is the indifference point with probability indifference_prob
    and a draw of the culture otherwise. The agents are generated in blocks
    of BLOCK_SIZE, each with its own substream derived from the block index,
    so the result does not depend on the number of threads.

    :param stream: The random stream, by default the root stream of spec.seed.
    :param threads: Worker threads, by default from UTILGEO_THREADS or settings.
    :return: A Population, or a list of preference orders for Mallows.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise InvalidSpecError(f"The population size must be a nonnegative integer, got {n}.")
    if stream is None:
        stream = spec.stream()
    if threads is None:
        threads = get_thread_count()

    population_stream = stream.spawn()
    sizes = [min(BLOCK_SIZE, n - start) for start in range(0, n, BLOCK_SIZE)]

    def run(block: int) -> Union[Population, List[PreferenceOrder]]:
        rng = population_stream.substream(block).generator
        return _sample_block(spec, sizes[block], rng, method)

    logger.debug(
        "Sampling %d agents from a %s culture in %d blocks on %d threads",
        n,
        spec.kind.value,
        len(sizes),
        threads,
    )
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(run, range(len(sizes))))
    else:
        blocks = [run(block) for block in range(len(sizes))]

    if spec.is_ordinal:
        return [order for block in blocks for order in block]
    return Population.concatenate(blocks, spec.m)
