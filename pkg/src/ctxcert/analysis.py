"""Witness values, signaling factors, and resampled error bars from count
data or probability bundles."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exclusivity import ExclusivityGraph
from .experiment import CountTable, parse_vertex_id, stream_rng


@dataclass
class ProbabilityBundle:
    """All probabilities a two-point analysis needs.

    ``p_vertex[k]``: detection probability of the input state on ray k.
    ``p_cond1[(i, j)]``: ray j on the outcome-1 repreparation of ray i.
    ``p_cond0[(i, j)]``: ray j on the outcome-0 repreparation of ray i.
    Keys are 0-based and conditionals are directed.
    """

    p_vertex: dict[int, float]
    p_cond1: dict[tuple[int, int], float] = field(default_factory=dict)
    p_cond0: dict[tuple[int, int], float] = field(default_factory=dict)
    provenance: str = "ingested"

    def __post_init__(self) -> None:
        for label, table in (("p_vertex", self.p_vertex),
                             ("p_cond1", self.p_cond1),
                             ("p_cond0", self.p_cond0)):
            for key, value in table.items():
                if not -1e-12 <= value <= 1.0 + 1e-12:
                    raise ValueError(
                        f"{label}[{key}] = {value} is not a probability")


def bundle_from_counts(table: CountTable, provenance: str = "simulated") -> ProbabilityBundle:
    """Normalize a count table into probabilities keyed by ray indices."""
    p_vertex: dict[int, float] = {}
    p_cond1: dict[tuple[int, int], float] = {}
    p_cond0: dict[tuple[int, int], float] = {}
    for (prep, meas), _ in table.records.items():
        p = table.probability((prep, meas))
        j = parse_vertex_id(meas)
        if prep == "psi":
            p_vertex[j] = p
        elif prep.startswith("post1:"):
            p_cond1[(parse_vertex_id(prep[6:]), j)] = p
        elif prep.startswith("post0:"):
            p_cond0[(parse_vertex_id(prep[6:]), j)] = p
        else:
            raise ValueError(f"unrecognized preparation id {prep!r}")
    return ProbabilityBundle(p_vertex, p_cond1, p_cond0, provenance)


def analytic_bundle(rays: np.ndarray, state: np.ndarray,
                    edges: list[tuple[int, int]]) -> ProbabilityBundle:
    """Exact Born-rule bundle for a ray family, input state and edge list."""
    rays = np.asarray(rays, dtype=complex)
    state = np.asarray(state, dtype=complex).ravel()
    p_vertex = {k: float(abs(np.vdot(rays[k], state)) ** 2)
                for k in range(rays.shape[0])}
    p_cond1: dict[tuple[int, int], float] = {}
    p_cond0: dict[tuple[int, int], float] = {}
    for i, j in edges:
        for a, b in ((i, j), (j, i)):
            p_cond1[(a, b)] = float(abs(np.vdot(rays[b], rays[a])) ** 2)
            amp = np.vdot(rays[a], state)
            remainder = state - amp * rays[a]
            norm2 = float(np.vdot(remainder, remainder).real)
            if norm2 < 1e-14:
                raise ValueError(
                    f"state coincides with ray {a}; its outcome-0 "
                    "repreparation is undefined")
            p_cond0[(a, b)] = float(abs(np.vdot(rays[b], remainder)) ** 2 / norm2)
    return ProbabilityBundle(p_vertex, p_cond1, p_cond0, provenance="analytic")


def _joint(probs: ProbabilityBundle, i: int, j: int) -> float:
    """P(1,1|i,j) via the repreparation decomposition."""
    return probs.p_vertex[i] * probs.p_cond1[(i, j)]


def witness_mu(probs: ProbabilityBundle, g: ExclusivityGraph,
               edge_direction: str = "symmetric") -> float:
    """Vertex-probability sum minus the joint-detection penalty over edges.

    Each unordered edge is counted once.  ``edge_direction`` picks which
    measured direction enters the penalty: ``forward`` uses (i, j) as stored
    (i < j), ``reverse`` the opposite, and ``symmetric`` their mean wherever
    both exist.
    """
    if edge_direction not in ("symmetric", "forward", "reverse"):
        raise ValueError(f"unknown edge_direction {edge_direction!r}")
    missing = [k for k in range(g.n_vertices) if k not in probs.p_vertex]
    if missing:
        raise ValueError(f"bundle lacks vertex probabilities for {missing}")
    total = sum(probs.p_vertex[k] for k in range(g.n_vertices))
    missing_edges = []
    penalty = 0.0
    for i, j in g.edges:
        have_fwd = (i, j) in probs.p_cond1
        have_rev = (j, i) in probs.p_cond1
        if edge_direction == "forward" and have_fwd:
            penalty += _joint(probs, i, j)
        elif edge_direction == "reverse" and have_rev:
            penalty += _joint(probs, j, i)
        elif edge_direction == "symmetric" and (have_fwd or have_rev):
            terms = []
            if have_fwd:
                terms.append(_joint(probs, i, j))
            if have_rev:
                terms.append(_joint(probs, j, i))
            penalty += sum(terms) / len(terms)
        else:
            missing_edges.append((i, j))
    if missing_edges:
        raise ValueError(f"bundle lacks conditional data for edges {missing_edges}")
    return float(total - penalty)


def vertex_sum(probs: ProbabilityBundle) -> float:
    return float(sum(probs.p_vertex.values()))


@dataclass(frozen=True)
class HardyReport:
    """Per-context sums with the logical verdicts attached."""

    context_sums: tuple[float, ...]
    quantum_target: float = 1.0
    # Classical reasoning forces the last sum to 0 once the others saturate.
    classical_final: float = 0.0

    @property
    def p_success(self) -> float:
        return self.context_sums[-1]


def hardy_report(probs: ProbabilityBundle, contexts: list[list[int]]) -> HardyReport:
    sums = tuple(float(sum(probs.p_vertex[v] for v in ctx)) for ctx in contexts)
    return HardyReport(context_sums=sums)


@dataclass(frozen=True)
class SignalingFactors:
    """Directed no-signaling diagnostics per edge.

    ``eps`` (effect of a later measurement on an earlier one) vanishes
    identically under count normalization; ``eps_prime`` is the nontrivial
    direction and is computed from the repreparation decomposition.
    """

    eps: dict[tuple[int, int], float]
    eps_prime: dict[tuple[int, int], float]
    skipped: list[tuple[int, int]]

    def mean_abs_eps_prime(self) -> float:
        values = np.array(list(self.eps_prime.values()))
        return float(np.mean(np.abs(values)))

    def std_abs_eps_prime(self) -> float:
        values = np.array(list(self.eps_prime.values()))
        return float(np.std(np.abs(values)))


def signaling_factors(probs: ProbabilityBundle, g: ExclusivityGraph) -> SignalingFactors:
    """Both directed factors for every edge with conditional data available."""
    eps: dict[tuple[int, int], float] = {}
    eps_prime: dict[tuple[int, int], float] = {}
    skipped: list[tuple[int, int]] = []
    for i, j in g.edges:
        for a, b in ((i, j), (j, i)):
            if (a, b) not in probs.p_cond1 or (a, b) not in probs.p_cond0:
                skipped.append((a, b))
                continue
            eps[(a, b)] = 0.0
            p_a = probs.p_vertex[a]
            eps_prime[(a, b)] = float(
                probs.p_vertex[b]
                - p_a * probs.p_cond1[(a, b)]
                - (1.0 - p_a) * probs.p_cond0[(a, b)])
    if skipped:
        warnings.warn(f"missing conditional data for {len(skipped)} directed "
                      "edges; they were skipped", stacklevel=2)
    return SignalingFactors(eps=eps, eps_prime=eps_prime, skipped=skipped)


@dataclass(frozen=True)
class WitnessPipeline:
    """What to recompute per resampling group.

    The per-vertex and per-edge flags add one quantity per probability and
    per directed edge, which is how the plot data gets its error bars.
    """

    graph: ExclusivityGraph
    contexts: list[list[int]] | None = None
    classical_bound: float = 0.0
    quantum_bound: float = 0.0
    edge_direction: str = "symmetric"
    per_vertex: bool = False
    per_edge_signaling: bool = False

    def evaluate(self, probs: ProbabilityBundle) -> dict[str, float]:
        out = {
            "mu": witness_mu(probs, self.graph, self.edge_direction),
            "vertex_sum": vertex_sum(probs),
        }
        if probs.p_cond0:
            factors = signaling_factors(probs, self.graph)
            out["mean_abs_eps_prime"] = factors.mean_abs_eps_prime()
            if self.per_edge_signaling:
                for (i, j), value in factors.eps_prime.items():
                    out[f"eps_prime:{i + 1}:{j + 1}"] = value
        if self.contexts:
            for c, value in enumerate(
                    hardy_report(probs, self.contexts).context_sums):
                out[f"context_sum_{c + 1}"] = value
        if self.per_vertex:
            for k, value in sorted(probs.p_vertex.items()):
                out[f"p_vertex:{k + 1}"] = value
        return out


@dataclass
class ResampleResult:
    """Group statistics of every pipeline quantity."""

    stderr: dict[str, float]
    mean: dict[str, float]
    n_groups: int


def resample_errors(counts: CountTable, pipeline: WitnessPipeline,
                    n_groups: int = 100, seed: int = 0) -> ResampleResult:
    """Re-draw every count from a Poisson at its recorded value, recompute
    the pipeline per group, and report the spread across groups.

    Under ``reference`` normalization the shared denominator is also redrawn
    once per group from Poisson(shots_nominal), reflecting that the recorded
    probabilities were rates against a separately monitored count level.
    Streams are keyed by (seed, setting, group), so the result is independent
    of record ordering.
    """
    if n_groups < 2:
        raise ValueError("need at least two resampling groups")
    keys = sorted(counts.records)
    values: dict[str, list[float]] = {}
    for group in range(n_groups):
        records: dict[tuple[str, str], tuple[int, int]] = {}
        for prep, meas in keys:
            c1, c0 = counts.records[(prep, meas)]
            rng = stream_rng(seed, prep, meas, group)
            records[(prep, meas)] = (int(rng.poisson(c1)), int(rng.poisson(c0)))
        shots = counts.shots_nominal
        if counts.normalization == "reference":
            norm_rng = stream_rng(seed, "__norm__", "__norm__", group)
            shots = max(1, int(norm_rng.poisson(counts.shots_nominal)))
        resampled = CountTable(records=records, shots_nominal=shots,
                               normalization=counts.normalization)
        bundle = bundle_from_counts(resampled)
        for name, val in pipeline.evaluate(bundle).items():
            values.setdefault(name, []).append(val)
    stderr = {name: float(np.std(vals, ddof=1)) for name, vals in values.items()}
    mean = {name: float(np.mean(vals)) for name, vals in values.items()}
    return ResampleResult(stderr=stderr, mean=mean, n_groups=n_groups)


@dataclass
class WitnessReport:
    """Headline numbers of a contextuality test."""

    mu: float
    classical_bound: float
    quantum_bound: float
    stderr: float
    sigma_deviation: float
    ratio: float
    mu_forward: float = float("nan")
    mu_reverse: float = float("nan")
    vertex_sum: float = float("nan")
    mean_abs_eps_prime: float = float("nan")

    def as_dict(self) -> dict[str, float]:
        return {
            "mu": self.mu,
            "classical_bound": self.classical_bound,
            "quantum_bound": self.quantum_bound,
            "stderr": self.stderr,
            "sigma_deviation": self.sigma_deviation,
            "ratio": self.ratio,
            "mu_forward": self.mu_forward,
            "mu_reverse": self.mu_reverse,
            "vertex_sum": self.vertex_sum,
            "mean_abs_eps_prime": self.mean_abs_eps_prime,
        }


def witness_report(probs: ProbabilityBundle, g: ExclusivityGraph,
                   classical_bound: float, quantum_bound: float,
                   stderr: float = 0.0) -> WitnessReport:
    """Assemble the report; the single-direction values are included because
    the direction convention moves the headline number at the 1e-3 level."""
    mu = witness_mu(probs, g, "symmetric")
    mean_eps = float("nan")
    if probs.p_cond0:
        mean_eps = signaling_factors(probs, g).mean_abs_eps_prime()
    sigma_dev = (mu - classical_bound) / stderr if stderr > 0 else float("inf")
    return WitnessReport(
        mu=mu,
        classical_bound=classical_bound,
        quantum_bound=quantum_bound,
        stderr=stderr,
        sigma_deviation=sigma_dev,
        ratio=mu / classical_bound,
        mu_forward=witness_mu(probs, g, "forward"),
        mu_reverse=witness_mu(probs, g, "reverse"),
        vertex_sum=vertex_sum(probs),
        mean_abs_eps_prime=mean_eps,
    )


@dataclass(frozen=True)
class CorrelationTerm:
    """One correlation entering a correlation-form inequality."""

    label: str
    coefficient: int      # +1 or -1
    value: float

    def __post_init__(self) -> None:
        if self.coefficient not in (+1, -1):
            raise ValueError("coefficient must be +1 or -1")
        if not -1.0 <= self.value <= 1.0:
            raise ValueError(f"correlation {self.label} = {self.value} out of range")


@dataclass
class ProbabilityFormReport:
    """A correlation inequality recast as a sum of exclusive-event
    probabilities.

    Each +1 term maps to its two disagreeing-outcome events with weight
    (1 - c)/2, each -1 term to its two agreeing-outcome events with weight
    (1 + c)/2; a classical lower bound b on the signed correlation sum
    becomes the upper bound (T - b)/2 on the event total.
    """

    event_terms: dict[str, float]
    total: float
    nchv_bound: float
    violation_ratio: float


def correlation_to_probability(terms: list[CorrelationTerm],
                               classical_bound: float,
                               d: int | None = None) -> ProbabilityFormReport:
    """Recast a two-outcome correlation inequality in event-probability form.

    ``d`` documents the observable dimension and is recorded only; the
    conversion itself is dimension-independent.
    """
    del d
    event_terms = {}
    for term in terms:
        if term.coefficient > 0:
            event_terms[term.label] = (1.0 - term.value) / 2.0
        else:
            event_terms[term.label] = (1.0 + term.value) / 2.0
    total = float(sum(event_terms.values()))
    bound = (len(terms) - classical_bound) / 2.0
    return ProbabilityFormReport(
        event_terms=event_terms,
        total=total,
        nchv_bound=bound,
        violation_ratio=(total - bound) / bound,
    )
