"""Graph construction engines.

expand_static grows a graph from seed entities with a fixed pattern set:
pop an entity, issue one connectivity query per query pattern, extract
pattern-connected pairs from the pooled snippets, merge them under the tau
threshold, and enqueue newly discovered entities. The request budget is
checked after each expanded entity, so the final entity may overshoot it.

expand_with_pattern_mining wraps the same loop in iterations. After each
frontier exhaustion it issues pair queries over the heaviest edges, scores
the phrases found between entities, and admits high-scoring ones as new
patterns (queryable ones also join the query set). Each entity/pattern
combination is queried at most once per run, so later iterations only spend
requests on what the new patterns unlock.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO

from .catalog import EntityCatalog
from .extract import (
    DEFAULT_MATCH_PATTERNS,
    DEFAULT_QUERY_PATTERNS,
    Pattern,
    PatternCandidate,
    dedupe_patterns,
    extract_edges,
    extract_pattern_candidates,
    pattern_key,
)
from .frontier import FIFO, PRIORITY, Frontier
from .graph import SocialGraph
from .search import (
    BudgetLedger,
    QueryError,
    SearchGateway,
    Snippet,
    TransportError,
    connectivity_query,
    is_queryable_phrase,
    pair_query,
)

MODE_BF = "bf"
MODE_PRIO = "prio"
MODE_PATTERN_ITER = "pattern-iter"
MODES = (MODE_BF, MODE_PRIO, MODE_PATTERN_ITER)

BUDGET = "budget"
FRONTIER_EMPTY = "frontier-empty"
TRANSPORT = "transport-error"
FIXED_POINT = "fixed-point"
MAX_ITER = "max-iterations"


@dataclass(frozen=True)
class RunConfig:
    """Everything one extraction run needs besides the backend and catalog.

    seeds: starting entities, all of which must be known to the catalog.
    query_patterns: phrases used to build connectivity queries, in query
    order. match_patterns: phrases recognized in snippet gaps; the effective
    match set is their union with the query patterns. tau: minimum per-step
    evidence for a new edge. sigma: pattern admission threshold (strict).
    h: heaviest edges pair-queried per mining pass. max_requests of None
    disables the budget. mode picks the engine: bf and prio drive
    expand_static, pattern-iter drives expand_with_pattern_mining.
    """

    seeds: tuple[str, ...] = ()
    query_patterns: tuple[str, ...] = DEFAULT_QUERY_PATTERNS
    match_patterns: tuple[str, ...] = DEFAULT_MATCH_PATTERNS
    tau: int = 2
    sigma: int = 5
    alpha: float = 0.0
    h: int = 100
    k: int = 200
    max_requests: int | None = None
    max_iterations: int = 3
    mode: str = MODE_BF

    def validate(self) -> None:
        if not self.seeds:
            raise ValueError("at least one seed entity is required")
        if not self.query_patterns:
            raise ValueError("at least one query pattern is required")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.sigma < 1:
            raise ValueError("sigma must be >= 1")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_requests is not None and self.max_requests < 1:
            raise ValueError("max_requests must be >= 1 or unset")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.mode not in MODES:
            raise ValueError("mode must be bf, prio, or pattern-iter")


@dataclass
class StepRecord:
    """One expanded entity: what it pulled in and the totals afterwards."""

    step: int
    entity: str
    snippet_count: int
    new_nodes: list[str]
    new_edges: list[tuple[str, str]]
    node_count: int
    edge_count: int
    requests_used: int


@dataclass
class IterationRecord:
    """One mining iteration: its expansion steps and the mining pass."""

    index: int
    steps: list[StepRecord]
    pair_queries_issued: int
    candidates: list[PatternCandidate]
    admitted: list[Pattern]
    node_count: int
    edge_count: int
    requests_used: int


@dataclass
class RunReport:
    """Everything a finished (or aborted) run produced besides the graph."""

    seeds: list[str]
    steps: list[StepRecord] = field(default_factory=list)
    iterations: list[IterationRecord] = field(default_factory=list)
    patterns: list[Pattern] = field(default_factory=list)
    query_patterns: list[Pattern] = field(default_factory=list)
    nodes_found: int = 0
    edges_found: int = 0
    requests_used: int = 0
    queries_issued: int = 0
    complete: bool = True
    stopped_reason: str = FRONTIER_EMPTY

    @property
    def patterns_active(self) -> int:
        return len(self.patterns)

    @property
    def pair_queries_issued(self) -> int:
        return sum(it.pair_queries_issued for it in self.iterations)


def step_trace_to_curve(report: RunReport) -> list[tuple[int, int, int]]:
    """Growth curve points (requests_used, node_count, edge_count) per step."""
    return [(s.requests_used, s.node_count, s.edge_count) for s in report.steps]


def write_trace_csv(report: RunReport, fh: IO[str]) -> None:
    """One row per expansion step with cumulative totals."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        ["step", "entity", "snippets", "new_nodes", "new_edges", "nodes", "edges", "requests"]
    )
    for s in report.steps:
        writer.writerow(
            [
                s.step,
                s.entity,
                s.snippet_count,
                len(s.new_nodes),
                len(s.new_edges),
                s.node_count,
                s.edge_count,
                s.requests_used,
            ]
        )


class _Run:
    """Shared state for one engine run."""

    def __init__(
        self,
        config: RunConfig,
        gateway: SearchGateway,
        catalog: EntityCatalog,
    ) -> None:
        config.validate()
        self.gateway = gateway
        self.catalog = catalog
        self.config = config
        self.ledger = BudgetLedger(config.max_requests)
        gateway.ledger = self.ledger
        self.graph = SocialGraph()
        self.query_patterns = dedupe_patterns(
            Pattern(p, "seed") for p in config.query_patterns
        )
        # queries also match, so the effective match set covers both lists
        self.match_patterns = dedupe_patterns(
            Pattern(p, "seed")
            for p in (*config.match_patterns, *config.query_patterns)
        )
        self.steps: list[StepRecord] = []
        self.iterations: list[IterationRecord] = []
        self.step_count = 0
        self.queried: set[tuple[str, str]] = set()
        self.enqueued: set[str] = set()
        self.dead: set[str] = set()
        self.discovered: list[str] = []
        self.seeds: list[str] = []
        seen_seeds: set[str] = set()
        for raw in config.seeds:
            canonical = catalog.canonical(raw)
            if canonical is None:
                raise ValueError(f"seed entity not in catalog: {raw!r}")
            if canonical not in seen_seeds:
                seen_seeds.add(canonical)
                self.seeds.append(canonical)
                self.discovered.append(canonical)
                self.graph.add_node(canonical)

    def new_frontier(self) -> Frontier:
        mode = PRIORITY if self.config.mode == MODE_PRIO else FIFO
        return Frontier(mode, self.config.alpha)

    def push(self, frontier: Frontier, name: str) -> None:
        self.enqueued.add(name)
        frontier.push(name, self.step_count)

    def pending_patterns(self, entity: str) -> list[Pattern]:
        return [
            p
            for p in self.query_patterns
            if is_queryable_phrase(p.phrase) and (entity, p.key) not in self.queried
        ]

    def has_pending(self, entity: str) -> bool:
        return entity not in self.dead and bool(self.pending_patterns(entity))

    def expand_entity(self, entity: str) -> StepRecord:
        """Query every pending pattern for one entity and merge the evidence.

        The per-pattern results are pooled with one step-local (url, text)
        set, so a snippet returned by several of this entity's queries
        counts once. A later revisit (new patterns admitted by mining)
        pools afresh: its extraction pass runs under the grown match set,
        which is what lets admitted patterns contribute edges.
        """
        pooled: list[Snippet] = []
        seen: set[tuple[str, str]] = set()
        for pat in self.pending_patterns(entity):
            self.queried.add((entity, pat.key))
            try:
                query = connectivity_query(entity, pat.phrase)
            except QueryError:
                self.dead.add(entity)
                break
            snippets, _ = self.gateway.search(
                query, self.config.k, enforce_budget=False
            )
            for snippet in snippets:
                key = (snippet.url, snippet.text)
                if key not in seen:
                    seen.add(key)
                    pooled.append(snippet)
        evidence = extract_edges(pooled, self.catalog, self.match_patterns)
        new_nodes, new_edges = self.graph.merge_evidence(evidence, self.config.tau)
        self.discovered.extend(new_nodes)
        self.step_count += 1
        record = StepRecord(
            step=self.step_count,
            entity=entity,
            snippet_count=len(pooled),
            new_nodes=new_nodes,
            new_edges=new_edges,
            node_count=self.graph.node_count,
            edge_count=self.graph.edge_count,
            requests_used=self.ledger.used_requests,
        )
        self.steps.append(record)
        return record

    def run_frontier(self, frontier: Frontier) -> str | None:
        """Expand until the frontier drains; returns a stop reason or None.

        The budget is checked after each expanded entity, never before, so
        the final entity's queries may overshoot the cap.
        """
        while True:
            entry = frontier.pop_next(self.graph, self.step_count)
            if entry is None:
                return None
            record = self.expand_entity(entry.name)
            for name in record.new_nodes:
                self.push(frontier, name)
            if self.ledger.exhausted:
                return BUDGET

    def report(self, stopped_reason: str, complete: bool) -> RunReport:
        return RunReport(
            seeds=list(self.seeds),
            steps=self.steps,
            iterations=self.iterations,
            patterns=list(self.match_patterns),
            query_patterns=list(self.query_patterns),
            nodes_found=self.graph.node_count,
            edges_found=self.graph.edge_count,
            requests_used=self.ledger.used_requests,
            queries_issued=self.ledger.queries_issued,
            complete=complete,
            stopped_reason=stopped_reason,
        )


def expand_static(
    config: RunConfig,
    gateway: SearchGateway,
    catalog: EntityCatalog,
) -> tuple[SocialGraph, RunReport]:
    """Grow a graph from the configured seeds with a fixed pattern set.

    Stops when the frontier drains or the budget is spent; a transport
    failure aborts the run and the report carries the partial state with
    complete=False.
    """
    if config.mode not in (MODE_BF, MODE_PRIO):
        raise ValueError("expand_static requires mode bf or prio")
    run = _Run(config, gateway, catalog)
    frontier = run.new_frontier()
    for seed in run.seeds:
        run.push(frontier, seed)
    try:
        stop = run.run_frontier(frontier)
    except TransportError:
        return run.graph, run.report(TRANSPORT, complete=False)
    return run.graph, run.report(stop or FRONTIER_EMPTY, complete=True)


def _mine_patterns(run: _Run) -> tuple[int, list[PatternCandidate], list[Pattern], bool]:
    """Pair-query the heaviest edges and admit high-scoring phrases.

    Returns (pair queries issued, candidates, admitted patterns, budget hit).
    The budget is checked before each pair query; candidates are scored over
    whatever was fetched before the cutoff.
    """
    config = run.config
    pooled: list[Snippet] = []
    seen: set[tuple[str, str]] = set()
    issued = 0
    budget_hit = False
    for a, b, _w in run.graph.top_edges(config.h):
        if run.ledger.exhausted:
            budget_hit = True
            break
        try:
            query = pair_query(a, b)
        except QueryError:
            continue
        issued += 1
        snippets, _ = run.gateway.search(query, config.k, enforce_budget=False)
        for snippet in snippets:
            key = (snippet.url, snippet.text)
            if key not in seen:
                seen.add(key)
                pooled.append(snippet)
    candidates = extract_pattern_candidates(pooled, run.catalog)
    known = {p.key for p in run.match_patterns}
    admitted: list[Pattern] = []
    for cand in candidates:
        if cand.score <= config.sigma or pattern_key(cand.phrase) in known:
            continue
        pat = Pattern(cand.phrase, "mined")
        known.add(pat.key)
        admitted.append(pat)
        run.match_patterns.append(pat)
        if is_queryable_phrase(pat.phrase):
            run.query_patterns.append(pat)
    return issued, candidates, admitted, budget_hit


def expand_with_pattern_mining(
    config: RunConfig,
    gateway: SearchGateway,
    catalog: EntityCatalog,
) -> tuple[SocialGraph, RunReport, list[Pattern]]:
    """Alternate frontier expansion with pattern mining for max_iterations
    rounds; returns the graph, the report, and the final pattern set.

    A round that admits no new pattern is a fixed point (the next round
    could not issue any new connectivity query), so the run stops early.
    With max_iterations=1 the produced graph matches expand_static under
    the same configuration; the mining pass only spends extra pair queries.
    """
    if config.mode != MODE_PATTERN_ITER:
        raise ValueError("expand_with_pattern_mining requires mode pattern-iter")
    run = _Run(config, gateway, catalog)
    stopped = MAX_ITER
    complete = True
    for index in range(1, config.max_iterations + 1):
        frontier = run.new_frontier()
        for name in run.discovered:
            if run.has_pending(name):
                run.push(frontier, name)
        first_step = len(run.steps)
        try:
            stop = run.run_frontier(frontier)
        except TransportError:
            stopped, complete = TRANSPORT, False
            break
        if stop == BUDGET:
            stopped = BUDGET
            break
        try:
            issued, candidates, admitted, budget_hit = _mine_patterns(run)
        except TransportError:
            stopped, complete = TRANSPORT, False
            break
        run.iterations.append(
            IterationRecord(
                index=index,
                steps=run.steps[first_step:],
                pair_queries_issued=issued,
                candidates=candidates,
                admitted=admitted,
                node_count=run.graph.node_count,
                edge_count=run.graph.edge_count,
                requests_used=run.ledger.used_requests,
            )
        )
        if budget_hit or run.ledger.exhausted:
            stopped = BUDGET
            break
        if not admitted:
            stopped = FIXED_POINT
            break
    return run.graph, run.report(stopped, complete), list(run.match_patterns)
