"""Weighted undirected social graph plus serialization.

Nodes are canonical entity names, edge weights are accumulated co-occurrence
counts. Backed by networkx.Graph; merge and threshold behavior live here.
"""

from __future__ import annotations

from typing import IO, Iterable, Iterator, Mapping

import networkx as nx

from .extract import EdgeEvidence


class EdgeListError(ValueError):
    """Malformed edge-list input; message names the offending line."""


class SocialGraph:
    """Undirected entity graph with integer edge weights."""

    def __init__(self) -> None:
        self.graph = nx.Graph()

    @property
    def node_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def __len__(self) -> int:
        return self.node_count

    def has_node(self, name: str) -> bool:
        return self.graph.has_node(name)

    def has_edge(self, a: str, b: str) -> bool:
        return self.graph.has_edge(a, b)

    def add_node(self, name: str) -> None:
        self.graph.add_node(name)

    def add_edge(self, a: str, b: str, weight: int) -> None:
        """Add weight to the a-b edge, creating it (and the nodes) if absent."""
        if self.graph.has_edge(a, b):
            self.graph[a][b]["weight"] += weight
        else:
            self.graph.add_edge(a, b, weight=weight)

    def weight(self, a: str, b: str) -> int:
        if not self.graph.has_edge(a, b):
            return 0
        return self.graph[a][b]["weight"]

    def degree(self, name: str) -> int:
        """Number of neighbors; 0 for unknown nodes."""
        if not self.graph.has_node(name):
            return 0
        return self.graph.degree(name)

    def nodes(self) -> Iterator[str]:
        return iter(self.graph.nodes)

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """Edges as (a, b, weight) with each pair sorted."""
        for a, b, data in self.graph.edges(data=True):
            if a > b:
                a, b = b, a
            yield a, b, data["weight"]

    def neighbors(self, name: str) -> Iterator[str]:
        if not self.graph.has_node(name):
            return iter(())
        return self.graph.neighbors(name)

    def merge_evidence(
        self,
        evidence: Mapping[tuple[str, str], EdgeEvidence],
        tau: int,
    ) -> tuple[list[str], list[tuple[str, str]]]:
        """Fold one search step's evidence into the graph.

        A pair not yet in the graph needs count >= tau to enter; an existing
        edge always absorbs the new count. Returns nodes and edges that are
        new to the graph, in sorted-pair processing order.
        """
        new_nodes: list[str] = []
        new_edges: list[tuple[str, str]] = []
        for pair in sorted(evidence):
            ev = evidence[pair]
            a, b = ev.pair
            if self.graph.has_edge(a, b):
                self.graph[a][b]["weight"] += ev.count
                continue
            if ev.count < tau:
                continue
            for name in (a, b):
                if not self.graph.has_node(name):
                    new_nodes.append(name)
            self.graph.add_edge(a, b, weight=ev.count)
            new_edges.append((a, b))
        return new_nodes, new_edges

    def top_edges(self, h: int | None = None) -> list[tuple[str, str, int]]:
        """Heaviest edges first; ties break on the sorted name pair."""
        ranked = sorted(self.edges(), key=lambda e: (-e[2], e[0], e[1]))
        return ranked if h is None else ranked[:h]

    def copy(self) -> "SocialGraph":
        clone = SocialGraph()
        clone.graph = self.graph.copy()
        return clone


def _check_name(name: str) -> str:
    if "\t" in name or "\n" in name or "\r" in name:
        raise ValueError(f"entity name contains tab or newline: {name!r}")
    return name


def write_edge_list(graph: SocialGraph, fh: IO[str]) -> None:
    """Tab-separated `a<TAB>b<TAB>weight` lines, sorted by name pair."""
    for a, b, w in sorted(graph.edges()):
        fh.write(f"{_check_name(a)}\t{_check_name(b)}\t{w}\n")


def read_edge_list(source: IO[str] | Iterable[str]) -> SocialGraph:
    graph = SocialGraph()
    for lineno, line in enumerate(source, start=1):
        raw = line.rstrip("\r\n")
        if not raw:
            continue
        fields = raw.split("\t")
        if len(fields) != 3:
            raise EdgeListError(
                f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
            )
        a, b, w = fields
        try:
            weight = int(w)
        except ValueError as exc:
            raise EdgeListError(f"line {lineno}: bad weight {w!r}") from exc
        graph.add_edge(a, b, weight)
    return graph


def read_edge_list_file(path: str) -> SocialGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return read_edge_list(fh)


def write_graphml(graph: SocialGraph, path: str) -> None:
    nx.write_graphml(graph.graph, path)


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(graph: SocialGraph, fh: IO[str]) -> None:
    fh.write("graph snipgraph {\n")
    for name in sorted(graph.nodes()):
        fh.write(f"  {_dot_quote(name)};\n")
    for a, b, w in sorted(graph.edges()):
        fh.write(f"  {_dot_quote(a)} -- {_dot_quote(b)} [weight={w}];\n")
    fh.write("}\n")


def export_graph(graph: SocialGraph, path: str, fmt: str) -> None:
    """Write `graph` to `path` as one of: edgelist, graphml, dot."""
    if fmt == "edgelist":
        with open(path, "w", encoding="utf-8") as fh:
            write_edge_list(graph, fh)
    elif fmt == "graphml":
        write_graphml(graph, path)
    elif fmt == "dot":
        with open(path, "w", encoding="utf-8") as fh:
            write_dot(graph, fh)
    else:
        raise ValueError(f"unknown graph format: {fmt!r}")
