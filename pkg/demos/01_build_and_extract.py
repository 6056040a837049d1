"""Build a synthetic snippet corpus, then recover its social graph.

The generator plants every relation as a handful of short press-style
snippets ("... Alda Ashford and Borin Ashford ..."), so we know exactly
which edges an extractor ought to find. The extractor then starts from a
single seed name, issues connectivity queries against a replay backend
serving those snippets, and grows the graph breadth-first.
"""

from snipgraph.catalog import EntityCatalog
from snipgraph.corpus import synthesize
from snipgraph.engine import RunConfig, expand_static
from snipgraph.search import ReplayBackend, SearchGateway

# --- a corpus with known ground truth --------------------------------------

corpus = synthesize(n_nodes=40, attach=2, weight_low=2, weight_high=4, seed=11)
print(f"corpus: {len(corpus.records)} snippets, "
      f"{len(corpus.names)} people, {len(corpus.truth_edges)} planted relations")
print("\na few raw snippets:")
for record in corpus.records[:3]:
    print(f"  [{record.domain}] {record.text}")

# --- extraction ------------------------------------------------------------

catalog = EntityCatalog()
for name in corpus.names:
    catalog.add(name)

gateway = SearchGateway(ReplayBackend(corpus.records))
seed = corpus.names[0]
config = RunConfig(seeds=(seed,))

graph, report = expand_static(config, gateway, catalog)

print(f"\nseed: {seed}")
print(f"expanded {len(report.steps)} entities with {report.requests_used} requests")
print(f"found {graph.node_count} nodes and {graph.edge_count} edges")

# --- compare against the planted truth -------------------------------------

truth_pairs = {tuple(sorted((a, b))) for a, b, _w in corpus.truth_edges}
found_pairs = {(a, b) for a, b, _w in graph.edges()}

# the generator attaches every new node to an earlier one, so the whole
# truth graph is reachable from any seed and the sets should coincide
print(f"\nplanted pairs recovered: {len(found_pairs & truth_pairs)}/{len(truth_pairs)}")
print(f"spurious pairs: {len(found_pairs - truth_pairs)}")

print("\nheaviest recovered relations:")
for a, b, w in graph.top_edges(5):
    print(f"  {a} -- {b} ({w})")

print("\nfirst expansion steps:")
for step in report.steps[:5]:
    print(f"  step {step.step}: {step.entity} -> "
          f"{len(step.new_nodes)} new people, {len(step.new_edges)} new relations")
