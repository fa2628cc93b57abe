"""
Generate fixture streams in the dynsparse stream format.

Builds a G(n, p) graph, inserts every edge in random order, then inserts and
later deletes extra churn edges, so the stream nets to exactly the G(n, p)
graph. With --max-weight, edges get uniform weights in [1, W].
"""

import argparse
import os
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import networkx as nx
import numpy as np
from dotenv import load_dotenv

from dynsparse.sparsifier.bank import EdgeUpdate
from dynsparse.stream_io import write_stream

# Load environment variables
load_dotenv()


def build_updates(
    n: int, p: float, churn: float, seed: int, max_weight: int | None
) -> list[EdgeUpdate]:
    """Insert the G(n, p) edges plus churn edges, delete the churn edges afterwards."""
    rng = np.random.default_rng(seed)
    graph = nx.gnp_random_graph(n, p, seed=seed)
    kept = [(min(u, v), max(u, v)) for u, v in graph.edges()]
    absent = [(u, v) for u in range(n) for v in range(u + 1, n) if not graph.has_edge(u, v)]
    churn_count = min(len(absent), int(round(churn * len(kept))))
    churn_pick = rng.choice(len(absent), size=churn_count, replace=False) if churn_count else []
    transient = [absent[i] for i in churn_pick]

    def weight() -> int:
        return int(rng.integers(1, max_weight + 1)) if max_weight else 1

    inserts = [EdgeUpdate.insert(u, v, weight()) for u, v in kept + transient]
    order = rng.permutation(len(inserts))
    updates = [inserts[i] for i in order]
    for upd in inserts[len(kept):]:
        updates.append(EdgeUpdate.delete(upd.u, upd.v, upd.weight))
    return updates


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("n", type=int)
    parser.add_argument("p", type=float)
    parser.add_argument("--churn", type=float, default=0.5, help="transient edges per kept edge")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-weight", type=int)
    parser.add_argument("--output", help="file name (default: stdout)")
    args = parser.parse_args()

    updates = build_updates(args.n, args.p, args.churn, args.seed, args.max_weight)
    if args.output is None:
        write_stream(sys.stdout, args.n, updates, args.max_weight)
        return

    out_dir = Path(os.getenv("DYNSPARSE_FIXTURE_DIR", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / args.output
    with open(path, "w", encoding="utf-8") as handle:
        count = write_stream(handle, args.n, updates, args.max_weight)
    print(f"✅ Wrote {count} updates to {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
