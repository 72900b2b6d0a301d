"""Reader/writer for the coreference scorer interchange format.

The format is the one consumed by the reference CoNLL scorer: documents
delimited by ``#begin document (id); part NNN`` / ``#end document`` lines,
one token per line, coreference expressed in the last column with bracketed
cluster ids, e.g. ``(3`` opens and ``3)`` closes a mention of cluster 3.

Because our mentions are corpus-global ids rather than token spans, the
writer serializes each mention as a single token line whose coref tag is
``(id)``.  A key/response pair must be written together so both files use
the same token order; otherwise the positional mention identities would not
line up.
"""

from __future__ import annotations

import re

from .partition import Partition, stable_sorted

_BRACKET = re.compile(r"\(?\d+\)?")


def write_conll_pair(key: Partition, response: Partition, key_path, response_path,
                     doc_id: str = "meta") -> list:
    """Write a key/response pair over a shared mention ordering.

    Returns the mention ordering used, so callers can relate token positions
    back to mention ids.
    """
    universe = stable_sorted(key.mentions | response.mentions)
    orders = []
    for partition, path in ((key, key_path), (response, response_path)):
        index = partition.index()
        labels: dict = {}
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"#begin document ({doc_id}); part 000\n")
            for mention in universe:
                cluster = index.get(mention)
                if cluster is None:
                    tag = "-"
                else:
                    label = labels.setdefault(cluster, len(labels))
                    tag = f"({label})"
                f.write(f"{doc_id}\t{tag}\n")
            f.write("#end document\n")
        orders.append(universe)
    return universe


def read_conll(path) -> Partition:
    """Parse bracket notation back into a partition.

    Mentions are identified by (document, start_token, end_token); nested and
    multi-token mentions are supported via an open-bracket stack.  Singleton
    tokens with ``-`` carry no mention.
    """
    clusters: dict = {}
    with open(path, encoding="utf-8") as f:
        doc = None
        token_index = 0
        stack: list[tuple[str, int]] = []
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("#begin document"):
                doc = line[len("#begin document"):].strip()
                token_index = 0
                stack = []
                continue
            if line.startswith("#end document"):
                if stack:
                    raise ValueError(f"unclosed mention bracket in {path}")
                doc = None
                continue
            if not line.strip():
                continue
            if doc is None:
                raise ValueError(f"token line outside document in {path}")
            token_index += 1
            tag = line.split()[-1]
            if tag == "-":
                continue
            for piece in _BRACKET.findall(tag):
                cid = piece.strip("()")
                if piece.startswith("("):
                    stack.append((cid, token_index))
                if piece.endswith(")"):
                    for pos in range(len(stack) - 1, -1, -1):
                        if stack[pos][0] == cid:
                            _, start = stack.pop(pos)
                            break
                    else:
                        raise ValueError(f"close without open for cluster {cid}")
                    mention = (doc, start, token_index)
                    clusters.setdefault((doc, cid), set()).add(mention)
    return Partition.of(clusters.values())
