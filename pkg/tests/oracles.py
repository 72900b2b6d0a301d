"""Brute-force reference implementations used to validate the optimized code.

Everything here favours directness over speed: exhaustive enumeration,
per-member loops, and from-scratch recomputation.  None of it shares code
with ``corefmine``; agreement between the two routes is what the test suite
asserts.
"""

from __future__ import annotations

import itertools
import math


def f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


# ---------------------------------------------------------------------------
# coreference metrics
# ---------------------------------------------------------------------------

def muc_brute(key: list[set], response: list[set]) -> tuple[float, float]:
    """(recall, precision) by explicit link counting.

    For each key cluster, build a graph over its members connecting pairs
    that share a response cluster, and count connected components by BFS.
    The number of correct links is |cluster| - #components.
    """

    def half(a: list[set], b: list[set]) -> tuple[int, int]:
        num = 0
        den = 0
        for cluster in a:
            members = sorted(cluster, key=repr)
            # adjacency: same cluster of b
            edges = {m: set() for m in members}
            for x, y in itertools.combinations(members, 2):
                if any(x in c and y in c for c in b):
                    edges[x].add(y)
                    edges[y].add(x)
            seen: set = set()
            components = 0
            for m in members:
                if m in seen:
                    continue
                components += 1
                queue = [m]
                while queue:
                    cur = queue.pop()
                    if cur in seen:
                        continue
                    seen.add(cur)
                    queue.extend(edges[cur] - seen)
            num += len(members) - components
            den += len(members) - 1
        return num, den

    r_num, r_den = half(key, response)
    p_num, p_den = half(response, key)
    recall = r_num / r_den if r_den else 0.0
    precision = p_num / p_den if p_den else 0.0
    return recall, precision


def b_cubed_brute(key: list[set], response: list[set]) -> tuple[float, float]:
    """(recall, precision) by the per-mention definition, one mention at a time."""

    def cluster_of(m, partition: list[set]) -> set:
        for c in partition:
            if m in c:
                return c
        return set()

    mentions = sorted({m for c in key for m in c}, key=repr)
    recall_terms = []
    for m in mentions:
        k = cluster_of(m, key)
        r = cluster_of(m, response)
        recall_terms.append(len(k & r) / len(k))
    recall = sum(recall_terms) / len(recall_terms) if recall_terms else 0.0

    r_mentions = sorted({m for c in response for m in c}, key=repr)
    precision_terms = []
    for m in r_mentions:
        k = cluster_of(m, key)
        r = cluster_of(m, response)
        precision_terms.append(len(k & r) / len(r))
    precision = sum(precision_terms) / len(precision_terms) if precision_terms else 0.0
    return recall, precision


def phi4(k: set, r: set) -> float:
    if not k and not r:
        return 0.0
    return 2 * len(k & r) / (len(k) + len(r))


def ceaf_e_brute(key: list[set], response: list[set]) -> tuple[float, float]:
    """(recall, precision) by exhaustive enumeration of injective alignments.

    Every maximal injective map between key and response clusters is tried;
    partial alignments cannot beat a maximal one because phi4 >= 0.
    Only feasible for small cluster counts (the tests stay <= 6 a side).
    """
    if not key or not response:
        return 0.0, 0.0
    if len(key) <= len(response):
        small, large = key, response
        swapped = False
    else:
        small, large = response, key
        swapped = True
    best = 0.0
    for assignment in itertools.permutations(range(len(large)), len(small)):
        total = 0.0
        for i, j in enumerate(assignment):
            a, b = small[i], large[j]
            total += phi4(a, b) if not swapped else phi4(b, a)
        best = max(best, total)
    recall = best / len(key)
    precision = best / len(response)
    return recall, precision


def conll_brute(key: list[set], response: list[set]) -> float:
    scores = [muc_brute(key, response), b_cubed_brute(key, response),
              ceaf_e_brute(key, response)]
    return sum(f1(p, r) for r, p in scores) / 3


# ---------------------------------------------------------------------------
# optimal assignment
# ---------------------------------------------------------------------------

def assignment_brute(matrix: list[list[float]]) -> float:
    """Maximum-total injective assignment by trying every permutation."""
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if n_rows else 0
    if n_rows == 0 or n_cols == 0:
        return 0.0
    if n_rows <= n_cols:
        best = -math.inf
        for perm in itertools.permutations(range(n_cols), n_rows):
            best = max(best, sum(matrix[i][j] for i, j in enumerate(perm)))
        return best
    transposed = [[matrix[i][j] for i in range(n_rows)] for j in range(n_cols)]
    return assignment_brute(transposed)


# ---------------------------------------------------------------------------
# average-link agglomerative clustering
# ---------------------------------------------------------------------------

def average_link_naive_full(ids: list[int], matrix) -> list[tuple[float, set, set]]:
    """Every greedy merge in order, with averages recomputed from scratch.

    Returns [(average, members_a, members_b), ...] down to a single cluster.
    Truncating the sequence at the first average below a threshold yields the
    clustering for that threshold, because the merge choice itself never
    depends on the threshold.
    """
    clusters: list[list[int]] = [[i] for i in range(len(ids))]
    merges: list[tuple[float, set, set]] = []
    while len(clusters) > 1:
        best_avg = None
        best_pair = None
        best_key = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                total = 0.0
                for i in clusters[a]:
                    for j in clusters[b]:
                        total += matrix[i][j]
                avg = total / (len(clusters[a]) * len(clusters[b]))
                key = tuple(sorted((min(ids[i] for i in clusters[a]),
                                    min(ids[j] for j in clusters[b]))))
                if best_avg is None or avg > best_avg or (avg == best_avg and key < best_key):
                    best_avg = avg
                    best_pair = (a, b)
                    best_key = key
        a, b = best_pair
        merges.append((best_avg,
                       {ids[i] for i in clusters[a]},
                       {ids[i] for i in clusters[b]}))
        merged = clusters[a] + clusters[b]
        clusters = [c for i, c in enumerate(clusters) if i not in (a, b)]
        clusters.append(merged)
    return merges


def cut_merges(ids: list[int], merges: list[tuple[float, set, set]],
               threshold: float) -> list[set]:
    """Apply recorded merges while their score clears the threshold."""
    clusters = {i: {i} for i in ids}
    reps = {i: i for i in ids}
    for avg, members_a, members_b in merges:
        if avg < threshold:
            break
        rep_a = reps[next(iter(members_a))]
        rep_b = reps[next(iter(members_b))]
        clusters[rep_a] |= clusters.pop(rep_b)
        for m in clusters[rep_a]:
            reps[m] = rep_a
    return list(clusters.values())


def average_link_naive(ids: list[int], matrix, threshold: float) -> list[set]:
    """Greedy average-link clustering, recomputing every average from scratch.

    ``matrix`` is indexable as matrix[i][j] over positions aligned with
    ``ids``.  Merging continues while the best inter-cluster average is at
    least ``threshold``.  Ties are broken on the pair of smallest member ids.
    """
    clusters: list[list[int]] = [[i] for i in range(len(ids))]
    while len(clusters) > 1:
        best_avg = None
        best_pair = None
        best_key = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                total = 0.0
                for i in clusters[a]:
                    for j in clusters[b]:
                        total += matrix[i][j]
                avg = total / (len(clusters[a]) * len(clusters[b]))
                key = tuple(sorted((min(ids[i] for i in clusters[a]),
                                    min(ids[j] for j in clusters[b]))))
                if best_avg is None or avg > best_avg or (avg == best_avg and key < best_key):
                    best_avg = avg
                    best_pair = (a, b)
                    best_key = key
        if best_avg is None or best_avg < threshold:
            break
        a, b = best_pair
        merged = clusters[a] + clusters[b]
        clusters = [c for i, c in enumerate(clusters) if i not in (a, b)]
        clusters.append(merged)
    return [{ids[i] for i in c} for c in clusters]


# ---------------------------------------------------------------------------
# annotator agreement
# ---------------------------------------------------------------------------

def agreement_brute(pairs: list[tuple[bool, bool]]) -> tuple[float, float, float]:
    """(precision, recall, kappa) from (annotator_valid, gold_valid) pairs.

    Precision/recall treat the gold column as truth with "valid" positive.
    Kappa is computed straight from the observed/expected agreement
    definition, with expected agreement from the marginal counts.
    """
    n = len(pairs)
    tp = sum(1 for a, g in pairs if a and g)
    fp = sum(1 for a, g in pairs if a and not g)
    fn = sum(1 for a, g in pairs if not a and g)
    tn = sum(1 for a, g in pairs if not a and not g)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    p_o = (tp + tn) / n
    a_pos = (tp + fp) / n
    g_pos = (tp + fn) / n
    p_e = a_pos * g_pos + (1 - a_pos) * (1 - g_pos)
    if p_e == 1.0:
        kappa = 1.0 if p_o == 1.0 else 0.0
    else:
        kappa = (p_o - p_e) / (1 - p_e)
    return precision, recall, kappa
