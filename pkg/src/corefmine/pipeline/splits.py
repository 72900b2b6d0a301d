"""Train/dev/test split creation and train-leakage removal."""

from __future__ import annotations

import logging
import random
from typing import Iterable

from .types import CoreferenceChain, DatasetSplit, Mention

log = logging.getLogger("corefmine.pipeline")


def make_splits(chains: list[CoreferenceChain], n_eval_clusters: int,
                dev_fraction: float, seed: int) -> dict[str, DatasetSplit]:
    """Sample evaluation clusters and carve them into dev/test by mentions.

    ``n_eval_clusters`` whole clusters are drawn without replacement under
    ``seed``; they are assigned to dev until dev holds at least
    ``dev_fraction`` of the sampled mentions, the rest go to test.  All
    remaining clusters form the training split.
    """
    if n_eval_clusters >= len(chains):
        raise ValueError(
            f"n_eval_clusters={n_eval_clusters} must be smaller than the "
            f"number of clusters ({len(chains)})")
    if not 0.0 <= dev_fraction <= 1.0:
        raise ValueError("dev_fraction must lie in [0, 1]")
    ordered = sorted(chains, key=lambda c: c.cluster_id)
    rng = random.Random(seed)
    sampled = rng.sample(ordered, n_eval_clusters)
    sampled_ids = {c.cluster_id for c in sampled}

    total_eval = sum(len(c) for c in sampled)
    target_dev = dev_fraction * total_eval
    dev, test = [], []
    dev_count = 0
    for chain in sampled:
        if dev_count < target_dev:
            dev.append(chain)
            dev_count += len(chain)
        else:
            test.append(chain)
    train = [c for c in ordered if c.cluster_id not in sampled_ids]
    return {
        "train": DatasetSplit("train", train),
        "dev": DatasetSplit("dev", sorted(dev, key=lambda c: c.cluster_id)),
        "test": DatasetSplit("test", sorted(test, key=lambda c: c.cluster_id)),
    }


def purge_train_leakage(train: DatasetSplit,
                        validated_eval: Iterable[Mention]) -> DatasetSplit:
    """Drop train mentions sharing a source article with any validated
    dev/test mention; chains emptied by the purge disappear."""
    eval_sources = {m.source_title for m in validated_eval}
    chains = []
    dropped = 0
    for chain in train.chains:
        survivors = [m for m in chain.mentions if m.source_title not in eval_sources]
        dropped += len(chain.mentions) - len(survivors)
        if survivors:
            chains.append(CoreferenceChain(chain.cluster_id, chain.pivot_title,
                                           survivors))
    if dropped:
        log.info("purged %d train mentions sharing sources with validated "
                 "eval mentions", dropped)
    return DatasetSplit("train", chains)
