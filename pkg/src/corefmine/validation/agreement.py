"""Annotator-agreement statistics against consolidated judgments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .store import Judgment


@dataclass(frozen=True)
class AgreementReport:
    precision: float
    recall: float
    cohen_kappa: float
    confusion: dict  # tp/fp/fn/tn with "valid" as the positive class

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall,
                "cohen_kappa": self.cohen_kappa, "confusion": self.confusion}


def agreement(annotator: Mapping[int, Judgment],
              consolidated: Mapping[int, Judgment]) -> AgreementReport:
    """Precision/recall/kappa of an annotator against consolidated gold.

    Both judgment sets must cover the same task ids.  "valid" is the
    positive class; kappa is chance-corrected agreement over the binary
    verdicts.
    """
    if set(annotator) != set(consolidated):
        only_a = sorted(set(annotator) - set(consolidated))[:5]
        only_c = sorted(set(consolidated) - set(annotator))[:5]
        raise ValueError(
            f"judgment sets cover different tasks (only annotator: {only_a}, "
            f"only consolidated: {only_c})")
    if not annotator:
        raise ValueError("no judgments to compare")

    tp = fp = fn = tn = 0
    for task_id, judgment in annotator.items():
        gold = consolidated[task_id].is_valid
        mine = judgment.is_valid
        if mine and gold:
            tp += 1
        elif mine and not gold:
            fp += 1
        elif not mine and gold:
            fn += 1
        else:
            tn += 1
    n = tp + fp + fn + tn
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    p_observed = (tp + tn) / n
    positive_mine = (tp + fp) / n
    positive_gold = (tp + fn) / n
    p_expected = (positive_mine * positive_gold
                  + (1 - positive_mine) * (1 - positive_gold))
    if p_expected == 1.0:
        kappa = 1.0 if p_observed == 1.0 else 0.0
    else:
        kappa = (p_observed - p_expected) / (1 - p_expected)
    return AgreementReport(precision, recall, kappa,
                           {"tp": tp, "fp": fp, "fn": fn, "tn": tn})
