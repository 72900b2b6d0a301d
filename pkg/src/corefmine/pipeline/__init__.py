from .extract import (collect_mentions, collect_pivots, finalize_mentions,
                      page_mention_candidates)
from .filters import (BLOCKED_NER_LABELS, control_diversity, filter_by_ner,
                      filter_context)
from .records import (read_allowlist, read_mentions, read_ner,
                      read_parsed_pages, write_mentions, write_parsed_pages)
from .run import ExtractionConfig, run_extraction
from .splits import make_splits, purge_train_leakage
from .tokenize import Token, span_to_token_range, tokenize
from .types import (CoreferenceChain, DatasetSplit, EventRegistry, Mention,
                    NerAnnotation, PivotEntry, chains_from_mentions)

__all__ = [
    "collect_mentions", "collect_pivots", "finalize_mentions",
    "page_mention_candidates", "BLOCKED_NER_LABELS", "control_diversity",
    "filter_by_ner", "filter_context", "read_allowlist", "read_mentions",
    "read_ner", "read_parsed_pages", "write_mentions", "write_parsed_pages",
    "ExtractionConfig", "run_extraction", "make_splits", "purge_train_leakage",
    "Token", "span_to_token_range", "tokenize", "CoreferenceChain",
    "DatasetSplit", "EventRegistry", "Mention", "NerAnnotation", "PivotEntry",
    "chains_from_mentions",
]
