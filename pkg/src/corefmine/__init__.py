"""corefmine: build, resolve and evaluate cross-document event coreference data.

The package mines MediaWiki export dumps for event pages (identified by an
infobox allowlist), collects the anchor texts linking to them as coreference
mentions, filters and splits the result into a dataset, and provides the
clustering baselines and evaluation metrics used to benchmark resolvers on
it, plus a small service for manually validating the evaluation splits.
"""

__version__ = "0.1.0"
