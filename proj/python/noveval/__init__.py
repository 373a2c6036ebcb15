"""Novel-class retrieval benchmark: class-disjoint splits, exact cosine
retrieval and R-Precision reports, backed by a C++ core."""

from ._core import (
    Error,
    FormatError,
    InvalidArgument,
    IoError,
    NotFound,
    UndefinedMetric,
    ValidationError,
    builtin_dataset_ids,
    builtin_split,
    builtin_taxonomy,
    evaluate_split,
    normalize_rows,
    partition_samples,
    random_split,
    read_embeddings,
    recall_at_k,
    r_precision_query,
    render_report,
    search,
    semantic_split,
    stratified_random_split,
    write_embeddings,
)

__all__ = [
    "Error",
    "FormatError",
    "InvalidArgument",
    "IoError",
    "NotFound",
    "UndefinedMetric",
    "ValidationError",
    "builtin_dataset_ids",
    "builtin_split",
    "builtin_taxonomy",
    "evaluate_split",
    "normalize_rows",
    "partition_samples",
    "random_split",
    "read_embeddings",
    "recall_at_k",
    "r_precision_query",
    "render_report",
    "search",
    "semantic_split",
    "stratified_random_split",
    "write_embeddings",
]
