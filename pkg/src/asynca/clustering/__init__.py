from .encoding import (
    QUALITATIVE,
    QUANTITATIVE,
    Attribute,
    AttributeCode,
    AttributeEncoder,
    DataFormatError,
    Dataset,
    EncodedDataset,
    EncodingSpec,
    build_encoding,
    encode,
    load_csv,
)
from .merging import (
    CAClusterer,
    ClusteringResult,
    ClusterLevel,
    RulePool,
    candidate_rules,
    cluster_level,
    iterative_cluster,
    merge_by_participation,
    participation_matrix,
)
from .validity import DUNN_SENTINEL, ValidityReport, dunn_index, validity_indices

__all__ = [
    "QUALITATIVE",
    "QUANTITATIVE",
    "Attribute",
    "AttributeCode",
    "AttributeEncoder",
    "DataFormatError",
    "Dataset",
    "EncodedDataset",
    "EncodingSpec",
    "build_encoding",
    "encode",
    "load_csv",
    "CAClusterer",
    "ClusteringResult",
    "ClusterLevel",
    "RulePool",
    "candidate_rules",
    "cluster_level",
    "iterative_cluster",
    "merge_by_participation",
    "participation_matrix",
    "DUNN_SENTINEL",
    "ValidityReport",
    "dunn_index",
    "validity_indices",
]
