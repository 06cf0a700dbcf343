"""deltametry: Burrows' Delta stylometry, clustering, and imposters verification."""

__version__ = "0.1.0"

from .corpus import (
    Document,
    DocumentId,
    TokenizerConfig,
    load_corpus,
    parse_document_id,
    tokenize,
)
from .delta import (
    DistanceMatrix,
    ZScoreModel,
    burrows_delta,
    distance_matrix,
    fit_zscores,
    nearest_neighbor,
    zscore_transform,
)
from .frequencies import (
    FrequencyTable,
    build_frequency_table,
    read_stylo_table,
    select_mfw,
    write_stylo_table,
)
from .cluster import (
    Dendrogram,
    dendrogram_to_newick,
    hierarchical_cluster,
    parse_newick,
    render_dendrogram_svg,
)
from .imposters import ImpostersConfig, ImpostersReport, imposters_all, imposters_score
from .report import (
    DistanceDistribution,
    distance_distribution,
    export_distance_csv,
    read_distance_csv,
    render_distribution_svg,
    render_heatmap_svg,
)

__all__ = [
    "__version__",
    "Document",
    "DocumentId",
    "TokenizerConfig",
    "load_corpus",
    "parse_document_id",
    "tokenize",
    "FrequencyTable",
    "build_frequency_table",
    "read_stylo_table",
    "select_mfw",
    "write_stylo_table",
    "DistanceMatrix",
    "ZScoreModel",
    "burrows_delta",
    "distance_matrix",
    "fit_zscores",
    "nearest_neighbor",
    "zscore_transform",
    "Dendrogram",
    "dendrogram_to_newick",
    "hierarchical_cluster",
    "parse_newick",
    "render_dendrogram_svg",
    "ImpostersConfig",
    "ImpostersReport",
    "imposters_all",
    "imposters_score",
    "DistanceDistribution",
    "distance_distribution",
    "export_distance_csv",
    "read_distance_csv",
    "render_distribution_svg",
    "render_heatmap_svg",
]
