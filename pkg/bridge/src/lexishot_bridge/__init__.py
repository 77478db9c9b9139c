"""Model-side companion for the lexishot toolkit.

Produces the files the analysis toolkit consumes: layer-wise embedding
tables for term lists (:mod:`lexishot_bridge.extract`) and predictions from
a SetFit-style few-shot harness (:mod:`lexishot_bridge.train`). All exchange
happens through the toolkit's plain-text file formats.
"""

from .extract import ExtractionSpec, extract_embeddings, extract_table, term_vector
from .train import TrainSpec, train_and_predict

__version__ = "0.1.0"

__all__ = [
    "ExtractionSpec",
    "TrainSpec",
    "extract_embeddings",
    "extract_table",
    "term_vector",
    "train_and_predict",
]
