"""Causal discovery for binary indicator data under a Bernoulli structural causal model."""

__version__ = "0.1.0"

from .alignment import AlignedDataset, UndefinedConditional, align, cond_prob, decode, encode
from .dataset import BinaryDataset, DatasetError, load_csv, mpi_index, save_csv, validate
from .discovery import DiscoveryConfig, DiscoveryResult, discover
from .evaluate import frequent_pattern_baseline, run_benchmark, score, summarize
from .graph import CausalGraph
from .simulate import BscmModel, benchmark_model, ground_truth, parse_model, sample

__all__ = [
    "AlignedDataset", "BinaryDataset", "BscmModel", "CausalGraph", "DatasetError",
    "DiscoveryConfig", "DiscoveryResult", "UndefinedConditional", "align", "benchmark_model",
    "cond_prob", "decode", "discover", "encode", "frequent_pattern_baseline", "ground_truth",
    "load_csv", "mpi_index", "parse_model", "run_benchmark", "sample", "save_csv", "score",
    "summarize", "validate",
]
