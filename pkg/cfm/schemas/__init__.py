"""
Pydantic schemas for every file the harness reads or writes
"""
from .bundle import CertificateBlock, InstanceBundle, SmoothedBlock, load_bundle, save_bundle
from .problem import (
    DenseOperator,
    Diff2DOperator,
    IdentityOperator,
    ImageData,
    MatrixFileOperator,
    PartialDCTOperator,
    ProblemFile,
    SubsampleOperator,
    build_operator,
    dense_problem,
)
from .run import METRICS, RunConfig, TestgenConfig
from .summary import BenchRow, BenchSummary, ErrorPayload, OpCounts, Summary

__all__ = [
    "BenchRow",
    "BenchSummary",
    "CertificateBlock",
    "DenseOperator",
    "Diff2DOperator",
    "ErrorPayload",
    "IdentityOperator",
    "ImageData",
    "InstanceBundle",
    "METRICS",
    "MatrixFileOperator",
    "OpCounts",
    "PartialDCTOperator",
    "ProblemFile",
    "RunConfig",
    "SmoothedBlock",
    "SubsampleOperator",
    "Summary",
    "TestgenConfig",
    "build_operator",
    "dense_problem",
    "load_bundle",
    "save_bundle",
]
