"""Spambot detection from digital DNA: LCS species, alignment similarity, rule-based labels."""

from .alignment import AlignmentResult, ScoringScheme, global_align, levenshtein, similarity
from .classifier import (
    ClassificationResult,
    ClassifierParams,
    KeyGroup,
    classify_dataset,
    classify_unlabeled,
    initial_ggenuine,
    initial_gspambot,
    weighted_lcs,
)
from .evaluation import (
    ConfusionCounts,
    MetricReport,
    SynthSpec,
    classification_trend,
    confusion,
    curve_diagnostic,
    generate_synthetic,
    metrics,
)
from .ingest import ActionRecord, Alphabet, DigitalDna, builtin_alphabet, encode_timeline, parse_dataset
from .lcs import (
    CurveEntry,
    LcsCurve,
    RelativeChangeSeries,
    Species,
    compute_lcs_curve,
    extract_species,
    first_significant_drop,
    relative_changes,
)

__version__ = "0.1.0"
