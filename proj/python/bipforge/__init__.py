"""Architecture-diagram toolchain: parse, check, expand, encode, execute."""

import json as _json

from bipforge._core import (
    Model,
    check_behavior,
    check_encodable,
    check_equivalence,
    encode_glue,
    enumerate_configurations,
    expand,
    formula,
    interactions,
    load_pattern,
    macros_text,
    parse_model,
    pattern_names,
    run,
    serialize_model,
    validate_references,
)

__all__ = [
    "Model",
    "check_behavior",
    "check_encodable",
    "check_equivalence",
    "encode_glue",
    "enumerate_configurations",
    "expand",
    "formula",
    "interactions",
    "load_pattern",
    "macros_text",
    "parse_model",
    "pattern_names",
    "run",
    "run_trace",
    "serialize_model",
    "validate_references",
]

__version__ = "0.1.0"


def run_trace(model, cards, seed, cycles, **kwargs):
    """Like run(), but returns the trace as a Python dict."""
    return _json.loads(run(model, cards, seed, cycles, **kwargs))
