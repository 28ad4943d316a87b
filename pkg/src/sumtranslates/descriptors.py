"""JSON problem descriptors: parsing and validation with path-aware errors.

Kernel objects:
    {"type": "log", "weight": 1.0}
    {"type": "log_linear", "weight": 1.0, "slope": -0.5}
    {"type": "table", "neg_knots": [[t, v], ...], "pos_knots": [[t, v], ...],
     "end_slopes": [l, r], "strictly_concave": false}

Field objects (all accept an optional "offset"):
    {"type": "neg_abs", "scale": 1.0}
    {"type": "neg_square", "scale": 1.0}
    {"type": "log_table", "knots": [[t, v], ...]}
    {"type": "discrete", "points": [[x, v], ...]}
    {"type": "restrict_semiaxis", "inner": {...}}

Problem files: {"kernels": [...], "field": {...}, "options": {...}} with
options drawn from tol / max_iter / starts / seed / grid_density.
"""

from __future__ import annotations

import math
from typing import Any

from .apps import InterpolationProblem
from .core import Problem
from .exceptions import DescriptorError, SumTranslatesError
from .fields import (
    Field,
    discrete_field,
    neg_abs_field,
    neg_square_field,
    semiaxis_field,
    table_field,
)
from .kernels import Kernel, log_kernel, log_linear_kernel, table_kernel

_OPTION_KEYS = {
    "tol": float,
    "max_iter": int,
    "starts": int,
    "seed": int,
    "grid_density": int,
}


def _expect_object(obj: Any, path: str) -> dict:
    if not isinstance(obj, dict):
        raise DescriptorError(path, f"expected an object, got {type(obj).__name__}")
    return obj


def _expect_number(obj: Any, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise DescriptorError(path, f"expected a number, got {type(obj).__name__}")
    if not math.isfinite(obj):
        raise DescriptorError(path, "expected a finite number")
    return float(obj)


def _expect_pairs(obj: Any, path: str) -> list[tuple[float, float]]:
    if not isinstance(obj, list):
        raise DescriptorError(path, f"expected a list of [t, value] pairs")
    out = []
    for i, item in enumerate(obj):
        if not isinstance(item, list) or len(item) != 2:
            raise DescriptorError(f"{path}[{i}]", "expected a [t, value] pair")
        out.append(
            (_expect_number(item[0], f"{path}[{i}][0]"), _expect_number(item[1], f"{path}[{i}][1]"))
        )
    return out


def _wrap(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DescriptorError:
        raise
    except (SumTranslatesError, ValueError) as exc:
        raise DescriptorError(path, str(exc)) from exc


def parse_kernel(obj: Any, path: str = "kernel") -> Kernel:
    obj = _expect_object(obj, path)
    kind = obj.get("type")
    if kind == "log":
        weight = _expect_number(obj.get("weight", 1.0), f"{path}.weight")
        return _wrap(path, log_kernel, weight)
    if kind == "log_linear":
        weight = _expect_number(obj.get("weight", 1.0), f"{path}.weight")
        slope = _expect_number(obj.get("slope", 0.0), f"{path}.slope")
        return _wrap(path, log_linear_kernel, weight, slope)
    if kind == "table":
        if "neg_knots" not in obj or "pos_knots" not in obj:
            raise DescriptorError(path, "table kernels need neg_knots and pos_knots")
        neg = _expect_pairs(obj["neg_knots"], f"{path}.neg_knots")
        pos = _expect_pairs(obj["pos_knots"], f"{path}.pos_knots")
        end_slopes = None
        if "end_slopes" in obj:
            raw = obj["end_slopes"]
            if not isinstance(raw, list) or len(raw) != 2:
                raise DescriptorError(f"{path}.end_slopes", "expected [left, right]")
            end_slopes = (
                _expect_number(raw[0], f"{path}.end_slopes[0]"),
                _expect_number(raw[1], f"{path}.end_slopes[1]"),
            )
        strict = obj.get("strictly_concave", False)
        if not isinstance(strict, bool):
            raise DescriptorError(f"{path}.strictly_concave", "expected a boolean")
        return _wrap(path, table_kernel, neg, pos, end_slopes, strict)
    raise DescriptorError(f"{path}.type", f"unknown kernel type {kind!r}")


def parse_field(obj: Any, path: str = "field") -> Field:
    obj = _expect_object(obj, path)
    kind = obj.get("type")
    if kind == "neg_abs":
        field = _wrap(path, neg_abs_field, _expect_number(obj.get("scale", 1.0), f"{path}.scale"))
    elif kind == "neg_square":
        field = _wrap(path, neg_square_field, _expect_number(obj.get("scale", 1.0), f"{path}.scale"))
    elif kind == "log_table":
        if "knots" not in obj:
            raise DescriptorError(path, "log_table fields need knots")
        field = _wrap(path, table_field, _expect_pairs(obj["knots"], f"{path}.knots"))
    elif kind == "discrete":
        if "points" not in obj:
            raise DescriptorError(path, "discrete fields need points")
        field = _wrap(path, discrete_field, _expect_pairs(obj["points"], f"{path}.points"))
    elif kind == "restrict_semiaxis":
        if "inner" not in obj:
            raise DescriptorError(path, "restrict_semiaxis fields need an inner field")
        field = _wrap(path, semiaxis_field, parse_field(obj["inner"], f"{path}.inner"))
    else:
        raise DescriptorError(f"{path}.type", f"unknown field type {kind!r}")
    if "offset" in obj:
        field = field.shifted(_expect_number(obj["offset"], f"{path}.offset"))
    return field


def parse_options(obj: Any, path: str = "options") -> dict:
    if obj is None:
        return {}
    obj = _expect_object(obj, path)
    out: dict = {}
    for key, value in obj.items():
        if key not in _OPTION_KEYS:
            raise DescriptorError(f"{path}.{key}", "unknown option")
        num = _expect_number(value, f"{path}.{key}")
        caster = _OPTION_KEYS[key]
        if caster is int and num != int(num):
            raise DescriptorError(f"{path}.{key}", "expected an integer")
        out[key] = caster(num)
    return out


def parse_problem_file(doc: Any) -> tuple[Problem, dict]:
    doc = _expect_object(doc, "problem")
    if "kernels" not in doc or not isinstance(doc["kernels"], list) or not doc["kernels"]:
        raise DescriptorError("kernels", "expected a non-empty list of kernels")
    kernels = [parse_kernel(k, f"kernels[{i}]") for i, k in enumerate(doc["kernels"])]
    if "field" not in doc:
        raise DescriptorError("field", "missing field object")
    field = parse_field(doc["field"], "field")
    options = parse_options(doc.get("options"), "options")
    grid_density = options.pop("grid_density", 2048)
    problem = _wrap("problem", Problem, tuple(kernels), field, grid_density)
    return problem, options


def parse_interpolation_file(doc: Any) -> tuple[InterpolationProblem, str, dict]:
    doc = _expect_object(doc, "interpolation")
    if "factors" not in doc or not isinstance(doc["factors"], list) or not doc["factors"]:
        raise DescriptorError("factors", "expected a non-empty list of kernels")
    factors = [parse_kernel(k, f"factors[{i}]") for i, k in enumerate(doc["factors"])]
    if "weight" not in doc:
        raise DescriptorError("weight", "missing weight field object")
    weight = parse_field(doc["weight"], "weight")
    if "alpha" not in doc or not isinstance(doc["alpha"], list):
        raise DescriptorError("alpha", "expected a list of target values")
    alpha = [_expect_number(v, f"alpha[{i}]") for i, v in enumerate(doc["alpha"])]
    abscissae = None
    if doc.get("x") is not None:
        if not isinstance(doc["x"], list):
            raise DescriptorError("x", "expected a list of abscissae")
        abscissae = [_expect_number(v, f"x[{i}]") for i, v in enumerate(doc["x"])]
    mode = doc.get("mode", "points")
    if mode not in ("points", "hermite_fejer"):
        raise DescriptorError("mode", f"unknown mode {mode!r}")
    options = parse_options(doc.get("options"), "options")
    ip = _wrap(
        "interpolation",
        InterpolationProblem,
        tuple(factors),
        weight,
        tuple(alpha),
        tuple(abscissae) if abscissae is not None else None,
    )
    return ip, mode, options


def parse_ratio_file(doc: Any) -> tuple[Field, list[float], list[float] | None, dict]:
    doc = _expect_object(doc, "ratio")
    if "weight" not in doc:
        raise DescriptorError("weight", "missing weight field object")
    weight = parse_field(doc["weight"], "weight")
    if "exponents" not in doc or not isinstance(doc["exponents"], list) or not doc["exponents"]:
        raise DescriptorError("exponents", "expected a non-empty list of exponents")
    exponents = [_expect_number(v, f"exponents[{i}]") for i, v in enumerate(doc["exponents"])]
    for i, r in enumerate(exponents):
        if r <= 0:
            raise DescriptorError(f"exponents[{i}]", "exponents must be positive")
    nodes = None
    if doc.get("y") is not None:
        if not isinstance(doc["y"], list):
            raise DescriptorError("y", "expected a list of nodes")
        nodes = [_expect_number(v, f"y[{i}]") for i, v in enumerate(doc["y"])]
    options = parse_options(doc.get("options"), "options")
    return weight, exponents, nodes, options
