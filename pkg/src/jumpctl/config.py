"""Run configuration: one JSON document, schema-validated, flag-overridable.

Unknown keys are rejected everywhere.  Sensor entries may be numbers or the
sentinels "optional" (perfect sensor) and "predictable" (no sensor).
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional

import jsonschema

from .paths import JumpLaw, ModelParams

LAW_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["uniform", "gaussian_mixture", "discrete"]},
        "lo": {"type": "number"},
        "hi": {"type": "number"},
        "components": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "items": {"type": "number"},
            },
        },
        "atoms": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {"type": "number"},
            },
        },
    },
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "uniform"}}},
            "then": {"required": ["kind", "lo", "hi"]},
        },
        {
            "if": {"properties": {"kind": {"const": "gaussian_mixture"}}},
            "then": {"required": ["kind", "components"]},
        },
        {
            "if": {"properties": {"kind": {"const": "discrete"}}},
            "then": {"required": ["kind", "atoms"]},
        },
    ],
}

ETA_SCHEMA = {
    "oneOf": [
        {"type": "number", "minimum": 0},
        {"enum": ["optional", "predictable"]},
    ]
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "p_tilde": {"type": "number"},
                "r": {"type": "number", "exclusiveMinimum": 0},
                "lambda": {"type": "number", "exclusiveMinimum": 0},
                "c0": {"type": "number"},
                "law": LAW_SCHEMA,
            },
        },
        "etas": {"type": "array", "items": ETA_SCHEMA, "minItems": 1},
        "mc": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_samples": {"type": "integer", "minimum": 1},
                "eps_trunc": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_points": {"type": "integer", "minimum": 2},
                "p_min": {"type": ["number", "null"]},
            },
        },
        "value": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"n_paths": {"type": "integer", "minimum": 2}},
        },
        "toy": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lambda": {"type": "number", "exclusiveMinimum": 0},
                "etas": {
                    "type": "array",
                    "items": {"type": "number", "minimum": 0, "maximum": 1},
                    "minItems": 1,
                },
                "n_paths": {"type": "integer", "minimum": 2},
            },
        },
        "out_dir": {"type": "string"},
    },
}

DEFAULTS = {
    "model": {
        "p_tilde": -10.0,
        "r": 1.0,
        "lambda": 0.5,
        "c0": -12.0,
        "law": {"kind": "gaussian_mixture", "components": [[0.5, -3.0, 2.0], [0.5, 6.0, 2.0]]},
    },
    "etas": [0, 3, 6, "predictable"],
    "mc": {"n_samples": 100_000, "eps_trunc": 1e-8, "seed": 20260811},
    "grid": {"n_points": 200, "p_min": None},
    "value": {"n_paths": 100_000},
    "toy": {"lambda": 0.5, "etas": [0.0, 0.3, 0.5, 0.7, 1.0], "n_paths": 100_000},
    "out_dir": "runs/default",
}


class ConfigError(ValueError):
    pass


def eta_value(entry) -> float:
    """Map a config sensor entry to its numeric threshold."""
    if entry == "optional":
        return 0.0
    if entry == "predictable":
        return math.inf
    return float(entry)


def eta_tag(eta: float) -> str:
    """Filename-stable spelling of a threshold."""
    if math.isinf(eta):
        return "inf"
    if eta == int(eta):
        return str(int(eta))
    return str(eta).replace(".", "p")


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass(frozen=True)
class RunConfig:
    """Validated, fully-defaulted run configuration."""

    raw: dict

    @staticmethod
    def load(document: Optional[dict] = None, **overrides) -> "RunConfig":
        doc = document or {}
        try:
            jsonschema.validate(doc, SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"invalid config: {exc.message}") from exc
        merged = _merge(DEFAULTS, doc)
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "seed":
                merged["mc"]["seed"] = int(value)
            elif key == "out_dir":
                merged["out_dir"] = str(value)
            elif key == "n_samples":
                merged["mc"]["n_samples"] = int(value)
            else:
                raise ConfigError(f"unknown override {key!r}")
        jsonschema.validate(merged, SCHEMA)
        return RunConfig(merged)

    @staticmethod
    def from_file(path, **overrides) -> "RunConfig":
        with open(path) as fh:
            return RunConfig.load(json.load(fh), **overrides)

    # -- accessors ----------------------------------------------------------

    def law(self) -> JumpLaw:
        spec = self.raw["model"]["law"]
        if spec["kind"] == "uniform":
            return JumpLaw("uniform", (spec["lo"], spec["hi"]))
        if spec["kind"] == "gaussian_mixture":
            return JumpLaw("gaussian_mixture", tuple(tuple(c) for c in spec["components"]))
        return JumpLaw("discrete", tuple(tuple(a) for a in spec["atoms"]))

    def params(self) -> ModelParams:
        m = self.raw["model"]
        return ModelParams(
            p_tilde=m["p_tilde"], r=m["r"], lam=m["lambda"], c0=m["c0"], law=self.law()
        )

    def etas(self) -> list:
        return [eta_value(e) for e in self.raw["etas"]]

    @property
    def seed(self) -> int:
        return self.raw["mc"]["seed"]

    @property
    def out_dir(self) -> str:
        return self.raw["out_dir"]

    def document(self) -> dict:
        """The experiment parameters: the config without the run location."""
        doc = copy.deepcopy(self.raw)
        doc.pop("out_dir", None)
        return doc

    def hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.document(), sort_keys=True).encode()
        ).hexdigest()[:16]

    def cache_key(self) -> str:
        """Calibration cache key: model, sensors, grid, sampling, seed."""
        key = {
            "model": self.raw["model"],
            "etas": self.raw["etas"],
            "grid": self.raw["grid"],
            "mc": self.raw["mc"],
        }
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:16]
