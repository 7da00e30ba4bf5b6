"""Config parsing, canonical serialization, and tabular/checksum IO.

Run configs are JSON documents tagged with schema version ``rfe-lab/1``.
A document has a required ``campaign`` block (kind, seed, trials, plus
kind-specific options) and, depending on the kind, ``algorithm``,
``instance``, and ``model`` blocks. Parsing is strict: unknown fields
are rejected and every range violation names the offending field path.

`canonical_text` re-serializes a parsed config with sorted keys, all
defaults applied, and a trailing newline, so parse -> serialize -> parse
is the identity and configs diff cleanly in golden tests.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from .resources import ProblemInstance

__all__ = [
    "SCHEMA_VERSION",
    "CAMPAIGN_KINDS",
    "ConfigError",
    "AlgorithmBlock",
    "CodeParams",
    "RunConfig",
    "parse_config",
    "canonical_text",
    "write_csv",
    "file_sha256",
]

SCHEMA_VERSION = "rfe-lab/1"
CAMPAIGN_KINDS = ("fig2", "fig3", "fig4", "fig5", "fig6", "validate")

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Validation failure carrying the dotted path of the offending field."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AlgorithmBlock:
    """Estimator parameters for the signal/spectrum figures."""

    theta: float
    epsilon: float
    lam: float
    J: int | None = None
    K: int | None = None
    M: int | None = None


@dataclass(frozen=True)
class CodeParams:
    """Code-overhead decay model before a distance is chosen."""

    A: float
    B: float


@dataclass(frozen=True)
class RunConfig:
    """Fully validated campaign configuration with defaults applied."""

    kind: str
    seed: int
    trials: int
    options: dict[str, Any]
    algorithm: AlgorithmBlock | None = None
    instance: ProblemInstance | None = None
    model: CodeParams | None = None


# --- field-level validators ------------------------------------------------


def _as_float(
    value: Any,
    path: str,
    minimum: float | None = None,
    maximum: float | None = None,
    exclusive_min: bool = False,
    exclusive_max: bool = False,
) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ConfigError(path, f"must be finite, got {x!r}")
    if minimum is not None:
        if exclusive_min and not x > minimum:
            raise ConfigError(path, f"must be > {minimum}, got {x}")
        if not exclusive_min and not x >= minimum:
            raise ConfigError(path, f"must be >= {minimum}, got {x}")
    if maximum is not None:
        if exclusive_max and not x < maximum:
            raise ConfigError(path, f"must be < {maximum}, got {x}")
        if not exclusive_max and not x <= maximum:
            raise ConfigError(path, f"must be <= {maximum}, got {x}")
    return x


def _as_int(value: Any, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return value


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f"expected true/false, got {value!r}")
    return value


def _as_choice(value: Any, path: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ConfigError(path, f"must be one of {list(choices)}, got {value!r}")
    return str(value)


def _as_float_list(
    value: Any,
    path: str,
    minimum: float | None = None,
    maximum: float | None = None,
    exclusive_min: bool = False,
    exclusive_max: bool = False,
) -> tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(path, f"expected a non-empty list, got {value!r}")
    return tuple(
        _as_float(v, f"{path}[{i}]", minimum, maximum, exclusive_min, exclusive_max)
        for i, v in enumerate(value)
    )


def _as_int_list(value: Any, path: str, minimum: int | None = None) -> tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(path, f"expected a non-empty list, got {value!r}")
    return tuple(_as_int(v, f"{path}[{i}]", minimum) for i, v in enumerate(value))


def _as_object(value: Any, path: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {value!r}")
    return value


def _reject_unknown(obj: Mapping[str, Any], path: str, allowed: Iterable[str]) -> None:
    allowed_set = set(allowed)
    for key in obj:
        if key not in allowed_set:
            where = f"{path}.{key}" if path else key
            raise ConfigError(where, "unknown field")


# --- kind-specific campaign options ----------------------------------------

# Option tables: name -> (validator taking (value, path), default value).
# Defaults are applied at parse time so canonical text is fully explicit.

_Validator = Callable[[Any, str], Any]


def _fig6_default_r() -> tuple[float, ...]:
    return tuple(10.0 ** (-4.0 + 3.0 * i / 15.0) for i in range(16))


_FIG6_DEPTHS = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000, 100000)
_FIG4_LAMBDAS = (0.1, 0.01, 0.001, 0.0001, 0.00001)


def _campaign_options(kind: str) -> dict[str, tuple[_Validator, Any]]:
    if kind in ("fig2", "fig3"):
        return {}
    if kind == "fig4":
        return {
            "lambdas": (lambda v, p: _as_float_list(v, p, minimum=0.0), _FIG4_LAMBDAS),
            "epsilon_min": (lambda v, p: _as_float(v, p, minimum=0.0, exclusive_min=True), 1e-4),
            "epsilon_max": (lambda v, p: _as_float(v, p, minimum=0.0, exclusive_min=True), 1e-1),
            "points_per_decade": (lambda v, p: _as_int(v, p, minimum=1), 5),
            "delta": (
                lambda v, p: _as_float(v, p, 0.0, 1.0, exclusive_min=True, exclusive_max=True),
                0.01,
            ),
            "k_strategy": (lambda v, p: _as_choice(v, p, ("maintext", "harmonic")), "maintext"),
            "worst_case_depth": (_as_bool, False),
        }
    if kind == "fig5":
        return {
            "d_min": (lambda v, p: _as_int(v, p, minimum=1), 3),
            "d_max": (lambda v, p: _as_int(v, p, minimum=1), 30),
        }
    if kind == "fig6":
        return {
            "r_values": (
                lambda v, p: _as_float_list(v, p, 0.0, 1.0, exclusive_max=True),
                _fig6_default_r(),
            ),
            "depth_values": (lambda v, p: _as_int_list(v, p, minimum=1), _FIG6_DEPTHS),
            "n_list": (lambda v, p: _as_int_list(v, p, minimum=1), (1, 10, 100)),
        }
    if kind == "validate":
        return {
            "epsilon": (lambda v, p: _as_float(v, p, minimum=0.0, exclusive_min=True), 0.1),
            "delta": (
                lambda v, p: _as_float(v, p, 0.0, 1.0, exclusive_min=True, exclusive_max=True),
                0.1,
            ),
            "lambda": (lambda v, p: _as_float(v, p, minimum=0.0), 0.01),
            "theta": (
                lambda v, p: None if v is None else _as_float(v, p, 0.0, TWO_PI, exclusive_max=True),
                None,
            ),
            "method": (lambda v, p: _as_choice(v, p, ("auto", "exact", "gaussian")), "auto"),
            "max_exact_shots": (lambda v, p: _as_int(v, p, minimum=1), 20_000_000),
        }
    raise ConfigError("campaign.kind", f"must be one of {list(CAMPAIGN_KINDS)}, got {kind!r}")


_CAMPAIGN_BASE_FIELDS = ("kind", "seed", "trials")


def _parse_campaign(obj: dict[str, Any]) -> tuple[str, int, int, dict[str, Any]]:
    kind = _as_choice(obj.get("kind"), "campaign.kind", CAMPAIGN_KINDS)
    table = _campaign_options(kind)
    _reject_unknown(obj, "campaign", list(_CAMPAIGN_BASE_FIELDS) + list(table))
    seed = _as_int(obj.get("seed", 0), "campaign.seed", minimum=0)
    trials = _as_int(obj.get("trials", 1), "campaign.trials", minimum=1)
    options: dict[str, Any] = {}
    for name, (validate, default) in table.items():
        if name in obj:
            options[name] = validate(obj[name], f"campaign.{name}")
        else:
            options[name] = default
    if kind == "fig4" and options["epsilon_min"] > options["epsilon_max"]:
        raise ConfigError("campaign.epsilon_min", "must not exceed epsilon_max")
    if kind == "fig5" and options["d_min"] > options["d_max"]:
        raise ConfigError("campaign.d_min", "must not exceed d_max")
    return kind, seed, trials, options


def _parse_algorithm(obj: dict[str, Any], kind: str) -> AlgorithmBlock:
    _reject_unknown(obj, "algorithm", ("theta", "epsilon", "lambda", "J", "K", "M"))
    theta = _as_float(
        obj.get("theta", TWO_PI * 0.3), "algorithm.theta", 0.0, TWO_PI, exclusive_max=True
    )
    j_val = obj.get("J", 50)
    j = None if j_val is None else _as_int(j_val, "algorithm.J", minimum=2)
    default_eps = TWO_PI / j if j is not None else 0.1
    epsilon = _as_float(
        obj.get("epsilon", default_eps), "algorithm.epsilon", 0.0, exclusive_min=True
    )
    lam = _as_float(obj.get("lambda", 0.0), "algorithm.lambda", minimum=0.0)
    k_val = obj.get("K", j)
    k = None if k_val is None else _as_int(k_val, "algorithm.K", minimum=2)
    m_val = obj.get("M")
    m = None if m_val is None else _as_int(m_val, "algorithm.M", minimum=1)
    if j is None:
        raise ConfigError("algorithm.J", "signal/spectrum figures need an explicit grid size")
    if k is None:
        raise ConfigError("algorithm.K", "signal/spectrum figures need an explicit depth cap")
    if k > j:
        raise ConfigError("algorithm.K", f"must satisfy K <= J, got K={k} > J={j}")
    if TWO_PI / j > epsilon * (1.0 + 1e-12):
        raise ConfigError("algorithm.J", f"grid spacing 2*pi/J exceeds epsilon={epsilon}")
    if kind == "fig2" and lam != 0.0:
        raise ConfigError("algorithm.lambda", "fig2 is the noiseless figure; lambda must be 0")
    return AlgorithmBlock(theta=theta, epsilon=epsilon, lam=lam, J=j, K=k, M=m)


def _parse_instance(obj: dict[str, Any]) -> ProblemInstance:
    _reject_unknown(obj, "instance", ("N", "D", "epsilon", "delta"))
    for field in ("N", "D", "epsilon", "delta"):
        if field not in obj:
            raise ConfigError(f"instance.{field}", "required field is missing")
    return ProblemInstance(
        N=_as_int(obj["N"], "instance.N", minimum=1),
        D=_as_int(obj["D"], "instance.D", minimum=1),
        epsilon=_as_float(obj["epsilon"], "instance.epsilon", 0.0, exclusive_min=True),
        delta=_as_float(
            obj["delta"], "instance.delta", 0.0, 1.0, exclusive_min=True, exclusive_max=True
        ),
    )


def _parse_model(obj: dict[str, Any]) -> CodeParams:
    _reject_unknown(obj, "model", ("A", "B"))
    for field in ("A", "B"):
        if field not in obj:
            raise ConfigError(f"model.{field}", "required field is missing")
    return CodeParams(
        A=_as_float(obj["A"], "model.A", 0.0, exclusive_min=True),
        B=_as_float(obj["B"], "model.B", 0.0, exclusive_min=True),
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run config; raise ConfigError with a field path."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"not valid JSON: {exc}") from exc
    root = _as_object(raw, "")
    _reject_unknown(root, "", ("schema", "campaign", "algorithm", "instance", "model"))
    schema = root.get("schema")
    if schema != SCHEMA_VERSION:
        raise ConfigError("schema", f"expected {SCHEMA_VERSION!r}, got {schema!r}")
    if "campaign" not in root:
        raise ConfigError("campaign", "required block is missing")
    kind, seed, trials, options = _parse_campaign(_as_object(root["campaign"], "campaign"))

    algorithm = instance = model = None
    if kind in ("fig2", "fig3"):
        for block in ("instance", "model"):
            if block in root:
                raise ConfigError(block, f"block is not used by kind {kind!r}")
        algorithm = _parse_algorithm(_as_object(root.get("algorithm", {}), "algorithm"), kind)
    elif kind == "fig5":
        if "algorithm" in root:
            raise ConfigError("algorithm", "block is not used by kind 'fig5'")
        for block in ("instance", "model"):
            if block not in root:
                raise ConfigError(block, "required block is missing for kind 'fig5'")
        instance = _parse_instance(_as_object(root["instance"], "instance"))
        model = _parse_model(_as_object(root["model"], "model"))
    else:
        for block in ("algorithm", "instance", "model"):
            if block in root:
                raise ConfigError(block, f"block is not used by kind {kind!r}")
    return RunConfig(
        kind=kind,
        seed=seed,
        trials=trials,
        options=options,
        algorithm=algorithm,
        instance=instance,
        model=model,
    )


def canonical_text(config: RunConfig) -> str:
    """Stable JSON rendering: sorted keys, defaults explicit, trailing newline."""
    campaign: dict[str, Any] = {"kind": config.kind, "seed": config.seed, "trials": config.trials}
    for name, value in config.options.items():
        campaign[name] = list(value) if isinstance(value, tuple) else value
    payload: dict[str, Any] = {"schema": SCHEMA_VERSION, "campaign": campaign}
    if config.algorithm is not None:
        a = config.algorithm
        block: dict[str, Any] = {"theta": a.theta, "epsilon": a.epsilon, "lambda": a.lam}
        if a.J is not None:
            block["J"] = a.J
        if a.K is not None:
            block["K"] = a.K
        if a.M is not None:
            block["M"] = a.M
        payload["algorithm"] = block
    if config.instance is not None:
        inst = config.instance
        payload["instance"] = {
            "N": inst.N,
            "D": inst.D,
            "epsilon": inst.epsilon,
            "delta": inst.delta,
        }
    if config.model is not None:
        payload["model"] = {"A": config.model.A, "B": config.model.B}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# --- tabular output and checksums -------------------------------------------


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows as CSV with floats at 17 significant digits; return the path."""
    out = Path(path)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        lines.append(",".join(_format_cell(cell) for cell in row))
    out.write_text("\n".join(lines) + "\n")
    return out


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
