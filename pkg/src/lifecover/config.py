"""Config-document ingestion: JSON or TOML, strict keys, field-level errors."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigInvalid, LifecoverError
from .model import (
    HouseholdParams,
    MarketParams,
    PremiumQuote,
    Scheme,
    calibrate_to_loss_probability,
    continuous_premium,
    single_premium,
)

_TOP_KEYS = {"r", "mu", "sigma", "lambda_x", "lambda_y", "income_x", "income_y",
             "alpha", "premium"}
_PREMIUM_KEYS = {"scheme", "loading", "loss_probability"}
_SCHEMES = {"single", "continuous", "both"}


@dataclass(frozen=True)
class PremiumSpec:
    """Which scheme(s) to price and how: by loading or by target loss probability."""

    scheme: str = "both"
    loading: float | None = None
    loss_probability: float | None = None


@dataclass(frozen=True)
class RunConfig:
    market: MarketParams
    household: HouseholdParams
    premium: PremiumSpec


def _require_number(raw: dict, key: str) -> float:
    if key not in raw:
        raise ConfigInvalid(f"missing required key '{key}'", field=key)
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigInvalid(f"key '{key}' must be a number, got {value!r}", field=key)
    return float(value)


def parse_config(raw: dict) -> RunConfig:
    """Validate a parsed config mapping; unknown keys are rejected by name."""
    if not isinstance(raw, dict):
        raise ConfigInvalid("config document must be a mapping")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}", field=sorted(unknown)[0])
    try:
        market = MarketParams(r=_require_number(raw, "r"), mu=_require_number(raw, "mu"),
                              sigma=_require_number(raw, "sigma"))
        household = HouseholdParams(
            lambda_x=_require_number(raw, "lambda_x"), lambda_y=_require_number(raw, "lambda_y"),
            income_x=_require_number(raw, "income_x"), income_y=_require_number(raw, "income_y"),
            alpha=_require_number(raw, "alpha"),
        )
    except ConfigInvalid:
        raise
    except LifecoverError as exc:
        raise ConfigInvalid(str(exc)) from exc

    prem_raw = raw.get("premium", {})
    if not isinstance(prem_raw, dict):
        raise ConfigInvalid("'premium' must be a table/object", field="premium")
    unknown = set(prem_raw) - _PREMIUM_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown premium keys: {sorted(unknown)}",
                            field=f"premium.{sorted(unknown)[0]}")
    scheme = prem_raw.get("scheme", "both")
    if scheme not in _SCHEMES:
        raise ConfigInvalid(f"premium.scheme must be one of {sorted(_SCHEMES)}, got {scheme!r}",
                            field="premium.scheme")
    loading = prem_raw.get("loading")
    loss_probability = prem_raw.get("loss_probability")
    if loading is not None and loss_probability is not None:
        raise ConfigInvalid("give premium.loading or premium.loss_probability, not both",
                            field="premium")
    if loading is None and loss_probability is None:
        loading = 0.0
    return RunConfig(market, household,
                     PremiumSpec(scheme=scheme, loading=loading,
                                 loss_probability=loss_probability))


def load_config(path: str | Path) -> RunConfig:
    """Read a .json or .toml config file (detected by extension)."""
    path = Path(path)
    if not path.exists():
        raise ConfigInvalid(f"config file not found: {path}")
    text = path.read_bytes()
    try:
        if path.suffix.lower() == ".toml":
            raw = tomllib.loads(text.decode("utf-8"))
        elif path.suffix.lower() == ".json":
            raw = json.loads(text.decode("utf-8"))
        else:
            raise ConfigInvalid(f"unsupported config extension {path.suffix!r}; use .toml or .json")
    except (ValueError, UnicodeDecodeError) as exc:
        if isinstance(exc, ConfigInvalid):
            raise
        raise ConfigInvalid(f"cannot parse {path.name}: {exc}") from exc
    return parse_config(raw)


def quotes_from_spec(market: MarketParams, household: HouseholdParams,
                     premium: PremiumSpec) -> dict[Scheme, PremiumQuote]:
    """Price the requested scheme(s); always a dict keyed by Scheme."""
    try:
        if premium.loss_probability is not None:
            quote_s, quote_c = calibrate_to_loss_probability(market, household,
                                                             premium.loss_probability)
        else:
            loading = premium.loading if premium.loading is not None else 0.0
            quote_s = single_premium(market, household, loading)
            quote_c = continuous_premium(market, household, loading)
    except ConfigInvalid:
        raise
    except LifecoverError:
        raise
    out: dict[Scheme, PremiumQuote] = {}
    if premium.scheme in ("single", "both"):
        out[Scheme.SINGLE] = quote_s
    if premium.scheme in ("continuous", "both"):
        out[Scheme.CONTINUOUS] = quote_c
    return out
