"""
Run configuration, constant profiles and derived sketch parameters

This module provides the validated RunConfig model, the ProfileConfig service
that resolves named constant profiles (with an optional JSON override file and
graceful fallback), environment overrides for every CLI flag, and
SketchParameters, which turns (n, RunConfig) into every size the sketches need.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar, Literal

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigurationError

# Configure logging
logger = logging.getLogger(__name__)

ProfileName = Literal["paper", "desk"]

ENV_PREFIX = "DYNSPARSE_"

# Denominator bound of the rational sampling-rate constant
RATE_DENOMINATOR = 1 << 16

# Fields that may be overridden through DYNSPARSE_<FIELD> variables
ENV_FIELDS: dict[str, type] = {
    "epsilon": float,
    "seed": int,
    "profile": str,
    "checked": bool,
    "best_effort": bool,
    "gamma": float,
    "alpha": float,
    "kappa": float,
    "copies": int,
    "weighted_bits": int,
}


class ProfileConfig:
    """
    Named constant profiles with cache and fallback.

    The built-in table is loaded once and cached in memory. An optional JSON
    file named by DYNSPARSE_PROFILES_PATH may add or override profiles; if it
    is missing or malformed a warning is logged and the built-ins are used.
    """

    # Profile cache: {profile_name: {constant: value}}
    _cache: ClassVar[dict[str, dict[str, float]]] = {}

    # Loaded state flag
    _loaded: ClassVar[bool] = False

    DEFAULT_PROFILE: ClassVar[str] = "paper"

    BUILTIN_PROFILES: ClassVar[dict[str, dict[str, float]]] = {
        # Constants large enough for the whp statements
        "paper": {
            "gamma": 2.0,
            "alpha": 2.0,
            "kappa": 4.0,
            "copies_factor": 8.0,
            "independence_constant": 1.0,
            "degree_constant": 2.0,
        },
        # Reduced constants so that p_e < 1 actually happens at n <= 64;
        # at n = 16, eps = 0.5 this gives p_2 = 0.95 and p_3 = 0.475
        "desk": {
            "gamma": 19.0 / 320.0,
            "alpha": 0.25,
            "kappa": 1.0,
            "copies_factor": 2.0,
            "independence_constant": 1.0 / 16.0,
            "degree_constant": 2.0,
        },
    }

    PROFILES_PATH_ENV: ClassVar[str] = "DYNSPARSE_PROFILES_PATH"

    @classmethod
    def load_profiles(cls) -> None:
        """
        Load the built-in profiles plus any overrides from the profiles file.

        Idempotent; call reload_profiles() to force a re-read.
        """
        if cls._loaded:
            logger.debug("Profiles already loaded, skipping")
            return

        cls._cache = {name: dict(values) for name, values in cls.BUILTIN_PROFILES.items()}

        path = os.getenv(cls.PROFILES_PATH_ENV)
        if path:
            try:
                with open(path, encoding="utf-8") as handle:
                    extra = json.load(handle)
                loaded_count = 0
                for name, values in extra.items():
                    base = dict(cls._cache.get(name, cls.BUILTIN_PROFILES[cls.DEFAULT_PROFILE]))
                    base.update({key: float(value) for key, value in values.items()})
                    cls._cache[name] = base
                    loaded_count += 1
                    logger.debug(f"  ✓ profile {name} → {base}")
                logger.info(f"✅ Loaded {loaded_count} profile override(s) from {path}")
            except (OSError, ValueError, AttributeError, TypeError) as e:
                logger.error(f"❌ Failed to load profiles from {path}: {e}")
                logger.warning("⚠️  Using built-in profiles only.")

        cls._loaded = True

    @classmethod
    def get_profile(cls, name: str) -> dict[str, float]:
        """
        Get the constants of a named profile.

        Unknown names fall back to the default profile with a warning.
        """
        if not cls._loaded:
            cls.load_profiles()

        if name in cls._cache:
            return dict(cls._cache[name])

        logger.warning(
            f"⚠️  Profile '{name}' not found, using default profile '{cls.DEFAULT_PROFILE}'"
        )
        return dict(cls._cache[cls.DEFAULT_PROFILE])

    @classmethod
    def get_all_profiles(cls) -> dict[str, dict[str, float]]:
        """Get every cached profile."""
        if not cls._loaded:
            cls.load_profiles()
        return {name: dict(values) for name, values in cls._cache.items()}

    @classmethod
    def reload_profiles(cls) -> None:
        """Clear the cache and load the profiles again."""
        logger.info("🔄 Reloading profiles...")
        cls._cache.clear()
        cls._loaded = False
        cls.load_profiles()


class RunConfig(BaseModel):
    """Validated configuration of one sketching run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    epsilon: float = Field(default=0.5, gt=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    profile: str = "paper"
    checked: bool = False
    best_effort: bool = False

    gamma: float = Field(default=2.0, gt=0.0)
    alpha: float = Field(default=2.0, gt=0.0)
    kappa: float = Field(default=4.0, gt=0.0)
    copies_factor: float = Field(default=8.0, gt=0.0)
    independence_constant: float = Field(default=1.0, gt=0.0)
    degree_constant: float = Field(default=2.0, gt=0.0)

    # Explicit overrides of derived sizes
    copies: int | None = Field(default=None, ge=1)
    a_max: int | None = Field(default=None, ge=1)
    recovery_rows: int | None = Field(default=None, ge=1)
    independence_degree: int | None = Field(default=None, ge=1)
    projections: int | None = Field(default=None, ge=1)
    l0_repetitions: int = Field(default=4, ge=1)
    independence_power: Literal[3, 4] = 3
    weighted_bits: int | None = Field(default=None, ge=1, le=62)

    # Level lower-bound constant: s_e <= beta * 2^L(e) * log2 n
    beta: float = Field(default=4.0, gt=0.0)

    @model_validator(mode="after")
    def _check_profile(self) -> RunConfig:
        if not self.profile:
            raise ValueError("profile must be a non-empty name")
        return self

    @classmethod
    def build(cls, profile: str = "paper", **overrides: Any) -> RunConfig:
        """
        Build a config from a named profile, applying explicit overrides.

        Raises:
            ConfigurationError: if a value fails validation.
        """
        values: dict[str, Any] = dict(ProfileConfig.get_profile(profile))
        values["profile"] = profile
        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e

    @classmethod
    def from_env(cls, **flag_overrides: Any) -> RunConfig:
        """
        Build a config from DYNSPARSE_* environment variables and CLI flags.

        Precedence is flag > environment > profile. A local .env file is
        loaded first if present.
        """
        load_dotenv()
        env_values: dict[str, Any] = {}
        for name, kind in ENV_FIELDS.items():
            raw = os.environ.get(f"{ENV_PREFIX}{name.upper()}")
            if raw is None or raw == "":
                continue
            try:
                env_values[name] = _parse_env_value(raw, kind)
            except ValueError as e:
                raise ConfigurationError(
                    f"invalid value {raw!r} for {ENV_PREFIX}{name.upper()}"
                ) from e
        env_values.update({k: v for k, v in flag_overrides.items() if v is not None})
        profile = str(env_values.pop("profile", ProfileConfig.DEFAULT_PROFILE))
        return cls.build(profile, **env_values)


def _parse_env_value(raw: str, kind: type) -> Any:
    if kind is bool:
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(raw)
    return kind(raw)


@dataclass(frozen=True)
class SketchParameters:
    """Every size derived from (n, RunConfig); computed once per bank."""

    n: int
    epsilon: float
    seed: int
    log_n: int
    lg: float
    a_max: int
    b_max: int
    r_max: int
    # gamma log^2 n / eps^2 as an exact rational; p_a = min(1, rate_constant / 2^a)
    rate_constant: Fraction
    # smallest integer with 2^delta >= rate_constant
    delta: int
    exponent_max: int
    sparsity: int
    recovery_rows: int
    independence_degree: int
    projections: int
    forest_rounds: int
    l0_repetitions: int
    degree_threshold: float
    beta: float

    @classmethod
    def derive(cls, n: int, config: RunConfig) -> SketchParameters:
        if n < 1:
            raise ConfigurationError(f"vertex count must be positive, got {n}")
        log_n = max(1, math.ceil(math.log2(n))) if n > 1 else 1
        lg = max(1.0, math.log2(n)) if n > 1 else 1.0
        eps2 = config.epsilon**2

        if config.a_max is not None:
            a_max = config.a_max
        else:
            a_max = max(1, math.ceil(2 * math.log2(n))) if n > 1 else 1
        copies = config.copies or max(1, math.ceil(config.copies_factor * log_n))
        rate_constant = Fraction(config.gamma * lg**2 / eps2).limit_denominator(RATE_DENOMINATOR)
        if rate_constant <= 0:
            raise ConfigurationError(f"gamma = {config.gamma} gives a zero sampling rate")
        delta = 0
        while (1 << delta) < rate_constant:
            delta += 1
        sparsity = max(1, math.ceil(config.kappa * lg**3 / eps2))
        independence = config.independence_degree or max(
            2, math.ceil(config.independence_constant * lg**config.independence_power / eps2)
        )
        projections = config.projections or max(
            16, math.ceil(config.degree_constant * lg / eps2)
        )
        return cls(
            n=n,
            epsilon=config.epsilon,
            seed=config.seed,
            log_n=log_n,
            lg=lg,
            a_max=a_max,
            b_max=copies,
            r_max=copies,
            rate_constant=rate_constant,
            delta=delta,
            exponent_max=max(0, a_max - delta),
            sparsity=sparsity,
            recovery_rows=config.recovery_rows or max(3, log_n),
            independence_degree=independence,
            projections=projections,
            forest_rounds=log_n + 2,
            l0_repetitions=config.l0_repetitions,
            degree_threshold=4.0 * config.alpha * lg**3 / eps2,
            beta=config.beta,
        )

    def sample_exponent(self, level: int) -> int:
        """Exponent of the sketches read for level a, i.e. max(a - Delta, 0)."""
        return max(level - self.delta, 0)

    def sample_rate(self, level: int) -> Fraction:
        """p_a = min(1, gamma log^2 n / (eps^2 2^a)); never above 2^-sample_exponent(a)."""
        return min(Fraction(1), self.rate_constant / (1 << level))

    def level_weight(self, level: int) -> Fraction:
        """1/p_a, the weight of an emitted level-a edge."""
        return 1 / self.sample_rate(level)

    def size_budget(self) -> float:
        """n log2^3 n / eps^2, the unit of the sparsifier size bound."""
        return self.n * self.lg**3 / self.epsilon**2
