"""Shared fixtures: clean configuration state and a sketch-bank factory."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator

import pytest

from dynsparse.sparsifier.bank import EdgeUpdate, SketchBank
from dynsparse.utils.config import ENV_FIELDS, ENV_PREFIX, ProfileConfig, RunConfig


@pytest.fixture(autouse=True)
def builtin_profiles(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Every test starts from the built-in profiles and no DYNSPARSE_* environment."""
    monkeypatch.delenv(ProfileConfig.PROFILES_PATH_ENV, raising=False)
    for name in ENV_FIELDS:
        monkeypatch.delenv(f"{ENV_PREFIX}{name.upper()}", raising=False)
    ProfileConfig.reload_profiles()
    yield
    ProfileConfig.reload_profiles()


@pytest.fixture
def make_bank() -> Callable[..., SketchBank]:
    """make_bank(n, edges_or_updates, profile="paper", **config_overrides)."""

    def factory(
        n: int,
        stream: Iterable[tuple[int, int] | EdgeUpdate] = (),
        profile: str = "paper",
        **overrides: object,
    ) -> SketchBank:
        bank = SketchBank(n, RunConfig.build(profile, **overrides))
        for item in stream:
            upd = item if isinstance(item, EdgeUpdate) else EdgeUpdate.insert(*item)
            bank.ingest(upd)
        return bank

    return factory
