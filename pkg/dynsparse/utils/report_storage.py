"""
Report Storage Service

This module handles saving and loading CLI reports to/from the filesystem.
Reports are organized by seed and command name for easy retrieval.
"""

from __future__ import annotations

import json
import logging
import re
from datetime import datetime
from pathlib import Path
from typing import Any

from pydantic import BaseModel

logger = logging.getLogger(__name__)


class ReportStorage:
    """Service for storing and retrieving run reports"""

    def __init__(self, base_dir: str | Path = "reports") -> None:
        self.base_dir = Path(base_dir)

    def _get_folder_path(self, seed: int) -> Path:
        """Generate folder path for the reports of one seed"""
        return self.base_dir / f"seed_{seed}"

    @staticmethod
    def _safe_name(command: str) -> str:
        return re.sub(r"[^\w\-]", "_", command)

    def save_report(
        self,
        seed: int,
        command: str,
        report: BaseModel | dict[str, Any],
        metadata: dict[str, Any] | None = None,
    ) -> Path | None:
        """
        Save a report as pretty JSON under <base>/seed_<seed>/<command>.json

        Args:
            seed: Seed of the run
            command: CLI command that produced the report
            report: pydantic model or plain dict
            metadata: Additional metadata (source file, etc.)

        Returns:
            Path of the written file, or None on failure
        """
        try:
            folder_path = self._get_folder_path(seed)
            folder_path.mkdir(parents=True, exist_ok=True)
            file_path = folder_path / f"{self._safe_name(command)}.json"

            payload = report.model_dump(mode="json") if isinstance(report, BaseModel) else report
            result_data = {
                "command": command,
                "seed": seed,
                "timestamp": datetime.now().isoformat(),
                "report": payload,
                "metadata": metadata or {},
            }
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(result_data, f, ensure_ascii=False, indent=2)

            logger.info(f"✅ Saved {command} report to {file_path}")
            return file_path

        except (OSError, TypeError, ValueError) as e:
            logger.error(f"❌ Failed to save {command} report: {e}")
            return None

    def load_report(self, seed: int, command: str) -> dict[str, Any] | None:
        """
        Load a saved report

        Returns:
            Dict containing the stored data or None if not found
        """
        file_path = self._get_folder_path(seed) / f"{self._safe_name(command)}.json"
        if not file_path.exists():
            return None
        try:
            with open(file_path, encoding="utf-8") as f:
                data: dict[str, Any] = json.load(f)
            return data
        except (OSError, ValueError) as e:
            logger.error(f"❌ Failed to load {command} report: {e}")
            return None

    def list_reports(self, seed: int) -> list[str]:
        """
        Get the commands that have saved reports for a seed

        Returns:
            Sorted list of command names
        """
        folder_path = self._get_folder_path(seed)
        if not folder_path.exists():
            return []
        return sorted(f.stem for f in folder_path.glob("*.json") if f.is_file())
