#!/usr/bin/env python3
"""
Export of simulator results

Single command results go to the path given with --out. Sweep tables are
written twice: CSV for spreadsheets and JSON for scripts, both named with
the session timestamp.
"""

import csv
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import config

logger = logging.getLogger("data_exporter")

SWEEP_FIELDS = [
    "family",
    "label",
    "v",
    "k",
    "lambda",
    "secret",
    "exact_peak_probability",
    "audit_peak_probability",
    "formula_probability",
    "family_approximation",
    "empirical_rate",
    "trials",
    "error",
]


def dumps(document: Dict) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline"""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class ResultExporter:
    """Writes JSON documents and sweep tables"""

    def __init__(self, session_start: Optional[datetime] = None, data_dir: Optional[Path] = None):
        """
        Args:
            session_start: Time the session started (defaults to now)
            data_dir: Root for csv/ and json/ (defaults to config.DATA_DIR)
        """
        self.session_start = session_start or datetime.now()
        self.session_id = self.session_start.strftime(config.EXPORT_TIMESTAMP_FORMAT)
        self.data_dir = Path(data_dir) if data_dir else config.DATA_DIR
        self.csv_dir = self.data_dir / "csv"
        self.json_dir = self.data_dir / "json"

    def _ensure_directories(self):
        """Creates the export directories if needed"""
        self.csv_dir.mkdir(parents=True, exist_ok=True)
        self.json_dir.mkdir(parents=True, exist_ok=True)

    def export_json(self, document: Dict, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(document), encoding="utf-8")
        logger.info(f"💾 Result written to {path}")
        return path

    def export_sweep_csv(self, rows: List[Dict], family: str) -> Path:
        self._ensure_directories()
        csv_path = self.csv_dir / f"{config.EXPORT_FILE_PREFIX}_{family}_sweep_{self.session_id}.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as csvfile:
            writer = csv.DictWriter(csvfile, fieldnames=SWEEP_FIELDS, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({key: row.get(key, "") for key in SWEEP_FIELDS})
        logger.info(f"📈 Sweep table exported to CSV: {csv_path}")
        return csv_path

    def export_sweep_json(self, document: Dict, family: str) -> Path:
        self._ensure_directories()
        json_path = self.json_dir / f"{config.EXPORT_FILE_PREFIX}_{family}_sweep_{self.session_id}.json"
        json_path.write_text(dumps(document), encoding="utf-8")
        logger.info(f"🚀 Sweep report exported to JSON: {json_path}")
        return json_path

    def export_sweep(self, document: Dict) -> Dict[str, Path]:
        """CSV table plus JSON report for one sweep document"""
        family = document.get("family", "sweep")
        files = {
            "csv": self.export_sweep_csv(document.get("rows", []), family),
            "json": self.export_sweep_json(document, family),
        }
        logger.info("📁 Sweep export finished: %s", ", ".join(str(p) for p in files.values()))
        return files
