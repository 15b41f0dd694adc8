"""CSV emission for round logs and per-run summaries."""

from __future__ import annotations

import io
import os
import tempfile
from dataclasses import fields

from .engine import RoundReport
from .metrics import run_summary

ROUND_COLUMNS = (
    "round", "alive_before", "alive_after", "packets_delivered", "packets_lost",
    "data_msgs", "ctrl_msgs", "hypothetical_sync_msgs", "energy_tx_j", "energy_rx_j",
    "energy_ctrl_j", "residual_mean_j", "residual_min_j", "residual_max_j",
    "residual_stddev_j", "deaths",
)

assert ROUND_COLUMNS == tuple(f.name for f in fields(RoundReport))


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, (tuple, list)):
        return ";".join(str(v) for v in value)
    return str(value)


def write_round_csv(reports, sink) -> None:
    """Write one header line and one line per round to the text stream ``sink``."""
    try:
        sink.write(",".join(ROUND_COLUMNS) + "\n")
        for r in reports:
            sink.write(",".join(fmt(getattr(r, c)) for c in ROUND_COLUMNS) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing round CSV: {exc}") from exc


def round_csv_text(reports) -> str:
    buf = io.StringIO()
    write_round_csv(reports, buf)
    return buf.getvalue()


def write_summary_csv(result, sink) -> dict:
    row = run_summary(result)
    sink.write(",".join(row) + "\n")
    sink.write(",".join(fmt(v) for v in row.values()) + "\n")
    return row


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
