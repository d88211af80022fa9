"""CSV emission and console summaries."""

import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from bresselab import __version__

logger = logging.getLogger(__name__)

Cell = float | int | str | bool | None

# Verdict styles in summaries
VERDICT_STYLES = {"pass": "bold green", "fail": "bold red"}


def format_cell(value: Cell) -> str:
    """17 significant digits for floats so equal runs give equal bytes."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    config_hash: str,
    meta: Mapping[str, Cell] | None = None,
) -> Path:
    """Write a CSV whose first line records the config hash and tool version."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# config_hash={config_hash} tool_version={__version__}"]
    lines += [f"# {key}={format_cell(value)}" for key, value in (meta or {}).items()]
    lines.append(",".join(header))
    n = 0
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row {n} has {len(row)} cells for {len(header)} columns")
        lines.append(",".join(format_cell(cell) for cell in row))
        n += 1
    path.write_text("\n".join(lines) + "\n")
    logger.info("wrote %d rows to %s", n, path)
    return path


def render_summary(
    title: str,
    rows: Sequence[tuple[str, Cell]],
    console: Console | None = None,
) -> Table:
    """Print a two-column summary table; values named ``verdict`` are colored."""
    table = Table(title=title, show_header=False, title_justify="left")
    table.add_column("quantity", style="cyan")
    table.add_column("value", justify="right")
    for name, value in rows:
        text = escape(format_cell(value) if not isinstance(value, float) else f"{value:.6g}")
        style = VERDICT_STYLES.get(text) if name == "verdict" else None
        table.add_row(name, f"[{style}]{text}[/{style}]" if style else text)
    (console or Console()).print(table)
    return table


def configure_logging(verbosity: int = 0) -> None:
    """Route package logs through rich on standard error.

    ``verbosity`` 1 shows DEBUG, -1 only WARNING and above.
    """
    level = {1: logging.DEBUG, -1: logging.WARNING}.get(verbosity, logging.INFO)
    root = logging.getLogger("bresselab")
    root.handlers.clear()
    root.addHandler(
        RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=False)
    )
    root.setLevel(level)
    root.propagate = False
