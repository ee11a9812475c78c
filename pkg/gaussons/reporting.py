"""
Files written by the experiment commands.

Every command writes into its own directory: one CSV per table, orbit CSVs
for phase portraits, a key=value summary.txt and static PNG plots. CSVs and
the summary are the contract; a plot that fails to render is logged and
skipped.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from gaussons.config import dump_config
from gaussons.models.data_models import (
    ExperimentConfig,
    ExperimentReport,
    Grid,
    PhysParams,
    PlotSpec,
    WaveField,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SUMMARY_FILE = "summary.txt"
CONFIG_FILE = "config.txt"
ORBIT_DIR = "orbits"


def _format(value: Any) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(_format(v) for v in value)
    return str(getattr(value, "value", value))


def write_summary(path: PathLike, summary: Dict[str, Any]) -> Path:
    """Write key=value lines in insertion order."""
    path = Path(path)
    path.write_text("".join(f"{k}={_format(v)}\n" for k, v in summary.items()))
    return path


def read_summary(path: PathLike) -> Dict[str, str]:
    """
    Parse a summary file back into strings.

    Values are not converted; callers compare them as they need.
    """
    out: Dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        key, sep, value = line.partition("=")
        if sep:
            out[key.strip()] = value.strip()
    return out


def write_table(path: PathLike, rows: List[Dict[str, Any]]) -> Path:
    """Write rows as a comma-separated file with a header row."""
    path = Path(path)
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


def field_header(t: float, params: Optional[PhysParams] = None) -> str:
    """Comment line carried by field CSVs."""
    parts = [f"t={t!r}"]
    if params is not None:
        parts += [
            f"lambda={params.lam!r}",
            f"omega={params.omega!r}",
            f"dim={params.dim}",
            f"potential={params.potential_sign.value}",
        ]
    return "# " + ", ".join(parts)


def write_field_csv(
    path: PathLike, u: WaveField, t: float, params: Optional[PhysParams] = None
) -> Path:
    """
    Write a field as x[, y], re, im columns after a `# t=...` comment line.
    """
    path = Path(path)
    columns: Dict[str, np.ndarray] = {}
    names = ["x", "y"][: u.grid.dim]
    for name, coord in zip(names, u.grid.coordinates()):
        columns[name] = coord.ravel()
    columns["re"] = u.values.real.ravel()
    columns["im"] = u.values.imag.ravel()
    with path.open("w") as f:
        f.write(field_header(t, params) + "\n")
        pd.DataFrame(columns).to_csv(f, index=False)
    return path


def read_field_csv(path: PathLike) -> Tuple[float, WaveField, Dict[str, str]]:
    """
    Read a field written by write_field_csv.

    Returns:
        tuple: (t, field, header values as strings)
    """
    path = Path(path)
    with path.open() as f:
        first = f.readline()
    header: Dict[str, str] = {}
    if first.startswith("#"):
        for part in first[1:].split(","):
            key, sep, value = part.partition("=")
            if sep:
                header[key.strip()] = value.strip()
    frame = pd.read_csv(path, comment="#")
    dim = 2 if "y" in frame.columns else 1
    axis = np.unique(frame["x"].to_numpy())
    points = len(axis)
    dx = float(axis[1] - axis[0])
    grid = Grid(length=points * dx, points=points, dim=dim)
    values = (frame["re"].to_numpy() + 1j * frame["im"].to_numpy()).reshape(grid.shape)
    return float(header.get("t", "0")), WaveField(grid=grid, values=values), header


def _draw(path: Path, spec: PlotSpec, report: ExperimentReport) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    try:
        if spec.kind == "orbits":
            for table in report.orbit_tables.values():
                frame = pd.DataFrame(table)
                ax.plot(frame["tau"], frame["tau_dot"], lw=0.8)
            ax.set_xlabel("tau")
            ax.set_ylabel("tau_dot")
        else:
            frame = pd.DataFrame(report.tables[spec.table])
            for column in spec.y:
                ax.plot(frame[spec.x], frame[column], label=column)
            ax.set_xlabel(spec.x)
            if len(spec.y) > 1:
                ax.legend()
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_title(spec.title or report.command)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, dpi=120)
    finally:
        plt.close(fig)


def write_plot(path: PathLike, spec: PlotSpec, report: ExperimentReport) -> bool:
    """Render one plot; failures are logged and reported as False."""
    try:
        _draw(Path(path), spec, report)
    except Exception as e:  # noqa: BLE001
        logger.warning(f"[reporting] plot {path} skipped: {e}")
        return False
    return True


def write_report(
    report: ExperimentReport,
    out_dir: PathLike,
    cfg: Optional[ExperimentConfig] = None,
) -> Path:
    """
    Write a report into <out_dir>/<command>/.

    Args:
        report: Report returned by an experiment
        out_dir: Root output directory
        cfg: Configuration echoed to config.txt when given

    Returns:
        Path: The command's output directory
    """
    target = Path(out_dir) / report.command
    target.mkdir(parents=True, exist_ok=True)
    for name, rows in report.tables.items():
        write_table(target / f"{name}.csv", rows)
    if report.orbit_tables:
        orbit_dir = target / ORBIT_DIR
        orbit_dir.mkdir(exist_ok=True)
        for stem, rows in report.orbit_tables.items():
            write_table(orbit_dir / f"{stem}.csv", rows)
    params = cfg.phys_params() if cfg is not None else None
    for stem, (t, u) in report.fields.items():
        same_dim = params is not None and params.dim == u.grid.dim
        write_field_csv(target / f"{stem}.csv", u, t, params if same_dim else None)
    if cfg is not None:
        (target / CONFIG_FILE).write_text(dump_config(cfg))
    for stem, spec in report.plots.items():
        write_plot(target / f"{stem}.png", spec, report)
    summary = {"command": report.command, "status": "pass" if report.passed else "fail"}
    summary.update(report.summary)
    write_summary(target / SUMMARY_FILE, summary)
    logger.info(f"[reporting] {report.command} written to {target}")
    return target
