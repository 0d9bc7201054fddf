"""CSV and JSON formats for datasets, models, trajectories, and reports.

All floats are written with ``repr``, the shortest string that parses back
to the identical double, so every artifact round-trips exactly and
fixed-seed runs are byte-identical. CSV files are UTF-8, comma-separated,
'.' decimal, with a single header row.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .geometry import NodeSet
from .approximator import Approximant, Dataset, FitReport
from .dynamics import SurrogateModel, Trajectory

MODEL_FORMAT = "maxentfit-model-v1"


def _fmt(v: float) -> str:
    return repr(float(v))


def _parse_float(token: str, path, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"{path}: line {line}: not a number: {token!r}") from None


def _point_columns(d: int) -> list[str]:
    return [f"x{i + 1}" for i in range(d)]


def read_dataset_csv(path) -> Dataset:
    """Read a dataset: columns ``x1..xd`` plus ``f`` or ``dx1..dxd``.

    Raises ConfigError on malformed headers, ragged rows, or non-numeric
    cells, naming the offending line.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        d = 0
        while d < len(header) and header[d] == f"x{d + 1}":
            d += 1
        if d == 0:
            raise ConfigError(f"{path}: header must start with x1, got {header[:1]}")
        rest = header[d:]
        if rest == ["f"]:
            value_cols = 1
        elif rest == [f"dx{i + 1}" for i in range(d)]:
            value_cols = d
        else:
            raise ConfigError(
                f"{path}: value columns must be ['f'] or ['dx1'..'dx{d}'], got {rest}"
            )
        points, values = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + value_cols:
                raise ConfigError(
                    f"{path}: line {line_no}: expected {d + value_cols} cells, got {len(row)}"
                )
            nums = [_parse_float(tok, path, line_no) for tok in row]
            points.append(nums[:d])
            values.append(nums[d:])
    if not points:
        raise ConfigError(f"{path}: no data rows")
    pts = np.asarray(points)
    vals = np.asarray(values)
    # Scalar datasets ('f') carry 1-D values; field datasets ('dx*') stay
    # 2-D even for d = 1 so callers can tell the two apart.
    if rest == ["f"]:
        vals = vals[:, 0]
    return Dataset(pts, vals)


def write_dataset_csv(path, dataset: Dataset) -> None:
    path = Path(path)
    d = dataset.d
    # 1-D values are a scalar target; 2-D values are field components,
    # mirroring read_dataset_csv.
    header = _point_columns(d) + (
        ["f"] if dataset.values.ndim == 1 else [f"dx{i + 1}" for i in range(dataset.n_components)]
    )
    values = dataset.values if dataset.values.ndim == 2 else dataset.values[:, None]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for p, v in zip(dataset.points, values):
            writer.writerow([_fmt(x) for x in p] + [_fmt(x) for x in v])


def read_points_csv(path) -> np.ndarray:
    """Read query points: columns ``x1..xd`` (extra value columns are ignored)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        d = 0
        while d < len(header) and header[d] == f"x{d + 1}":
            d += 1
        if d == 0:
            raise ConfigError(f"{path}: header must start with x1, got {header[:1]}")
        points = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < d:
                raise ConfigError(f"{path}: line {line_no}: expected at least {d} cells")
            points.append([_parse_float(tok, path, line_no) for tok in row[:d]])
    if not points:
        raise ConfigError(f"{path}: no data rows")
    return np.asarray(points)


def write_predictions_csv(path, points: np.ndarray, columns: dict) -> None:
    """Write points plus named prediction columns."""
    path = Path(path)
    d = points.shape[1]
    names = list(columns)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_point_columns(d) + names)
        for i, p in enumerate(points):
            writer.writerow(
                [_fmt(x) for x in p] + [_fmt(columns[name][i]) for name in names]
            )


def write_trajectory_csv(path, traj: Trajectory) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t"] + _point_columns(traj.d))
        for t, s in zip(traj.times, traj.states):
            writer.writerow([_fmt(t)] + [_fmt(x) for x in s])


def write_series_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    path = Path(path)
    n = min(len(c) for c in columns)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(n):
            writer.writerow([_fmt(c[i]) for c in columns])


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------

def _nodes_to_dict(nodes: NodeSet) -> dict:
    return {
        "nodes": nodes.nodes.tolist(),
        "box": None if nodes.box is None else nodes.box.tolist(),
    }


def _nodes_from_dict(payload: dict) -> NodeSet:
    return NodeSet(np.asarray(payload["nodes"]), box=payload.get("box"))


def _report_to_dict(report: FitReport) -> dict:
    return {
        "training_rms": report.training_rms,
        "objective": report.objective,
        "solver_iterations": report.solver_iterations,
    }


def _report_from_dict(payload: dict) -> FitReport:
    return FitReport(
        training_rms=payload["training_rms"],
        objective=payload["objective"],
        solver_iterations=payload["solver_iterations"],
    )


def save_model(path, model) -> None:
    """Write an Approximant or SurrogateModel as a JSON model file."""
    if isinstance(model, Approximant):
        payload = {
            "format": MODEL_FORMAT,
            "kind": "scalar",
            "beta": model.beta,
            "alpha": model.alpha,
            **_nodes_to_dict(model.nodes),
            "coefficients": model.coefficients.tolist(),
            "fit_report": _report_to_dict(model.fit_report),
        }
    elif isinstance(model, SurrogateModel):
        payload = {
            "format": MODEL_FORMAT,
            "kind": "field",
            "beta": model.beta,
            "alpha": model.alpha,
            **_nodes_to_dict(model.nodes),
            "coefficients": model.coeff_matrix.tolist(),
            "fit_reports": [_report_to_dict(r) for r in model.fit_reports],
        }
    else:
        raise ConfigError(f"cannot save object of type {type(model).__name__}")
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path):
    """Read a model file back into an Approximant or SurrogateModel."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON: {err}") from None
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ConfigError(f"{path}: not a {MODEL_FORMAT} file")
    nodes = _nodes_from_dict(payload)
    kind = payload.get("kind")
    if kind == "scalar":
        return Approximant(
            nodes=nodes,
            beta=payload["beta"],
            alpha=payload["alpha"],
            coefficients=np.asarray(payload["coefficients"]),
            fit_report=_report_from_dict(payload["fit_report"]),
        )
    if kind == "field":
        return SurrogateModel(
            nodes=nodes,
            beta=payload["beta"],
            alpha=payload["alpha"],
            coeff_matrix=np.asarray(payload["coefficients"]),
            fit_reports=tuple(_report_from_dict(r) for r in payload["fit_reports"]),
        )
    raise ConfigError(f"{path}: unknown model kind {kind!r}")


# ---------------------------------------------------------------------------
# Experiment artifacts
# ---------------------------------------------------------------------------

def write_report_json(path, report) -> None:
    Path(path).write_text(
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_experiment_artifacts(out_dir, report, artifacts: dict) -> None:
    """Write the artifact bundle of one experiment run into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report_json(out / "report.json", report)
    write_dataset_csv(out / "train.csv", artifacts["train"])
    if "test" in artifacts:
        test = artifacts["test"]
        columns = {"f_true": test.component(0), "f_pred": artifacts["test_pred"]}
        if "test_pred_baseline" in artifacts:
            columns["f_baseline"] = artifacts["test_pred_baseline"]
        write_predictions_csv(out / "test_predictions.csv", test.points, columns)
    if "truth_traj" in artifacts:
        write_trajectory_csv(out / "trajectory_true.csv", artifacts["truth_traj"])
        write_trajectory_csv(out / "trajectory_model.csv", artifacts["model_traj"])
        if "baseline_traj" in artifacts:
            write_trajectory_csv(out / "trajectory_baseline.csv", artifacts["baseline_traj"])
    if "h_err_model" in artifacts:
        model_traj = artifacts["model_traj"]
        header = ["t", "h_err_model", "h_err_true"]
        columns = [model_traj.times, artifacts["h_err_model"], artifacts["h_err_truth"]]
        if "h_err_baseline" in artifacts:
            header.append("h_err_baseline")
            columns.append(artifacts["h_err_baseline"])
        write_series_csv(out / "angular_momentum.csv", header, columns)
