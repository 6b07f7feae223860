"""CSV record formats for datasets and generated samples.

Dataset files::

    # optional comment lines
    time,cause
    40,2
    42,2

Sample files add a metadata comment and the executed removal per row::

    # n=30,m=10,t1=0.5,t2=1.0,case=I,k1=10,k2=10,r_star=0,t_star=0.2136...
    # removals=0,0,0,0,0,0,0,0,0,20
    time,cause,removal
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .censoring import Case, CaseTag, CensoringPlan, IatSample
from .errors import ValidationError


def render_number(x) -> str:
    """Shortest round-tripping text; integral floats lose the trailing ``.0``."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


@dataclass
class Dataset:
    times: np.ndarray
    causes: np.ndarray
    comments: list[str] = field(default_factory=list)


def _data_lines(text: str):
    comments, body = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
        else:
            body.append((lineno, line))
    return comments, body


def _parse_rows(body, expected_header):
    if not body:
        raise ValidationError("file has no header row")
    lineno, header = body[0]
    columns = [c.strip() for c in header.split(",")]
    if columns[: len(expected_header)] != list(expected_header):
        raise ValidationError(f"line {lineno}: expected header {','.join(expected_header)}, got {header!r}")
    rows = []
    for lineno, line in body[1:]:
        fields = next(csv.reader([line]))
        if len(fields) != len(columns):
            raise ValidationError(f"line {lineno}: expected {len(columns)} fields, got {len(fields)}")
        try:
            time = float(fields[0])
            cause = int(fields[1])
            extra = [int(f) for f in fields[2:]]
        except ValueError:
            raise ValidationError(f"line {lineno}: cannot parse {line!r}") from None
        if not np.isfinite(time) or time <= 0:
            raise ValidationError(f"line {lineno}: time must be positive, got {fields[0]!r}")
        if cause not in (1, 2):
            raise ValidationError(f"line {lineno}: cause must be 1 or 2, got {fields[1]!r}")
        rows.append((time, cause, *extra))
    return columns, rows


def parse_dataset(text: str) -> Dataset:
    """Read a ``time,cause`` file; rows are sorted by time (stable)."""
    comments, body = _data_lines(text)
    _, rows = _parse_rows(body, ("time", "cause"))
    rows.sort(key=lambda r: r[0])
    times = np.array([r[0] for r in rows], dtype=float)
    causes = np.array([r[1] for r in rows], dtype=int)
    return Dataset(times, causes, comments)


def format_dataset(data: Dataset) -> str:
    out = [f"# {c}" for c in data.comments]
    out.append("time,cause")
    out += [f"{render_number(t)},{int(c)}" for t, c in zip(data.times, data.causes)]
    return "\n".join(out) + "\n"


def format_sample(sample: IatSample) -> str:
    p = sample.plan
    meta = (
        f"# n={p.n},m={p.m},t1={render_number(p.t1)},t2={render_number(p.t2)},"
        f"case={sample.case.tag.value},k1={sample.case.k1},k2={sample.case.k2},"
        f"r_star={sample.r_star},t_star={render_number(sample.t_star)}"
    )
    out = [meta, "# removals=" + ",".join(str(r) for r in p.removals), "time,cause,removal"]
    for t, c, r in zip(sample.times, sample.causes, sample.effective_removals):
        out.append(f"{render_number(t)},{int(c)},{int(r)}")
    return "\n".join(out) + "\n"


def parse_sample(text: str) -> IatSample:
    comments, body = _data_lines(text)
    meta = {}
    for c in comments:
        if c.startswith("removals="):
            meta["removals"] = c.split("=", 1)[1]
            continue
        for item in c.split(","):
            if "=" in item:
                k, v = item.split("=", 1)
                meta[k.strip()] = v.strip()
    required = ("n", "m", "t1", "t2", "case", "k1", "k2", "r_star", "t_star", "removals")
    missing = [k for k in required if k not in meta]
    if missing:
        raise ValidationError(f"sample metadata missing: {', '.join(missing)}")
    _, rows = _parse_rows(body, ("time", "cause", "removal"))
    try:
        plan = CensoringPlan(
            int(meta["n"]), int(meta["m"]),
            tuple(int(r) for r in meta["removals"].split(",") if r),
            float(meta["t1"]), float(meta["t2"]),
        )
        case = Case(CaseTag(meta["case"]), int(meta["k1"]), int(meta["k2"]))
    except ValueError as exc:
        raise ValidationError(f"bad sample metadata: {exc}") from None
    sample = IatSample(
        plan=plan,
        times=[r[0] for r in rows],
        delta=[1 if r[1] == 1 else 0 for r in rows],
        effective_removals=[r[2] for r in rows],
        case=case,
        r_star=int(meta["r_star"]),
        t_star=float(meta["t_star"]),
    )
    sample.check()
    return sample
