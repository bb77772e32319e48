"""JSON file formats for instances, gauges, extension data and reports.

All numbers are exact rational strings, points are rational strings or
"inf", and output is written with sorted keys so that equal objects give
byte-identical files.
"""

import json
from fractions import Fraction

from .errors import GenusNotSupported, NotLogarithmic, ParseError, ValidationError
from .exactalg import (
    INF,
    RatMatrix,
    RationalFunction,
    char_poly,
    format_point,
    format_rational_function,
    parse_point,
    parse_rational_function,
)
from .logconn import LogConnection, ensure_logarithmic

FORMAT_VERSION = 1


def to_jsonable(x):
    """Exact, deterministic plain-data view of library values."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if x is INF:
        return "inf"
    if isinstance(x, RationalFunction):
        return format_rational_function(x)
    if isinstance(x, RatMatrix):
        return [[format_rational_function(v) for v in row] for row in x.entries]
    if isinstance(x, dict):
        return {_key(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return str(x)


def _key(k):
    if k is INF or isinstance(k, Fraction):
        return format_point(k)
    return str(k)


def dumps(data):
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + "\n"


def _load_json(text, kind):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {kind}: {exc.msg}", position=exc.pos) from exc
    if not isinstance(data, dict):
        raise ParseError(f"{kind} must be a JSON object", position=0, expected="object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format_version {version!r}", cause="format_version")
    return data


def _field(data, name, kind):
    if name not in data:
        raise ValidationError(f"{kind} is missing field {name!r}", cause=name)
    return data[name]


def _ratfunc(text, where):
    if not isinstance(text, str):
        raise ValidationError(f"{where} must be a string", cause=where)
    try:
        return parse_rational_function(text)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.detail}", position=exc.position, expected=exc.expected) from exc


def _point(text, where):
    if not isinstance(text, str):
        raise ValidationError(f"{where} must be a string", cause=where)
    return parse_point(text)


def _matrix(rows, n, where, cols=None):
    cols = n if cols is None else cols
    if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != cols for r in rows):
        raise ValidationError(f"{where} must be a {n}x{cols} matrix", cause=where)
    return RatMatrix([[_ratfunc(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)]
                      for i, r in enumerate(rows)])


# instances

def instance_to_dict(conn):
    return {
        "format_version": FORMAT_VERSION,
        "rank": conn.rank,
        "genus": conn.genus,
        "marked": [format_point(q) for q in conn.marked],
        "A": to_jsonable(conn.A),
        "frames": {format_point(q): to_jsonable(g) for q, g in conn.frames.items()},
    }


def dump_instance(conn):
    return dumps(instance_to_dict(conn))


def instance_from_dict(data):
    rank = _field(data, "rank", "instance")
    if not isinstance(rank, int) or rank < 1:
        raise ValidationError("rank must be a positive integer", cause="rank")
    genus = data.get("genus", 0)
    if genus != 0:
        raise GenusNotSupported(f"genus {genus} is not supported")
    marked_raw = _field(data, "marked", "instance")
    if not isinstance(marked_raw, list):
        raise ValidationError("marked must be a list", cause="marked")
    marked = [_point(q, "marked") for q in marked_raw]
    if len(set(marked)) != len(marked):
        raise ValidationError("marked points repeat", cause="marked")
    A = _matrix(_field(data, "A", "instance"), rank, "A")
    frames = {}
    frames_raw = data.get("frames", {})
    if not isinstance(frames_raw, dict):
        raise ValidationError("frames must be an object", cause="frames")
    for key, rows in frames_raw.items():
        q = _point(key, "frames")
        frames[q] = _matrix(rows, rank, f"frames[{key}]")
    conn = LogConnection(rank=rank, marked=tuple(marked), A=A, frames=frames)
    try:
        ensure_logarithmic(conn)
    except NotLogarithmic as exc:
        raise ValidationError(f"NotLogarithmic at {format_point(exc.point)}: {exc}", point=exc.point,
                              cause="NotLogarithmic") from exc
    return conn


def parse_instance(text):
    """Validated LogConnection from instance text."""
    return instance_from_dict(_load_json(text, "instance"))


# gauges

def gauge_to_dict(point, gauge, inverse=None, steps=()):
    out = {
        "format_version": FORMAT_VERSION,
        "kind": "gauge",
        "point": format_point(point),
        "gauge": to_jsonable(gauge),
        "steps": [{"eigenvalue": str(s.eigenvalue), "eigenvector": to_jsonable(s.eigenvector)}
                  for s in steps],
    }
    if inverse is not None:
        out["inverse"] = to_jsonable(inverse)
    return out


def record_to_dict(record):
    return gauge_to_dict(record.point, record.cumulative_gauge, record.cumulative_inverse, record.steps)


def parse_gauge(text):
    """(point or None, gauge, inverse or None)."""
    data = _load_json(text, "gauge file")
    rows = _field(data, "gauge", "gauge file")
    if not isinstance(rows, list) or not rows:
        raise ValidationError("gauge must be a square matrix", cause="gauge")
    n = len(rows)
    h = _matrix(rows, n, "gauge")
    inv = _matrix(data["inverse"], n, "inverse") if "inverse" in data else None
    point = _point(data["point"], "point") if "point" in data else None
    return point, h, inv


# extension data

def extension_to_dict(ext):
    return {
        "format_version": FORMAT_VERSION,
        "kind": "extension",
        "a": ext.a,
        "b": ext.b,
        "u": to_jsonable(ext.u),
        "alpha_S": to_jsonable(ext.alpha_S),
        "alpha_Q": to_jsonable(ext.alpha_Q),
        "marked": [format_point(q) for q in ext.marked],
    }


def parse_extension(text):
    from .extension import ExtensionDatum

    data = _load_json(text, "extension file")
    a, b = _field(data, "a", "extension"), _field(data, "b", "extension")
    if not isinstance(a, int) or not isinstance(b, int):
        raise ValidationError("degrees a and b must be integers", cause="degree")
    marked = [_point(q, "marked") for q in _field(data, "marked", "extension")]
    return ExtensionDatum(
        a, b,
        _ratfunc(data.get("u", "0"), "u"),
        _ratfunc(_field(data, "alpha_S", "extension"), "alpha_S"),
        _ratfunc(_field(data, "alpha_Q", "extension"), "alpha_Q"),
        tuple(marked),
    )


# reports

def step_log_to_dict(log):
    return {
        "point": format_point(log.point),
        "steps": [{
            "step": e.step,
            "eigenvalue": e.eigenvalue,
            "eigenvector": e.eigenvector,
            "spectrum_after": e.spectrum_after,
            "degree_after": e.degree_after,
            "fuchs_degree_after": e.fuchs_degree_after,
        } for e in log.entries],
        "summary": log.summary,
    }


def summary_to_dict(conn):
    from .errors import NonRationalSpectrum
    from .logconn import degree, fuchs_degree, hn_slopes, residue, splitting_type

    spectra = {}
    for q in conn.marked:
        res = residue(conn, q)
        try:
            spectra[format_point(q)] = res.spectrum
        except NonRationalSpectrum:
            spectra[format_point(q)] = {"char_poly": char_poly(res.gamma).coefficients}
    st = splitting_type(conn)
    fd = fuchs_degree(conn)
    return {
        "rank": conn.rank,
        "genus": conn.genus,
        "marked": [format_point(q) for q in conn.marked],
        "degree": degree(conn),
        "fuchs_degree": int(fd) if fd.denominator == 1 else fd,
        "splitting_type": str(st),
        "hn_slopes": [[s, r] for s, r in hn_slopes(st)],
        "spectra": spectra,
    }


def pipeline_report_to_dict(report):
    return {
        "point": format_point(report.point),
        "outcome": report.outcome,
        "input": report.input_summary,
        "gabber": step_log_to_dict(report.gabber) if report.gabber else None,
        "twist": report.twist,
        "semistab": step_log_to_dict(report.semistab) if report.semistab else None,
        "spacing_trace": report.spacing_trace,
        "final_splitting": str(report.final_splitting) if report.final_splitting else None,
        "residues": report.residues,
        "gauge": report.gauge,
        "total_steps": report.total_steps,
        "checks": report.checks,
    }


def screen_report_to_dict(report):
    return {
        "verdict": report.verdict,
        "points": [format_point(q) for q in report.points],
        "spectra": report.spectra,
        "flagged": {str(r): sel for r, sel in report.flagged.items()},
    }
