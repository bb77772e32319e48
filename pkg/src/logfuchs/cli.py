"""Command line front end.

Exit codes: 0 success, 1 parse or validation error, 2 mathematical
precondition failure, 3 internal assertion failure.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import LogFuchsError, ParseError
from .exactalg import parse_point, parse_rational
from . import io

EXIT_CODES = {"input": 1, "math": 2, "internal": 3}


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path):
    return io.parse_instance(_read(path))


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _emit(args, report, instance=None, record=None):
    """Write the instance and record files when asked; the report goes to stdout."""
    if instance is not None:
        if args.output:
            _write(args.output, io.dump_instance(instance))
        else:
            report["instance"] = io.instance_to_dict(instance)
    if record is not None and getattr(args, "record", None):
        _write(args.record, io.dumps(record))
    sys.stdout.write(io.dumps(report))


def cmd_inspect(args):
    conn = _load(args.file)
    _emit(args, io.summary_to_dict(conn))


def cmd_transform(args):
    from .logconn import residue
    from .moves import elementary_transformation

    conn = _load(args.file)
    p = parse_point(args.point)
    lam = parse_rational(args.eigenvalue)
    data = residue(conn, p).spectral_data
    basis = data.eigenvectors(lam)
    if not basis:
        from .errors import NotInSpectrum

        raise NotInSpectrum(f"{lam} is not an eigenvalue of the residue at {args.point}")
    if not 0 <= args.which < len(basis):
        from .errors import ValidationError

        raise ValidationError(f"--which must be in [0, {len(basis) - 1}]", cause="which")
    new, rec = elementary_transformation(conn, p, basis[args.which])
    report = {"command": "transform", "point": args.point, "eigenvalue": lam,
              "eigenvector": basis[args.which], "summary": io.summary_to_dict(new)}
    _emit(args, report, new, io.record_to_dict(rec))


def cmd_gabber(args):
    from .gabber import required_gap, run_gabber

    conn = _load(args.file)
    p = parse_point(args.point)
    M = args.gap if args.gap is not None else required_gap(conn.rank, conn.genus, conn.sigma)
    new, log = run_gabber(conn, p, M)
    report = {"command": "gabber", "log": io.step_log_to_dict(log), "summary": io.summary_to_dict(new)}
    _emit(args, report, new, io.record_to_dict(log.gauge))


def cmd_semistabilize(args):
    from .semistab import normalize_twist, semistabilize

    conn = _load(args.file)
    p = parse_point(args.point)
    normal, ell = normalize_twist(conn, p)
    new, log = semistabilize(normal, p)
    report = {"command": "semistabilize", "twist": ell, "log": io.step_log_to_dict(log),
              "summary": io.summary_to_dict(new)}
    _emit(args, report, new, io.record_to_dict(log.gauge))


def cmd_pipeline(args):
    from .errors import SpacingViolation
    from .semistab import pipeline

    conn = _load(args.file)
    p = parse_point(args.point)
    try:
        report = pipeline(conn, p)
    except SpacingViolation as exc:
        if exc.report is not None:
            sys.stdout.write(io.dumps(io.pipeline_report_to_dict(exc.report)))
        raise
    record = io.gauge_to_dict(p, report.gauge)
    _emit(args, io.pipeline_report_to_dict(report), report.output, record)


def cmd_screen(args):
    from .verify import irreducibility_screen

    conn = _load(args.file)
    _emit(args, io.screen_report_to_dict(irreducibility_screen(conn)))


def cmd_verify_equiv(args):
    from .moves import verify_gauge_equivalence

    a = _load(args.file_a)
    b = _load(args.file_b)
    _, h, inv = io.parse_gauge(_read(args.gauge_file))
    p = parse_point(args.point)
    result = verify_gauge_equivalence(a, b, h, p, inv)
    _emit(args, {"command": "verify-equiv", "equivalent": result.ok, "reason": result.reason})
    return 0 if result.ok else 2


def cmd_lift_ext(args):
    from .extension import lift_connection, lift_space_dimension, obstruction_class

    ext = io.parse_extension(_read(args.file))
    cls = obstruction_class(ext)
    report = {"command": "lift-ext", "obstruction": {"exponents": cls.exponents,
                                                     "coefficients": cls.coefficients},
              "liftable": cls.is_zero, "lift_space_dimension": lift_space_dimension(ext)}
    if not cls.is_zero:
        sys.stdout.write(io.dumps(report))
        lift_connection(ext)
    _emit(args, report, lift_connection(ext))


def cmd_construct(args):
    from .construct import irreducible_fuchsian

    points = [p.strip() for p in args.points.split(",")]
    if len(points) != 3:
        raise ParseError("--points needs exactly three comma-separated points", expected="q1,q2,p")
    q1, q2, p = (parse_point(x) for x in points)
    scale = parse_rational(args.scale) if args.scale is not None else None
    conn = irreducible_fuchsian(args.rank, q1, q2, p, scale)
    report = {"command": "construct", "summary": io.summary_to_dict(conn)}
    _emit(args, report, conn)


def _with_output(parser, record=True):
    parser.add_argument("-o", "--output", help="write the resulting instance here")
    if record:
        parser.add_argument("--record", help="write the gauge record here")


def build_parser():
    parser = argparse.ArgumentParser(prog="logfuchs",
                                     description="Exact transformations of logarithmic connections on P^1.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="degree, splitting type and residue spectra")
    p.add_argument("file")
    p.set_defaults(func=cmd_inspect, output=None)

    p = sub.add_parser("transform", help="one elementary transformation")
    p.add_argument("file")
    p.add_argument("--point", required=True)
    p.add_argument("--eigenvalue", required=True)
    p.add_argument("--which", type=int, default=0, help="index into the eigenspace basis")
    _with_output(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("gabber", help="spread the residue spectrum at a point")
    p.add_argument("file")
    p.add_argument("--point", required=True)
    p.add_argument("--gap", type=int, default=None)
    _with_output(p)
    p.set_defaults(func=cmd_gabber)

    p = sub.add_parser("semistabilize", help="normalize and raise the degree to 0")
    p.add_argument("file")
    p.add_argument("--point", required=True)
    _with_output(p)
    p.set_defaults(func=cmd_semistabilize)

    p = sub.add_parser("pipeline", help="full reduction to a Fuchsian system")
    p.add_argument("file")
    p.add_argument("--point", required=True)
    _with_output(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("screen", help="necessary-condition irreducibility screen")
    p.add_argument("file")
    p.set_defaults(func=cmd_screen, output=None)

    p = sub.add_parser("verify-equiv", help="check a gauge equivalence away from a point")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("gauge_file")
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_verify_equiv, output=None)

    p = sub.add_parser("lift-ext", help="obstruction class and lift of an extension")
    p.add_argument("file")
    _with_output(p, record=False)
    p.set_defaults(func=cmd_lift_ext)

    p = sub.add_parser("construct", help="irreducible Fuchsian fixture")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--points", required=True, help="q1,q2,p")
    p.add_argument("--scale", default=None)
    _with_output(p, record=False)
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except LogFuchsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 2)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
