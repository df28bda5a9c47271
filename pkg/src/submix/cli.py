"""Command line front end.

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 aperiodicity
undetermined under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .arith import TileLengths, TileProvenance
from .core import (
    Periodicity,
    Substitution,
    SubstitutionError,
    check_aperiodic,
    normalize,
    parse_substitution,
    substitution_from_rules,
)
from .language import connector_lengths, excess_profile
from .quadratic import QuadraticNumber
from .spectral import NotPrimitiveError, perron_tile_lengths

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2, 3
FORMATS = ("json", "csv", "svg")


class InputError(ValueError):
    pass


_NUMBER = r"\d+(?:\.\d+)?(?:/\d+)?"
_LENGTH_RE = re.compile(
    rf"^(?P<p>[+-]?{_NUMBER})?"
    rf"(?:(?P<qs>[+-])?(?:(?P<q>{_NUMBER})\*)?sqrt\(?(?P<d>\d+)\)?)?$"
)


def parse_length(text: str) -> QuadraticNumber:
    """Parse ``a/b``, ``p+q*sqrt(d)``, ``sqrt2`` and similar into an exact number."""
    compact = text.replace(" ", "")
    m = _LENGTH_RE.match(compact)
    if not compact or m is None or (m["p"] is None and m["d"] is None):
        raise InputError(f"cannot parse length {text!r}")
    if m["p"] is not None and m["d"] is not None and m["qs"] is None:
        raise InputError(f"missing sign before sqrt in {text!r}")
    value = QuadraticNumber(Fraction(m["p"]) if m["p"] else 0)
    if m["d"] is not None:
        q = Fraction(m["q"]) if m["q"] else Fraction(1)
        if m["qs"] == "-":
            q = -q
        value = value + q * QuadraticNumber.sqrt(int(m["d"]))
    return value


def parse_tiles(text: str, s: Optional[Substitution] = None) -> TileLengths:
    """``t0,t1`` or ``pf`` (left Perron-Frobenius eigenvector of ``s``)."""
    if text.strip().lower() == "pf":
        if s is None:
            raise InputError("pf tile lengths need a substitution")
        try:
            t0, t1 = perron_tile_lengths(s.matrix)
        except NotPrimitiveError as exc:
            raise InputError(str(exc)) from exc
        return TileLengths(t0, t1, TileProvenance.PERRON_FROBENIUS)
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"tile lengths need two comma-separated values, got {text!r}")
    try:
        return TileLengths(parse_length(parts[0]), parse_length(parts[1]))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def read_config(path: Path) -> dict[str, str]:
    """Flat ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^([^=:]+?)\s*[=:]\s*(.*)$", line)
        if m is None:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = m.group(1).strip(), m.group(2).strip()
        if key in out:
            raise InputError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


@dataclass
class RunConfig:
    subst: Substitution
    tiles: Optional[TileLengths] = None
    N: int = 4096
    R: float = 1024.0
    output: Optional[Path] = None
    formats: tuple[str, ...] = ("json",)
    strict: bool = False
    fit: bool = False
    extra: dict = field(default_factory=dict)


_KNOWN_KEYS = {"subst", "tiles", "N", "R", "output", "formats", "strict", "fit",
               "J", "eps", "w1", "w2", "kmax", "depth"}


def _substitution_from(args, file_cfg: dict) -> Substitution:
    table = {k: v for k, v in file_cfg.items() if k not in _KNOWN_KEYS}
    sources = [src for src in (args.subst, file_cfg.get("subst"), table or None) if src]
    if len(sources) != 1:
        raise InputError("give exactly one substitution source (-s, 'subst' key, or a rule table)")
    if args.subst or "subst" in file_cfg:
        return parse_substitution(args.subst or file_cfg["subst"])
    for letter, image in table.items():
        if len(letter) != 1 or not image:
            raise InputError(f"bad rule-table entry {letter!r} = {image!r}")
    return substitution_from_rules(table)


def build_config(args) -> RunConfig:
    file_cfg = read_config(Path(args.file)) if args.file else {}
    s = _substitution_from(args, file_cfg)

    def pick(name, default=None):
        value = getattr(args, name, None)
        return value if value is not None else file_cfg.get(name, default)

    tiles_text = pick("tiles")
    cfg = RunConfig(subst=s)
    cfg.tiles = parse_tiles(tiles_text, s) if tiles_text else None
    try:
        cfg.N = int(pick("N", 4096))
        cfg.R = float(Fraction(str(pick("R", 1024))))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out = pick("output")
    cfg.output = Path(out) if out else None
    formats = pick("formats", "json")
    cfg.formats = tuple(f.strip() for f in str(formats).split(",") if f.strip())
    bad = set(cfg.formats) - set(FORMATS)
    if bad:
        raise InputError(f"unknown format(s) {sorted(bad)}")
    cfg.strict = bool(args.strict) or str(file_cfg.get("strict", "")).lower() in ("1", "true", "yes")
    cfg.fit = bool(getattr(args, "fit", False)) or str(file_cfg.get("fit", "")).lower() in ("1", "true", "yes")
    for key in ("J", "eps", "w1", "w2", "kmax", "depth"):
        value = pick(key)
        if value is not None:
            cfg.extra[key] = value
    return cfg


def write_outputs(outputs: dict[str, str], directory: Optional[Path]) -> None:
    """Write every file atomically (temp file + rename); print to stdout without ``-o``."""
    if directory is None:
        for name in sorted(outputs):
            sys.stdout.write(outputs[name])
            if not outputs[name].endswith("\n"):
                sys.stdout.write("\n")
        return
    directory.mkdir(parents=True, exist_ok=True)
    for name, content in outputs.items():
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(content)
            os.replace(tmp, directory / name)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _internal_word(s: Substitution, word: str) -> str:
    names = s.letters
    if any(c not in names for c in word):
        raise InputError(f"word {word!r} uses letters outside {names}")
    return word.translate(str.maketrans(dict(zip(names, "01"))))


def _check_strict(cfg: RunConfig) -> Optional[int]:
    if cfg.strict:
        verdict = check_aperiodic(normalize(cfg.subst), int(cfg.extra.get("depth", 64)))
        if verdict.kind is Periodicity.UNDETERMINED:
            print("aperiodicity undetermined", file=sys.stderr)
            return EXIT_UNDETERMINED
    return None


def cmd_analyze(cfg: RunConfig) -> int:
    from .figure import export_figure
    from .mixing import report

    if cfg.N < 16:
        raise InputError("analyze needs N >= 16")
    code = _check_strict(cfg)
    if code is not None:
        return code
    outputs: dict[str, str] = {}
    figures = {}
    if "svg" in cfg.formats:
        J = int(cfg.extra.get("J", 64))
        prof = excess_profile(normalize(cfg.subst), max(J, 1)).truncate(J) if J else None
        fig = export_figure(normalize(cfg.subst), J, prof)
        outputs.update({"figure.svg": fig.svg, "path.csv": fig.path_csv,
                        "envelopes.csv": fig.envelope_csv})
        figures = {"svg": "figure.svg", "path_csv": "path.csv", "envelope_csv": "envelopes.csv"}
    rep = report(cfg.subst, cfg.tiles, cfg.N, int(cfg.extra.get("depth", 64)), figures)
    if "csv" in cfg.formats:
        outputs["excess.csv"] = excess_profile(normalize(cfg.subst), cfg.N).to_csv()
    outputs["report.json"] = _dumps(rep)
    if cfg.output is None:
        outputs = {"report.json": outputs["report.json"]}
    write_outputs(outputs, cfg.output)
    return EXIT_OK


def cmd_excess(cfg: RunConfig) -> int:
    from .geometry import SpectralClassError, bound_check

    if cfg.N < 1:
        raise InputError("N must be >= 1")
    code = _check_strict(cfg)
    if code is not None:
        return code
    normal = normalize(cfg.subst)
    profile = excess_profile(normal, cfg.N)
    outputs = {"excess.csv": profile.to_csv()}
    if cfg.fit:
        try:
            outputs["fit.json"] = _dumps(bound_check(normal, profile).to_json())
        except SpectralClassError as exc:
            outputs["fit.json"] = _dumps({"error": str(exc)})
    write_outputs(outputs, cfg.output)
    return EXIT_OK


def cmd_figure(cfg: RunConfig) -> int:
    from .figure import export_figure

    normal = normalize(cfg.subst)
    J = int(cfg.extra.get("J", 64))
    N = int(cfg.extra.get("figure_N", J))
    profile = excess_profile(normal, N) if N > 0 else None
    fig = export_figure(normal, J, profile)
    outputs = {"figure.svg": fig.svg}
    if cfg.output is not None:
        outputs.update({"path.csv": fig.path_csv, "envelopes.csv": fig.envelope_csv})
    write_outputs(outputs, cfg.output)
    return EXIT_OK


def _require_tiles(cfg: RunConfig) -> TileLengths:
    if cfg.tiles is None:
        raise InputError("this command needs tile lengths (-t)")
    return cfg.tiles


def cmd_scan(cfg: RunConfig) -> int:
    from .mixing import psi_density_scan

    t = _require_tiles(cfg)
    w1 = _internal_word(cfg.subst, cfg.extra.get("w1", cfg.subst.letters[0]))
    w2 = _internal_word(cfg.subst, cfg.extra.get("w2", cfg.subst.letters[0]))
    scan = psi_density_scan(cfg.subst, t, w1, w2, cfg.R)
    write_outputs({"scan.json": _dumps(scan.to_json())}, cfg.output)
    return EXIT_OK


def cmd_meyer(cfg: RunConfig) -> int:
    from .mixing import meyer_diagnostic

    t = _require_tiles(cfg)
    rep = meyer_diagnostic(cfg.subst, t, cfg.R, float(cfg.extra.get("eps", 1e-3)))
    write_outputs({"meyer.json": _dumps(rep.to_json())}, cfg.output)
    return EXIT_OK


def cmd_connectors(cfg: RunConfig) -> int:
    from .mixing import to_normal_frame

    given = (cfg.extra.get("w1", cfg.subst.letters[0]), cfg.extra.get("w2", cfg.subst.letters[0]))
    words = tuple(_internal_word(cfg.subst, w) for w in given)
    kmax = int(cfg.extra.get("kmax", 200))
    normal, _, (w1, w2) = to_normal_frame(cfg.subst, None, words)
    found = connector_lengths(normal, w1, w2, kmax)
    missing = [g for g in range(kmax + 1) if g not in found]
    out = {"w1": given[0], "w2": given[1],
           "kmax": kmax, "lengths": sorted(found), "missing": missing,
           "complete_from": (missing[-1] + 1) if missing else 0}
    write_outputs({"connectors.json": _dumps(out)}, cfg.output)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "excess": cmd_excess,
    "figure": cmd_figure,
    "scan": cmd_scan,
    "meyer": cmd_meyer,
    "connectors": cmd_connectors,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-s", "--subst", help="rules, e.g. '0->011;1->0'")
    common.add_argument("-f", "--file", help="flat key = value config file")
    common.add_argument("-t", "--tiles", help="tile lengths 't0,t1' (a/b, p+q*sqrt(d)) or 'pf'")
    common.add_argument("-N", type=int, help="excess depth (default 4096)")
    common.add_argument("-R", help="scan radius (default 1024)")
    common.add_argument("-o", "--output", help="output directory (default: stdout)")
    common.add_argument("--formats", help="comma list of json,csv,svg")
    common.add_argument("--strict", action="store_true", default=None,
                        help="exit 3 when aperiodicity cannot be decided")
    common.add_argument("--depth", type=int, help="aperiodicity search depth (default 64)")
    helps = {
        "analyze": "full mixing report",
        "excess": "excess profile as CSV",
        "figure": "SVG of the prefix path inside the factor strip",
        "scan": "density scan of connector tiling lengths",
        "meyer": "difference-set diagnostic of tile endpoints",
        "connectors": "connector lengths between two words",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "excess":
            p.add_argument("--fit", action="store_true", default=None,
                           help="add power-law fit (|theta2| > 1 only)")
        if name in ("figure", "analyze"):
            p.add_argument("-J", type=int, help="path length for the figure (default 64)")
        if name in ("scan", "connectors"):
            p.add_argument("--w1")
            p.add_argument("--w2")
        if name == "connectors":
            p.add_argument("--kmax", type=int)
        if name == "meyer":
            p.add_argument("--eps", type=float)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "figure" and args.N is not None:
            cfg.extra["figure_N"] = args.N
        return COMMANDS[args.command](cfg)
    except (InputError, SubstitutionError, NotPrimitiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # periodic input and the like
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
