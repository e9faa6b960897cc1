"""Command line entry point: ``hypertorus verify <file>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import parse
from .errors import InputError
from .pipeline import BUNDLED, EXIT_INPUT, emit, load_bundled, run


def _read(path: str) -> str:
    p = Path(path)
    if p.exists():
        return p.read_text()
    if p.name in BUNDLED or p.name + ".action" in BUNDLED:
        return load_bundled(p.name)
    raise FileNotFoundError(f"no such file: {path}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="hypertorus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="verify a torus action file")
    v.add_argument("file", help=f"path to an .action file, or a bundled name ({', '.join(BUNDLED)})")
    v.add_argument("--format", choices=("text", "machine"), default="text")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-order", type=int, default=1024)
    v.add_argument("--trials", type=int, default=100)
    args = parser.parse_args(argv)

    try:
        cfg = parse(_read(args.file))
    except (InputError, OSError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run(cfg, seed=args.seed, max_order=args.max_order, trials=args.trials)
    text, code = emit(report, args.format)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
