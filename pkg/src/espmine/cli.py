"""Command line front end for streaming grammar compression.

Commands: compress (bytes -> succinct grammar file), decompress (the
inverse), discover (stream repeated-variable reports as they fire),
evaluate (judge reported cores against the exact frequent-pattern oracle),
and stats (size/ratio/timing summary).

Conventions: "-" is stdin or stdout, data goes to the output stream and
diagnostics to stderr so pipelines stay clean, and file outputs are written
to a temp file and renamed so a crash never leaves a half-written result.
Exit codes: 0 success, 2 I/O or format error, 3 bad parameter value.
"""

from __future__ import annotations

import argparse
import os
import resource
import sys
import tempfile
import time
from typing import Iterable, Optional

from .grammar import PoslpFormatError, deserialize, from_poslp, serialize, to_poslp
from .patterns import (
    ORACLE_BOUND,
    ParseTreeIndex,
    best_core,
    exact_frequent,
    report_table,
    top_k_non_inclusive,
)
from .streaming import Compressor

CHUNK = 1 << 20


class UsageError(ValueError):
    """A flag value that violates a documented precondition."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _peak_rss_mb() -> float:
    # ru_maxrss is KiB on Linux; close enough to treat as such everywhere we run
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


class _Progress:
    """Throttled byte counter on stderr; inert unless enabled."""

    def __init__(self, enabled: bool, every: int = 16 << 20):
        self.enabled = enabled
        self.every = every
        self._last = 0

    def update(self, total: int) -> None:
        if self.enabled and total - self._last >= self.every:
            self._last = total
            sys.stderr.write(f"\r{total >> 20} MiB")
            sys.stderr.flush()

    def done(self, total: int) -> None:
        if self.enabled:
            sys.stderr.write(f"\r{total} bytes in\n")
            sys.stderr.flush()


def _open_input(path: str):
    if path == "-":
        return sys.stdin.buffer, False
    return open(path, "rb"), True


def _default_output(input_path: str, suffix: str) -> str:
    if input_path == "-":
        return "-"
    return input_path + suffix


def _atomic_write(path: str, chunks: Iterable[bytes]) -> None:
    """Write chunks to path via temp file + rename; "-" streams to stdout."""
    if path == "-":
        for c in chunks:
            sys.stdout.buffer.write(c)
        sys.stdout.buffer.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".espmine-")
    try:
        with os.fdopen(fd, "wb") as f:
            for c in chunks:
                f.write(c)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _pump(comp: Compressor, stream, progress: _Progress) -> int:
    """Feed the compressor in bounded chunks; never buffers the input."""
    total = 0
    while True:
        chunk = stream.read(CHUNK)
        if not chunk:
            break
        comp.push_bytes(chunk)
        total += len(chunk)
        progress.update(total)
    progress.done(total)
    return total


def _compress_stream(args, on_core=None):
    _require(0.0 < args.alpha < 1.0, "--alpha must be strictly between 0 and 1")
    stream, owned = _open_input(args.input)
    comp = Compressor(alpha=args.alpha, on_core=on_core)
    t0 = time.perf_counter()
    try:
        total = _pump(comp, stream, _Progress(args.progress))
    finally:
        if owned:
            stream.close()
    root = comp.finalize()
    return comp, root, total, time.perf_counter() - t0


def cmd_compress(args) -> int:
    comp, root, total, elapsed = _compress_stream(args)
    p = to_poslp(comp.store(), root)
    _atomic_write(args.output or _default_output(args.input, ".poslp"), [serialize(p)])
    sys.stderr.write(
        f"rules {p.n}, B {p.bits.size} bits, L {p.labels.size} labels, "
        f"input {total} bytes, {elapsed:.2f} s, peak {_peak_rss_mb():.1f} MB\n"
    )
    return 0


def cmd_decompress(args) -> int:
    stream, owned = _open_input(args.input)
    try:
        blob = stream.read()
    finally:
        if owned:
            stream.close()
    store, root = from_poslp(deserialize(blob))
    out = args.output or _default_output(args.input, ".out")
    _atomic_write(out, store.iter_chunks(root) if root is not None else [])
    return 0


def cmd_discover(args) -> int:
    _require(args.min_len >= 1, "--min-len must be >= 1")
    out = sys.stdout
    out.write("variable_id\tval_length\tdetection_offset\n")
    out.flush()

    def on_core(ev):
        if ev.length >= args.min_len:
            out.write(f"{ev.symbol}\t{ev.length}\t{ev.offset}\n")
            out.flush()

    comp, root, total, elapsed = _compress_stream(args, on_core=on_core)
    if args.output:
        _atomic_write(args.output, [serialize(to_poslp(comp.store(), root))])
    sys.stderr.write(
        f"rules {comp.n_rules}, input {total} bytes, {elapsed:.2f} s, "
        f"peak {_peak_rss_mb():.1f} MB\n"
    )
    return 0


def _read_prefix(path: str, limit: Optional[int]) -> bytes:
    stream, owned = _open_input(path)
    try:
        if limit is not None:
            return stream.read(limit)
        data = stream.read(ORACLE_BOUND + 1)
        _require(
            len(data) <= ORACLE_BOUND,
            f"input exceeds the {ORACLE_BOUND}-byte oracle bound; "
            "pass --prefix-bytes to evaluate a prefix",
        )
        return data
    finally:
        if owned:
            stream.close()


def cmd_evaluate(args) -> int:
    _require(0.0 < args.alpha < 1.0, "--alpha must be strictly between 0 and 1")
    _require(args.min_len >= 1, "--min-len must be >= 1")
    _require(args.top >= 1, "--top must be >= 1")
    _require(
        args.oracle in ("suffixarray", "bruteforce"),
        f"unknown oracle {args.oracle!r}: choose suffixarray or bruteforce",
    )
    _require(
        args.prefix_bytes is None or args.prefix_bytes >= 1,
        "--prefix-bytes must be >= 1",
    )
    data = _read_prefix(args.input, args.prefix_bytes)
    t0 = time.perf_counter()
    comp = Compressor(alpha=args.alpha)
    comp.push_bytes(data)
    root = comp.finalize()
    patterns = exact_frequent(data, min_len=args.min_len, method=args.oracle)
    top = top_k_non_inclusive(patterns, args.top) if patterns else []
    if top and root is not None:
        index = ParseTreeIndex(comp.store(), root)
        events = comp.events()
        reports = [best_core(index, events, p) for p in top]
    else:
        reports = []
    table = report_table(reports)
    _atomic_write(args.output, [table.encode()]) if args.output else sys.stdout.write(table)
    sys.stderr.write(
        f"{len(patterns)} frequent patterns, {len(reports)} reported, "
        f"{time.perf_counter() - t0:.2f} s, peak {_peak_rss_mb():.1f} MB\n"
    )
    return 0


def cmd_stats(args) -> int:
    comp, root, total, elapsed = _compress_stream(args)
    blob = serialize(to_poslp(comp.store(), root))
    ratio = len(blob) / total if total else 0.0
    out = sys.stdout
    out.write(f"input_bytes\t{total}\n")
    out.write(f"rules\t{comp.n_rules}\n")
    out.write(f"poslp_bytes\t{len(blob)}\n")
    out.write(f"ratio\t{ratio:.4f}\n")
    out.write(f"elapsed_s\t{elapsed:.2f}\n")
    out.write(f"peak_rss_mb\t{_peak_rss_mb():.1f}\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="espmine",
        description="Streaming grammar compression and frequent-pattern cores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(sp, out_help):
        sp.add_argument("-i", "--input", required=True, help='input path, or "-" for stdin')
        sp.add_argument("-o", "--output", default=None, help=out_help)

    def stream_flags(sp):
        sp.add_argument("--alpha", type=float, default=0.8, help="hash load factor in (0,1)")
        sp.add_argument("--progress", action="store_true", help="byte counter on stderr")

    sp = sub.add_parser("compress", help="compress a byte stream to a POSLP file")
    io_flags(sp, 'output path (default: input + ".poslp", or stdout for "-")')
    stream_flags(sp)
    sp.set_defaults(func=cmd_compress)

    sp = sub.add_parser("decompress", help="expand a POSLP file back to bytes")
    io_flags(sp, 'output path (default: input + ".out", or stdout for "-")')
    sp.set_defaults(func=cmd_decompress)

    sp = sub.add_parser("discover", help="stream core reports as TSV while compressing")
    sp.add_argument("-i", "--input", required=True, help='input path, or "-" for stdin')
    sp.add_argument("-o", "--output", default=None, help="optional POSLP output path")
    sp.add_argument("--min-len", type=int, default=1, help="report length floor")
    stream_flags(sp)
    sp.set_defaults(func=cmd_discover)

    sp = sub.add_parser("evaluate", help="score reported cores against exact patterns")
    sp.add_argument("-i", "--input", required=True, help='input path, or "-" for stdin')
    sp.add_argument("-o", "--output", default=None, help="report path (default: stdout)")
    sp.add_argument("--min-len", type=int, default=1, help="minimum pattern length")
    sp.add_argument("--top", type=int, default=100, help="patterns to report")
    sp.add_argument("--oracle", default="suffixarray", help="suffixarray or bruteforce")
    sp.add_argument("--prefix-bytes", type=int, default=None, help="evaluate only a prefix")
    sp.add_argument("--alpha", type=float, default=0.8, help="hash load factor in (0,1)")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("stats", help="compress and print size/ratio/timing summary")
    sp.add_argument("-i", "--input", required=True, help='input path, or "-" for stdin')
    stream_flags(sp)
    sp.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except PoslpFormatError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
