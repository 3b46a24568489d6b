"""Command line behavior: round trips, TSV outputs, exit codes, atomicity."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from espmine.cli import main


def write(path, data: bytes):
    path.write_bytes(data)
    return str(path)


@pytest.fixture()
def sample(tmp_path):
    rng = np.random.default_rng(42)
    data = rng.integers(0, 256, 30_000, dtype=np.uint8)
    pat = rng.integers(0, 256, 500, dtype=np.uint8)
    for pos in (2_000, 11_000, 22_000):
        data[pos : pos + 500] = pat
    return write(tmp_path / "sample.bin", data.tobytes())


def test_compress_decompress_round_trip(tmp_path, sample, capsys):
    assert main(["compress", "-i", sample]) == 0
    err = capsys.readouterr().err
    assert "rules" in err and "bytes" in err
    poslp = sample + ".poslp"
    assert os.path.exists(poslp)
    assert main(["decompress", "-i", poslp, "-o", str(tmp_path / "back.bin")]) == 0
    assert (tmp_path / "back.bin").read_bytes() == open(sample, "rb").read()


def test_default_output_names(tmp_path):
    src = write(tmp_path / "x.dat", b"hello hello hello ")
    assert main(["compress", "-i", src]) == 0
    assert main(["decompress", "-i", src + ".poslp"]) == 0
    assert (tmp_path / "x.dat.poslp.out").read_bytes() == b"hello hello hello "


def test_empty_input(tmp_path, capsys):
    src = write(tmp_path / "empty.bin", b"")
    assert main(["compress", "-i", src]) == 0
    assert os.path.getsize(src + ".poslp") > 0  # a real file: header, no tree
    assert main(["decompress", "-i", src + ".poslp", "-o", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out").read_bytes() == b""


def test_discover_rows(tmp_path, capsys):
    src = write(tmp_path / "abab.bin", b"abab")
    assert main(["discover", "-i", src, "--min-len", "2"]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out[0] == "variable_id\tval_length\tdetection_offset"
    assert out[1:] == ["256\t2\t4"]


def test_discover_header_only(tmp_path, capsys):
    src = write(tmp_path / "uniq.bin", b"abcdefgh")
    assert main(["discover", "-i", src, "--min-len", "2"]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out == ["variable_id\tval_length\tdetection_offset"]


def test_discover_offsets_sorted_and_filtered(tmp_path, sample, capsys):
    assert main(["discover", "-i", sample, "--min-len", "8"]) == 0
    rows = capsys.readouterr().out.strip().split("\n")[1:]
    offs = [int(r.split("\t")[2]) for r in rows]
    lens = [int(r.split("\t")[1]) for r in rows]
    assert offs == sorted(offs)
    assert all(l >= 8 for l in lens)
    assert rows, "planted repeats must produce reports"


def test_discover_writes_poslp_on_request(tmp_path, capsys):
    src = write(tmp_path / "z.bin", b"zzzzzzzz")
    dst = tmp_path / "z.poslp"
    assert main(["discover", "-i", src, "-o", str(dst)]) == 0
    assert dst.exists()


def test_evaluate_report(tmp_path, sample, capsys):
    assert main(["evaluate", "-i", sample, "--min-len", "100", "--top", "5"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("pattern_rank\t")
    assert lines[1].split("\t")[1] == "500"
    assert "independent\tmean" in out


def test_evaluate_oracles_agree(tmp_path, sample, capsys):
    assert main(["evaluate", "-i", sample, "--min-len", "50", "--oracle", "suffixarray"]) == 0
    sa = capsys.readouterr().out
    assert main(["evaluate", "-i", sample, "--min-len", "50", "--oracle", "bruteforce"]) == 0
    bf = capsys.readouterr().out
    assert sa == bf


def test_evaluate_top_one(tmp_path, sample, capsys):
    assert main(["evaluate", "-i", sample, "--min-len", "100", "--top", "1"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    data_rows = [l for l in lines if l and l[0].isdigit()]
    assert len(data_rows) == 1


def test_evaluate_prefix_bytes(tmp_path, sample, capsys):
    assert main(["evaluate", "-i", sample, "--prefix-bytes", "1000", "--min-len", "3"]) == 0
    capsys.readouterr()


def test_evaluate_no_patterns(tmp_path, capsys):
    src = write(tmp_path / "uniq.bin", bytes(range(200)))
    assert main(["evaluate", "-i", src, "--min-len", "2"]) == 0
    assert capsys.readouterr().out == "no frequent patterns\n"


def test_stats_keys(tmp_path, sample, capsys):
    assert main(["stats", "-i", sample]) == 0
    out = capsys.readouterr().out
    keys = [l.split("\t")[0] for l in out.strip().split("\n")]
    assert keys == ["input_bytes", "rules", "poslp_bytes", "ratio", "elapsed_s", "peak_rss_mb"]
    assert f"input_bytes\t30000" in out


def test_exit_codes(tmp_path, sample, capsys):
    assert main(["compress", "-i", str(tmp_path / "missing.bin")]) == 2
    assert main(["compress", "-i", sample, "--alpha", "1.5"]) == 3
    assert main(["compress", "-i", sample, "--alpha", "0"]) == 3
    assert main(["evaluate", "-i", sample, "--top", "0"]) == 3
    assert main(["evaluate", "-i", sample, "--min-len", "0"]) == 3
    assert main(["evaluate", "-i", sample, "--oracle", "psychic"]) == 3
    assert main(["evaluate", "-i", sample, "--prefix-bytes", "0"]) == 3
    bad = write(tmp_path / "bad.poslp", b"garbage")
    assert main(["decompress", "-i", bad]) == 2
    capsys.readouterr()


def test_failed_decompress_leaves_no_output(tmp_path, capsys):
    bad = write(tmp_path / "bad.poslp", b"POSLP1\n\x00" + b"\x00" * 64)
    target = tmp_path / "bad.out"
    assert main(["decompress", "-i", bad, "-o", str(target)]) == 2
    assert not target.exists()
    assert not list(tmp_path.glob(".espmine-*"))
    capsys.readouterr()


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "espmine.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "compress" in proc.stdout
