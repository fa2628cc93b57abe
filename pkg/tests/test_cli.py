import json
from collections.abc import Callable
from pathlib import Path

import pytest

from dynsparse.cli import EXIT_OK, EXIT_PIPELINE, EXIT_STREAM, EXIT_VERIFY, main

CYCLE = "n 8\n" + "".join(f"+ {v} {(v + 1) % 8}\n" for v in range(8))

WriteStream = Callable[[str], str]


@pytest.fixture
def stream_file(tmp_path: Path) -> WriteStream:
    def write(text: str) -> str:
        path = tmp_path / "stream.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_empty_stream_prints_nothing(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sparsify", stream_file("# nothing\nn 5\n")]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_single_edge(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sparsify", stream_file("n 2\n+ 0 1\n")]) == EXIT_OK
    assert capsys.readouterr().out == "0 1 1 1\n"


def test_output_is_deterministic(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    path = stream_file(CYCLE + "- 3 4\n+ 0 4\n")
    main(["sparsify", path, "--seed", "9"])
    first = capsys.readouterr().out
    main(["sparsify", path, "--seed", "9"])
    assert capsys.readouterr().out == first
    assert first.splitlines() == sorted(first.splitlines(), key=lambda s: tuple(map(int, s.split()[:2])))


def test_stats_report(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["stats", stream_file(CYCLE)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == 1
    assert report["n"] == 8
    assert report["m"] == 8
    assert report["updates"] == 8
    assert report["sparsifier_size"] == 8
    assert report["profile"] == "paper"


def test_verify_exact_regime(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", stream_file(CYCLE)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]
    assert report["max_error"] == 0.0
    assert report["exhaustive"]


def test_verify_rejects_large_graphs(stream_file: WriteStream) -> None:
    assert main(["verify", stream_file("n 300\n+ 0 1\n")]) == EXIT_PIPELINE


def test_weighted_stream(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sparsify", stream_file("n 3 w 7\n+ 0 1 5\n+ 1 2 2\n")]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0 1 5 1", "1 2 2 1"]


@pytest.mark.parametrize(
    "text",
    [
        "n 4\n+ 0 9\n",
        "edges 4\n",
        "n 4\n+ 0 1 3\n",
    ],
)
def test_malformed_stream(stream_file: WriteStream, text: str) -> None:
    assert main(["sparsify", stream_file(text)]) == EXIT_STREAM


def test_checked_mode_rejects_absent_delete(stream_file: WriteStream) -> None:
    path = stream_file("n 4\n+ 0 1\n- 2 3\n")
    assert main(["sparsify", path, "--checked"]) == EXIT_STREAM


def test_missing_file(tmp_path: Path) -> None:
    assert main(["sparsify", str(tmp_path / "absent.txt")]) == EXIT_STREAM


def test_invalid_epsilon(stream_file: WriteStream) -> None:
    assert main(["sparsify", stream_file("n 2\n"), "--epsilon", "1.5"]) == EXIT_PIPELINE


def test_save_report(stream_file: WriteStream, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    reports = tmp_path / "reports"
    path = stream_file(CYCLE)
    assert main(["stats", path, "--seed", "3", "--save-report", str(reports)]) == EXIT_OK
    saved = json.loads((reports / "seed_3" / "stats.json").read_text(encoding="utf-8"))
    assert saved["command"] == "stats"
    assert saved["metadata"] == {"stream": path}
    assert saved["report"] == json.loads(capsys.readouterr().out)


def test_verify_failure_exit_code(stream_file: WriteStream, capsys: pytest.CaptureFixture[str]) -> None:
    # p_e = gamma log^2 n / eps^2 = 0.036: no output edge can be close to weight 1
    assert main(["verify", stream_file(CYCLE), "--gamma", "0.001"]) == EXIT_VERIFY
    report = json.loads(capsys.readouterr().out)
    assert not report["passed"]
    assert report["max_error"] > 0.5


@pytest.mark.slow
def test_memory_grows_linearly_with_active_vertices(
    stream_file: WriteStream, capsys: pytest.CaptureFixture[str]
) -> None:
    words = []
    for k in (16, 32, 64):
        cycle = "".join(f"+ {v} {(v + 1) % k}\n" for v in range(k))
        assert main(["stats", stream_file("n 64\n" + cycle), "--profile", "desk"]) == EXIT_OK
        words.append(json.loads(capsys.readouterr().out)["memory_words"])
    assert 1.6 <= words[1] / words[0] <= 2.4
    assert 1.6 <= words[2] / words[1] <= 2.4
