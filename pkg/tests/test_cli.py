from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import pytest

from preisach import SpinConfig, alpha, build_bfs, make_permutation
from preisach.cli import (
    cmd_stats,
    cmd_verify,
    cmd_verify_all,
    export_dot,
    export_json,
    format_config,
    load_json,
    main,
    parse_config,
    parse_permutation,
    random_permutation,
)

RHO231 = make_permutation([2, 3, 1])


def test_parse_permutation_commas():
    assert parse_permutation("2,3,1") == RHO231


def test_parse_permutation_spaces():
    assert parse_permutation("2 4 3 5 1").values == (2, 4, 3, 5, 1)


def test_parse_permutation_rejects_duplicate():
    with pytest.raises(ValueError, match="duplicate value 2"):
        parse_permutation("2,2,1")


def test_parse_permutation_rejects_non_integer():
    with pytest.raises(ValueError, match="non-integer token"):
        parse_permutation("2,x,1")


def test_parse_config_examples():
    assert parse_config("---", 3) == alpha(3)
    assert parse_config("+-+", 3) == SpinConfig((1, -1, 1))
    with pytest.raises(ValueError, match="illegal character '0'"):
        parse_config("+0-", 3)
    with pytest.raises(ValueError, match="expected 3 spins"):
        parse_config("+-", 3)


def test_export_dot_single_spin():
    g = build_bfs(make_permutation([1]))
    assert export_dot(g) == (
        "digraph preisach {\n"
        '  "-";\n'
        '  "+";\n'
        '  "-" -> "+" [color=black, label=1];\n'
        '  "+" -> "-" [color=red, label=1];\n'
        "}\n"
    )


def test_export_dot_fig_instance():
    text = export_dot(build_bfs(RHO231))
    assert text.count("->") == 8
    assert text.count("color=black") == 4
    assert text.count("color=red") == 4
    assert text.count('";') == 5


def test_export_json_single_spin():
    g = build_bfs(make_permutation([1]))
    assert export_json(g) == (
        '{"n":1,"perm":[1],"vertices":["-","+"],'
        '"edges":[{"from":"-","to":"+","kind":"U","label":1},'
        '{"from":"+","to":"-","kind":"D","label":1}]}'
    )


def test_export_json_round_trip():
    g = build_bfs(make_permutation([2, 4, 3, 1]))
    assert load_json(export_json(g)) == g


def test_exports_are_deterministic():
    rho = make_permutation([2, 4, 3, 5, 1])
    assert export_dot(build_bfs(rho)) == export_dot(build_bfs(rho))
    assert export_json(build_bfs(rho)) == export_json(build_bfs(rho))


def test_exports_independent_of_thread():
    rho = make_permutation([2, 4, 3, 5, 1])
    with ThreadPoolExecutor(max_workers=4) as pool:
        graphs = list(pool.map(lambda _: build_bfs(rho), range(4)))
    texts = {export_dot(g) for g in graphs} | {export_dot(build_bfs(rho))}
    assert len(texts) == 1


def test_cmd_verify_fig_instance():
    report = cmd_verify(RHO231)
    assert report.passed()
    assert report.vertex_count == 5
    assert report.nesting_of_graph == 2 and report.lis == 2


def test_cmd_verify_single_spin():
    report = cmd_verify(make_permutation([1]))
    assert report.passed() and report.vertex_count == 2 and report.lis == 1


def test_cmd_verify_five_spins():
    report = cmd_verify(make_permutation([2, 4, 3, 5, 1]))
    assert report.passed() and report.lis == 3


def test_cmd_verify_all_small():
    summary = cmd_verify_all(3)
    assert summary.checked == 6 and not summary.failures
    summary = cmd_verify_all(1)
    assert summary.checked == 1 and not summary.failures


def test_cmd_verify_all_guard():
    with pytest.raises(ValueError, match="n too large"):
        cmd_verify_all(12)


def test_random_permutation_deterministic():
    assert random_permutation(5, 1, 0) == random_permutation(5, 1, 0)
    assert random_permutation(5, 1, 0) != random_permutation(5, 1, 1)
    for index in range(20):
        random_permutation(7, 3, index)  # validity enforced by the constructor


def test_random_permutation_is_uniform_enough():
    counts = Counter(random_permutation(3, 1, i).values for i in range(120_000))
    assert len(counts) == 6
    three_sigma = 3 * (120_000 * (1 / 6) * (5 / 6)) ** 0.5
    for c in counts.values():
        assert abs(c - 20_000) <= three_sigma


def test_cmd_stats_single_spin():
    report = cmd_stats(1, 5, 3)
    assert report.lis_mean == 1.0 and report.lis_stddev == 0.0


def test_cmd_stats_counts_confirmed_graphs():
    report = cmd_stats(20, 50, 7, max_vertices=1 << 20)
    assert report.nesting_checked == 50


def test_cmd_stats_reproducible():
    assert cmd_stats(30, 20, 11) == cmd_stats(30, 20, 11)


def test_cli_exit_codes(capsys):
    assert main(["verify", "--perm", "2,3,1"]) == 0
    assert main(["verify", "--perm", "2,2,1"]) == 2
    assert main(["build", "--perm", "1,2,3,4,5,6,7,8,9,10", "--max-vertices", "100"]) == 3
    assert main(["verify-all", "--n", "12"]) == 2
    capsys.readouterr()


def test_cli_phi_round_trip(capsys):
    assert main(["phi", "--perm", "2,4,3,5,1", "--vertex", "+++-+"]) == 0
    assert capsys.readouterr().out.strip() == "2,4,5"
    assert main(["phi-inverse", "--perm", "2,4,3,5,1", "--subseq", "2,4,5"]) == 0
    assert capsys.readouterr().out.strip() == "+++-+"
    # sign strings can start with '-'; the --opt=value form keeps argparse happy
    assert main(["phi", "--perm", "2,3,1", "--vertex=---"]) == 0
    assert capsys.readouterr().out.strip() == "()"
    assert main(["phi-inverse", "--perm", "2,3,1", "--subseq", "()"]) == 0
    assert capsys.readouterr().out.strip() == "---"


def test_cli_verify_output(capsys):
    assert main(["verify", "--perm", "2,3,1"]) == 0
    out = capsys.readouterr().out
    assert "result=PASS" in out
    assert "vertices=5" in out
    assert "nesting_of_graph=2" in out


def test_cli_export_to_file(tmp_path):
    out = tmp_path / "graph.json"
    assert main(["export-json", "--perm", "2,3,1", "--out", str(out)]) == 0
    g = load_json(out.read_text(encoding="utf-8"))
    assert len(g.vertices) == 5


def test_format_config_round_trip():
    sigma = SpinConfig((1, -1, 1))
    assert parse_config(format_config(sigma), 3) == sigma
