import importlib.resources as resources
import json

from cqgkit import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    payload = out[out.index("{"):]
    return code, out, json.loads(payload)


def test_haar_command(capsys):
    code, out, data = run_cli(capsys, "haar", "--preset", "su_q_2", "--degree", "4")
    assert code == 0
    assert data["values"]["g g*"] == "1/(q^2 + 1)"
    assert data["solution_space_dim"] == 1


def test_normalize_command(capsys):
    code, out, data = run_cli(capsys, "normalize", "--preset", "su_q_2",
                              "--expr", "g a")
    assert code == 0
    assert data["normal_form"] == "q^-1 * a g"


def test_fuse_command(capsys):
    code, out, data = run_cli(capsys, "fuse", "--preset", "su_q_2",
                              "--depth", "2")
    assert code == 0
    rows = {(r["left"], r["right"]): r["summands"] for r in data["fusion"]}
    assert rows[("2#0", "2#0")] == [
        {"label": "1#0", "multiplicity": 1},
        {"label": "3#0", "multiplicity": 1},
    ]


def test_verify_hopf_command(capsys):
    code, out, data = run_cli(capsys, "verify-hopf", "--preset", "c_z4",
                              "--degree", "2")
    assert code == 0 and data["report"]["ok"]


def test_antipode_identities_command(capsys):
    code, out, data = run_cli(capsys, "axioms-wor1", "--preset", "a_u_2")
    assert code == 0 and data["report"]["ok"]


def test_regrep_command(capsys):
    code, out, data = run_cli(capsys, "regrep-check", "--preset", "c_z4")
    assert code == 0
    assert data["pentagon"]["pentagon"] and data["implements"]["ok"]


def test_dual_command(capsys):
    code, out, data = run_cli(capsys, "dual", "--preset", "c_z4", "--seed", "7")
    assert code == 0
    assert data["involution_spot_check"] is True
    assert sorted(b["dim"] for b in data["dual"]["blocks"].values()) == [1, 1, 1, 1]


def test_decompose_command(capsys):
    code, out, data = run_cli(capsys, "decompose", "--preset", "c_s3")
    assert code == 0
    assert sorted((s["label"], s["multiplicity"]) for s in data["summands"]) == \
        [("1#0", 1), ("1#1", 1), ("2#0", 2)]


def test_json_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for path in (out1, out2):
        code = cli.main(["fuse", "--preset", "su_q_2", "--depth", "2",
                         "--seed", "3", "--json", str(path)])
        capsys.readouterr()
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_file_input(tmp_path, capsys):
    src = (resources.files("cqgkit") / "data" / "su_q_2.cqg").read_text()
    path = tmp_path / "alg.cqg"
    path.write_text(src)
    code, out, data = run_cli(capsys, "normalize", "--file", str(path),
                              "--expr", "g* g")
    assert code == 0 and data["normal_form"] == "g g*"


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.cqg"
    path.write_text("gen a star a*\nrule a -> a* a\n")
    code = cli.main(["verify-hopf", "--file", str(path)])
    capsys.readouterr()
    assert code == cli.EXIT_PARSE


def test_degree_error_exit_code(capsys):
    # su_q_3 has no confluence certificate: haar must exit with the degree code
    code = cli.main(["haar", "--preset", "su_q_3", "--degree", "2"])
    capsys.readouterr()
    assert code == cli.EXIT_DEGREE


def test_unknown_preset_exit_code(capsys):
    code = cli.main(["haar", "--preset", "nope"])
    capsys.readouterr()
    assert code == cli.EXIT_PARSE


def test_seed_is_printed(capsys):
    cli.main(["normalize", "--preset", "su_q_2", "--expr", "a"])
    out = capsys.readouterr().out
    assert "seed=0" in out
