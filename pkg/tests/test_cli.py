import io
import subprocess
import sys

import pytest

from gtcert.cli import batch_verify, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_info():
    code, out, _ = call("info", "klein")
    assert code == 0
    assert "generators=x y" in out and "relator[0]=y^-1 x y x" in out


def test_enumerate_fibonacci7():
    code, out, _ = call("enumerate", "fibonacci:m=7")
    assert code == 0 and "order=29" in out.splitlines()


def test_enumerate_perms_and_subgroup():
    code, out, _ = call("enumerate", "fibonacci:m=3", "--perms")
    assert "order=8" in out and out.count("perm[") == 3
    code, out, _ = call("enumerate", "fibonacci:m=3", "--subgroup", "a1")
    assert "index=2" in out


def test_enumerate_abort_and_env(monkeypatch):
    code, out, _ = call("enumerate", "klein", "--max-cosets", "50")
    assert code == 0 and "status=aborted" in out and "limit=50" in out
    monkeypatch.setenv("GTCERT_MAX_COSETS", "20")
    assert "limit=20" in call("enumerate", "klein")[1]


def test_abelianize():
    code, out, _ = call("abelianize", "rss:p=5,q=2,m=-3", "--word", "t^2")
    assert code == 0
    assert out.splitlines()[0] == "rank=0 torsion=[5,5]"
    assert "order[t]=5" in out and "order[t^2]=5" in out


def test_certify_then_verify(tmp_path):
    path = str(tmp_path / "f4.gtc")
    code, out, _ = call("certify", "--family", "fibonacci", "--param", "m=4", "--out", path)
    assert code == 0 and "total_multiplicity=5" in out
    code, out, _ = call("verify", path, "--method", "proof,coset")
    assert code == 0
    line = out.splitlines()[0]
    assert "overall=Verified" in line and "proof=Pass" in line and "coset=Pass" in line
    assert out.splitlines()[-1] == "1 certificate, 0 failed"


def test_certify_stdout_is_a_certificate():
    code, out, _ = call("certify", "--family", "klein")
    assert code == 0
    assert out.splitlines()[:3] == ["format: gtcert/1", "presentation: klein", "base: x"]


def test_corrupted_certificate_exits_1(tmp_path):
    path = tmp_path / "k.gtc"
    call("certify", "--family", "klein", "--out", str(path))
    path.write_text(path.read_text().replace("factor: y | 1", "factor: y^2 | 1"))
    code, out, _ = call("verify", str(path))
    assert code == 1 and "proof=Fail" in out


def test_batch_mixed(tmp_path):
    good = str(tmp_path / "good.gtc")
    call("certify", "--family", "rss", "--param", "p=3,q=1,m=0", "--out", good)
    bad = tmp_path / "bad.gtc"
    bad.write_text("format: gtcert/1\npresentation: klein\nbase: q\n")
    missing = str(tmp_path / "nope.gtc")
    code, out, _ = call("verify", good, str(bad), missing, "--method", "proof")
    lines = out.splitlines()
    assert code == 1
    assert lines[0].startswith(good) and "overall=Verified" in lines[0]
    assert "error=parse" in lines[1] and "error=unreadable" in lines[2]
    assert lines[-1] == "3 certificates, 2 failed"


def test_batch_parallel_keeps_order(tmp_path):
    paths = []
    for fam, par in [("klein", None), ("fibonacci", "m=5"), ("kbcircle", None)]:
        p = str(tmp_path / f"{fam}.gtc")
        args = ["certify", "--family", fam, "--out", p] + (["--param", par] if par else [])
        call(*args)
        paths.append(p)
    entries = batch_verify(paths, jobs=3)
    assert [e.path for e in entries] == paths and all(e.ok for e in entries)


def test_verify_empty_list():
    code, out, _ = call("verify")
    assert code == 0 and out.strip() == "0 certificates, 0 failed"


def test_classify():
    code, out, _ = call("classify", "--torus-bundle", "-1,0,0,-1")
    assert code == 0
    assert "status=NotBiOrderable" in out and "certificate_status=Verified" in out
    code, out, _ = call("classify", "--torus-bundle", "2,1,1,1")
    assert "status=BiOrderable" in out and "certificate=none" in out
    code, out, _ = call("classify", "--sol", "twisted-i-bundle")
    assert "status=NotBiOrderable" in out
    code, out, _ = call("classify", "--sol", "torus-bundle", "--matrix", "0,-1,1,-1")
    assert "certificate_status=Verified" in out
    code, out, _ = call("classify", "--circle-bundle", "base=klein,orientable=true")
    assert "status=NotBiOrderable" in out
    code, out, _ = call("classify", "--circle-bundle", "base=other,genus=1,orientable=true")
    assert "status=BiOrderable" in out
    code, out, _ = call("classify", "--sol", "semibundle")
    assert code == 0 and "certificate_status=ConditionallyVerified" in out


def test_classify_writes_certificate(tmp_path):
    p = str(tmp_path / "tb.gtc")
    code, out, _ = call("classify", "--torus-bundle", "0,-1,1,-1", "--out", p)
    assert code == 0 and f"certificate={p}" in out
    assert call("verify", p, "--method", "proof,normal-form")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["info"],
        ["info", "klein", "--bogus"],
        ["info", "fibonacci:m=0"],
        ["info", "/no/such/file.txt"],
        ["enumerate", "klein", "--max-cosets", "0"],
        ["certify", "--family", "fibonacci", "--param", "m=2"],
        ["certify", "--family", "fibonacci", "--param", "n=4"],
        ["certify", "--family", "torusbundle", "--param", "a=1,b=0,c=0,d=1"],
        ["verify", "--method", "magic"],
        ["classify", "--torus-bundle", "1,2,3"],
        ["classify", "--torus-bundle", "2,0,0,2"],
        ["classify", "--circle-bundle", "base=torus"],
        ["classify", "--circle-bundle", "colour=red"],
        ["abelianize", "klein", "--word", "z"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, _, err = call(*argv)
    assert code == 2 and err


def test_parse_error_in_presentation_file(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("gens: x y\nrel: x w\n")
    code, _, err = call("info", str(p))
    assert code == 2 and "2" in err


def test_output_is_stable():
    a = call("certify", "--family", "fibonacci", "--param", "m=6")
    b = call("certify", "--family", "fibonacci", "--param", "m=6")
    assert a == b


def test_timings_go_to_stderr():
    code, out, err = call("--timings", "info", "klein")
    assert "time=" in err and "time=" not in out


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "gtcert.cli", "enumerate", "fibonacci:m=4"], capture_output=True, text=True)
    assert r.returncode == 0 and "order=5" in r.stdout
