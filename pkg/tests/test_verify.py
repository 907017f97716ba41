import json

import pytest

from lgdiv import verify as vf
from lgdiv.cli import main
from lgdiv.scenarios import build_registry, derive_case_witness

FAST = dict(height=200, legendre_bound=500, corollary_bound=500, spot_checks=20)


def statuses(report):
    return {s.name: s.status for s in report.steps}


def test_registry_ids():
    reg = build_registry(vf.Config())
    assert list(reg)[:3] == ["dz2", "creutz2", "selmer30"]
    assert {"selmer-wc-138", "selmer-wc-354", "lemma42-suite", "remark-dlist"} <= set(reg)
    for sc in reg.values():
        for step in sc.steps:
            assert step.provenance in vf.PROVENANCE
            assert step.provenance != "PAPER" or step.anchor


def test_unknown_scenario():
    with pytest.raises(KeyError):
        vf.run_scenario("nope")


def test_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(ValueError):
        vf.Config.from_dict({"bogus": 1})
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 7, "wc_dlist": [138]}))
    cfg = vf.Config.load(path)
    assert cfg.seed == 7 and cfg.wc_dlist == (138,)


def test_dz2_corrupted_point_fails():
    rep = vf.run_scenario("dz2", dz_point=(341, 59137), **FAST)
    assert rep.status == vf.FAIL
    assert statuses(rep)["point_on_curve"] == vf.FAIL
    # the torsion steps do not depend on P and still pass
    assert statuses(rep)["delta2_P1"] == vf.PASS


def test_wc_with_d_6_fails_with_explanation():
    rep = vf.run_scenario("selmer-wc-6", wc_dlist=(6,), **FAST)
    st = statuses(rep)
    assert rep.status == vf.FAIL
    assert st["dprime_cube_at_3"] == vf.FAIL
    cert = next(s for s in rep.steps if s.name == "local_certificate")
    assert cert.status == vf.FAIL and cert.detail.startswith("certificate failure")


def test_inconclusive_when_search_too_small():
    rep = vf.run_scenario("remark-dlist", remark_dlist=(213,), remark_height=100)
    assert rep.status == vf.INCONCLUSIVE
    assert vf.exit_code([rep]) == 2


def test_reports_are_reproducible():
    cfg = vf.Config().replace(**FAST)
    a = vf.dumps(vf.report_document([vf.run_scenario("creutz2", cfg)], cfg, canonical=True))
    b = vf.dumps(vf.report_document([vf.run_scenario("creutz2", cfg)], cfg, canonical=True))
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == vf.SCHEMA and doc["status"] == "pass"
    assert "elapsed" not in doc["reports"][0]


def test_exit_codes():
    class R:
        def __init__(self, s):
            self.status = s
    assert vf.exit_code([R("pass")]) == 0
    assert vf.exit_code([R("pass"), R("inconclusive")]) == 2
    assert vf.exit_code([R("inconclusive"), R("fail")]) == 1


def test_derived_case_witnesses():
    p3, d3 = derive_case_witness(3)
    assert p3 < 500
    p5, d5 = derive_case_witness(5, require_zeta3_noncube=True)
    assert p5 % 3 == 1 and p5 % 9 != 1


# command line

def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_local(capsys):
    assert run_cli(capsys, "local", "--op", "cube", "--value", "10", "--place", "3")[1].startswith("10 is a cube")
    code, out, _ = run_cli(capsys, "local", "--op", "square", "--value", "-1", "--place", "real")
    assert code == 0 and "not a square" in out
    assert run_cli(capsys, "local", "--op", "square", "--value", "2", "--place", "4")[0] == 3


def test_cli_cover(capsys):
    code, out, _ = run_cli(capsys, "cover", "--abc", "1,3,10", "--point=-11,3,5")
    assert code == 0
    assert json.loads(out)["image"] == [1523698559, -2736572309, 826803945]
    assert run_cli(capsys, "cover", "--abc", "1,3,10", "--point=1,1,1")[0] == 3


def test_cli_search(capsys):
    code, out, _ = run_cli(capsys, "search", "--curve", "1,3,10", "--height", "12")
    assert code == 0 and "(11 : -3 : -5)" in out


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--bogus"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main(["search", "--curve", "1,2", "--height", "3"])
    assert exc.value.code == 3
    assert run_cli(capsys, "verify", "--scenario", "nope")[0] == 3


def test_cli_verify_report(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run_cli(capsys, "verify", "--scenario", "dz2", "--report", str(path), "--canonical")
    assert code == 0 and "dz2" in out
    doc = json.loads(path.read_text())
    assert doc["reports"][0]["status"] == "pass"
    steps = {s["name"]: s for s in doc["reports"][0]["steps"]}
    assert steps["delta2_P"]["witness"]["delta2"] == [-1, -1]


def test_cli_verify_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"dz_point": [341, 59137], "legendre_bound": 100}))
    assert run_cli(capsys, "verify", "--scenario", "dz2", "--config", str(cfg))[0] == 1
