import pytest

import nskwave as nw
from nskwave import cli
from nskwave.config import parse_config

SMOKE = """
[gas]
gamma = 1.4

[states]
v_plus = 1.0
u_plus = 0.0
v_m = 0.9
v_minus = 0.88

[grid]
x_lo = -240.0
x_hi = 170.0
n = 512

[scheme]
cfl = 0.4
t_end = 1.0
output_stride = 40

[perturbation]
kind = gaussian
amplitude = 0.001
center = 0.0
width = 6.0
field = both

[output]
dir = out
formats = csv
"""


@pytest.fixture()
def smoke_cfg(tmp_path):
    path = tmp_path / "smoke.cfg"
    path.write_text(SMOKE)
    return path


def test_parse_defaults_and_values(smoke_cfg):
    cfg = parse_config(smoke_cfg)
    assert cfg.gas.gamma == 1.4 and cfg.gas.alpha == 0.0
    assert cfg.states["v_m"] == 0.9
    assert cfg.scheme["shift"] is True  # default filled
    assert cfg.perturbation["kind"] == "gaussian"
    assert cfg.formats == ["csv"]


def test_parse_rejects_bad_gamma(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(SMOKE.replace("gamma = 1.4", "gamma = 0.9"))
    with pytest.raises(nw.ConfigError, match="gamma must exceed 1"):
        parse_config(path)


def test_parse_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(SMOKE.replace("gamma = 1.4", "gama = 1.4"))
    with pytest.raises(nw.ConfigError, match="unknown key 'gama'"):
        parse_config(path)


def test_parse_rejects_unknown_section(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(SMOKE + "\n[plotting]\nstyle = fancy\n")
    with pytest.raises(nw.ConfigError, match=r"unknown section \[plotting\]"):
        parse_config(path)


def test_parse_reports_line_numbers_and_all_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("[gas]\ngamma = 0.5\nbogus = 1\n[grid]\nx_lo = 2.0\nx_hi = 1.0\nn = 4\n"
                    "[states]\nv_plus = 1.0\nu_plus = 0.0\nv_m = 0.9\n[scheme]\nt_end = 1.0\n")
    with pytest.raises(nw.ConfigError) as err:
        parse_config(path)
    msg = str(err.value)
    assert "line 3" in msg and "bogus" in msg
    assert "gamma must exceed 1" in msg
    assert "x_lo < x_hi" in msg
    assert "at least 16" in msg


def test_parse_state_mode_exclusivity(tmp_path):
    text = SMOKE.replace("v_m = 0.9", "v_m = 0.9\nu_minus = 0.1")
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    with pytest.raises(nw.ConfigError, match="not both"):
        parse_config(path)


def test_dispatch_riemann(smoke_cfg, capsys):
    cfg = parse_config(smoke_cfg)
    assert cli.dispatch("riemann", cfg) == 0
    out = capsys.readouterr().out
    assert "sigma = " in out and "C1 = " in out


def test_dispatch_unknown_subcommand(smoke_cfg):
    cfg = parse_config(smoke_cfg)
    assert cli.dispatch("frobnicate", cfg) == 1


def test_simulate_smoke_and_determinism(smoke_cfg, tmp_path):
    cfg = parse_config(smoke_cfg)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli.dispatch("simulate", cfg, out_dir=out1) == 0
    assert cli.dispatch("simulate", cfg, out_dir=out2) == 0
    ts1 = (out1 / "timeseries.csv").read_bytes()
    ts2 = (out2 / "timeseries.csv").read_bytes()
    assert ts1 == ts2
    lines = ts1.decode().strip().splitlines()
    assert lines[0].startswith("t,X,Xdot,L2_phi")
    assert len(lines) >= 3  # header plus two records
    snaps = sorted(p.name for p in out1.glob("snapshot_*.csv"))
    assert len(snaps) >= 1
    header = (out1 / snaps[0]).read_text().splitlines()[0]
    assert header == "x,v,u,w,vbar,ubar,wbar,a"


def test_profile_csv_deterministic(smoke_cfg, tmp_path):
    cfg = parse_config(smoke_cfg)
    out1, out2 = tmp_path / "p1", tmp_path / "p2"
    assert cli.dispatch("profile", cfg, out_dir=out1) == 0
    assert cli.dispatch("profile", cfg, out_dir=out2) == 0
    assert (out1 / "profile.csv").read_bytes() == (out2 / "profile.csv").read_bytes()


def test_rarefaction_csv(smoke_cfg, tmp_path):
    cfg = parse_config(smoke_cfg)
    out = tmp_path / "r"
    assert cli.dispatch("rarefaction", cfg, out_dir=out) == 0
    lines = (out / "rarefaction.csv").read_text().splitlines()
    assert lines[0] == "x,v,u,vx,ux,vxx,uxx,vxxx,uxxx,vxxxx,uxxxx"
    assert len(lines) == 1 + 512


def test_interactions_csv(smoke_cfg, tmp_path):
    cfg = parse_config(smoke_cfg)
    out = tmp_path / "i"
    assert cli.dispatch("interactions", cfg, out_dir=out) == 0
    lines = (out / "interactions.csv").read_text().splitlines()
    assert lines[0].startswith("t,vSx_vR_L1")
    assert len(lines) == 10


def test_exit_code_on_pattern_failure(tmp_path):
    text = SMOKE.replace("v_m = 0.9\nv_minus = 0.88", "v_minus = 1.0\nu_minus = -1.0")
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    cfg = parse_config(path)
    assert cli.dispatch("riemann", cfg) == 1


def test_exit_code_on_numerical_failure(tmp_path):
    # strength above the oscillatory threshold but below the cap: the profile
    # solve detects the spiral and reports a numerical failure
    text = SMOKE.replace("v_m = 0.9\nv_minus = 0.88", "v_m = 0.785\nv_minus = 0.785")
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    cfg = parse_config(path)
    assert cli.dispatch("profile", cfg, out_dir=tmp_path / "x") == 2


def test_verify_passes(smoke_cfg, capsys):
    cfg = parse_config(smoke_cfg)
    assert cli.dispatch("verify", cfg, seed=0) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == len(cli.VERIFY_SUITES)
    assert "FAIL" not in out


def test_main_entry(smoke_cfg, tmp_path, capsys):
    rc = cli.main(["riemann", "--config", str(smoke_cfg)])
    assert rc == 0
    rc = cli.main(["riemann", "--config", str(tmp_path / "missing.cfg")])
    assert rc == 1


def test_partial_output_flushed_on_abort(smoke_cfg, tmp_path, monkeypatch):
    import nskwave.solver as solver_mod

    cfg = parse_config(smoke_cfg)
    real_step = solver_mod._step_core
    counter = {"n": 0}

    def exploding_step(*args, **kwargs):
        counter["n"] += 1
        if counter["n"] > 3:
            raise nw.SolverError("injected failure")
        return real_step(*args, **kwargs)

    monkeypatch.setattr(solver_mod, "_step_core", exploding_step)
    out = tmp_path / "aborted"
    rc = cli.dispatch("simulate", cfg, out_dir=out)
    assert rc == 2
    partial = out / "timeseries.partial.csv"
    assert partial.exists()
    assert len(partial.read_text().splitlines()) >= 2  # header plus records


def test_worker_count(monkeypatch):
    monkeypatch.delenv("NSKWAVE_THREADS", raising=False)
    assert cli.worker_count() == 1
    monkeypatch.setenv("NSKWAVE_THREADS", "4")
    assert cli.worker_count() == 4
    monkeypatch.setenv("NSKWAVE_THREADS", "zebra")
    with pytest.raises(nw.ConfigError):
        cli.worker_count()


def test_float_roundtrip_formatting():
    vals = [0.1, 1e-17, 123456.789, -3.5e300]
    for v in vals:
        assert float(cli._fmt(v)) == v
