import math
from pathlib import Path

import pytest

from plcsim.cli import main
from plcsim.config import ConfigError, dump_config, parse_config
from plcsim.noise import BgNoiseParams, BurstyNoiseParams


class TestParseConfig:
    def test_empty_document_with_preset_resolves_reference_setup(self):
        resolved = parse_config("", preset="paper-sec3")
        sim = resolved.base
        assert sim.ofdm.fs == 24_999_936.0
        assert sim.ofdm.n_fft == 1024
        assert sim.ofdm.cp_len == 150
        assert sim.ofdm.active_set == tuple(range(74, 410))
        assert sim.noise_model == "bursty"
        assert sim.model_params.lambda_mean == 0.015
        assert sim.model_params.width_mean == 60e-6
        assert sim.model_params.gamma_mean == 100.0
        assert len(sim.channel.paths) == 5
        assert sim.channel.a_scale == pytest.approx(2.4 * 10**-5.3)

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError, match="preset"):
            parse_config("", preset="paper-sec99")

    def test_semantic_error_names_field(self):
        with pytest.raises(ConfigError, match="BgNoiseParams.*psi"):
            parse_config("[run]\nnoise_model = bg\n[noise]\npsi = 1.5\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="wibble"):
            parse_config("[run]\nwibble = 3\n")

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="mystery"):
            parse_config("[mystery]\nx = 1\n")

    def test_syntax_error_reports_line(self):
        with pytest.raises(ConfigError, match="line"):
            parse_config("[run]\nthis is not a key value pair\n")

    def test_flat_channel(self):
        resolved = parse_config("[channel]\nmodel = flat\n")
        assert resolved.base.channel is None

    def test_flat_channel_rejects_params(self):
        with pytest.raises(ConfigError, match="flat"):
            parse_config("[channel]\nmodel = flat\na0 = 1\n")

    def test_bg_model_params(self):
        resolved = parse_config(
            "[run]\nnoise_model = bg\n[noise]\npsi = 0.01\nmu = 1000\n"
        )
        p = resolved.base.model_params
        assert isinstance(p, BgNoiseParams)
        assert (p.psi, p.mu) == (0.01, 1000.0)

    def test_curve_sections(self):
        text = (
            "[run]\nnoise_model = bursty\n"
            "[curve:lam5ms]\nlambda_mean = 0.005\n"
            "[curve:lam15ms]\nlambda_mean = 0.015\n"
        )
        resolved = parse_config(text)
        assert [c.label for c in resolved.curves] == ["lam5ms", "lam15ms"]
        assert resolved.curves[0].sim.model_params.lambda_mean == 0.005
        assert resolved.curves[1].sim.model_params.lambda_mean == 0.015

    def test_duplicate_curve_label_rejected(self):
        text = "[curve:a]\npsi = 0.1\n[curve:a]\npsi = 0.2\n"
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_round_trip_single_curve(self):
        resolved = parse_config("[run]\nnoise_model = bg\nmaster_seed = 9\n")
        assert parse_config(dump_config(resolved)) == resolved

    def test_round_trip_multi_curve(self):
        text = (
            "[run]\nnoise_model = bursty\nsnr_db = 0,10,20\n"
            "[curve:a]\ngamma_mean = 10\n"
            "[curve:b]\nnoise_model = bg\npsi = 0.1\nmu = 1000\n"
        )
        resolved = parse_config(text)
        assert parse_config(dump_config(resolved)) == resolved

    def test_overrides_apply(self):
        resolved = parse_config("", master_seed=77, n_symbols=5, min_errors=0)
        sim = resolved.base
        assert (sim.master_seed, sim.n_symbols, sim.min_errors) == (77, 5, 0)

    def test_manifest_section_accepted(self):
        resolved = parse_config("")
        text = dump_config(resolved)
        with_manifest = "[manifest]\ntool_version = 0\n" + text
        assert parse_config(with_manifest) == resolved


class TestCliChannel:
    def test_flat_constant_power(self, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[channel]\nmodel = flat\n")
        out = tmp_path / "resp.csv"
        assert main(["channel", "--config", str(cfg), "--out", str(out),
                     "--points", "16"]) == 0
        rows = out.read_text().strip().split("\n")
        assert rows[0] == "freq_hz,re,im,power_db"
        powers = {r.split(",")[3] for r in rows[1:]}
        assert powers == {"0.0"}

    def test_line_count_and_determinism(self, tmp_path):
        out = tmp_path / "resp.csv"
        args = ["channel", "--out", str(out), "--points", "4096",
                "--f-start", "1.8e6", "--f-stop", "100e6"]
        assert main(args) == 0
        first = out.read_bytes()
        assert first.decode().count("\n") == 4097
        assert main(args) == 0
        assert out.read_bytes() == first


class TestCliNoise:
    def test_symbol_duration_trace_length(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert main(["noise", "--out", str(out), "--symbols", "5",
                     "--seed", "3"]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 1 + 5 * 1174
        sched = (tmp_path / "trace.schedule.csv").read_text().strip().split("\n")
        assert sched[0] == "t_arrival,t_width,gamma2"

    def test_awgn_schedule_header_only(self, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[run]\nnoise_model = awgn\n")
        out = tmp_path / "trace.csv"
        assert main(["noise", "--config", str(cfg), "--out", str(out),
                     "--symbols", "2"]) == 0
        sched = (tmp_path / "trace.schedule.csv").read_text()
        assert sched == "t_arrival,t_width,gamma2\n"

    def test_same_seed_identical_files(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["noise", "--out", str(out), "--symbols", "3",
                         "--seed", "11"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_duration_required(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(["noise", "--out", str(out)]) == 1


class TestCliBer:
    def test_single_symbol_bit_count(self, tmp_path):
        out = tmp_path / "ber.csv"
        assert main(["ber", "--out", str(out), "--symbols", "1",
                     "--min-errors", "0"]) == 0
        rows = out.read_text().strip().split("\n")
        assert rows[0] == "label,snr_db,bits,errors,ber,ci_low,ci_high"
        for row in rows[1:]:
            assert row.split(",")[2] == "336"
        manifest = Path(str(out) + ".manifest").read_text()
        assert "master_seed" in manifest
        from plcsim.config import parse_config as pc

        assert pc(manifest).base.n_symbols == 1  # manifest round-trips

    def test_multi_curve_output(self, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text(
            "[run]\nsnr_db = 0\nn_symbols = 2\nmin_errors = 0\n"
            "[curve:a]\ngamma_mean = 10\n[curve:b]\ngamma_mean = 1000\n"
        )
        out = tmp_path / "ber.csv"
        assert main(["ber", "--config", str(cfg), "--out", str(out)]) == 0
        labels = [r.split(",")[0] for r in out.read_text().strip().split("\n")[1:]]
        assert labels == ["a", "b"]

    def test_plot_rendered(self, tmp_path):
        out = tmp_path / "ber.csv"
        assert main(["ber", "--out", str(out), "--symbols", "1",
                     "--min-errors", "0", "--plot"]) == 0
        assert (tmp_path / "ber.png").exists()

    def test_error_exit_nonzero_and_no_partial_file(self, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[noise]\npsi = 2.0\n")
        bad = tmp_path / "bad.ini"
        bad.write_text("[run]\nnonsense = 1\n")
        out = tmp_path / "ber.csv"
        assert main(["ber", "--config", str(bad), "--out", str(out)]) == 1
        assert not out.exists()

    def test_full_precision_round_trip(self, tmp_path):
        out = tmp_path / "ber.csv"
        assert main(["ber", "--out", str(out), "--symbols", "3",
                     "--min-errors", "0", "--seed", "5"]) == 0
        for row in out.read_text().strip().split("\n")[1:]:
            parts = row.split(",")
            ber = float(parts[4])
            assert repr(ber) == parts[4]
            assert math.isfinite(ber)
