import math
from dataclasses import replace

import numpy as np
import pytest

from sqztune.scenarios import (
    BUILTIN_SCENARIOS,
    REFERENCE_TABLE,
    AbiSpec,
    AcquisitionParams,
    ConfigError,
    HdSpec,
    LossSpec,
    ScenarioConfig,
    SourceSpec,
    emit_reference,
    get_scenario,
    list_scenarios,
    load_config,
    parse_reference,
    run_scenario,
    save_config,
    scenario_from_dict,
    scenario_to_dict,
    summary_csv,
    sweep,
    sweep_csv,
)

FAST_ACQ = dict(
    sample_rate_msps=50.0,
    samples_per_round=4096,
    rounds=40,
    band_center_mhz=1.55,
    band_width_mhz=0.4,
)


def fast(cfg: ScenarioConfig, **acq_changes) -> ScenarioConfig:
    changes = {**FAST_ACQ, **acq_changes}
    return replace(cfg, acquisition=replace(cfg.acquisition, **changes))


def simple_config(**overrides) -> ScenarioConfig:
    fields = dict(
        name="custom",
        description="single-point readout",
        chain=(
            SourceSpec(escape_efficiency=0.934),
            LossSpec("coupling", 0.854),
            HdSpec(
                lo_offset_mhz=0.0,
                thetas_rad=(0.0, math.pi / 2),
                analysis_mhz=(1.55,),
                delta_theta_rad=math.radians(6.0),
                efficiency=0.888,
            ),
        ),
        pump_sweep_mw=(450.0,),
        acquisition=AcquisitionParams(rng_seed=3),
        mode="analytic",
    )
    fields.update(overrides)
    return ScenarioConfig(**fields)


class TestBuiltins:
    def test_expected_names_present(self):
        names = [name for name, _ in list_scenarios()]
        assert {"fig4a", "fig4b", "fig5a", "fig5b", "fig5c"} <= set(names)

    def test_listing_is_lexicographic(self):
        names = [name for name, _ in list_scenarios()]
        assert names == sorted(names)

    def test_descriptions_non_empty(self):
        for _, description in list_scenarios():
            assert description.strip()

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigError, match="unknown scenario"):
            get_scenario("fig9z")

    def test_every_builtin_passes_reference_analytically(self):
        for name in sorted(BUILTIN_SCENARIOS):
            result = run_scenario(get_scenario(name), mode="analytic")
            checked = [row for row in result.rows if row.passed is not None]
            assert checked, name
            assert result.reference_ok, name

    def test_fig4a_frozen_values(self):
        result = run_scenario(get_scenario("fig4a"), mode="analytic")
        by_quantity = {row.quantity: row for row in result.rows}
        assert by_quantity["squeezing_db@450mW"].analytic_db == pytest.approx(
            -3.1793370678008817, abs=1e-9
        )
        assert by_quantity["antisqueezing_db@450mW"].analytic_db == pytest.approx(
            11.533139101868361, abs=1e-9
        )

    def test_fig4b_optimum_sits_at_270(self):
        result = run_scenario(get_scenario("fig4b"), mode="analytic")
        squeezing = {
            row.pump_mw: row.analytic_db
            for row in result.rows
            if row.quantity.startswith("squeezing")
        }
        assert min(squeezing, key=squeezing.get) == 270.0

    def test_fig5a_beat_bands_match_analytically(self):
        result = run_scenario(get_scenario("fig5a"), mode="analytic")
        values = {row.quantity: row.analytic_db for row in result.rows}
        assert values["beat_db@81.55MHz@theta90"] == pytest.approx(
            values["beat_db@78.45MHz@theta90"], abs=1e-9
        )
        assert values["beat_db@81.55MHz@theta0"] == pytest.approx(
            values["beat_db@81.55MHz@theta90"], abs=1e-9
        )

    def test_tuned_chain_efficiency_product(self):
        cfg = get_scenario("fig5b")
        assert cfg.chain_efficiency_total == pytest.approx(0.713 * 0.91 * 0.841 * 0.888, rel=1e-12)


class TestValidation:
    def test_chain_must_start_with_source(self):
        with pytest.raises(ConfigError, match="source"):
            simple_config(
                chain=(
                    LossSpec("coupling", 0.9),
                    SourceSpec(),
                    HdSpec(0.0, (0.0,), (1.55,)),
                )
            )

    def test_chain_must_end_with_readout(self):
        with pytest.raises(ConfigError, match="readout"):
            simple_config(chain=(SourceSpec(), LossSpec("coupling", 0.9)))

    def test_bad_mode_rejected(self):
        with pytest.raises(ConfigError, match="mode"):
            simple_config(mode="quickly")

    def test_lo_must_match_carrier_or_shift(self):
        chain = (
            SourceSpec(),
            AbiSpec(shift_mhz=80.0),
            HdSpec(40.0, (0.0,), (1.55,)),
        )
        with pytest.raises(ConfigError, match="LO offset"):
            simple_config(chain=chain)

    def test_above_threshold_pump_rejected_at_run(self):
        cfg = simple_config(pump_sweep_mw=(2000.0,))
        with pytest.raises(ConfigError, match="threshold"):
            run_scenario(cfg, mode="analytic")

    def test_band_beyond_nyquist_rejected(self):
        with pytest.raises(ConfigError, match="Nyquist"):
            simple_config(
                chain=(
                    SourceSpec(),
                    HdSpec(0.0, (0.0,), (30.0,)),
                )
            )

    def test_empty_pumps_rejected(self):
        with pytest.raises(ConfigError, match="pump"):
            simple_config(pump_sweep_mw=())

    def test_mc_pump_outside_sweep_rejected(self):
        with pytest.raises(ConfigError, match="not in the sweep"):
            simple_config(mc_pump_mw=(90.0,))


class TestRunScenario:
    def test_idempotent_bundles(self):
        cfg = fast(get_scenario("fig4a"))
        a = run_scenario(cfg, mode="both", seed=5)
        b = run_scenario(cfg, mode="both", seed=5)
        assert a.rows == b.rows
        assert sorted(a.spectra) == sorted(b.spectra)
        for key in a.spectra:
            assert np.array_equal(a.spectra[key].psd, b.spectra[key].psd)

    def test_seed_changes_montecarlo_only(self):
        cfg = fast(get_scenario("fig4a"))
        a = run_scenario(cfg, mode="both", seed=5)
        b = run_scenario(cfg, mode="both", seed=6)
        for row_a, row_b in zip(a.rows, b.rows):
            assert row_a.analytic_db == row_b.analytic_db
            assert row_a.mc_db != row_b.mc_db

    def test_analytic_mode_has_no_spectra(self):
        result = run_scenario(get_scenario("fig4a"), mode="analytic")
        assert result.spectra == {}
        assert all(row.mc_db is None for row in result.rows)

    def test_montecarlo_mode_fills_mc_only(self):
        result = run_scenario(fast(get_scenario("fig4a")), mode="montecarlo", seed=2)
        assert all(row.analytic_db is None for row in result.rows)
        assert all(row.mc_db is not None for row in result.rows)
        assert {"snl", "electronic"} <= set(result.spectra)

    def test_corrected_spectra_emitted_per_variant(self):
        result = run_scenario(fast(get_scenario("fig4a")), mode="both", seed=2)
        assert "pump450mW_theta0_corrected" in result.spectra
        assert "pump450mW_theta90_corrected" in result.spectra
        assert result.spectra["pump450mW_theta0_corrected"].normalization == "corrected"

    def test_summary_csv_layout(self):
        result = run_scenario(get_scenario("fig4a"), mode="analytic")
        lines = summary_csv(result).splitlines()
        assert lines[0] == "scenario,quantity,model_db,reference_db,tolerance_db,pass"
        assert len(lines) == 1 + len(result.rows)
        assert lines[1].startswith("fig4a,")
        assert lines[1].endswith(",true")


class TestSweep:
    def test_zero_efficiency_pump_sweep_pins_snl(self):
        cfg = simple_config(
            chain=(
                SourceSpec(escape_efficiency=0.934),
                LossSpec("coupling", 0.854),
                HdSpec(0.0, (0.0, math.pi / 2), (1.55,), efficiency=0.0),
            )
        )
        records = sweep(cfg, "pump_mw", [90.0, 450.0, 810.0])
        for record in records:
            assert record["squeezed_db"] == pytest.approx(0.0, abs=1e-12)
            assert record["antisqueezed_db"] == pytest.approx(0.0, abs=1e-12)

    def test_lock_offset_sweep_degrades_monotonically(self):
        cfg = simple_config(pump_sweep_mw=(270.0,))
        offsets = [math.radians(d) for d in (0.0, 2.0, 4.0, 6.0, 10.0)]
        records = sweep(cfg, "delta_theta_rad", offsets)
        squeezed = [r["squeezed_db"] for r in records]
        assert all(b > a for a, b in zip(squeezed, squeezed[1:]))

    def test_efficiency_sweep_monotone_at_fixed_pump(self):
        cfg = simple_config(pump_sweep_mw=(270.0,))
        records = sweep(cfg, "hd_efficiency", [0.2, 0.5, 0.8, 1.0])
        squeezed = [r["squeezed_db"] for r in records]
        assert all(b < a for a, b in zip(squeezed, squeezed[1:]))

    def test_unknown_parameter_rejected(self):
        with pytest.raises(ConfigError, match="unknown sweep parameter"):
            sweep(get_scenario("fig4b"), "lo_power", [1.0])

    def test_csv_layout(self):
        records = sweep(simple_config(), "pump_mw", [90.0, 180.0])
        text = sweep_csv(records)
        lines = text.splitlines()
        assert lines[0] == "parameter,value,squeezed_db,antisqueezed_db"
        assert len(lines) == 3

    def test_asymmetric_scenario_rejected(self):
        with pytest.raises(ConfigError, match="matched"):
            sweep(get_scenario("fig5a"), "pump_mw", [450.0])


class TestReferenceTable:
    def test_round_trip_is_bit_exact(self):
        text = emit_reference()
        entries = parse_reference(text)
        assert emit_reference(entries) == text
        assert entries == tuple(sorted(REFERENCE_TABLE, key=lambda e: (e.scenario, e.quantity)))

    def test_provenance_non_empty(self):
        for entry in REFERENCE_TABLE:
            assert entry.provenance.strip()

    def test_every_entry_matches_a_builtin_quantity(self):
        for entry in REFERENCE_TABLE:
            result = run_scenario(get_scenario(entry.scenario), mode="analytic")
            assert entry.quantity in {row.quantity for row in result.rows}

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError, match="header"):
            parse_reference("a,b,c\n")


class TestConfigIo:
    def test_dict_round_trip_for_builtins(self):
        for name in sorted(BUILTIN_SCENARIOS):
            cfg = get_scenario(name)
            assert scenario_from_dict(scenario_to_dict(cfg)) == cfg

    def test_file_round_trip(self, tmp_path):
        cfg = get_scenario("fig5b")
        path = tmp_path / "fig5b.json"
        save_config(cfg, path)
        assert load_config(path) == cfg

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(tmp_path / "nope.json")

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="JSON"):
            load_config(path)

    def test_unknown_kind_rejected(self):
        data = scenario_to_dict(get_scenario("fig4a"))
        data["chain"][0]["kind"] = "laser"
        with pytest.raises(ConfigError, match="kind"):
            scenario_from_dict(data)

    def test_modified_config_runs(self, tmp_path):
        data = scenario_to_dict(get_scenario("fig4a"))
        data["name"] = "fig4a-lossier"
        data["chain"][1]["efficiency"] = 0.5
        cfg = scenario_from_dict(data)
        result = run_scenario(cfg, mode="analytic")
        assert all(row.passed is None for row in result.rows)
