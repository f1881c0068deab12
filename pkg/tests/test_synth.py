from __future__ import annotations

import pytest

from runcontext.kinematics import compute_speed, segment_runs
from runcontext.synth import (
    EventSpec,
    FormationPlacement,
    Move,
    PlayerScript,
    PossessionSpan,
    Script,
    ScriptError,
    approach_reception_drive_script,
    generate,
    load_script,
    save_script,
    script_from_dict,
    script_to_dict,
    two_block_match_script,
    validate,
)


class TestValidate:
    def test_overlapping_moves_rejected(self):
        p = PlayerScript(
            "p1",
            "h",
            (10.0, 10.0),
            (Move(0.0, 0.0, 20.0, 30.0), Move(2.0, 0.0, 20.0, 30.0)),
        )
        with pytest.raises(ScriptError, match="overlap"):
            validate(Script(seed=1, duration_s=60.0, players=(p,)))

    def test_impossible_distance_rejected(self):
        p = PlayerScript("p1", "h", (10.0, 10.0), (Move(0.0, 0.0, 30.0, 2.0),))
        with pytest.raises(ScriptError, match="too short"):
            validate(Script(seed=1, duration_s=60.0, players=(p,)))

    def test_superhuman_speed_rejected(self):
        p = PlayerScript("p1", "h", (10.0, 10.0), (Move(0.0, 0.0, 50.0, 100.0),))
        with pytest.raises(ScriptError, match="cap"):
            validate(Script(seed=1, duration_s=60.0, players=(p,)))

    def test_counter_span_needs_recovery_event(self):
        with pytest.raises(ScriptError, match="recovery"):
            validate(
                Script(
                    seed=1,
                    duration_s=60.0,
                    possession=(PossessionSpan("h", 0.0, 30.0, "counter_attack"),),
                )
            )

    def test_event_off_pitch_rejected(self):
        with pytest.raises(ScriptError, match="off the pitch"):
            validate(
                Script(
                    seed=1,
                    duration_s=60.0,
                    events=(EventSpec(1.0, "pass", "h", "p1", (200.0, 34.0)),),
                )
            )


class TestGenerate:
    def test_deterministic_byte_identical(self, tmp_path):
        script = two_block_match_script(duration_s=120.0)
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        generate(script).write(a_dir)
        generate(script).write(b_dir)
        for name in ("tracking.jsonl", "events.json", "meta.json", "truth.json"):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()

    def test_empty_script_empty_match(self):
        match = generate(Script(seed=1, duration_s=0.0))
        assert match.sequences == []
        assert match.events == []
        assert match.truth.possession == []

    def test_bundled_trace_truth_declares_three_runs(self):
        match = generate(approach_reception_drive_script())
        runs = match.truth.runs["h10"]
        assert [round(r.peak_kmh, 1) for r in runs] == [6.2, 21.4, 21.4]
        assert [r.is_hi for r in runs] == [False, True, True]

    def test_speeds_reverse_engineer_to_cruise(self):
        script = approach_reception_drive_script()
        match = generate(script)
        seq = match.sequences[0]
        j = seq.index_of("h10")
        sig = compute_speed(seq.t_ms, seq.xy[:, j, :], "h10")
        # away from ramps the smoothed signal sits on the scripted cruise speed
        for mv in script.players[0].moves:
            t_acc, t_cruise, t_dec, _, _ = mv.phases()
            mid = mv.t_start_s + t_acc + t_cruise / 2.0
            i = int(round(mid * 10))
            assert abs(sig.smooth_kmh[i] - mv.cruise_kmh) < 0.3

    def test_measured_runs_match_truth_within_tolerance(self):
        match = generate(approach_reception_drive_script())
        seq = match.sequences[0]
        j = seq.index_of("h10")
        sig = compute_speed(seq.t_ms, seq.xy[:, j, :], "h10")
        runs = segment_runs(sig)
        truth = match.truth.runs["h10"]
        assert len(runs) == len(truth) == 3
        for got, want in zip(runs, truth):
            assert abs(got.peak_speed - want.peak_kmh) < 0.5
            assert abs(got.t_valley_end - want.t_valley_end) <= 200
            assert abs(got.t_peak_start - want.t_peak_start) <= 200
            assert abs(got.t_peak_end - want.t_peak_end) <= 200
            assert abs(got.t_next_valley_start - want.t_next_valley_start) <= 200

    def test_formation_players_hold_slots(self):
        script = two_block_match_script(duration_s=120.0)
        match = generate(script)
        seq = match.sequences[0]
        assert len(seq.player_ids) == 22
        assert match.truth.roles["h10"] == "striker"
        assert match.truth.roles["hgk"] == "goalkeeper"
        assert match.truth.formations["h"][0][2] == "4-3-3"

    def test_possession_truth_carried_through(self):
        match = generate(two_block_match_script(duration_s=400.0))
        spans = match.truth.possession
        assert spans[0].team == "h"
        assert any(s.team is None for s in spans)
        assert spans[-1].t1_ms == 400_000

    def test_script_round_trip(self, tmp_path):
        script = two_block_match_script(duration_s=90.0)
        path = tmp_path / "script.json"
        save_script(script, path)
        assert load_script(path) == script
        assert script_from_dict(script_to_dict(script)) == script
