from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runcontext.config import DEFAULT_CONFIG
from runcontext.core import Event, EventType
from runcontext.possession import (
    AttackContext,
    AttackType,
    DefenseType,
    DefenseView,
    EndReason,
    attack_windows,
    classify_defense_span,
    defense_frame_labels,
    effective_time_ms,
    segment_possessions,
)


def touch(team: str, t_ms: int, kind: EventType = EventType.PASS) -> Event:
    return Event(t_ms=t_ms, type=kind, team_id=team, player_id=f"{team}1", x=50.0, y=34.0)


def oracle_segments(touches, t0, t1, regain_ms=3000):
    """Independent declarative replay: a challenging touch wins possession at
    its own time iff the next on-ball event is by the same team, or no event
    follows within the regain window (match end included)."""
    flips = []
    owner = None
    for i, (team, t) in enumerate(touches):
        if owner is None:
            owner = team
            flips.append((t0, team))
            continue
        if team == owner:
            continue
        nxt = touches[i + 1] if i + 1 < len(touches) else None
        wins = (
            (nxt is not None and nxt[0] == team)
            or (nxt is not None and nxt[1] - t >= regain_ms)
            or (nxt is None and t1 - t >= regain_ms)
        )
        if wins:
            flips.append((t, team))
            owner = team
    if not flips:
        return [(None, t0, t1)]
    out = []
    for (ta, team), nxt in itertools.zip_longest(flips, flips[1:]):
        tb = nxt[0] if nxt else t1
        if tb > ta:
            out.append((team, ta, tb))
    return out


def as_tuples(segments):
    return [(s.team_id, s.t_start, s.t_end) for s in segments]


class TestSegmentPossessions:
    def test_instant_regain_single_possession(self):
        events = [
            touch("A", 1000),
            touch("A", 3000),
            touch("B", 5000, EventType.RECOVERY),
            touch("A", 6500, EventType.RECOVERY),
        ]
        segs = segment_possessions(events, 0, 60_000)
        assert as_tuples(segs) == [("A", 0, 60_000)]

    def test_two_consecutive_events_flip_at_first_touch(self):
        events = [
            touch("A", 1000),
            touch("B", 5000),
            touch("B", 6000),
        ]
        segs = segment_possessions(events, 0, 60_000)
        assert as_tuples(segs) == [("A", 0, 5000), ("B", 5000, 60_000)]
        assert segs[0].end_reason is EndReason.TURNOVER

    def test_retention_flip_at_touch_time(self):
        events = [touch("A", 1000), touch("B", 5000), touch("A", 9000)]
        segs = segment_possessions(events, 0, 9500)
        # B kept the ball 4 s: flip backdated to 5000; A's late touch has no
        # time to establish before the end
        assert as_tuples(segs) == [("A", 0, 5000), ("B", 5000, 9500)]

    def test_ball_out_until_throw_in(self):
        events = [
            touch("A", 1000),
            Event(8000, EventType.BALL_OUT, "A", "A1", 50.0, 68.0),
            Event(15000, EventType.THROW_IN, "B", "B2", 50.0, 68.0),
        ]
        segs = segment_possessions(events, 0, 30_000)
        assert as_tuples(segs) == [("A", 0, 8000), (None, 8000, 15000), ("B", 15000, 30_000)]
        assert segs[0].end_reason is EndReason.BALL_OUT

    def test_foul_is_referee_stop(self):
        events = [
            touch("A", 1000),
            Event(5000, EventType.FOUL, "B", "B3", 40.0, 30.0),
            Event(9000, EventType.FREE_KICK, "A", "A4", 40.0, 30.0),
        ]
        segs = segment_possessions(events, 0, 20_000)
        assert segs[0].end_reason is EndReason.REFEREE_STOP
        assert segs[1].team_id is None
        assert segs[2].team_id == "A"

    def test_timeline_tiles_exactly(self):
        events = [
            touch("A", 500),
            touch("B", 700),
            touch("B", 900),
            Event(4000, EventType.BALL_OUT, "B", "B1", 0.0, 10.0),
            Event(9000, EventType.GOAL_KICK, "A", "A5", 5.0, 34.0),
            touch("B", 12_000),
            touch("B", 12_100),
        ]
        segs = segment_possessions(events, 0, 45_000)
        assert sum(s.duration_ms for s in segs) == 45_000
        for a, b in zip(segs, segs[1:]):
            assert a.t_end == b.t_start
        assert segs[-1].end_reason is EndReason.PERIOD_END

    def test_no_events_single_out_of_play(self):
        segs = segment_possessions([], 0, 10_000)
        assert as_tuples(segs) == [(None, 0, 10_000)]
        assert effective_time_ms(segs) == 0

    def test_unordered_events_rejected(self):
        with pytest.raises(ValueError):
            segment_possessions([touch("A", 2000), touch("A", 1000)], 0, 5000)

    def test_exhaustive_small_sequences_match_oracle(self):
        """All on-ball sequences of length <= 6 over (team, short/long gap)."""
        t_end = 60_000
        checked = 0
        for length in range(0, 7):
            for combo in itertools.product([("A", 1000), ("A", 4000), ("B", 1000), ("B", 4000)], repeat=length):
                t = 500
                touches = []
                for team, gap in combo:
                    touches.append((team, t))
                    t += gap
                events = [touch(team, tt) for team, tt in touches]
                got = [
                    (s.team_id, s.t_start, s.t_end)
                    for s in segment_possessions(events, 0, t_end)
                ]
                want = oracle_segments(touches, 0, t_end)
                assert got == want, f"mismatch for {touches}"
                checked += 1
        assert checked == sum(4**k for k in range(7))

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(
            st.tuples(st.sampled_from(["A", "B"]), st.integers(min_value=100, max_value=6000)),
            max_size=8,
        )
    )
    def test_single_short_touch_never_flips(self, steps):
        """Automaton property: a lone opponent touch below the window with a
        same-opponent follow-up absent and an owner touch within the window
        leaves possession unchanged."""
        t = 1000
        events = [touch("A", t)]
        for team, gap in steps:
            t += gap
            events.append(touch(team, t))
        t_end = t + 10_000
        segs = segment_possessions(events, 0, t_end)
        touches = [(e.team_id, e.t_ms) for e in events]
        assert [(s.team_id, s.t_start, s.t_end) for s in segs] == oracle_segments(
            touches, 0, t_end
        )
        assert sum(s.duration_ms for s in segs) == t_end


def simple_ctx(ball_x, centroids=None, length=105.0, n=None, sign=1):
    n = n if n is not None else len(ball_x)
    return AttackContext(
        match_ms=np.arange(n, dtype=np.int64) * 100,
        ball_x=np.asarray(ball_x, dtype=np.float64),
        centroid_x=centroids or {},
        length=length,
        sign_of=lambda team, t: sign,
    )


def seg(team, t0, t1):
    from runcontext.possession import PossessionSegment

    return PossessionSegment(team, t0, t1, EndReason.PERIOD_END)


class TestAttackTypes:
    def test_corner_in_opponent_half_is_set_piece(self):
        events = [Event(0, EventType.CORNER, "A", "A7", 104.0, 0.5)]
        ctx = simple_ctx(np.full(300, 90.0))
        windows = attack_windows(seg("A", 0, 30_000), events, ctx)
        assert windows[0][2] is AttackType.SET_PIECE
        assert windows[0][:2] == (0, 10_000)
        assert windows[1][2] is AttackType.ORGANIZED

    def test_counter_attack_requires_advance_and_crossing(self):
        n = 150
        ball = np.linspace(20, 75, n)  # +55 m advance
        centroids = {
            "A": np.linspace(30, 70, n),  # crosses halfway
            "B": np.linspace(60, 40, n),  # crosses halfway
        }
        events = [Event(0, EventType.RECOVERY, "A", "A6", 20.0, 34.0)]
        windows = attack_windows(
            seg("A", 0, 15_000), events, simple_ctx(ball, centroids)
        )
        assert windows[0][2] is AttackType.COUNTER_ATTACK
        assert windows[0][:2] == (0, 12_000)

    def test_counter_needs_ball_advance(self):
        n = 150
        ball = np.full(n, 25.0)
        centroids = {"A": np.linspace(30, 70, n), "B": np.linspace(60, 40, n)}
        events = [Event(0, EventType.RECOVERY, "A", "A6", 20.0, 34.0)]
        windows = attack_windows(seg("A", 0, 15_000), events, simple_ctx(ball, centroids))
        assert all(w[2] is AttackType.ORGANIZED for w in windows)

    def test_counter_without_centroids_is_low_confidence(self):
        n = 150
        ball = np.linspace(20, 75, n)
        events = [Event(0, EventType.RECOVERY, "A", "A6", 20.0, 34.0)]
        windows = attack_windows(seg("A", 0, 15_000), events, simple_ctx(ball))
        assert windows[0][2] is AttackType.COUNTER_ATTACK
        assert windows[0][3] is True  # ball-only decision

    def test_long_vertical_pass_is_direct_play(self):
        events = [
            Event(2000, EventType.PASS, "A", "A2", 20.0, 34.0, end_x=60.0, end_y=30.0)
        ]
        ctx = simple_ctx(np.full(400, 50.0))
        windows = attack_windows(seg("A", 0, 40_000), events, ctx)
        labels = {w[2] for w in windows}
        assert AttackType.DIRECT_PLAY in labels
        dp = next(w for w in windows if w[2] is AttackType.DIRECT_PLAY)
        assert dp[:2] == (2000, 40_000)

    def test_short_pass_stays_organized(self):
        events = [
            Event(2000, EventType.PASS, "A", "A2", 20.0, 34.0, end_x=40.0, end_y=30.0)
        ]
        windows = attack_windows(seg("A", 0, 40_000), events, simple_ctx(np.full(400, 50.0)))
        assert all(w[2] is AttackType.ORGANIZED for w in windows)

    def test_set_piece_beats_counter(self):
        events = [
            Event(0, EventType.RECOVERY, "A", "A6", 20.0, 34.0),
            Event(1000, EventType.CORNER, "A", "A7", 104.0, 0.5),
        ]
        n = 150
        ball = np.linspace(20, 75, n)
        centroids = {"A": np.linspace(30, 70, n), "B": np.linspace(60, 40, n)}
        windows = attack_windows(seg("A", 0, 15_000), events, simple_ctx(ball, centroids))
        by_label = {w[2]: w for w in windows}
        assert AttackType.SET_PIECE in by_label
        assert by_label[AttackType.SET_PIECE][0] == 1000


def defense_view(norm_x, y=None, length=105.0):
    norm_x = np.asarray(norm_x, dtype=np.float64)
    n, k = norm_x.shape
    y = np.asarray(y) if y is not None else np.tile(np.linspace(10, 58, k), (n, 1))
    return DefenseView(np.arange(n, dtype=np.int64) * 100, norm_x, y, length)


class TestDefenseTypes:
    def test_all_in_own_half_low_block(self):
        # defending team attacks +x, so its own half is x <= 52.5
        xs = np.tile(np.linspace(5, 30, 10), (50, 1))
        labels = defense_frame_labels(defense_view(xs))
        assert classify_defense_span(labels, np.arange(50) * 100, 0, 5000) is DefenseType.LOW_BLOCK

    def test_high_pressure(self):
        # whole block advanced past halfway, four defenders in the last third
        xs = np.tile(np.array([55, 57, 58, 60, 62, 64, 72, 74, 76, 78.0]), (50, 1))
        labels = defense_frame_labels(defense_view(xs))
        assert (
            classify_defense_span(labels, np.arange(50) * 100, 0, 5000)
            is DefenseType.HIGH_PRESSURE
        )

    def test_advanced_but_few_in_last_third(self):
        xs = np.tile(np.array([54, 55, 56, 57, 58, 59, 60, 61, 62, 76.0]), (50, 1))
        labels = defense_frame_labels(defense_view(xs))
        assert (
            classify_defense_span(labels, np.arange(50) * 100, 0, 5000)
            is DefenseType.MEDIUM_BLOCK
        )

    def test_straddling_hull_is_medium_and_matches_clip_oracle(self):
        shapely = pytest.importorskip("shapely.geometry")
        rng = np.random.default_rng(5)
        xs = rng.uniform(40, 65, size=(1, 10))
        ys = rng.uniform(10, 58, size=(1, 10))
        labels = defense_frame_labels(defense_view(xs, ys))
        pts = list(zip(xs[0], ys[0]))
        from runcontext.geometry import convex_hull

        hull = convex_hull(pts)
        poly = shapely.Polygon(hull)
        beyond = poly.intersection(shapely.box(52.5, -100, 1000, 100)).area / poly.area
        expected = (
            DefenseType.HIGH_PRESSURE
            if beyond >= 0.9 and int(np.sum(xs[0] > 70.0)) >= 3
            else DefenseType.MEDIUM_BLOCK
        )
        assert classify_defense_span(labels, np.array([0]), 0, 100) is expected

    def test_monotone_in_block_depth(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            base = rng.uniform(20, 70, size=(1, 10))
            l0 = defense_frame_labels(defense_view(base))[0]
            l1 = defense_frame_labels(defense_view(base + 20.0))[0]
            # +x pushes the block up: the label never moves toward low block
            assert l1 >= l0

    def test_insufficient_visibility_unknown(self):
        xs = np.full((50, 10), np.nan)
        xs[:10, :] = 30.0  # only 20% of frames usable, and those are degenerate
        labels = defense_frame_labels(defense_view(xs))
        assert (
            classify_defense_span(labels, np.arange(50) * 100, 0, 5000) is DefenseType.UNKNOWN
        )
