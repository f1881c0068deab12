from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runcontext.core import (
    Frame,
    PitchSpec,
    PlayerPosition,
    Role,
    SpeedCategory,
    TrackingSequence,
    normalize_direction,
    speed_category,
)


def make_frame(ball=(10.0, 10.0), players=(), attacking=None, t_ms=0):
    return Frame(
        t_ms=t_ms,
        period=1,
        ball_x=ball[0],
        ball_y=ball[1],
        players=tuple(players),
        attacking=attacking or {"h": 1, "a": -1},
    )


class TestSpeedCategory:
    def test_walking_below_six(self):
        assert speed_category(5.9) is SpeedCategory.WALKING

    def test_sprinting_boundary_closed(self):
        assert speed_category(21.0) is SpeedCategory.SPRINTING
        assert speed_category(20.9) is SpeedCategory.RUNNING

    def test_running_boundary(self):
        assert speed_category(14.0) is SpeedCategory.RUNNING
        assert speed_category(13.9) is SpeedCategory.JOGGING
        assert speed_category(6.0) is SpeedCategory.JOGGING

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            speed_category(-0.1)

    @given(st.floats(min_value=0, max_value=60), st.floats(min_value=0, max_value=60))
    def test_monotone(self, v1, v2):
        if v1 > v2:
            v1, v2 = v2, v1
        assert speed_category(v1) <= speed_category(v2)


class TestPitchSpec:
    def test_goal_centers_on_boundary_mid_width(self):
        p = PitchSpec()
        assert p.goal_center_home == (0.0, 34.0)
        assert p.goal_center_away == (105.0, 34.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PitchSpec(length=0)


class TestFrame:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            make_frame(players=[PlayerPosition("p1", "h", 0, 0), PlayerPosition("p1", "h", 1, 1)])

    def test_twelve_players_rejected(self):
        players = [PlayerPosition(f"p{i}", "h", float(i), 0.0) for i in range(12)]
        with pytest.raises(ValueError):
            make_frame(players=players)


class TestNormalizeDirection:
    def test_identity_when_already_plus_x(self):
        f = make_frame()
        assert normalize_direction(f, "h", PitchSpec()) is f

    def test_reflection_arithmetic(self):
        f = make_frame(ball=(10.0, 10.0))
        g = normalize_direction(f, "a", PitchSpec())
        assert (g.ball_x, g.ball_y) == (95.0, 58.0)

    def test_idempotent(self):
        f = make_frame(players=[PlayerPosition("p1", "a", 30.0, 20.0)])
        once = normalize_direction(f, "a", PitchSpec())
        twice = normalize_direction(once, "a", PitchSpec())
        assert once == twice

    def test_unknown_team(self):
        with pytest.raises(KeyError):
            normalize_direction(make_frame(), "x", PitchSpec())

    @given(
        st.lists(
            st.tuples(
                st.floats(min_value=0, max_value=105),
                st.floats(min_value=0, max_value=68),
            ),
            min_size=2,
            max_size=8,
        )
    )
    def test_preserves_pairwise_distances(self, pts):
        players = [PlayerPosition(f"p{i}", "a", x, y) for i, (x, y) in enumerate(pts)]
        f = make_frame(players=players)
        g = normalize_direction(f, "a", PitchSpec())
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d0 = np.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
                p, q = g.players[i], g.players[j]
                d1 = np.hypot(p.x - q.x, p.y - q.y)
                assert abs(d0 - d1) < 1e-9


class TestRole:
    def test_exactly_seven_roles(self):
        assert len(Role) == 7


class TestTrackingSequenceRoundTrip:
    @settings(max_examples=25, deadline=None)
    @given(st.data())
    def test_frames_round_trip(self, data):
        n = data.draw(st.integers(min_value=1, max_value=6))
        frames = []
        for i in range(n):
            k = data.draw(st.integers(min_value=0, max_value=4))
            players = tuple(
                PlayerPosition(
                    f"p{j}",
                    "h" if j % 2 == 0 else "a",
                    data.draw(st.floats(min_value=0, max_value=105)),
                    data.draw(st.floats(min_value=0, max_value=68)),
                )
                for j in range(k)
            )
            frames.append(
                Frame(
                    t_ms=i * 100,
                    period=1,
                    ball_x=data.draw(st.floats(min_value=0, max_value=105)),
                    ball_y=data.draw(st.floats(min_value=0, max_value=68)),
                    players=players,
                    attacking={"h": 1, "a": -1},
                    in_play=data.draw(st.booleans()),
                )
            )
        seq = TrackingSequence.from_frames(frames)
        back = list(seq.frames())
        assert back == frames
