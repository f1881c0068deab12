"""Contextualized physical-performance profiles from soccer tracking data."""

from .config import DEFAULT_CONFIG, PipelineConfig
from .core import (
    Event,
    EventType,
    Frame,
    PitchSpec,
    PlayerPosition,
    Role,
    SpeedCategory,
    TrackingSequence,
    normalize_direction,
    speed_category,
)
from .kinematics import RunEffort, SpeedSignal, compute_speed, segment_runs, treat_outliers
from .possession import (
    AttackType,
    DefenseType,
    PossessionSegment,
    effective_time_ms,
    segment_possessions,
)
from .tactical import (
    DynamicLines,
    MovementType,
    TeamBlock,
    Zone,
    build_block,
    classify_run,
    classify_zone,
    fit_lines,
)
from .formations import (
    DEFAULT_TEMPLATES,
    FormationFit,
    FormationTemplate,
    assign_formation,
    build_role_timeline,
    mean_relative_positions,
    simplify_role,
)
from .valuation import (
    CsvEpv,
    Discarded,
    EpvProvider,
    RunInfluenceModel,
    RunValueSample,
    SurrogateEpv,
    fit_influence,
    value_run,
)
from .profiles import (
    PlayerProfile,
    ProfileRepository,
    TeamStyle,
    lineup_aggregate,
    lineup_diff,
    minute_curves,
    per30,
    per60,
    style_pca,
)
from .pipeline import ARTIFACT_KINDS, process_bundle
from .synth import GroundTruth, Script, SynthMatch, generate

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "PipelineConfig",
    "Event",
    "EventType",
    "Frame",
    "PitchSpec",
    "PlayerPosition",
    "Role",
    "SpeedCategory",
    "TrackingSequence",
    "normalize_direction",
    "speed_category",
    "RunEffort",
    "SpeedSignal",
    "compute_speed",
    "segment_runs",
    "treat_outliers",
    "AttackType",
    "DefenseType",
    "PossessionSegment",
    "effective_time_ms",
    "segment_possessions",
    "DynamicLines",
    "MovementType",
    "TeamBlock",
    "Zone",
    "build_block",
    "classify_run",
    "classify_zone",
    "fit_lines",
    "DEFAULT_TEMPLATES",
    "FormationFit",
    "FormationTemplate",
    "assign_formation",
    "build_role_timeline",
    "mean_relative_positions",
    "simplify_role",
    "CsvEpv",
    "Discarded",
    "EpvProvider",
    "RunInfluenceModel",
    "RunValueSample",
    "SurrogateEpv",
    "fit_influence",
    "value_run",
    "PlayerProfile",
    "ProfileRepository",
    "TeamStyle",
    "lineup_aggregate",
    "lineup_diff",
    "minute_curves",
    "per30",
    "per60",
    "style_pca",
    "ARTIFACT_KINDS",
    "process_bundle",
    "GroundTruth",
    "Script",
    "SynthMatch",
    "generate",
]
