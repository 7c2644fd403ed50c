from coopkitchen.core.layout import (
    COUNTER,
    DISH_SOURCE,
    FLOOR,
    LayoutError,
    MissingFeature,
    NonRectangular,
    ONION_SOURCE,
    POT,
    SERVING,
    SpawnCountNot2,
    SpawnsNotConnected,
    UnenclosedBoundary,
    UnknownTile,
    Layout,
    bundled_layout,
    bundled_layout_names,
    load_layout_file,
    parse_layout,
)
from coopkitchen.core.state import (
    COOK_TIME,
    DISH,
    ONION,
    SOUP,
    Action,
    Event,
    History,
    InvariantViolation,
    ParseError,
    PlayerState,
    PotState,
    WorldState,
    deserialize_state,
    serialize_state,
)
from coopkitchen.core.engine import (
    DELIVERY_REWARD,
    InvalidState,
    StepOutcome,
    initial_state,
    step,
    validate_state,
)

__all__ = [
    "Action",
    "COOK_TIME",
    "COUNTER",
    "DELIVERY_REWARD",
    "DISH",
    "DISH_SOURCE",
    "Event",
    "FLOOR",
    "History",
    "InvalidState",
    "InvariantViolation",
    "Layout",
    "LayoutError",
    "MissingFeature",
    "NonRectangular",
    "ONION",
    "ONION_SOURCE",
    "POT",
    "ParseError",
    "PlayerState",
    "PotState",
    "SERVING",
    "SOUP",
    "SpawnCountNot2",
    "SpawnsNotConnected",
    "StepOutcome",
    "UnenclosedBoundary",
    "UnknownTile",
    "WorldState",
    "bundled_layout",
    "bundled_layout_names",
    "deserialize_state",
    "initial_state",
    "load_layout_file",
    "parse_layout",
    "serialize_state",
    "validate_state",
]
