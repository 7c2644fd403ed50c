"""Static kitchen geometry: tile grid, feature cells, and spawn points.

Layouts are parsed from ASCII art where each character is one tile.
Coordinates are (x, y) with x growing rightward and y growing downward,
so (0, 0) is the top-left corner.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

FLOOR = " "
COUNTER = "X"
ONION_SOURCE = "O"
DISH_SOURCE = "D"
POT = "P"
SERVING = "S"

TILE_KINDS = {FLOOR, COUNTER, ONION_SOURCE, DISH_SOURCE, POT, SERVING}
SPAWN_CHARS = ("1", "2")

Cell = tuple[int, int]


class LayoutError(ValueError):
    """Base class for layout parsing and validation failures."""


class NonRectangular(LayoutError):
    pass


class UnknownTile(LayoutError):
    def __init__(self, char: str, row: int, col: int):
        super().__init__(f"unknown tile {char!r} at row {row}, col {col}")
        self.char, self.row, self.col = char, row, col


class MissingFeature(LayoutError):
    def __init__(self, kind: str):
        super().__init__(f"layout has no {kind!r} tile")
        self.kind = kind


class UnenclosedBoundary(LayoutError):
    pass


class SpawnCountNot2(LayoutError):
    pass


class SpawnsNotConnected(LayoutError):
    pass


@dataclass(frozen=True)
class Layout:
    """Immutable grid of tiles plus the two player spawn cells."""

    name: str
    tiles: tuple[str, ...]  # rows of tile characters, spawn chars replaced by FLOOR
    spawn_points: tuple[Cell, Cell]
    width: int = field(init=False)
    height: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "width", len(self.tiles[0]))
        object.__setattr__(self, "height", len(self.tiles))

    def tile(self, cell: Cell) -> str:
        x, y = cell
        return self.tiles[y][x]

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_floor(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height and self.tiles[y][x] == FLOOR

    def cells_of(self, kind: str) -> list[Cell]:
        """All cells of a tile kind, in row-major order."""
        return [
            (x, y)
            for y, row in enumerate(self.tiles)
            for x, ch in enumerate(row)
            if ch == kind
        ]

    @property
    def pots(self) -> list[Cell]:
        return self.cells_of(POT)

    @property
    def onion_sources(self) -> list[Cell]:
        return self.cells_of(ONION_SOURCE)

    @property
    def dish_sources(self) -> list[Cell]:
        return self.cells_of(DISH_SOURCE)

    @property
    def serving_cells(self) -> list[Cell]:
        return self.cells_of(SERVING)

    @property
    def counters(self) -> list[Cell]:
        return self.cells_of(COUNTER)

    @property
    def floor_cells(self) -> list[Cell]:
        return self.cells_of(FLOOR)

    def floor_neighbors(self, cell: Cell) -> list[Cell]:
        x, y = cell
        return [
            c
            for c in ((x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y))
            if self.is_floor(c)
        ]

    def as_text(self) -> str:
        """ASCII grid with spawn markers restored (inverse of parse_layout)."""
        rows = [list(row) for row in self.tiles]
        for i, (x, y) in enumerate(self.spawn_points):
            rows[y][x] = SPAWN_CHARS[i]
        return "\n".join("".join(row) for row in rows)


def parse_layout(text: str, name: str = "unnamed") -> Layout:
    """Parse an ASCII grid into a validated Layout.

    Characters: X counter, O onion dispenser, D dish dispenser, P pot,
    S serving, space floor, '1'/'2' floor plus spawn point.
    """
    lines = [line for line in text.split("\n") if line.strip("\r")]
    lines = [line.rstrip("\r") for line in lines]
    if not lines:
        raise NonRectangular("empty layout")
    width = len(lines[0])
    if any(len(line) != width for line in lines):
        raise NonRectangular("rows have differing lengths")

    spawns: dict[str, Cell] = {}
    rows: list[str] = []
    for y, line in enumerate(lines):
        row = []
        for x, ch in enumerate(line):
            if ch in SPAWN_CHARS:
                if ch in spawns:
                    raise SpawnCountNot2(f"duplicate spawn marker {ch!r}")
                spawns[ch] = (x, y)
                row.append(FLOOR)
            elif ch in TILE_KINDS:
                row.append(ch)
            else:
                raise UnknownTile(ch, y, x)
        rows.append("".join(row))

    if set(spawns) != set(SPAWN_CHARS):
        raise SpawnCountNot2(f"expected spawn markers 1 and 2, found {sorted(spawns)}")

    layout = Layout(name=name, tiles=tuple(rows), spawn_points=(spawns["1"], spawns["2"]))
    validate_layout(layout)
    return layout


def validate_layout(layout: Layout) -> None:
    for y in range(layout.height):
        for x in range(layout.width):
            on_edge = x in (0, layout.width - 1) or y in (0, layout.height - 1)
            if on_edge and layout.tiles[y][x] == FLOOR:
                raise UnenclosedBoundary(f"floor cell on boundary at ({x}, {y})")

    for kind, label in (
        (ONION_SOURCE, "OnionDispenser"),
        (DISH_SOURCE, "DishDispenser"),
        (POT, "Pot"),
        (SERVING, "Serving"),
    ):
        if not layout.cells_of(kind):
            raise MissingFeature(label)

    s0, s1 = layout.spawn_points
    if s0 == s1:
        raise SpawnCountNot2("spawn points coincide")
    for s in (s0, s1):
        if not layout.is_floor(s):
            raise SpawnCountNot2(f"spawn point {s} is not a floor cell")
    if s1 not in _reachable_floor(layout, s0):
        raise SpawnsNotConnected(f"no floor path between spawns {s0} and {s1}")


def _reachable_floor(layout: Layout, start: Cell) -> set[Cell]:
    seen = {start}
    frontier = deque([start])
    while frontier:
        cell = frontier.popleft()
        for nxt in layout.floor_neighbors(cell):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def load_layout_file(path: str | Path) -> Layout:
    path = Path(path)
    return parse_layout(path.read_text(), name=path.stem)


def _data_dir():
    return resources.files("coopkitchen") / "data"


def bundled_layout_names() -> list[str]:
    base = _data_dir() / "layouts"
    return sorted(p.name.removesuffix(".layout") for p in base.iterdir() if p.name.endswith(".layout"))


def bundled_layout(name: str) -> Layout:
    res = _data_dir() / "layouts" / f"{name}.layout"
    try:
        text = res.read_text()
    except FileNotFoundError:
        raise LayoutError(f"unknown bundled layout {name!r}; available: {bundled_layout_names()}") from None
    return parse_layout(text, name=name)
