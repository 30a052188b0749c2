"""Deterministic block-construction gridworld.

Cells are addressed (x, y) with x increasing rightward and y upward; row 0 is
the ground. Occupancy and target shapes are bitmaps stored as Python ints with
cell (x, y) at bit y * width + x. Blocks drop straight down onto the highest
obstruction in their column span, are never removed, and a placement is legal
only when its settled footprint lies entirely inside the active region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

DEFAULT_WIDTH = 8
DEFAULT_HEIGHT = 8


class IllegalAction(ValueError):
    """Placement outside the active region or overlapping occupied cells."""


@dataclass(frozen=True)
class BlockShape:
    """Rectangular block, width x height in cells."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"block dimensions must be positive, got {self.width}x{self.height}")

    @property
    def area(self) -> int:
        return self.width * self.height

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


@dataclass(frozen=True)
class Inventory:
    """Ordered, duplicate-free collection of block shapes available every step."""

    blocks: tuple[BlockShape, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("inventory must not be empty")
        dims = [(b.width, b.height) for b in self.blocks]
        if len(set(dims)) != len(dims):
            raise ValueError("inventory contains duplicate block shapes")

    @property
    def min_area(self) -> int:
        return min(b.area for b in self.blocks)

    @property
    def max_area(self) -> int:
        return max(b.area for b in self.blocks)

    @classmethod
    def parse(cls, text: str) -> "Inventory":
        """Parse a comma-separated list like ``1x2,2x1,2x2``."""
        blocks = []
        for part in text.split(","):
            w, sep, h = part.strip().partition("x")
            if not sep:
                raise ValueError(f"bad block spec {part!r}, expected WxH")
            blocks.append(BlockShape(int(w), int(h)))
        return cls(tuple(blocks))

    def __str__(self) -> str:
        return ",".join(str(b) for b in self.blocks)


DEFAULT_INVENTORY = Inventory(
    (BlockShape(1, 2), BlockShape(2, 1), BlockShape(2, 2), BlockShape(4, 2), BlockShape(2, 4))
)


@dataclass(frozen=True)
class Silhouette:
    """Target shape bitmap on a width x height grid. The top row is non-empty."""

    width: int
    height: int
    bits: int
    id: str = ""

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        full = (1 << (self.width * self.height)) - 1
        if self.bits <= 0:
            raise ValueError("silhouette has no target cells")
        if self.bits & ~full:
            raise ValueError("silhouette bits fall outside the grid")
        if not self.bits >> ((self.height - 1) * self.width):
            raise ValueError("silhouette top row is empty; height should be trimmed")

    def cell(self, x: int, y: int) -> bool:
        return bool((self.bits >> (y * self.width + x)) & 1)

    def row_bits(self, y: int) -> int:
        return ((1 << self.width) - 1) << (y * self.width)

    @property
    def area(self) -> int:
        return self.bits.bit_count()


@dataclass(frozen=True)
class Region:
    """A planning region: a subset of the silhouette's cells.

    ``extent`` covers every grid cell in rows 0..top_row; a state matches the
    region when the mask is filled and no other extent cell is occupied.
    """

    silhouette: Silhouette
    mask: int
    top_row: int = field(init=False, compare=False, repr=False)
    extent: int = field(init=False, compare=False, repr=False)
    area: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.mask & ~self.silhouette.bits:
            raise ValueError("region mask extends outside the silhouette")
        top_row = (self.mask.bit_length() - 1) // self.silhouette.width if self.mask else -1
        object.__setattr__(self, "top_row", top_row)
        object.__setattr__(self, "extent", (1 << ((top_row + 1) * self.silhouette.width)) - 1)
        object.__setattr__(self, "area", self.mask.bit_count())


@dataclass(frozen=True)
class Action:
    """Drop block ``block`` (an inventory index) into columns starting at ``x``."""

    block: int
    x: int


def _heights_from_bits(bits: int, width: int, height: int) -> tuple[int, ...]:
    heights = [0] * width
    for x in range(width):
        col = 0
        for y in range(height):
            if (bits >> (y * width + x)) & 1:
                col = y + 1
        heights[x] = col
    return tuple(heights)


@dataclass(frozen=True)
class WorldState:
    """Immutable build state: occupancy bitmap plus the placement history.

    ``heights[x]`` is one above the highest occupied row in column x (0 when
    empty), i.e. the row where the next block bottom would settle. It is
    derived from ``occ`` when not supplied.
    """

    silhouette: Silhouette
    inventory: Inventory
    occ: int = 0
    placements: tuple[tuple[BlockShape, int, int], ...] = ()
    heights: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.heights:
            object.__setattr__(
                self,
                "heights",
                _heights_from_bits(self.occ, self.silhouette.width, self.silhouette.height),
            )

    def occupied(self, x: int, y: int) -> bool:
        return bool((self.occ >> (y * self.silhouette.width + x)) & 1)


def empty_state(silhouette: Silhouette, inventory: Inventory = DEFAULT_INVENTORY) -> WorldState:
    return WorldState(silhouette, inventory)


def full_region(silhouette: Silhouette) -> Region:
    return Region(silhouette, silhouette.bits)


def subgoal_region(silhouette: Silhouette, h: int) -> Region:
    """The bottom ``h`` rows of the silhouette as a planning region."""
    if not 1 <= h <= silhouette.height:
        raise ValueError(f"subgoal height {h} outside 1..{silhouette.height}")
    rows = (1 << (h * silhouette.width)) - 1
    return Region(silhouette, silhouette.bits & rows)


def footprint_bits(block: BlockShape, x: int, y: int, width: int) -> int:
    """Bitmap of the cells covered by ``block`` with bottom-left corner (x, y)."""
    row = ((1 << block.width) - 1) << x
    fp = 0
    for dy in range(block.height):
        fp |= row << ((y + dy) * width)
    return fp


def drop_height(state: WorldState, block: BlockShape, x: int) -> int:
    """Resting row for a block dropped at column x: the max height in its span."""
    if x < 0 or x + block.width > state.silhouette.width:
        raise ValueError(f"drop column {x} out of range for {block}")
    return max(state.heights[x : x + block.width])


def legal_actions(state: WorldState, region: Region) -> list[Action]:
    """All legal drops, ordered by block index then x."""
    sil = state.silhouette
    out = []
    for bi, block in enumerate(state.inventory.blocks):
        for x in range(sil.width - block.width + 1):
            y = max(state.heights[x : x + block.width])
            if y + block.height > sil.height:
                continue
            fp = footprint_bits(block, x, y, sil.width)
            if fp & ~region.mask:
                continue
            if fp & state.occ:  # cannot happen for drop-rule states; guards synthetic ones
                continue
            out.append(Action(bi, x))
    return out


def apply(state: WorldState, action: Action, region: Region | None = None) -> WorldState:
    """Drop a block and return the successor state.

    Legality is checked against ``region`` (the full silhouette when omitted).
    """
    sil = state.silhouette
    block = state.inventory.blocks[action.block]
    if action.x < 0 or action.x + block.width > sil.width:
        raise IllegalAction(f"drop column {action.x} out of range for {block}")
    y = max(state.heights[action.x : action.x + block.width])
    if y + block.height > sil.height:
        raise IllegalAction(f"{block} at x={action.x} settles above the grid (y={y})")
    fp = footprint_bits(block, action.x, y, sil.width)
    mask = region.mask if region is not None else sil.bits
    if fp & ~mask:
        raise IllegalAction(f"{block} at x={action.x}, y={y} leaves the active region")
    if fp & state.occ:
        raise IllegalAction(f"{block} at x={action.x}, y={y} overlaps occupied cells")
    heights = list(state.heights)
    for c in range(action.x, action.x + block.width):
        heights[c] = y + block.height
    return WorldState(
        sil,
        state.inventory,
        state.occ | fp,
        state.placements + ((block, action.x, y),),
        tuple(heights),
    )


def is_match(state: WorldState, region: Region) -> bool:
    """True when the mask is exactly filled and nothing else occupies rows <= top_row."""
    return (
        state.occ & region.mask == region.mask
        and state.occ & region.extent & ~region.mask == 0
    )


def filled_area(state: WorldState, region: Region) -> int:
    return (state.occ & region.mask).bit_count()


def prefix_height(state: WorldState) -> int:
    """Largest h such that occupancy below row h equals the silhouette below row h."""
    diff = state.occ ^ state.silhouette.bits
    if diff == 0:
        return state.silhouette.height
    lsb_index = (diff & -diff).bit_length() - 1
    return lsb_index // state.silhouette.width


# ---- precomputed placement geometry ----


class PlacementTables:
    """Per-(grid, inventory) placement tables shared by the search kernels.

    ``cands`` holds one tuple per (block, x) candidate in canonical order
    (block index ascending, then x ascending):

        (shifts, maxy, fps, keep, repl, area, bh)

    where ``shifts`` are the packed-height bit offsets of the spanned columns,
    ``maxy`` the highest legal resting row, ``fps[y]`` the footprint bitmap,
    and ``keep``/``repl`` update the packed heights via
    ``hp_new = (hp & keep) | (y + bh) * repl``.
    """

    def __init__(self, width: int, height: int, inventory: Inventory):
        self.width = width
        self.height = height
        self.inventory = inventory
        self.nbits = max(1, height.bit_length())
        self.hmask = (1 << self.nbits) - 1
        self.full = (1 << (width * height)) - 1
        hp_all = (1 << (self.nbits * width)) - 1
        cands = []
        actions = []
        for bi, block in enumerate(inventory.blocks):
            for x in range(width - block.width + 1):
                shifts = tuple(self.nbits * c for c in range(x, x + block.width))
                maxy = height - block.height
                if maxy < 0:
                    continue
                fps = tuple(footprint_bits(block, x, y, width) for y in range(maxy + 1))
                repl = sum(1 << s for s in shifts)
                keep = hp_all ^ (repl * self.hmask)
                cands.append((shifts, maxy, fps, keep, repl, block.area, block.height))
                actions.append(Action(bi, x))
        self.cands = tuple(cands)
        self.actions = tuple(actions)
        # the vector kernel needs every bitmap in a machine word
        self.fits64 = width * height <= 64 and self.nbits * width <= 64

    def pack_heights(self, heights: tuple[int, ...]) -> int:
        hp = 0
        for c, v in enumerate(heights):
            hp |= v << (self.nbits * c)
        return hp


@lru_cache(maxsize=None)
def placement_tables(width: int, height: int, inventory: Inventory) -> PlacementTables:
    return PlacementTables(width, height, inventory)
