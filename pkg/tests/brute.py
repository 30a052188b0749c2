"""Slow reference implementations over explicit (x, y) cell sets.

Deliberately independent of the package's bitmap encodings: everything here
works on frozensets of coordinate pairs and plain loops, so the fast code can
be checked against it cell by cell.
"""

from __future__ import annotations

from collections import deque

Cells = frozenset


def block_cells(w: int, h: int, x: int, y: int) -> Cells:
    return frozenset((x + dx, y + dy) for dx in range(w) for dy in range(h))


def drop_y(occ: Cells, w: int, x: int) -> int:
    """Resting row: one above the highest occupied cell in the spanned columns."""
    y = 0
    for cx, cy in occ:
        if x <= cx < x + w and cy + 1 > y:
            y = cy + 1
    return y


def legal_placements(occ: Cells, mask: Cells, blocks, grid_w: int):
    """All (block_index, x) whose dropped footprint fits inside mask, no overlap.

    Ordered block index ascending, then x ascending.
    """
    out = []
    for bi, (w, h) in enumerate(blocks):
        for x in range(grid_w - w + 1):
            y = drop_y(occ, w, x)
            cells = block_cells(w, h, x, y)
            if cells <= mask and not (cells & occ):
                out.append((bi, x))
    return out


def apply_placement(occ: Cells, blocks, grid_w: int, bi: int, x: int) -> Cells:
    w, h = blocks[bi]
    y = drop_y(occ, w, x)
    return occ | block_cells(w, h, x, y)


def matches(occ: Cells, mask: Cells) -> bool:
    """Mask exactly filled and nothing else occupied at or below its top row."""
    if not mask <= occ:
        return False
    top = max(y for _, y in mask)
    return all(c in mask for c in occ if c[1] <= top)


def filled(occ: Cells, mask: Cells) -> int:
    return len(occ & mask)


def prefix_rows(occ: Cells, sil: Cells, height: int, width: int) -> int:
    h = 0
    while h < height:
        row_sil = {(x, h) for x in range(width) if (x, h) in sil}
        row_occ = {(x, h) for x in range(width) if (x, h) in occ}
        if row_sil != row_occ:
            break
        h += 1
    return h


def cells_from_bits(bits: int, width: int) -> Cells:
    out = set()
    i = 0
    while bits >> i:
        if (bits >> i) & 1:
            out.add((i % width, i // width))
        i += 1
    return frozenset(out)


def bfs_levels(occ: Cells, mask: Cells, blocks, grid_w: int, depth: int):
    """Reference breadth-first tree enumeration without deduplication.

    Returns (per_level_generated, matched_level), where matched_level is the
    first level containing a state that matches mask (None if none within
    depth). Mirrors the contract that expansion stops after the level where a
    match appears.
    """
    frontier = [occ]
    per_level = []
    for level in range(1, depth + 1):
        nxt = []
        for s in frontier:
            for bi, x in legal_placements(s, mask, blocks, grid_w):
                nxt.append(apply_placement(s, blocks, grid_w, bi, x))
        per_level.append(len(nxt))
        if any(matches(s, mask) for s in nxt):
            return per_level, level
        frontier = nxt
        if not frontier:
            break
    return per_level, None


def min_blocks(mask: Cells, blocks, grid_w: int, cap: int = 200_000):
    """Ground-truth minimal placement count filling mask exactly, else None.

    Breadth-first over deduplicated occupancy sets from the empty state, so
    the first match is minimal. Raises RuntimeError past the node cap.
    """
    if not mask:
        return 0
    start: Cells = frozenset()
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        occ, n = queue.popleft()
        if matches(occ, mask):
            return n
        for bi, x in legal_placements(occ, mask, blocks, grid_w):
            nx = apply_placement(occ, blocks, grid_w, bi, x)
            if nx not in seen:
                if len(seen) > cap:
                    raise RuntimeError("brute-force node cap exceeded")
                seen.add(nx)
                queue.append((nx, n + 1))
    return None
