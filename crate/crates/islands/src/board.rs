//! Boards, cells, and the regions that can be islands on them.
//!
//! A board is a finite set of cells plus an adjacency relation and a catalog
//! of admissible region shapes. Grid boards come in three topologies:
//! rectangles (no wrapping), cylinders (columns wrap), and tori (both axes
//! wrap). Grid adjacency is 8-neighbor ("king") by default; 4-neighbor
//! ("rook") is available on rectangular boards only. The hypercube board
//! connects bit vectors at Hamming distance one and admits subcubes as
//! regions.
//!
//! Regions compare equal exactly when they cover the same cells, so
//! constructors canonicalize: the full-board rectangle becomes [`Region::Whole`],
//! a full-height band becomes [`Region::Whole`], the all-star mask becomes
//! [`Region::Whole`], and a fully wrapping rectangle on a cylinder becomes a
//! [`Region::Band`] where bands are admissible.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the grid wraps, or whether the board is a hypercube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Topology {
    Rect,
    Cylinder,
    Torus,
    Hypercube,
}

/// Which cells count as touching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Adjacency {
    /// All eight surrounding grid cells.
    King,
    /// The four side-sharing grid cells.
    Rook,
    /// Hypercube vertices differing in one bit.
    Hamming,
}

/// Which regions may be islands on a cylinder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CylinderShapes {
    /// Rectangles only; the whole board is the single wrapping island.
    RectsOnly,
    /// Rectangles plus full rings of consecutive rows.
    RectsAndBands,
}

/// A single cell of a board.
///
/// Ordering is row-major for grid cells and numeric for vertices, which fixes
/// the canonical cell order everywhere (height map layouts, renders).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Grid {
        row: usize,
        col: usize,
    },
    /// Hypercube vertex; bit i of the value is the coordinate printed at
    /// mask position i counted from the right.
    Vertex(u32),
}

impl Cell {
    pub fn grid(row: usize, col: usize) -> Cell {
        Cell::Grid { row, col }
    }
}

/// A subcube selector: one character per coordinate, `0` or `1` fixes the
/// coordinate, `*` leaves it free. The leftmost character is the highest
/// bit of the vertex value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubcubeMask {
    len: u8,
    /// Bit set means the coordinate is free.
    stars: u32,
    /// Values of the fixed coordinates; zero on star positions.
    bits: u32,
}

impl SubcubeMask {
    pub fn new(len: usize, stars: u32, bits: u32) -> Result<SubcubeMask> {
        if len == 0 || len > 24 {
            return Err(Error::InvalidRegion(format!("mask length {len} outside 1..=24")));
        }
        let full = (1u32 << len) - 1;
        if stars & !full != 0 || bits & !full != 0 {
            return Err(Error::InvalidRegion("mask bits beyond length".into()));
        }
        if bits & stars != 0 {
            return Err(Error::InvalidRegion("fixed value on a star position".into()));
        }
        Ok(SubcubeMask { len: len as u8, stars, bits })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of free coordinates; the subcube has `2^free_count()` cells.
    pub fn free_count(&self) -> u32 {
        self.stars.count_ones()
    }

    pub fn is_all_stars(&self) -> bool {
        self.free_count() as usize == self.len()
    }

    /// Vertex membership test.
    pub fn contains(&self, v: u32) -> bool {
        v & !self.stars == self.bits
    }

    /// All member vertices in increasing numeric order.
    pub fn vertices(&self) -> Vec<u32> {
        let k = self.free_count();
        let free: Vec<u32> = (0..self.len as u32).filter(|i| self.stars >> i & 1 == 1).collect();
        let mut out = Vec::with_capacity(1 << k);
        for combo in 0..(1u32 << k) {
            let mut v = self.bits;
            for (j, pos) in free.iter().enumerate() {
                if combo >> j & 1 == 1 {
                    v |= 1 << pos;
                }
            }
            out.push(v);
        }
        out.sort_unstable();
        out
    }

    fn char_at(&self, position: u32) -> char {
        if self.stars >> position & 1 == 1 {
            '*'
        } else if self.bits >> position & 1 == 1 {
            '1'
        } else {
            '0'
        }
    }

    /// Free coordinate positions in increasing bit order.
    pub(crate) fn star_positions(&self) -> Vec<u32> {
        (0..self.len as u32).filter(|i| self.stars >> i & 1 == 1).collect()
    }

    pub(crate) fn fixed_bits(&self) -> u32 {
        self.bits
    }
}

impl fmt::Display for SubcubeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for position in (0..self.len as u32).rev() {
            write!(f, "{}", self.char_at(position))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SubcubeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubcubeMask({self})")
    }
}

impl FromStr for SubcubeMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<SubcubeMask> {
        let len = s.chars().count();
        if len == 0 || len > 24 {
            return Err(Error::Parse(format!("mask length {len} outside 1..=24")));
        }
        let mut stars = 0u32;
        let mut bits = 0u32;
        for (i, ch) in s.chars().enumerate() {
            let position = (len - 1 - i) as u32;
            match ch {
                '*' => stars |= 1 << position,
                '1' => bits |= 1 << position,
                '0' => {}
                other => return Err(Error::Parse(format!("mask character {other:?}"))),
            }
        }
        SubcubeMask::new(len, stars, bits).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Masks order as their display strings: leftmost differing character wins,
/// with `*` < `0` < `1` (ASCII order).
impl Ord for SubcubeMask {
    fn cmp(&self, other: &SubcubeMask) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl PartialOrd for SubcubeMask {
    fn partial_cmp(&self, other: &SubcubeMask) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for SubcubeMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SubcubeMask {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<SubcubeMask, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A candidate island shape.
///
/// The derived ordering is the canonical region order used for enumeration,
/// serialization, and tie-breaking: kind first (`Whole`, rectangles, bands,
/// subcubes), then origin, then size.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    /// The entire board. Always an island: it has no outside neighbors.
    Whole,
    /// Axis-aligned rectangle. `origin` is (row, col) of the top-left cell,
    /// `size` is (height, width). On a periodic axis the interval may wrap,
    /// but never covers a full period.
    Rect { origin: (usize, usize), size: (usize, usize) },
    /// `height` consecutive full rows of a cylinder.
    Band { origin: usize, height: usize },
    /// Subcube of a hypercube board.
    Subcube { mask: SubcubeMask },
}

impl Region {
    pub fn rect(row: usize, col: usize, height: usize, width: usize) -> Region {
        Region::Rect { origin: (row, col), size: (height, width) }
    }

    pub fn band(row: usize, height: usize) -> Region {
        Region::Band { origin: row, height }
    }

    pub fn subcube(mask: &str) -> Result<Region> {
        Ok(Region::Subcube { mask: mask.parse()? })
    }
}

/// A board: topology, dimensions, adjacency, and admissible region shapes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Board {
    topology: Topology,
    adjacency: Adjacency,
    cylinder_shapes: CylinderShapes,
    rows: usize,
    cols: usize,
    nbits: usize,
}

/// Hypercubes beyond this size have too many cells to enumerate.
const MAX_NBITS: usize = 20;

impl Board {
    /// Rectangular board with king adjacency.
    pub fn rect(rows: usize, cols: usize) -> Result<Board> {
        Self::rect_with_adjacency(rows, cols, Adjacency::King)
    }

    /// Rectangular board with rook adjacency.
    pub fn rect_rook(rows: usize, cols: usize) -> Result<Board> {
        Self::rect_with_adjacency(rows, cols, Adjacency::Rook)
    }

    pub fn rect_with_adjacency(rows: usize, cols: usize, adjacency: Adjacency) -> Result<Board> {
        if rows < 1 || cols < 1 {
            return Err(Error::DegenerateBoard(format!(
                "rectangle needs at least one row and column, got {rows}x{cols}"
            )));
        }
        if adjacency == Adjacency::Hamming {
            return Err(Error::DegenerateBoard("hamming adjacency is for hypercubes".into()));
        }
        Ok(Board {
            topology: Topology::Rect,
            adjacency,
            cylinder_shapes: CylinderShapes::RectsOnly,
            rows,
            cols,
            nbits: 0,
        })
    }

    /// Cylinder: rows bounded, columns wrap. Needs at least two columns so
    /// that wrapping is distinct from the rectangle.
    pub fn cylinder(rows: usize, cols: usize, shapes: CylinderShapes) -> Result<Board> {
        if rows < 1 || cols < 2 {
            return Err(Error::DegenerateBoard(format!(
                "cylinder needs rows >= 1 and cols >= 2, got {rows}x{cols}"
            )));
        }
        Ok(Board {
            topology: Topology::Cylinder,
            adjacency: Adjacency::King,
            cylinder_shapes: shapes,
            rows,
            cols,
            nbits: 0,
        })
    }

    /// Torus: both axes wrap. Needs at least two rows and columns.
    pub fn torus(rows: usize, cols: usize) -> Result<Board> {
        if rows < 2 || cols < 2 {
            return Err(Error::DegenerateBoard(format!(
                "torus needs rows >= 2 and cols >= 2, got {rows}x{cols}"
            )));
        }
        Ok(Board {
            topology: Topology::Torus,
            adjacency: Adjacency::King,
            cylinder_shapes: CylinderShapes::RectsOnly,
            rows,
            cols,
            nbits: 0,
        })
    }

    /// Hypercube on bit vectors of the given length.
    pub fn hypercube(nbits: usize) -> Result<Board> {
        if !(1..=MAX_NBITS).contains(&nbits) {
            return Err(Error::DegenerateBoard(format!(
                "hypercube needs 1..={MAX_NBITS} bits, got {nbits}"
            )));
        }
        Ok(Board {
            topology: Topology::Hypercube,
            adjacency: Adjacency::Hamming,
            cylinder_shapes: CylinderShapes::RectsOnly,
            rows: 0,
            cols: 0,
            nbits,
        })
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    pub fn cylinder_shapes(&self) -> CylinderShapes {
        self.cylinder_shapes
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn is_grid(&self) -> bool {
        self.topology != Topology::Hypercube
    }

    pub fn cell_count(&self) -> usize {
        match self.topology {
            Topology::Hypercube => 1 << self.nbits,
            _ => self.rows * self.cols,
        }
    }

    /// All cells in canonical order: row-major for grids, counting order for
    /// hypercube vertices.
    pub fn cells(&self) -> Vec<Cell> {
        match self.topology {
            Topology::Hypercube => (0..1u32 << self.nbits).map(Cell::Vertex).collect(),
            _ => {
                let mut out = Vec::with_capacity(self.rows * self.cols);
                for row in 0..self.rows {
                    for col in 0..self.cols {
                        out.push(Cell::Grid { row, col });
                    }
                }
                out
            }
        }
    }

    /// Position of a cell in [`Board::cells`] order.
    pub fn cell_index(&self, cell: Cell) -> Option<usize> {
        match (self.topology, cell) {
            (Topology::Hypercube, Cell::Vertex(v)) => {
                ((v as usize) < self.cell_count()).then_some(v as usize)
            }
            (Topology::Hypercube, _) | (_, Cell::Vertex(_)) => None,
            (_, Cell::Grid { row, col }) => {
                (row < self.rows && col < self.cols).then(|| row * self.cols + col)
            }
        }
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        self.cell_index(cell).is_some()
    }

    fn rows_wrap(&self) -> bool {
        self.topology == Topology::Torus
    }

    fn cols_wrap(&self) -> bool {
        matches!(self.topology, Topology::Cylinder | Topology::Torus)
    }

    /// Neighbors of a cell under the board adjacency. Wraps around periodic
    /// axes, never contains the cell itself, and is empty for cells outside
    /// the board.
    pub fn neighbors(&self, cell: Cell) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        if !self.contains_cell(cell) {
            return out;
        }
        match cell {
            Cell::Vertex(v) => {
                for i in 0..self.nbits {
                    out.insert(Cell::Vertex(v ^ (1 << i)));
                }
            }
            Cell::Grid { row, col } => {
                let offsets: &[(i64, i64)] = match self.adjacency {
                    Adjacency::Rook => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
                    _ => &[(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)],
                };
                for &(dr, dc) in offsets {
                    let r = match self.step(row, dr, self.rows, self.rows_wrap()) {
                        Some(r) => r,
                        None => continue,
                    };
                    let c = match self.step(col, dc, self.cols, self.cols_wrap()) {
                        Some(c) => c,
                        None => continue,
                    };
                    if (r, c) != (row, col) {
                        out.insert(Cell::Grid { row: r, col: c });
                    }
                }
            }
        }
        out
    }

    fn step(&self, at: usize, delta: i64, period: usize, wrap: bool) -> Option<usize> {
        let moved = at as i64 + delta;
        if wrap {
            Some(moved.rem_euclid(period as i64) as usize)
        } else if 0 <= moved && moved < period as i64 {
            Some(moved as usize)
        } else {
            None
        }
    }

    /// Validates a region against the shape catalog and returns its canonical
    /// form. Origins on periodic axes are reduced modulo the period; regions
    /// covering the whole board become [`Region::Whole`]; a fully wrapping
    /// rectangle on a band-admitting cylinder becomes a [`Region::Band`].
    pub fn canonical_region(&self, region: &Region) -> Result<Region> {
        match *region {
            Region::Whole => Ok(Region::Whole),
            Region::Rect { origin: (row, col), size: (height, width) } => {
                if !self.is_grid() {
                    return Err(Error::InvalidRegion("rectangle on a hypercube board".into()));
                }
                if height < 1 || width < 1 {
                    return Err(Error::InvalidRegion("empty rectangle".into()));
                }
                if height > self.rows || width > self.cols {
                    return Err(Error::InvalidRegion(format!(
                        "rectangle {height}x{width} exceeds board {}x{}",
                        self.rows, self.cols
                    )));
                }
                let row = if self.rows_wrap() { row % self.rows } else { row };
                let col = if self.cols_wrap() { col % self.cols } else { col };
                if !self.rows_wrap() && row + height > self.rows {
                    return Err(Error::InvalidRegion(format!(
                        "rows {row}..{} exceed board height {}",
                        row + height,
                        self.rows
                    )));
                }
                if !self.cols_wrap() && col + width > self.cols {
                    return Err(Error::InvalidRegion(format!(
                        "cols {col}..{} exceed board width {}",
                        col + width,
                        self.cols
                    )));
                }
                let full_rows = height == self.rows;
                let full_cols = width == self.cols;
                match self.topology {
                    Topology::Rect => Ok(if full_rows && full_cols {
                        Region::Whole
                    } else {
                        Region::rect(row, col, height, width)
                    }),
                    Topology::Cylinder => {
                        if full_cols {
                            // A fully wrapping rectangle is a band.
                            self.canonical_region(&Region::band(row, height))
                        } else {
                            Ok(Region::rect(row, col, height, width))
                        }
                    }
                    Topology::Torus => match (full_rows, full_cols) {
                        (true, true) => Ok(Region::Whole),
                        (false, false) => Ok(Region::rect(row, col, height, width)),
                        _ => Err(Error::InvalidRegion(
                            "rectangle wrapping a full period of a torus".into(),
                        )),
                    },
                    Topology::Hypercube => unreachable!(),
                }
            }
            Region::Band { origin, height } => {
                if self.topology != Topology::Cylinder {
                    return Err(Error::InvalidRegion("band outside a cylinder board".into()));
                }
                if self.cylinder_shapes != CylinderShapes::RectsAndBands {
                    return Err(Error::InvalidRegion("bands not admitted on this cylinder".into()));
                }
                if height < 1 || origin + height > self.rows {
                    return Err(Error::InvalidRegion(format!(
                        "band rows {origin}..{} exceed board height {}",
                        origin + height,
                        self.rows
                    )));
                }
                if height == self.rows {
                    Ok(Region::Whole)
                } else {
                    Ok(Region::band(origin, height))
                }
            }
            Region::Subcube { mask } => {
                if self.topology != Topology::Hypercube {
                    return Err(Error::InvalidRegion("subcube on a grid board".into()));
                }
                if mask.len() != self.nbits {
                    return Err(Error::InvalidRegion(format!(
                        "mask length {} on a {}-bit board",
                        mask.len(),
                        self.nbits
                    )));
                }
                if mask.is_all_stars() {
                    Ok(Region::Whole)
                } else {
                    Ok(Region::Subcube { mask })
                }
            }
        }
    }

    /// Cells of a region. Validates and canonicalizes first.
    pub fn region_cells(&self, region: &Region) -> Result<BTreeSet<Cell>> {
        let canonical = self.canonical_region(region)?;
        let mut out = BTreeSet::new();
        match canonical {
            Region::Whole => {
                out.extend(self.cells());
            }
            Region::Rect { origin: (row, col), size: (height, width) } => {
                for dr in 0..height {
                    let r = if self.rows_wrap() { (row + dr) % self.rows } else { row + dr };
                    for dc in 0..width {
                        let c = if self.cols_wrap() { (col + dc) % self.cols } else { col + dc };
                        out.insert(Cell::Grid { row: r, col: c });
                    }
                }
            }
            Region::Band { origin, height } => {
                for r in origin..origin + height {
                    for c in 0..self.cols {
                        out.insert(Cell::Grid { row: r, col: c });
                    }
                }
            }
            Region::Subcube { mask } => {
                out.extend(mask.vertices().into_iter().map(Cell::Vertex));
            }
        }
        Ok(out)
    }

    /// Cells outside the region adjacent to some cell of it. Empty exactly
    /// for [`Region::Whole`].
    pub fn region_neighbors(&self, region: &Region) -> Result<BTreeSet<Cell>> {
        let cells = self.region_cells(region)?;
        let mut out = BTreeSet::new();
        for &cell in &cells {
            for n in self.neighbors(cell) {
                if !cells.contains(&n) {
                    out.insert(n);
                }
            }
        }
        Ok(out)
    }

    /// Two regions are far when their cell sets are disjoint and no cell of
    /// one is adjacent to a cell of the other. Symmetric; overlapping and
    /// identical regions are not far.
    pub fn far(&self, a: &Region, b: &Region) -> Result<bool> {
        let ca = self.region_cells(a)?;
        let cb = self.region_cells(b)?;
        Ok(cell_sets_far(self, &ca, &cb))
    }

    /// Every admissible region exactly once, in canonical order.
    pub fn enumerate_regions(&self) -> Vec<Region> {
        let mut out = BTreeSet::new();
        out.insert(Region::Whole);
        match self.topology {
            Topology::Rect => {
                for row in 0..self.rows {
                    for height in 1..=self.rows - row {
                        for col in 0..self.cols {
                            for width in 1..=self.cols - col {
                                if height == self.rows && width == self.cols {
                                    continue; // already present as Whole
                                }
                                out.insert(Region::rect(row, col, height, width));
                            }
                        }
                    }
                }
            }
            Topology::Cylinder => {
                for row in 0..self.rows {
                    for height in 1..=self.rows - row {
                        for col in 0..self.cols {
                            for width in 1..self.cols {
                                out.insert(Region::rect(row, col, height, width));
                            }
                        }
                    }
                }
                if self.cylinder_shapes == CylinderShapes::RectsAndBands {
                    for row in 0..self.rows {
                        for height in 1..=self.rows - row {
                            if height == self.rows {
                                continue;
                            }
                            out.insert(Region::band(row, height));
                        }
                    }
                }
            }
            Topology::Torus => {
                for row in 0..self.rows {
                    for height in 1..self.rows {
                        for col in 0..self.cols {
                            for width in 1..self.cols {
                                out.insert(Region::rect(row, col, height, width));
                            }
                        }
                    }
                }
            }
            Topology::Hypercube => {
                // Ternary counter over {fixed 0, fixed 1, star} per position.
                let n = self.nbits;
                let mut trits = vec![0u8; n];
                loop {
                    let mut stars = 0u32;
                    let mut bits = 0u32;
                    for (pos, &t) in trits.iter().enumerate() {
                        match t {
                            1 => bits |= 1 << pos,
                            2 => stars |= 1 << pos,
                            _ => {}
                        }
                    }
                    if stars.count_ones() as usize != n {
                        let mask = SubcubeMask::new(n, stars, bits).expect("mask in range");
                        out.insert(Region::Subcube { mask });
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            return out.into_iter().collect();
                        }
                        trits[i] += 1;
                        if trits[i] == 3 {
                            trits[i] = 0;
                            i += 1;
                        } else {
                            break;
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Grid points of a rectangular region: (height+1) * (width+1), the area
    /// of the rectangle magnified by half a unit on every side. `Whole`
    /// counts as the full rectangle on rectangular boards only.
    pub fn grid_points(&self, region: &Region) -> Result<u64> {
        let (height, width) = self.rect_dims(region)?;
        Ok((height as u64 + 1) * (width as u64 + 1))
    }

    /// Magnified area minus the two corner cuts used by rook-adjacency
    /// budgets.
    pub fn mu(&self, region: &Region) -> Result<u64> {
        Ok(self.grid_points(region)? - 2)
    }

    fn rect_dims(&self, region: &Region) -> Result<(usize, usize)> {
        match self.canonical_region(region)? {
            Region::Rect { size: (height, width), .. } => Ok((height, width)),
            Region::Whole if self.topology == Topology::Rect => Ok((self.rows, self.cols)),
            other => Err(Error::Unsupported(format!(
                "grid points are defined for rectangular regions, not {other:?}"
            ))),
        }
    }
}

/// Far test on precomputed cell sets; used where the sets are already at hand.
pub(crate) fn cell_sets_far(board: &Board, a: &BTreeSet<Cell>, b: &BTreeSet<Cell>) -> bool {
    if !a.is_disjoint(b) {
        return false;
    }
    // Iterate the smaller side.
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for &cell in small {
        for n in board.neighbors(cell) {
            if large.contains(&n) {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.topology {
            Topology::Rect => {
                write!(f, "rect:{}x{}", self.rows, self.cols)?;
                if self.adjacency == Adjacency::Rook {
                    write!(f, ";adj=rook")?;
                }
                Ok(())
            }
            Topology::Cylinder => {
                write!(f, "cyl:{}x{}", self.rows, self.cols)?;
                if self.cylinder_shapes == CylinderShapes::RectsAndBands {
                    write!(f, ";shapes=c2")?;
                }
                Ok(())
            }
            Topology::Torus => write!(f, "torus:{}x{}", self.rows, self.cols),
            Topology::Hypercube => write!(f, "cube:{}", self.nbits),
        }
    }
}

impl FromStr for Board {
    type Err = Error;

    /// Board descriptors: `rect:MxN`, `cyl:MxN`, `torus:MxN`, `cube:N`, with
    /// optional suffixes `;adj=king|rook` (rectangles only) and
    /// `;shapes=c1|c2` (cylinders only).
    fn from_str(s: &str) -> Result<Board> {
        let mut parts = s.split(';');
        let head = parts.next().unwrap_or_default();
        let (kind, dims) = head
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("board descriptor {s:?} lacks ':'")))?;

        let mut adjacency: Option<Adjacency> = None;
        let mut shapes: Option<CylinderShapes> = None;
        for part in parts {
            match part.split_once('=') {
                Some(("adj", "king")) => adjacency = Some(Adjacency::King),
                Some(("adj", "rook")) => adjacency = Some(Adjacency::Rook),
                Some(("shapes", "c1")) => shapes = Some(CylinderShapes::RectsOnly),
                Some(("shapes", "c2")) => shapes = Some(CylinderShapes::RectsAndBands),
                _ => return Err(Error::Parse(format!("unknown board option {part:?}"))),
            }
        }

        let parse_dims = |dims: &str| -> Result<(usize, usize)> {
            let (m, n) = dims
                .split_once('x')
                .ok_or_else(|| Error::Parse(format!("dimensions {dims:?} lack 'x'")))?;
            let m = m.parse().map_err(|_| Error::Parse(format!("bad dimension {m:?}")))?;
            let n = n.parse().map_err(|_| Error::Parse(format!("bad dimension {n:?}")))?;
            Ok((m, n))
        };

        match kind {
            "rect" => {
                if shapes.is_some() {
                    return Err(Error::Parse("shapes option applies to cylinders".into()));
                }
                let (m, n) = parse_dims(dims)?;
                Board::rect_with_adjacency(m, n, adjacency.unwrap_or(Adjacency::King))
            }
            "cyl" => {
                if adjacency.is_some() {
                    return Err(Error::Parse("adj option applies to rectangles".into()));
                }
                let (m, n) = parse_dims(dims)?;
                Board::cylinder(m, n, shapes.unwrap_or(CylinderShapes::RectsOnly))
            }
            "torus" => {
                if adjacency.is_some() || shapes.is_some() {
                    return Err(Error::Parse("torus takes no options".into()));
                }
                let (m, n) = parse_dims(dims)?;
                Board::torus(m, n)
            }
            "cube" => {
                if adjacency.is_some() || shapes.is_some() {
                    return Err(Error::Parse("cube takes no options".into()));
                }
                let n =
                    dims.parse().map_err(|_| Error::Parse(format!("bad dimension {dims:?}")))?;
                Board::hypercube(n)
            }
            other => Err(Error::Parse(format!("unknown board kind {other:?}"))),
        }
    }
}
