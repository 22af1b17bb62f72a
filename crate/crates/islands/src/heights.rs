//! Height maps and the islands they carve out.
//!
//! Heights are exact rationals so that comparisons never wobble; synthesized
//! maps only ever use small integers. A region is an island when its lowest
//! cell is strictly higher than the highest adjacent outside cell. The whole
//! board has no outside, so it is an island of every height map.

use std::collections::BTreeSet;

use num::rational::Rational64;
use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::board::{Board, Cell, Region, Topology};
use crate::error::{Error, Result};
use crate::systems::IslandSystem;

pub type Height = Rational64;

/// A height per cell, stored in canonical cell order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightMap {
    board: Board,
    values: Vec<Height>,
}

/// The cells at or above one height level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSection {
    pub level: Height,
    pub cells: BTreeSet<Cell>,
}

impl HeightMap {
    pub fn new(board: Board, values: Vec<Height>) -> Result<HeightMap> {
        if values.len() != board.cell_count() {
            return Err(Error::Parse(format!(
                "{} heights for a board of {} cells",
                values.len(),
                board.cell_count()
            )));
        }
        Ok(HeightMap { board, values })
    }

    pub fn constant(board: Board, level: Height) -> HeightMap {
        let values = vec![level; board.cell_count()];
        HeightMap { board, values }
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn get(&self, cell: Cell) -> Option<Height> {
        self.board.cell_index(cell).map(|i| self.values[i])
    }

    pub fn set(&mut self, cell: Cell, level: Height) -> Result<()> {
        let i = self
            .board
            .cell_index(cell)
            .ok_or_else(|| Error::InvalidRegion(format!("cell {cell:?} outside {}", self.board)))?;
        self.values[i] = level;
        Ok(())
    }

    pub fn values(&self) -> &[Height] {
        &self.values
    }

    pub fn max_height(&self) -> Height {
        self.values.iter().copied().max().unwrap_or_else(Height::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Strict test: lowest cell of the region higher than every adjacent
    /// outside cell. `Whole` has no outside and always passes.
    pub fn is_island(&self, region: &Region) -> Result<bool> {
        let cells = self.board.region_cells(region)?;
        let inside_min = cells.iter().map(|&c| self.get(c).expect("region cell")).min();
        let inside_min = match inside_min {
            Some(v) => v,
            None => return Ok(false),
        };
        let outside_max = self
            .board
            .region_neighbors(region)?
            .into_iter()
            .map(|c| self.get(c).expect("neighbor cell"))
            .max();
        Ok(match outside_max {
            Some(out) => inside_min > out,
            None => true,
        })
    }

    /// Every admissible region that is an island of this map.
    pub fn extract_islands(&self) -> IslandSystem {
        let islands: Vec<Region> = self
            .board
            .enumerate_regions()
            .into_iter()
            .filter(|r| self.is_island(r).expect("enumerated regions are admissible"))
            .collect();
        IslandSystem::new(self.board.clone(), islands).expect("extracted regions are canonical")
    }

    /// Cells with height at least `level`.
    pub fn level_section(&self, level: Height) -> LevelSection {
        let cells = self
            .board
            .cells()
            .into_iter()
            .filter(|&c| self.get(c).expect("board cell") >= level)
            .collect();
        LevelSection { level, cells }
    }

    /// Text layout: grid boards print one line per row, the hypercube prints
    /// all values on one line in vertex counting order. Integer heights print
    /// bare, fractional ones as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.board.topology() {
            Topology::Hypercube => {
                let row: Vec<String> = self.values.iter().map(|h| format_height(*h)).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            _ => {
                for row in 0..self.board.rows() {
                    let line: Vec<String> = (0..self.board.cols())
                        .map(|col| format_height(self.get(Cell::grid(row, col)).unwrap()))
                        .collect();
                    out.push_str(&line.join(" "));
                    out.push('\n');
                }
            }
        }
        out
    }

    /// Accepts the [`HeightMap::to_text`] layout; any whitespace split works
    /// as long as the token count matches the board.
    pub fn parse(board: &Board, text: &str) -> Result<HeightMap> {
        let values: Vec<Height> =
            text.split_whitespace().map(parse_height).collect::<Result<_>>()?;
        HeightMap::new(board.clone(), values)
    }

    /// JSON mirror of the text layout: grids nest one array per row, the
    /// hypercube uses a flat array.
    pub fn to_json(&self) -> Value {
        let value_of = |h: Height| -> Value {
            if h.is_integer() {
                json!(h.to_integer())
            } else {
                Value::String(format_height(h))
            }
        };
        let values = match self.board.topology() {
            Topology::Hypercube => Value::Array(self.values.iter().map(|&h| value_of(h)).collect()),
            _ => Value::Array(
                (0..self.board.rows())
                    .map(|row| {
                        Value::Array(
                            (0..self.board.cols())
                                .map(|col| value_of(self.get(Cell::grid(row, col)).unwrap()))
                                .collect(),
                        )
                    })
                    .collect(),
            ),
        };
        json!({ "board": self.board.to_string(), "values": values })
    }

    pub fn from_json(value: &Value) -> Result<HeightMap> {
        let board_text = value
            .get("board")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("height JSON lacks a board descriptor".into()))?;
        let board: Board = board_text.parse()?;
        let values = value
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("height JSON lacks a values array".into()))?;
        let mut flat = Vec::new();
        for entry in values {
            match entry {
                Value::Array(row) => {
                    for item in row {
                        flat.push(json_height(item)?);
                    }
                }
                other => flat.push(json_height(other)?),
            }
        }
        HeightMap::new(board, flat)
    }
}

fn json_height(value: &Value) -> Result<Height> {
    match value {
        Value::Number(n) => n
            .as_i64()
            .map(Height::from_integer)
            .ok_or_else(|| Error::Parse(format!("non-integer JSON height {n}; use a string"))),
        Value::String(s) => parse_height(s),
        other => Err(Error::Parse(format!("height entry {other}"))),
    }
}

/// Parses `7`, `-3`, `p/q`, and decimal forms like `1.25`, all exactly.
pub fn parse_height(token: &str) -> Result<Height> {
    let bad = |_| Error::Parse(format!("height token {token:?}"));
    if let Some((p, q)) = token.split_once('/') {
        let p: i64 = p.parse().map_err(bad)?;
        let q: i64 = q.parse().map_err(bad)?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {token:?}")));
        }
        Ok(Height::new(p, q))
    } else if let Some((whole, frac)) = token.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_mag: i64 = match whole.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(bad)?,
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("height token {token:?}")));
        }
        let scale = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::Parse(format!("too many decimals in {token:?}")))?;
        let frac_mag: i64 = frac.parse().map_err(bad)?;
        let mag = Height::new(whole_mag * scale + frac_mag, scale);
        Ok(if negative { -mag } else { mag })
    } else {
        token.parse::<i64>().map(Height::from_integer).map_err(bad)
    }
}

pub fn format_height(h: Height) -> String {
    if h.is_integer() {
        h.to_integer().to_string()
    } else if h.is_negative() {
        format!("-{}/{}", -h.numer(), h.denom())
    } else {
        format!("{}/{}", h.numer(), h.denom())
    }
}

/// A blast is an entirely water row or column: a line of the grid without a
/// single cell of `section`. Rows and columns of cylinders and tori are their
/// cyclic lines, so the test is the same. Hypercubes have no lines to blast.
pub fn has_blast(board: &Board, section: &BTreeSet<Cell>) -> Result<bool> {
    if !board.is_grid() {
        return Err(Error::Unsupported("blast lines are a grid notion".into()));
    }
    for &cell in section {
        if !board.contains_cell(cell) {
            return Err(Error::InvalidRegion(format!("cell {cell:?} outside {board}")));
        }
    }
    let mut row_hit = vec![false; board.rows()];
    let mut col_hit = vec![false; board.cols()];
    for &cell in section {
        if let Cell::Grid { row, col } = cell {
            row_hit[row] = true;
            col_hit[col] = true;
        }
    }
    Ok(row_hit.iter().any(|hit| !hit) || col_hit.iter().any(|hit| !hit))
}

impl std::fmt::Display for HeightMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
