//! Exhaustive oracles: exact maximum island-system cardinality and the
//! blast-free covering explorers.
//!
//! The maximum search follows the recursion best(R) = 1 + max over
//! antichains of pairwise-far proper subregions of sum best(child),
//! memoized per congruence class. Pruning uses only geometric facts
//! (magnified areas of far regions are disjoint), so the result is
//! independent of the closed formulas it is checked against.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::board::{
    cell_sets_far, Adjacency, Board, Cell, CylinderShapes, Region, SubcubeMask, Topology,
};
use crate::error::{Error, Result};
use crate::heights::{has_blast, HeightMap};
use crate::systems::IslandSystem;

/// Node and wall-clock limits for a search run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget { max_nodes: u64::MAX, time_limit: None }
    }
}

impl SearchBudget {
    pub fn with_max_nodes(max_nodes: u64) -> SearchBudget {
        SearchBudget { max_nodes, ..SearchBudget::default() }
    }

    pub fn with_time_limit(limit: Duration) -> SearchBudget {
        SearchBudget { time_limit: Some(limit), ..SearchBudget::default() }
    }
}

/// Outcome of the exact maximum search.
///
/// The witness always validates and has exactly `optimum` islands. When the
/// budget ran out, `proven_exact` is false and `optimum` is only a lower
/// bound.
#[derive(Clone, Debug, Serialize)]
pub struct MaxSearch {
    pub optimum: u64,
    pub witness: IslandSystem,
    pub explored_nodes: u64,
    pub proven_exact: bool,
}

/// Outcome of the blast-free covering search.
///
/// `uncovered` is `None` when no family of pairwise-far proper rectangles
/// covers every row and column. `conjecture_delta` compares the exact value
/// against the conjectured minimum where one is stated; it reports, never
/// asserts.
#[derive(Clone, Debug, Serialize)]
pub struct BlastFreeSearch {
    pub uncovered: Option<u64>,
    pub witness: Option<Vec<Region>>,
    pub explored_nodes: u64,
    pub proven_exact: bool,
    pub conjecture_delta: Option<i64>,
}

/// Blast verdict for one level section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: i64,
    pub blast: bool,
}

/// Verdicts for every level 1..=H of a height map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelsOutcome {
    pub all_clear: bool,
    pub levels: Vec<LevelReport>,
}

/// Congruence class of a subproblem. Rectangles match by side lengths,
/// bands by height, subcubes by free-coordinate count; the optimum of a
/// region depends only on its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ClassKey {
    Rect { rows: usize, cols: usize },
    Band { rows: usize },
    Cube { free: usize },
}

#[derive(Clone, Debug)]
struct ClassBest {
    value: u64,
    /// Maximizing antichain in the class-local coordinates, canonical order.
    family: Vec<Region>,
}

struct Searcher<'a> {
    board: &'a Board,
    budget: &'a SearchBudget,
    started: Instant,
    nodes: u64,
    exhausted: bool,
    memo: BTreeMap<ClassKey, ClassBest>,
}

impl<'a> Searcher<'a> {
    fn new(board: &'a Board, budget: &'a SearchBudget) -> Searcher<'a> {
        Searcher {
            board,
            budget,
            started: Instant::now(),
            nodes: 0,
            exhausted: false,
            memo: BTreeMap::new(),
        }
    }

    fn tick(&mut self) {
        self.nodes += 1;
        if self.nodes >= self.budget.max_nodes {
            self.exhausted = true;
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(1024) && self.started.elapsed() >= limit {
                self.exhausted = true;
            }
        }
    }

    fn class_value(&mut self, key: ClassKey) -> Result<u64> {
        if let Some(best) = self.memo.get(&key) {
            return Ok(best.value);
        }
        let best = self.solve_class(key)?;
        let value = best.value;
        self.memo.insert(key, best);
        Ok(value)
    }

    fn solve_class(&mut self, key: ClassKey) -> Result<ClassBest> {
        if key == (ClassKey::Cube { free: 0 }) {
            // A single vertex has no proper subregions.
            return Ok(ClassBest { value: 1, family: Vec::new() });
        }
        let local = self.local_board(key)?;
        let candidates: Vec<Region> =
            local.enumerate_regions().into_iter().filter(|r| *r != Region::Whole).collect();
        let mut values = Vec::with_capacity(candidates.len());
        for region in &candidates {
            values.push(self.class_value(child_key(region))?);
        }
        let mut weights = Vec::with_capacity(candidates.len());
        for region in &candidates {
            weights.push(magnified_weight(&local, region)?);
        }
        let far = far_matrix(&local, &candidates)?;
        let (sum, chosen) = self.run_dfs(&values, &weights, board_capacity(&local), &far);
        let family = chosen.into_iter().map(|i| candidates[i].clone()).collect();
        Ok(ClassBest { value: 1 + sum, family })
    }

    fn local_board(&self, key: ClassKey) -> Result<Board> {
        match key {
            ClassKey::Rect { rows, cols } => {
                Board::rect_with_adjacency(rows, cols, self.board.adjacency())
            }
            ClassKey::Band { rows } => {
                Board::cylinder(rows, self.board.cols(), CylinderShapes::RectsAndBands)
            }
            ClassKey::Cube { free } => Board::hypercube(free),
        }
    }

    /// Top-level search over positionally distinct regions, for boards whose
    /// proper regions are not translation-equivalent to a local board
    /// (rect-only cylinders and tori).
    fn solve_positional(&mut self) -> Result<(u64, Vec<Region>)> {
        let candidates: Vec<Region> =
            self.board.enumerate_regions().into_iter().filter(|r| *r != Region::Whole).collect();
        let mut values = Vec::with_capacity(candidates.len());
        for region in &candidates {
            values.push(self.class_value(child_key(region))?);
        }
        let mut weights = Vec::with_capacity(candidates.len());
        for region in &candidates {
            weights.push(magnified_weight(self.board, region)?);
        }
        let far = far_matrix(self.board, &candidates)?;
        let (sum, chosen) = self.run_dfs(&values, &weights, board_capacity(self.board), &far);
        Ok((1 + sum, chosen.into_iter().map(|i| candidates[i].clone()).collect()))
    }

    fn run_dfs(
        &mut self,
        values: &[u64],
        weights: &[u64],
        capacity: u64,
        far: &[Vec<bool>],
    ) -> (u64, Vec<usize>) {
        let mut best_sum = 0;
        let mut best = Vec::new();
        let mut chosen = Vec::new();
        self.dfs(values, weights, capacity, far, 0, 0, 0, &mut chosen, &mut best_sum, &mut best);
        (best_sum, best)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        values: &[u64],
        weights: &[u64],
        capacity: u64,
        far: &[Vec<bool>],
        start: usize,
        sum: u64,
        used: u64,
        chosen: &mut Vec<usize>,
        best_sum: &mut u64,
        best: &mut Vec<usize>,
    ) {
        self.tick();
        if self.exhausted {
            return;
        }
        if sum > *best_sum {
            *best_sum = sum;
            best.clone_from(chosen);
        }
        let mut bound = sum;
        for j in start..values.len() {
            if chosen.iter().all(|&c| far[c][j]) {
                bound = bound.saturating_add(values[j]);
            }
        }
        if bound <= *best_sum {
            return;
        }
        for j in start..values.len() {
            if used + weights[j] > capacity {
                continue;
            }
            if !chosen.iter().all(|&c| far[c][j]) {
                continue;
            }
            chosen.push(j);
            self.dfs(
                values,
                weights,
                capacity,
                far,
                j + 1,
                sum + values[j],
                used + weights[j],
                chosen,
                best_sum,
                best,
            );
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }

    /// Inserts a region and, recursively, its class's maximizing family
    /// mapped into the region's frame.
    fn expand(&self, region: &Region, out: &mut BTreeSet<Region>) -> Result<()> {
        let canonical = self.board.canonical_region(region)?;
        out.insert(canonical.clone());
        let Some(best) = self.memo.get(&child_key(&canonical)) else {
            return Ok(());
        };
        let family = best.family.clone();
        match &canonical {
            Region::Rect { origin: (r0, c0), .. } => {
                for local in family {
                    let Region::Rect { origin: (lr, lc), size } = local else {
                        return Err(Error::Internal(
                            "rectangle class family holds a non-rectangle".into(),
                        ));
                    };
                    self.expand(&Region::rect(r0 + lr, c0 + lc, size.0, size.1), out)?;
                }
            }
            Region::Band { origin: r0, .. } => {
                for local in family {
                    let global = match local {
                        Region::Rect { origin: (lr, lc), size } => {
                            Region::rect(r0 + lr, lc, size.0, size.1)
                        }
                        Region::Band { origin: lr, height } => Region::band(r0 + lr, height),
                        other => {
                            return Err(Error::Internal(format!(
                                "band class family holds {other:?}"
                            )))
                        }
                    };
                    self.expand(&global, out)?;
                }
            }
            Region::Subcube { mask } => {
                let positions = mask.star_positions();
                for local in family {
                    let Region::Subcube { mask: lm } = local else {
                        return Err(Error::Internal(
                            "cube class family holds a non-subcube".into(),
                        ));
                    };
                    let mut stars = 0u32;
                    let mut bits = mask.fixed_bits();
                    for &p in &lm.star_positions() {
                        stars |= 1 << positions[p as usize];
                    }
                    for j in 0..lm.len() as u32 {
                        if lm.fixed_bits() >> j & 1 == 1 {
                            bits |= 1 << positions[j as usize];
                        }
                    }
                    let spliced = SubcubeMask::new(mask.len(), stars, bits)?;
                    self.expand(&Region::Subcube { mask: spliced }, out)?;
                }
            }
            Region::Whole => {}
        }
        Ok(())
    }
}

fn child_key(region: &Region) -> ClassKey {
    match region {
        Region::Rect { size: (height, width), .. } => {
            ClassKey::Rect { rows: *height, cols: *width }
        }
        Region::Band { height, .. } => ClassKey::Band { rows: *height },
        Region::Subcube { mask } => ClassKey::Cube { free: mask.free_count() as usize },
        Region::Whole => unreachable!("whole is filtered from candidates"),
    }
}

/// Area of the region magnified by half a unit on every non-wrapping side.
/// Far regions have disjoint magnified areas, so these sum to at most
/// [`board_capacity`] over any far family.
fn magnified_weight(board: &Board, region: &Region) -> Result<u64> {
    match region {
        Region::Rect { .. } => board.grid_points(region),
        Region::Band { height, .. } => Ok((*height as u64 + 1) * board.cols() as u64),
        Region::Subcube { mask } => Ok(1u64 << mask.free_count()),
        Region::Whole => Err(Error::Internal("weight of the whole board".into())),
    }
}

fn board_capacity(board: &Board) -> u64 {
    let rows = board.rows() as u64;
    let cols = board.cols() as u64;
    match board.topology() {
        Topology::Rect => (rows + 1) * (cols + 1),
        Topology::Cylinder => (rows + 1) * cols,
        Topology::Torus => rows * cols,
        Topology::Hypercube => 1u64 << board.nbits(),
    }
}

fn far_matrix(board: &Board, candidates: &[Region]) -> Result<Vec<Vec<bool>>> {
    let cells: Vec<BTreeSet<Cell>> =
        candidates.iter().map(|r| board.region_cells(r)).collect::<Result<_>>()?;
    let mut far = vec![vec![false; candidates.len()]; candidates.len()];
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let f = cell_sets_far(board, &cells[i], &cells[j]);
            far[i][j] = f;
            far[j][i] = f;
        }
    }
    Ok(far)
}

/// Exact maximum cardinality of a valid island system, with a witness.
///
/// Deterministic: the witness is the first maximizing antichain in canonical
/// region order at every level of the recursion.
pub fn max_system_exact(board: &Board, budget: &SearchBudget) -> Result<MaxSearch> {
    let mut searcher = Searcher::new(board, budget);
    let root = match board.topology() {
        Topology::Rect => Some(ClassKey::Rect { rows: board.rows(), cols: board.cols() }),
        Topology::Cylinder if board.cylinder_shapes() == CylinderShapes::RectsAndBands => {
            Some(ClassKey::Band { rows: board.rows() })
        }
        Topology::Hypercube => Some(ClassKey::Cube { free: board.nbits() }),
        _ => None,
    };
    let (value, family) = match root {
        Some(key) => {
            let value = searcher.class_value(key)?;
            let family = match searcher.memo.get(&key) {
                Some(best) => best.family.clone(),
                // Cube { free: 0 } resolves without a memo entry.
                None => Vec::new(),
            };
            let family = family
                .into_iter()
                .map(|local| root_region(board, key, local))
                .collect::<Result<Vec<_>>>()?;
            (value, family)
        }
        None => searcher.solve_positional()?,
    };
    let mut islands = BTreeSet::new();
    islands.insert(Region::Whole);
    for region in &family {
        searcher.expand(region, &mut islands)?;
    }
    let witness = IslandSystem::new(board.clone(), islands)?;
    witness.require_valid()?;
    let optimum = witness.len() as u64;
    if !searcher.exhausted && optimum != value {
        return Err(Error::Internal(format!(
            "witness has {optimum} islands but the recursion computed {value}"
        )));
    }
    Ok(MaxSearch {
        optimum,
        witness,
        explored_nodes: searcher.nodes,
        proven_exact: !searcher.exhausted,
    })
}

/// Maps a root-class family member into board coordinates. Root classes are
/// chosen so the local board coincides with the global one; the member is
/// canonicalized against the global board, which turns full-width rectangles
/// on a band-admitting cylinder into bands.
fn root_region(board: &Board, _key: ClassKey, local: Region) -> Result<Region> {
    board.canonical_region(&local)
}

/// Bit set sized to a board's cell count.
#[derive(Clone, Debug)]
struct BitWords {
    words: Vec<u64>,
}

impl BitWords {
    fn new(len: usize) -> BitWords {
        BitWords { words: vec![0; len.div_ceil(64)] }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    fn or(&self, other: &BitWords) -> BitWords {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        BitWords { words }
    }
}

struct BlastFreeSearcher<'a> {
    budget: &'a SearchBudget,
    started: Instant,
    nodes: u64,
    exhausted: bool,
    covers: Vec<u64>,
    blocks: Vec<BitWords>,
    weights: Vec<u64>,
    capacity: u64,
    row_masks: Vec<u128>,
    col_masks: Vec<u128>,
    suffix_rows: Vec<u128>,
    suffix_cols: Vec<u128>,
    full_rows: u128,
    full_cols: u128,
    far: Vec<Vec<bool>>,
    total: u64,
    best: Option<(u64, Vec<usize>)>,
}

impl BlastFreeSearcher<'_> {
    fn tick(&mut self) {
        self.nodes += 1;
        if self.nodes >= self.budget.max_nodes {
            self.exhausted = true;
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(1024) && self.started.elapsed() >= limit {
                self.exhausted = true;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        start: usize,
        chosen: &mut Vec<usize>,
        covered: u64,
        used: u64,
        rows: u128,
        cols: u128,
        blocked: &BitWords,
    ) {
        self.tick();
        if self.exhausted {
            return;
        }
        if rows == self.full_rows && cols == self.full_cols {
            let improves = match &self.best {
                None => true,
                Some((best_covered, _)) => covered > *best_covered,
            };
            if improves {
                self.best = Some((covered, chosen.clone()));
            }
        }
        // Rows and columns only coverable by already-passed candidates can
        // never be filled further down this branch.
        if (rows | self.suffix_rows[start]) != self.full_rows {
            return;
        }
        if (cols | self.suffix_cols[start]) != self.full_cols {
            return;
        }
        // Far candidates never touch blocked cells, so unblocked cells bound
        // the achievable extra coverage.
        if let Some((best_covered, _)) = &self.best {
            let potential = covered + (self.total - blocked.count());
            if potential <= *best_covered {
                return;
            }
        }
        for j in start..self.covers.len() {
            if used + self.weights[j] > self.capacity {
                continue;
            }
            if !chosen.iter().all(|&i| self.far[i][j]) {
                continue;
            }
            chosen.push(j);
            let merged = blocked.or(&self.blocks[j]);
            self.dfs(
                j + 1,
                chosen,
                covered + self.covers[j],
                used + self.weights[j],
                rows | self.row_masks[j],
                cols | self.col_masks[j],
                &merged,
            );
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

fn conjectured_uncovered(board: &Board) -> Option<i64> {
    let m = board.rows() as i64;
    let n = board.cols() as i64;
    if m > n {
        return None;
    }
    match (board.topology(), board.adjacency()) {
        (Topology::Rect, Adjacency::King) => Some(m + n + 1),
        (Topology::Cylinder, _) => Some(3 * m + 2 * n - 7),
        (Topology::Torus, _) => Some(4 * m + 2 * n - 9),
        _ => None,
    }
}

/// Minimum uncovered area over families of pairwise-far proper rectangles
/// leaving no row or column empty. `uncovered` is `None` when no such family
/// exists on the board.
pub fn min_uncovered_blastfree(board: &Board, budget: &SearchBudget) -> Result<BlastFreeSearch> {
    if !board.is_grid() {
        return Err(Error::Unsupported("blast-free search requires a grid board".into()));
    }
    if board.rows() > 128 || board.cols() > 128 {
        return Err(Error::Unsupported(
            "blast-free search handles at most 128 rows and columns".into(),
        ));
    }
    let total = board.cell_count();
    let candidates: Vec<Region> = board
        .enumerate_regions()
        .into_iter()
        .filter(|r| matches!(r, Region::Rect { .. }))
        .collect();
    let mut covers = Vec::with_capacity(candidates.len());
    let mut blocks = Vec::with_capacity(candidates.len());
    let mut weights = Vec::with_capacity(candidates.len());
    let mut row_masks = Vec::with_capacity(candidates.len());
    let mut col_masks = Vec::with_capacity(candidates.len());
    for region in &candidates {
        let cells = board.region_cells(region)?;
        let mut block = BitWords::new(total);
        let mut row_mask = 0u128;
        let mut col_mask = 0u128;
        for &cell in &cells {
            let index = board.cell_index(cell).expect("region cell on board");
            block.set(index);
            let Cell::Grid { row, col } = cell else {
                return Err(Error::Internal("grid board produced a vertex".into()));
            };
            row_mask |= 1 << row;
            col_mask |= 1 << col;
            for neighbor in board.neighbors(cell) {
                block.set(board.cell_index(neighbor).expect("neighbor on board"));
            }
        }
        covers.push(cells.len() as u64);
        blocks.push(block);
        weights.push(magnified_weight(board, region)?);
        row_masks.push(row_mask);
        col_masks.push(col_mask);
    }
    let count = candidates.len();
    let mut suffix_rows = vec![0u128; count + 1];
    let mut suffix_cols = vec![0u128; count + 1];
    for i in (0..count).rev() {
        suffix_rows[i] = suffix_rows[i + 1] | row_masks[i];
        suffix_cols[i] = suffix_cols[i + 1] | col_masks[i];
    }
    let far = far_matrix(board, &candidates)?;
    let mut searcher = BlastFreeSearcher {
        budget,
        started: Instant::now(),
        nodes: 0,
        exhausted: false,
        covers,
        blocks,
        weights,
        capacity: board_capacity(board),
        row_masks,
        col_masks,
        suffix_rows,
        suffix_cols,
        full_rows: (1u128 << board.rows()) - 1,
        full_cols: (1u128 << board.cols()) - 1,
        far,
        total: total as u64,
        best: None,
    };
    let mut chosen = Vec::new();
    searcher.dfs(0, &mut chosen, 0, 0, 0, 0, &BitWords::new(total));
    let proven_exact = !searcher.exhausted;
    let explored_nodes = searcher.nodes;
    match searcher.best {
        None => Ok(BlastFreeSearch {
            uncovered: None,
            witness: None,
            explored_nodes,
            proven_exact,
            conjecture_delta: None,
        }),
        Some((covered, indices)) => {
            let uncovered = total as u64 - covered;
            let witness = indices.into_iter().map(|i| candidates[i].clone()).collect();
            let conjecture_delta =
                conjectured_uncovered(board).map(|conjectured| uncovered as i64 - conjectured);
            Ok(BlastFreeSearch {
                uncovered: Some(uncovered),
                witness: Some(witness),
                explored_nodes,
                proven_exact,
                conjecture_delta,
            })
        }
    }
}

/// Blast verdict of every level section 1..=H of an integer height map.
pub fn blastfree_all_levels(heights: &HeightMap) -> Result<LevelsOutcome> {
    if !heights.board().is_grid() {
        return Err(Error::Unsupported("level blast checks require a grid board".into()));
    }
    if !heights.is_integral() {
        return Err(Error::Unsupported("level blast checks require integer heights".into()));
    }
    let top = heights.max_height().to_integer();
    let mut levels = Vec::new();
    let mut all_clear = true;
    for level in 1..=top {
        let section = heights.level_section(level.into());
        let blast = has_blast(heights.board(), &section.cells)?;
        all_clear &= !blast;
        levels.push(LevelReport { level, blast });
    }
    Ok(LevelsOutcome { all_clear, levels })
}


#[cfg(test)]
mod probes {
    use super::*;
    use std::time::Instant;

    #[test]
    #[ignore]
    fn probe_blastfree_5x5() {
        let board = Board::rect(5, 5).unwrap();
        let start = Instant::now();
        let result = min_uncovered_blastfree(&board, &SearchBudget::default()).unwrap();
        println!(
            "5x5 blastfree: uncovered={:?} nodes={} exact={} in {:?}",
            result.uncovered,
            result.explored_nodes,
            result.proven_exact,
            start.elapsed()
        );
    }

    #[test]
    #[ignore]
    fn probe_cube4() {
        let board = Board::hypercube(4).unwrap();
        let start = Instant::now();
        let result = max_system_exact(&board, &SearchBudget::default()).unwrap();
        println!(
            "cube4: optimum={} nodes={} exact={} in {:?}",
            result.optimum,
            result.explored_nodes,
            result.proven_exact,
            start.elapsed()
        );
    }

    #[test]
    #[ignore]
    fn probe_rect44_torus44() {
        for board in [Board::rect(4, 4).unwrap(), Board::torus(4, 4).unwrap()] {
            let start = Instant::now();
            let result = max_system_exact(&board, &SearchBudget::default()).unwrap();
            println!(
                "{board}: optimum={} nodes={} in {:?}",
                result.optimum,
                result.explored_nodes,
                start.elapsed()
            );
        }
    }

    #[test]
    #[ignore]
    fn probe_cyl_c1_3x4_c2_3x3() {
        let board = Board::cylinder(3, 4, CylinderShapes::RectsOnly).unwrap();
        let start = Instant::now();
        let result = max_system_exact(&board, &SearchBudget::default()).unwrap();
        println!(
            "c1 3x4: optimum={} nodes={} in {:?}",
            result.optimum,
            result.explored_nodes,
            start.elapsed()
        );
        let board = Board::cylinder(3, 3, CylinderShapes::RectsAndBands).unwrap();
        let start = Instant::now();
        let result = max_system_exact(&board, &SearchBudget::default()).unwrap();
        println!(
            "c2 3x3: optimum={} nodes={} in {:?}",
            result.optimum,
            result.explored_nodes,
            start.elapsed()
        );
    }
}
