//! Families of islands and the structure theory that constrains them.
//!
//! A set of regions containing the whole board is realizable by some height
//! function exactly when every pair is nested or far. [`IslandSystem::validate`]
//! checks that condition pair by pair; [`IslandSystem::synthesize_heights`]
//! produces the witness map by sinking every cell to the number of islands
//! above it. Containment of a valid system is a tree rooted at the whole
//! board, and after padding single-child nodes with a dummy second child the
//! leaf count pins down the vertex count, which is what the counting budgets
//! exploit.

use std::collections::BTreeSet;

use serde::de::Deserializer;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::board::{cell_sets_far, Adjacency, Board, Cell, Region, Topology};
use crate::error::{Error, Result};
use crate::heights::{Height, HeightMap};

/// A family of candidate islands on one board. Regions are canonicalized on
/// entry and kept in canonical order; duplicates (by cell set) collapse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IslandSystem {
    board: Board,
    islands: BTreeSet<Region>,
}

/// Why a pair of islands cannot coexist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairFault {
    /// The regions overlap without one containing the other.
    OverlapWithoutNesting,
    /// The regions are disjoint but touch.
    Adjacent,
}

/// First defect found by [`IslandSystem::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingWhole,
    /// The canonically first offending pair.
    Pair {
        first: Region,
        second: Region,
        fault: PairFault,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationOutcome {
    Valid,
    Violation(Violation),
}

impl ValidationOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationOutcome::Valid)
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingWhole => write!(f, "the whole board is missing"),
            Violation::Pair { first, second, fault } => {
                let what = match fault {
                    PairFault::OverlapWithoutNesting => "overlap without nesting",
                    PairFault::Adjacent => "touch without a gap",
                };
                write!(f, "{first:?} and {second:?} {what}")
            }
        }
    }
}

impl IslandSystem {
    pub fn new(board: Board, islands: impl IntoIterator<Item = Region>) -> Result<IslandSystem> {
        let mut canonical = BTreeSet::new();
        for region in islands {
            canonical.insert(board.canonical_region(&region)?);
        }
        Ok(IslandSystem { board, islands: canonical })
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn islands(&self) -> &BTreeSet<Region> {
        &self.islands
    }

    pub fn len(&self) -> usize {
        self.islands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.islands.is_empty()
    }

    pub fn contains(&self, region: &Region) -> bool {
        match self.board.canonical_region(region) {
            Ok(canonical) => self.islands.contains(&canonical),
            Err(_) => false,
        }
    }

    /// Islands in canonical order paired with their cell sets.
    fn islands_with_cells(&self) -> Vec<(Region, BTreeSet<Cell>)> {
        self.islands
            .iter()
            .map(|r| (r.clone(), self.board.region_cells(r).expect("canonical region")))
            .collect()
    }

    /// Checks the nested-or-far condition plus the presence of the whole
    /// board. Reports the canonically first violation.
    pub fn validate(&self) -> ValidationOutcome {
        if !self.islands.contains(&Region::Whole) {
            return ValidationOutcome::Violation(Violation::MissingWhole);
        }
        let entries = self.islands_with_cells();
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let (a, ac) = &entries[i];
                let (b, bc) = &entries[j];
                if ac.is_subset(bc) || bc.is_subset(ac) {
                    continue;
                }
                let fault = if ac.is_disjoint(bc) {
                    if cell_sets_far(&self.board, ac, bc) {
                        continue;
                    }
                    PairFault::Adjacent
                } else {
                    PairFault::OverlapWithoutNesting
                };
                return ValidationOutcome::Violation(Violation::Pair {
                    first: a.clone(),
                    second: b.clone(),
                    fault,
                });
            }
        }
        ValidationOutcome::Valid
    }

    /// Validation as an error, for operations defined on valid systems only.
    pub fn require_valid(&self) -> Result<()> {
        match self.validate() {
            ValidationOutcome::Valid => Ok(()),
            ValidationOutcome::Violation(v) => Err(Error::InvalidSystem(v.to_string())),
        }
    }

    /// Inclusion-maximal members strictly contained in `within`.
    pub fn maximal_within(&self, within: &Region) -> Result<Vec<Region>> {
        let within_cells = self.board.region_cells(within)?;
        let entries = self.islands_with_cells();
        let inside: Vec<&(Region, BTreeSet<Cell>)> = entries
            .iter()
            .filter(|(_, c)| c.len() < within_cells.len() && c.is_subset(&within_cells))
            .collect();
        let mut out = Vec::new();
        'candidates: for (region, cells) in &inside {
            for (_, other) in &inside {
                if cells.len() < other.len() && cells.is_subset(other) {
                    continue 'candidates;
                }
            }
            out.push(region.clone());
        }
        Ok(out)
    }

    /// Maximal islands of the whole system (the whole board excluded).
    pub fn maximal_islands(&self) -> Result<Vec<Region>> {
        self.maximal_within(&Region::Whole)
    }

    /// Containment forest. With `augment`, every node with exactly one child
    /// receives a dummy second child, placed right after the real one.
    pub fn forest(&self, augment: bool) -> Result<IslandForest> {
        self.require_valid()?;
        let entries = self.islands_with_cells();
        let mut nodes: Vec<ForestNode> = entries
            .iter()
            .map(|(region, _)| ForestNode {
                island: Some(region.clone()),
                parent: None,
                children: Vec::new(),
            })
            .collect();

        // Parent of i: the smallest strict superset. Containers of a nested
        // family form a chain, so smallest cell count identifies it.
        for i in 0..entries.len() {
            let (_, cells) = &entries[i];
            let mut parent: Option<usize> = None;
            for (j, (_, other)) in entries.iter().enumerate() {
                if cells.len() < other.len() && cells.is_subset(other) {
                    let better = match parent {
                        None => true,
                        Some(p) => other.len() < entries[p].1.len(),
                    };
                    if better {
                        parent = Some(j);
                    }
                }
            }
            nodes[i].parent = parent;
            if let Some(p) = parent {
                nodes[p].children.push(i);
            }
        }

        if augment {
            for i in 0..entries.len() {
                if nodes[i].children.len() == 1 {
                    let dummy = nodes.len();
                    nodes.push(ForestNode { island: None, parent: Some(i), children: Vec::new() });
                    nodes[i].children.push(dummy);
                }
            }
        }

        Ok(IslandForest { augmented: augment, nodes })
    }

    /// Heights realizing a valid system: each cell sinks to the number of
    /// islands covering it. The result is re-extracted and compared, so a
    /// success is self-certifying.
    pub fn synthesize_heights(&self) -> Result<HeightMap> {
        self.require_valid()?;
        let mut depth = vec![0i64; self.board.cell_count()];
        for (_, cells) in self.islands_with_cells() {
            for cell in cells {
                depth[self.board.cell_index(cell).expect("island cell")] += 1;
            }
        }
        let map = HeightMap::new(
            self.board.clone(),
            depth.into_iter().map(Height::from_integer).collect(),
        )?;
        let extracted = map.extract_islands();
        if extracted.islands != self.islands {
            let missing: Vec<Region> =
                self.islands.difference(&extracted.islands).cloned().collect();
            let extra: Vec<Region> = extracted.islands.difference(&self.islands).cloned().collect();
            return Err(Error::SynthesisMismatch { missing, extra });
        }
        Ok(map)
    }

    /// The counting inequalities that every valid system obeys. Lines that do
    /// not apply to this board (or to non-rectangular maximal islands) are
    /// `None`.
    pub fn budget_report(&self) -> Result<BudgetReport> {
        self.require_valid()?;
        let board = &self.board;
        let maximal = self.maximal_islands()?;

        let leaf_budget =
            if board.topology() == Topology::Rect && board.adjacency() == Adjacency::King {
                let stats = self.forest(true)?.stats();
                let used = 4 * stats.minimal_islands as u64 + 2 * stats.dummies as u64;
                let capacity = (board.rows() as u64 + 1) * (board.cols() as u64 + 1);
                Some(BudgetLine { used, capacity })
            } else {
                None
            };

        let cover_budget = if board.adjacency() == Adjacency::King && board.is_grid() {
            let all_rect = maximal.iter().all(|r| matches!(r, Region::Rect { .. }));
            if all_rect {
                let mut used = 0;
                for region in &maximal {
                    used += board.grid_points(region)?;
                }
                let capacity = match board.topology() {
                    Topology::Rect => (board.rows() as u64 + 1) * (board.cols() as u64 + 1),
                    Topology::Cylinder => (board.rows() as u64 + 1) * board.cols() as u64,
                    Topology::Torus => board.rows() as u64 * board.cols() as u64,
                    Topology::Hypercube => unreachable!(),
                };
                Some(BudgetLine { used, capacity })
            } else {
                None
            }
        } else {
            None
        };

        let mu_budget = if board.adjacency() == Adjacency::Rook {
            let mut used = 0;
            for region in &maximal {
                used += board.mu(region)?;
            }
            let capacity = board.mu(&Region::Whole)? - 2;
            Some(BudgetLine { used, capacity })
        } else {
            None
        };

        Ok(BudgetReport { leaf_budget, cover_budget, mu_budget })
    }
}

/// One counting inequality: `used <= capacity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetLine {
    pub used: u64,
    pub capacity: u64,
}

impl BudgetLine {
    pub fn holds(&self) -> bool {
        self.used <= self.capacity
    }
}

/// Budgets applicable to a system.
///
/// * `leaf_budget`: four grid points per minimal island plus two per dummy
///   never exceed the board's grid points (king rectangles).
/// * `cover_budget`: magnified maximal rectangles fit in the magnified board
///   (king grids).
/// * `mu_budget`: corner-trimmed magnifications fit with two corners spare
///   (rook rectangles).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub leaf_budget: Option<BudgetLine>,
    pub cover_budget: Option<BudgetLine>,
    pub mu_budget: Option<BudgetLine>,
}

impl BudgetReport {
    pub fn all_hold(&self) -> bool {
        [self.leaf_budget, self.cover_budget, self.mu_budget]
            .iter()
            .flatten()
            .all(BudgetLine::holds)
    }
}

/// Node of a containment forest. `island` is `None` for dummy children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestNode {
    pub island: Option<Region>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Containment forest of a valid system, optionally augmented with dummy
/// second children. Real nodes come first in canonical region order, dummies
/// after them in order of their parents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IslandForest {
    augmented: bool,
    nodes: Vec<ForestNode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForestStats {
    pub vertices: usize,
    pub leaves: usize,
    pub dummies: usize,
    /// Real leaves: islands containing no other island.
    pub minimal_islands: usize,
    /// Real vertices: `vertices - dummies`.
    pub islands: usize,
}

impl IslandForest {
    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn stats(&self) -> ForestStats {
        let vertices = self.nodes.len();
        let leaves = self.nodes.iter().filter(|n| n.children.is_empty()).count();
        let dummies = self.nodes.iter().filter(|n| n.island.is_none()).count();
        let minimal_islands =
            self.nodes.iter().filter(|n| n.children.is_empty() && n.island.is_some()).count();
        ForestStats { vertices, leaves, dummies, minimal_islands, islands: vertices - dummies }
    }

    /// Verifies the leaf-count bounds on an augmented forest: at most
    /// `2*leaves - 1` vertices, with equality when every internal node has
    /// exactly two children. Failure means a bug, not bad input.
    pub fn check_bounds(&self) -> Result<ForestStats> {
        if !self.augmented {
            return Err(Error::Unsupported("bounds apply to the augmented forest".into()));
        }
        let stats = self.stats();
        if stats.vertices > 2 * stats.leaves - 1 {
            return Err(Error::Internal(format!(
                "{} vertices with {} leaves",
                stats.vertices, stats.leaves
            )));
        }
        let binary =
            self.nodes.iter().filter(|n| !n.children.is_empty()).all(|n| n.children.len() == 2);
        if binary && stats.vertices != 2 * stats.leaves - 1 {
            return Err(Error::Internal(format!(
                "binary forest with {} vertices and {} leaves",
                stats.vertices, stats.leaves
            )));
        }
        if stats.leaves != stats.minimal_islands + stats.dummies {
            return Err(Error::Internal("dummy that is not a leaf".into()));
        }
        Ok(stats)
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| match &node.island {
                Some(region) => json!({
                    "id": id,
                    "region": region,
                    "parent": node.parent,
                }),
                None => json!({
                    "id": id,
                    "dummy": true,
                    "parent": node.parent,
                }),
            })
            .collect();
        let stats = self.stats();
        json!({
            "augmented": self.augmented,
            "nodes": nodes,
            "stats": {
                "vertices": stats.vertices,
                "leaves": stats.leaves,
                "dummies": stats.dummies,
                "minimal_islands": stats.minimal_islands,
                "islands": stats.islands,
            },
        })
    }
}

impl Serialize for IslandSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IslandSystem", 2)?;
        s.serialize_field("board", &self.board.to_string())?;
        let islands: Vec<&Region> = self.islands.iter().collect();
        s.serialize_field("islands", &islands)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for IslandSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<IslandSystem, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            board: String,
            islands: Vec<Region>,
        }
        let raw = Raw::deserialize(d)?;
        let board: Board = raw.board.parse().map_err(serde::de::Error::custom)?;
        IslandSystem::new(board, raw.islands).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::CylinderShapes;

    fn rect_board(m: usize, n: usize) -> Board {
        Board::rect(m, n).unwrap()
    }

    fn sys(board: Board, islands: &[Region]) -> IslandSystem {
        IslandSystem::new(board, islands.iter().cloned()).unwrap()
    }

    #[test]
    fn validate_reports_first_fault() {
        let board = rect_board(2, 2);
        let s = sys(
            board.clone(),
            &[Region::Whole, Region::rect(0, 0, 1, 1), Region::rect(1, 1, 1, 1)],
        );
        match s.validate() {
            ValidationOutcome::Violation(Violation::Pair { first, second, fault }) => {
                assert_eq!(first, Region::rect(0, 0, 1, 1));
                assert_eq!(second, Region::rect(1, 1, 1, 1));
                assert_eq!(fault, PairFault::Adjacent);
            }
            other => panic!("expected corner violation, got {other:?}"),
        }

        // The same family on a rook board is fine.
        let rook = Board::rect_rook(2, 2).unwrap();
        let s = sys(rook, &[Region::Whole, Region::rect(0, 0, 1, 1), Region::rect(1, 1, 1, 1)]);
        assert!(s.validate().is_valid());
    }

    #[test]
    fn validate_needs_whole_and_nesting() {
        let board = rect_board(1, 3);
        let s = sys(board.clone(), &[Region::rect(0, 0, 1, 1)]);
        assert_eq!(s.validate(), ValidationOutcome::Violation(Violation::MissingWhole));

        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 1, 2), Region::rect(0, 1, 1, 2)]);
        match s.validate() {
            ValidationOutcome::Violation(Violation::Pair { fault, .. }) => {
                assert_eq!(fault, PairFault::OverlapWithoutNesting);
            }
            other => panic!("expected overlap violation, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_regions_collapse() {
        let board = rect_board(2, 3);
        // The full rectangle and Whole are the same region.
        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 2, 3)]);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn maximal_islands_by_strict_containment() {
        let board = rect_board(3, 3);
        let a = Region::rect(0, 0, 1, 3);
        let a1 = Region::rect(0, 1, 1, 2);
        let b = Region::rect(2, 0, 1, 3);
        let s = sys(board, &[Region::Whole, a.clone(), a1.clone(), b.clone()]);
        assert!(s.validate().is_valid());
        assert_eq!(s.maximal_islands().unwrap(), vec![a.clone(), b]);
        assert_eq!(s.maximal_within(&a).unwrap(), vec![a1]);
    }

    #[test]
    fn forest_with_two_branches_and_one_dummy() {
        let board = rect_board(1, 5);
        let a = Region::rect(0, 0, 1, 2);
        let a1 = Region::rect(0, 0, 1, 1);
        let b = Region::rect(0, 3, 1, 2);
        let s = sys(board, &[Region::Whole, a, a1, b]);

        let bare = s.forest(false).unwrap();
        assert_eq!(bare.stats().vertices, 4);
        assert_eq!(bare.stats().dummies, 0);

        let aug = s.forest(true).unwrap();
        let stats = aug.check_bounds().unwrap();
        assert_eq!(stats.vertices, 5);
        assert_eq!(stats.leaves, 3);
        assert_eq!(stats.dummies, 1);
        assert_eq!(stats.minimal_islands, 2);
        assert_eq!(stats.islands, 4);
        // Dummy sits right after the real child.
        let parent = aug
            .nodes()
            .iter()
            .position(|n| {
                n.children.len() == 2 && n.island.is_some() && n.island != Some(Region::Whole)
            })
            .unwrap();
        let children = &aug.nodes()[parent].children;
        assert!(aug.nodes()[children[0]].island.is_some());
        assert!(aug.nodes()[children[1]].island.is_none());
    }

    #[test]
    fn forest_of_a_chain() {
        let board = rect_board(1, 3);
        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 1, 2), Region::rect(0, 0, 1, 1)]);
        let stats = s.forest(true).unwrap().check_bounds().unwrap();
        assert_eq!(stats.vertices, 5);
        assert_eq!(stats.leaves, 3);
        assert_eq!(stats.dummies, 2);
        assert_eq!(stats.islands, 3);
    }

    #[test]
    fn forest_of_whole_alone() {
        let board = rect_board(2, 2);
        let s = sys(board, &[Region::Whole]);
        let stats = s.forest(true).unwrap().check_bounds().unwrap();
        assert_eq!(stats.vertices, 1);
        assert_eq!(stats.leaves, 1);
        assert_eq!(stats.dummies, 0);
    }

    #[test]
    fn forest_rejects_invalid_systems() {
        let board = rect_board(2, 2);
        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 1, 1), Region::rect(1, 1, 1, 1)]);
        assert!(matches!(s.forest(true), Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn synthesize_small_chain() {
        let board = rect_board(1, 3);
        let s = sys(board.clone(), &[Region::Whole, Region::rect(0, 0, 1, 1)]);
        let map = s.synthesize_heights().unwrap();
        assert_eq!(map.to_text(), "2 1 1\n");
        assert_eq!(map.extract_islands().islands(), s.islands());
    }

    #[test]
    fn synthesize_band_system() {
        let board = Board::cylinder(3, 2, CylinderShapes::RectsAndBands).unwrap();
        let s = sys(
            board,
            &[Region::Whole, Region::band(0, 1), Region::rect(0, 0, 1, 1), Region::band(2, 1)],
        );
        assert!(s.validate().is_valid());
        let map = s.synthesize_heights().unwrap();
        assert_eq!(map.extract_islands().islands(), s.islands());
    }

    #[test]
    fn budget_lines_for_king_rect() {
        let board = rect_board(3, 3);
        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 1, 1), Region::rect(2, 2, 1, 1)]);
        let report = s.budget_report().unwrap();
        let leaf = report.leaf_budget.unwrap();
        assert_eq!((leaf.used, leaf.capacity), (8, 16));
        let cover = report.cover_budget.unwrap();
        assert_eq!((cover.used, cover.capacity), (8, 16));
        assert!(report.mu_budget.is_none());
        assert!(report.all_hold());
    }

    #[test]
    fn budget_lines_for_rook_rect() {
        let board = Board::rect_rook(2, 2).unwrap();
        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 1, 1), Region::rect(1, 1, 1, 1)]);
        let report = s.budget_report().unwrap();
        let mu = report.mu_budget.unwrap();
        assert_eq!((mu.used, mu.capacity), (4, 5));
        assert!(report.leaf_budget.is_none());
        assert!(report.all_hold());
    }

    #[test]
    fn band_maximal_islands_skip_cover_budget() {
        let board = Board::cylinder(3, 2, CylinderShapes::RectsAndBands).unwrap();
        let s = sys(board, &[Region::Whole, Region::band(0, 1)]);
        let report = s.budget_report().unwrap();
        assert!(report.cover_budget.is_none());
        assert!(report.leaf_budget.is_none());
    }

    #[test]
    fn system_json_round_trip() {
        let board = rect_board(1, 3);
        let s = sys(board, &[Region::Whole, Region::rect(0, 0, 1, 1)]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"board":"rect:1x3","islands":[{"kind":"whole"},{"kind":"rect","origin":[0,0],"size":[1,1]}]}"#
        );
        let back: IslandSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);

        // Out-of-catalog regions fail at parse time.
        let bad = r#"{"board":"rect:1x3","islands":[{"kind":"band","origin":0,"height":1}]}"#;
        assert!(serde_json::from_str::<IslandSystem>(bad).is_err());
    }
}
