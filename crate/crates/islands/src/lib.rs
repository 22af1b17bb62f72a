//! Island systems on rectangular, cylindric, toroidal, and hypercube boards.
//!
//! A height function on a board makes a region an island when every cell
//! inside it is strictly higher than every adjacent cell outside it. This
//! crate models the combinatorics of such systems:
//!
//! * [`board`]: boards, cells, regions, adjacency, and farness.
//! * [`heights`]: height maps, island extraction, level sections.
//! * [`systems`]: island systems, validation, containment forests, counting
//!   budgets, and height synthesis.
//! * [`builders`]: closed-form maxima and deterministic witness systems
//!   attaining them.
//! * [`search`]: exhaustive searches that certify the maxima on small boards
//!   and explore blast-free coverings.
//!
//! Two regions are *nested* when one contains the other and *far* when they
//! are disjoint with no adjacency between them. A family of regions
//! containing the whole board is realizable by some height function exactly
//! when every pair is nested or far; that equivalence is what
//! [`systems::IslandSystem::validate`] checks and
//! [`systems::IslandSystem::synthesize_heights`] exploits.

pub mod board;
pub mod builders;
pub mod error;
pub mod heights;
pub mod search;
pub mod systems;

pub use board::{Adjacency, Board, Cell, CylinderShapes, Region, SubcubeMask, Topology};
pub use builders::{
    cylinder_system, formula, heuristic_chain, hypercube_system, peninsula_system, rook_system,
    torus_system, FormulaId, HeuristicChain,
};
pub use error::{Error, Result};
pub use heights::{has_blast, Height, HeightMap, LevelSection};
pub use search::{
    blastfree_all_levels, max_system_exact, min_uncovered_blastfree, BlastFreeSearch, LevelReport,
    LevelsOutcome, MaxSearch, SearchBudget,
};
pub use systems::{
    BudgetLine, BudgetReport, ForestNode, ForestStats, IslandForest, IslandSystem, PairFault,
    ValidationOutcome, Violation,
};
