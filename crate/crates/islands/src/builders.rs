//! Closed-form maxima and deterministic systems attaining them.
//!
//! Each builder returns a valid island system whose cardinality matches the
//! corresponding closed form, so the two can be checked against each other
//! and against exhaustive search.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{Board, CylinderShapes, Region, SubcubeMask};
use crate::error::{Error, Result};
use crate::systems::IslandSystem;

/// Identifier for a closed-form maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    /// Rectangular board with king adjacency.
    F,
    /// Peninsula variant of the rectangular board; equal to `F`.
    P,
    /// Eastern-shore peninsula variant; equal to `F`.
    PEast,
    /// Cylinder admitting rectangles only.
    C1,
    /// Cylinder admitting rectangles and bands.
    C2,
    /// Torus.
    T,
    /// Rectangular board with rook adjacency; equal to `F`.
    FHat,
    /// Hypercube, single argument.
    B,
}

impl FormulaId {
    fn name(self) -> &'static str {
        match self {
            FormulaId::F => "f",
            FormulaId::P => "p",
            FormulaId::PEast => "p_east",
            FormulaId::C1 => "c1",
            FormulaId::C2 => "c2",
            FormulaId::T => "t",
            FormulaId::FHat => "f_hat",
            FormulaId::B => "b",
        }
    }

    /// Number of arguments the formula takes.
    pub fn arity(self) -> usize {
        match self {
            FormulaId::B => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(FormulaId::F),
            "p" => Ok(FormulaId::P),
            "p_east" => Ok(FormulaId::PEast),
            "c1" => Ok(FormulaId::C1),
            "c2" => Ok(FormulaId::C2),
            "t" => Ok(FormulaId::T),
            "f_hat" => Ok(FormulaId::FHat),
            "b" => Ok(FormulaId::B),
            other => Err(Error::Parse(format!("unknown formula `{other}`"))),
        }
    }
}

/// Evaluates a closed-form maximum.
///
/// Two-argument formulas take `m` and `n`; `b` takes a single argument in
/// `m` and requires `n` to be absent.
pub fn formula(id: FormulaId, m: u64, n: Option<u64>) -> Result<u64> {
    if id.arity() == 1 {
        if n.is_some() {
            return Err(Error::Domain(format!("{id} takes one argument")));
        }
        if m < 1 {
            return Err(Error::Domain(format!("{id} requires n >= 1")));
        }
        if m > 63 {
            return Err(Error::Domain(format!("{id} overflows for n > 63")));
        }
        return Ok(1 + (1u64 << (m - 1)));
    }
    let n = n.ok_or_else(|| Error::Domain(format!("{id} takes two arguments")))?;
    match id {
        FormulaId::F | FormulaId::P | FormulaId::PEast | FormulaId::FHat => {
            if m < 1 || n < 1 {
                return Err(Error::Domain(format!("{id} requires m, n >= 1")));
            }
            Ok((m + 1) * (n + 1) / 2 - 1)
        }
        FormulaId::C1 => {
            if m < 1 || n < 2 {
                return Err(Error::Domain(format!("{id} requires m >= 1, n >= 2")));
            }
            Ok((m + 1) * n / 2)
        }
        FormulaId::C2 => {
            if m < 1 || n < 2 {
                return Err(Error::Domain(format!("{id} requires m >= 1, n >= 2")));
            }
            Ok((m + 1) * n / 2 + (m - 1) / 2)
        }
        FormulaId::T => {
            if m < 2 || n < 2 {
                return Err(Error::Domain(format!("{id} requires m, n >= 2")));
            }
            Ok(m * n / 2)
        }
        FormulaId::B => unreachable!(),
    }
}

/// Rectangles of the peninsula construction for an `m x n` sub-board whose
/// north-west corner sits at `(r0, c0)`.
///
/// The construction recurses southwards two rows at a time, leaving a water
/// row between stages, and fills single rows with east-anchored chains.
/// Every emitted rectangle touches a side of the `m x n` sub-board, so the
/// same list stays valid when the sub-board is embedded with water around it.
fn peninsula_rects(m: usize, n: usize, r0: usize, c0: usize, out: &mut Vec<Region>) {
    out.push(Region::rect(r0, c0, m, n));
    match m {
        1 => east_chain(n, r0, c0, out),
        2 => match n {
            1 => out.push(Region::rect(r0 + 1, c0, 1, 1)),
            2 => {
                out.push(Region::rect(r0 + 1, c0, 1, 2));
                out.push(Region::rect(r0 + 1, c0 + 1, 1, 1));
            }
            _ => {
                out.push(Region::rect(r0, c0 + n - 1, 2, 1));
                out.push(Region::rect(r0 + 1, c0 + n - 1, 1, 1));
                peninsula_rects(2, n - 2, r0, c0, out);
            }
        },
        _ => {
            out.push(Region::rect(r0, c0, 1, n));
            east_chain(n, r0, c0, out);
            peninsula_rects(m - 2, n, r0 + 2, c0, out);
        }
    }
}

/// Proper suffixes of a single row, nested towards the eastern end.
fn east_chain(n: usize, r0: usize, c0: usize, out: &mut Vec<Region>) {
    for k in (1..n).rev() {
        out.push(Region::rect(r0, c0 + n - k, 1, k));
    }
}

/// Maximum system on the rectangular board with king adjacency.
///
/// Cardinality equals `formula(F, m, n)`.
pub fn peninsula_system(m: usize, n: usize) -> Result<IslandSystem> {
    let board = Board::rect(m, n)?;
    let mut regions = Vec::new();
    peninsula_rects(m, n, 0, 0, &mut regions);
    IslandSystem::new(board, regions)
}

/// Maximum system on the rectangular board with rook adjacency.
///
/// Rook farness is implied by king farness, so the king construction carries
/// over unchanged and the maximum agrees with `formula(F, m, n)`.
pub fn rook_system(m: usize, n: usize) -> Result<IslandSystem> {
    let board = Board::rect_rook(m, n)?;
    let mut regions = Vec::new();
    peninsula_rects(m, n, 0, 0, &mut regions);
    IslandSystem::new(board, regions)
}

/// Bands and rectangles of the band construction on a cylinder of width
/// `cols`, filling `block` rows starting at row `r0`.
fn band_block_regions(block: usize, cols: usize, r0: usize, out: &mut Vec<Region>) {
    out.push(Region::band(r0, block));
    match block {
        1 => east_chain(cols, r0, 0, out),
        2 => peninsula_rects(2, cols - 1, r0, 0, out),
        _ => {
            out.push(Region::band(r0, 1));
            east_chain(cols, r0, 0, out);
            band_block_regions(block - 2, cols, r0 + 2, out);
        }
    }
}

/// Maximum system on the cylinder.
///
/// With `RectsOnly` the islands are the king construction on an `m x (n-1)`
/// sub-board plus the whole; the spare column is water absorbing the wrap.
/// Cardinality equals `formula(C1, m, n)`. With `RectsAndBands` the system
/// stacks full bands with east-anchored chains between them and reaches
/// `formula(C2, m, n)`.
pub fn cylinder_system(m: usize, n: usize, shapes: CylinderShapes) -> Result<IslandSystem> {
    let board = Board::cylinder(m, n, shapes)?;
    let mut regions = vec![Region::Whole];
    match shapes {
        CylinderShapes::RectsOnly => peninsula_rects(m, n - 1, 0, 0, &mut regions),
        CylinderShapes::RectsAndBands => band_block_regions(m, n, 0, &mut regions),
    }
    IslandSystem::new(board, regions)
}

/// Maximum system on the torus.
///
/// The king construction on an `(m-1) x (n-1)` sub-board plus the whole;
/// the spare row and column are water absorbing both wraps. Cardinality
/// equals `formula(T, m, n)`.
pub fn torus_system(m: usize, n: usize) -> Result<IslandSystem> {
    let board = Board::torus(m, n)?;
    let mut regions = vec![Region::Whole];
    peninsula_rects(m - 1, n - 1, 0, 0, &mut regions);
    IslandSystem::new(board, regions)
}

/// Maximum system on the hypercube: the whole plus every odd-parity vertex.
///
/// Odd-parity vertices are pairwise at Hamming distance two or more, hence
/// far. Cardinality equals `formula(B, nbits, None)`.
pub fn hypercube_system(nbits: usize) -> Result<IslandSystem> {
    let board = Board::hypercube(nbits)?;
    let mut regions = vec![Region::Whole];
    for v in 0u32..(1u32 << nbits) {
        if v.count_ones() % 2 == 1 {
            let mask = SubcubeMask::new(nbits, 0, v)?;
            regions.push(Region::Subcube { mask });
        }
    }
    IslandSystem::new(board, regions)
}

/// Closed-form values linking the boards of successive topologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicChain {
    pub m: u64,
    pub n: u64,
    /// `p(m-1, n-1)`.
    pub peninsula: u64,
    /// `f(m-1, n-1)`.
    pub rect: u64,
    /// `c1(m-1, n)`.
    pub cylinder: u64,
    /// `t(m, n)`.
    pub torus: u64,
    /// Whether `p = f = c1 - 1 = t - 1`.
    pub all_equal: bool,
    /// Whether `p <= f <= c1 <= t`.
    pub monotone: bool,
}

/// Evaluates the chain `p(m-1,n-1) = f(m-1,n-1) = c1(m-1,n) - 1 = t(m,n) - 1`
/// used to peel a torus down to a rectangle. Requires `m, n >= 2`.
pub fn heuristic_chain(m: u64, n: u64) -> Result<HeuristicChain> {
    if m < 2 || n < 2 {
        return Err(Error::Domain("heuristic chain requires m, n >= 2".into()));
    }
    let peninsula = formula(FormulaId::P, m - 1, Some(n - 1))?;
    let rect = formula(FormulaId::F, m - 1, Some(n - 1))?;
    let cylinder = formula(FormulaId::C1, m - 1, Some(n))?;
    let torus = formula(FormulaId::T, m, Some(n))?;
    Ok(HeuristicChain {
        m,
        n,
        peninsula,
        rect,
        cylinder,
        torus,
        all_equal: peninsula == rect && rect == cylinder - 1 && cylinder == torus,
        monotone: peninsula <= rect && rect <= cylinder && cylinder <= torus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Cell, Topology};

    fn count(id: FormulaId, m: u64, n: u64) -> u64 {
        formula(id, m, n.into()).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(count(FormulaId::F, 1, 1), 1);
        assert_eq!(count(FormulaId::F, 1, 5), 5);
        assert_eq!(count(FormulaId::F, 2, 2), 3);
        assert_eq!(count(FormulaId::F, 3, 3), 7);
        assert_eq!(count(FormulaId::F, 4, 4), 11);
        assert_eq!(count(FormulaId::F, 5, 3), 11);
        assert_eq!(count(FormulaId::C1, 2, 2), 3);
        assert_eq!(count(FormulaId::C1, 3, 4), 8);
        assert_eq!(count(FormulaId::C2, 1, 3), 3);
        assert_eq!(count(FormulaId::C2, 3, 2), 5);
        assert_eq!(count(FormulaId::T, 2, 2), 2);
        assert_eq!(count(FormulaId::T, 3, 3), 4);
        assert_eq!(count(FormulaId::T, 4, 4), 8);
        assert_eq!(formula(FormulaId::B, 1, None).unwrap(), 2);
        assert_eq!(formula(FormulaId::B, 3, None).unwrap(), 5);
        assert_eq!(formula(FormulaId::B, 10, None).unwrap(), 513);
    }

    #[test]
    fn formula_aliases_agree() {
        for m in 1..=6 {
            for n in 1..=6 {
                let f = count(FormulaId::F, m, n);
                assert_eq!(count(FormulaId::P, m, n), f);
                assert_eq!(count(FormulaId::PEast, m, n), f);
                assert_eq!(count(FormulaId::FHat, m, n), f);
            }
        }
    }

    #[test]
    fn formula_domains() {
        assert!(formula(FormulaId::F, 0, Some(3)).is_err());
        assert!(formula(FormulaId::F, 3, None).is_err());
        assert!(formula(FormulaId::C1, 1, Some(1)).is_err());
        assert!(formula(FormulaId::C2, 0, Some(2)).is_err());
        assert!(formula(FormulaId::T, 1, Some(3)).is_err());
        assert!(formula(FormulaId::B, 0, None).is_err());
        assert!(formula(FormulaId::B, 3, Some(2)).is_err());
        assert!(formula(FormulaId::B, 64, None).is_err());
    }

    #[test]
    fn formula_ids_round_trip() {
        let ids = [
            FormulaId::F,
            FormulaId::P,
            FormulaId::PEast,
            FormulaId::C1,
            FormulaId::C2,
            FormulaId::T,
            FormulaId::FHat,
            FormulaId::B,
        ];
        for id in ids {
            assert_eq!(id.to_string().parse::<FormulaId>().unwrap(), id);
        }
        assert!("g".parse::<FormulaId>().is_err());
    }

    #[test]
    fn peninsula_small_shapes() {
        let sys = peninsula_system(1, 3).unwrap();
        let expected: Vec<Region> =
            vec![Region::Whole, Region::rect(0, 1, 1, 2), Region::rect(0, 2, 1, 1)];
        assert_eq!(sys.islands().iter().cloned().collect::<Vec<_>>(), expected);

        let sys = peninsula_system(2, 2).unwrap();
        let expected: Vec<Region> =
            vec![Region::Whole, Region::rect(1, 0, 1, 2), Region::rect(1, 1, 1, 1)];
        assert_eq!(sys.islands().iter().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn peninsula_matches_formula_and_validates() {
        for m in 1..=12 {
            for n in 1..=12 {
                let sys = peninsula_system(m, n).unwrap();
                assert!(sys.validate().is_valid(), "invalid at {m}x{n}");
                let want = count(FormulaId::F, m as u64, n as u64);
                assert_eq!(sys.len() as u64, want, "cardinality at {m}x{n}");
            }
        }
    }

    #[test]
    fn peninsula_islands_touch_a_side() {
        for m in 1..=9 {
            for n in 1..=9 {
                let sys = peninsula_system(m, n).unwrap();
                for region in sys.islands() {
                    let Region::Rect { origin, size } = region else {
                        continue;
                    };
                    let touches = origin.0 == 0
                        || origin.1 == 0
                        || origin.0 + size.0 == m
                        || origin.1 + size.1 == n;
                    assert!(touches, "{region:?} interior on {m}x{n}");
                }
            }
        }
    }

    #[test]
    fn rook_construction_matches_formula() {
        for m in 1..=8 {
            for n in 1..=8 {
                let sys = rook_system(m, n).unwrap();
                assert!(sys.validate().is_valid());
                assert_eq!(sys.len() as u64, count(FormulaId::FHat, m as u64, n as u64));
            }
        }
    }

    #[test]
    fn cylinder_rects_only_matches_formula() {
        for m in 1..=12 {
            for n in 2..=12 {
                let sys = cylinder_system(m, n, CylinderShapes::RectsOnly).unwrap();
                assert!(sys.validate().is_valid(), "invalid at {m}x{n}");
                assert_eq!(sys.len() as u64, count(FormulaId::C1, m as u64, n as u64));
            }
        }
    }

    #[test]
    fn cylinder_bands_matches_formula() {
        for m in 1..=12 {
            for n in 2..=12 {
                let sys = cylinder_system(m, n, CylinderShapes::RectsAndBands).unwrap();
                assert!(sys.validate().is_valid(), "invalid at {m}x{n}");
                assert_eq!(sys.len() as u64, count(FormulaId::C2, m as u64, n as u64));
            }
        }
    }

    #[test]
    fn cylinder_band_chain_shape() {
        let sys = cylinder_system(1, 3, CylinderShapes::RectsAndBands).unwrap();
        let expected: Vec<Region> =
            vec![Region::Whole, Region::rect(0, 1, 1, 2), Region::rect(0, 2, 1, 1)];
        assert_eq!(sys.islands().iter().cloned().collect::<Vec<_>>(), expected);

        let sys = cylinder_system(3, 2, CylinderShapes::RectsAndBands).unwrap();
        assert_eq!(sys.len(), 5);
        assert!(sys.islands().contains(&Region::band(0, 1)));
        assert!(sys.islands().contains(&Region::band(2, 1)));
    }

    #[test]
    fn torus_matches_formula() {
        for m in 2..=12 {
            for n in 2..=12 {
                let sys = torus_system(m, n).unwrap();
                assert!(sys.validate().is_valid(), "invalid at {m}x{n}");
                assert_eq!(sys.len() as u64, count(FormulaId::T, m as u64, n as u64));
            }
        }
    }

    #[test]
    fn torus_smallest() {
        let sys = torus_system(2, 2).unwrap();
        let expected: Vec<Region> = vec![Region::Whole, Region::rect(0, 0, 1, 1)];
        assert_eq!(sys.islands().iter().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn hypercube_matches_formula() {
        for nbits in 1..=10 {
            let sys = hypercube_system(nbits).unwrap();
            assert!(sys.validate().is_valid(), "invalid at {nbits}");
            assert_eq!(sys.len() as u64, formula(FormulaId::B, nbits as u64, None).unwrap());
            assert_eq!(sys.board().topology(), Topology::Hypercube);
        }
    }

    #[test]
    fn hypercube_islands_are_odd_vertices() {
        let sys = hypercube_system(3).unwrap();
        for region in sys.islands() {
            let Region::Subcube { mask } = region else {
                continue;
            };
            let cells = sys.board().region_cells(region).unwrap();
            assert_eq!(cells.len(), 1);
            let Some(Cell::Vertex(v)) = cells.first() else {
                panic!("expected vertex");
            };
            assert_eq!(v.count_ones() % 2, 1, "{mask}");
        }
    }

    #[test]
    fn heuristic_chain_values() {
        let chain = heuristic_chain(5, 3).unwrap();
        assert_eq!(chain.peninsula, 6);
        assert_eq!(chain.rect, 6);
        assert_eq!(chain.cylinder, 7);
        assert_eq!(chain.torus, 7);
        assert!(chain.all_equal);
        assert!(chain.monotone);
        assert!(heuristic_chain(1, 5).is_err());
    }

    #[test]
    fn heuristic_chain_holds_widely() {
        for m in 2..=50 {
            for n in 2..=50 {
                let chain = heuristic_chain(m, n).unwrap();
                assert!(chain.all_equal, "chain breaks at {m}x{n}");
                assert!(chain.monotone, "order breaks at {m}x{n}");
            }
        }
    }
}
