//! Command-line front end for the islands library.
//!
//! Exit codes: 0 success or valid or feasible, 1 invalid or infeasible,
//! 2 usage or parse error, 3 search budget exhausted.

use std::collections::BTreeSet;
use std::io::Read;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use islands::{
    blastfree_all_levels, cylinder_system, formula, heuristic_chain, hypercube_system,
    max_system_exact, min_uncovered_blastfree, peninsula_system, rook_system, torus_system,
    Adjacency, Board, Cell, Error, FormulaId, HeightMap, IslandSystem, Region, SearchBudget,
    Topology, ValidationOutcome,
};

#[derive(Parser)]
#[command(
    name = "islands",
    version,
    about = "Maximum-cardinality island systems on rectangular, cylindric, toroidal, and hypercube boards"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form maximum (f, p, p_east, c1, c2, t, f_hat take m n; b takes n).
    Formula { id: String, m: u64, n: Option<u64> },
    /// Emit the deterministic maximum system for a board as JSON.
    Build { board: String },
    /// Validate a system and report forest bounds and grid-point budgets.
    Verify {
        /// System JSON file, `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Extract the island system of a height map.
    Extract {
        board: String,
        /// Heights file (whitespace-separated values), `-` for standard input.
        #[arg(default_value = "-")]
        heights: String,
    },
    /// Print the characteristic heights of a system.
    Synthesize {
        /// System JSON file, `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the containment forest of a system with its statistics.
    Forest {
        /// System JSON file, `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        /// Skip the dummy second children.
        #[arg(long)]
        no_augment: bool,
    },
    /// Exact maximum island-system cardinality with witness.
    SearchMax {
        board: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Minimum uncovered area over blast-free families of far rectangles.
    SearchBlastfree {
        board: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Blast verdict for every level section of a height map.
    CheckLevels {
        board: String,
        /// Heights file (whitespace-separated values), `-` for standard input.
        #[arg(default_value = "-")]
        heights: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the rectangle-cylinder-torus identity chain at (m, n).
    CheckHeuristic {
        m: u64,
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// ASCII picture of a system: one letter per island, uppercase maximal,
    /// `~` for water.
    Render {
        /// Render a heights file on this board instead of system JSON.
        #[arg(long, value_name = "BOARD")]
        heights: Option<String>,
        /// Input file, `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Abort after exploring this many search nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Abort after this many seconds.
    #[arg(long)]
    budget_seconds: Option<u64>,
}

impl BudgetArgs {
    fn to_budget(&self) -> SearchBudget {
        let mut budget = SearchBudget::default();
        if let Some(nodes) = self.budget_nodes {
            budget.max_nodes = nodes;
        }
        if let Some(seconds) = self.budget_seconds {
            budget.time_limit = Some(Duration::from_secs(seconds));
        }
        budget
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<Error>() {
                Some(
                    Error::Parse(_)
                    | Error::DegenerateBoard(_)
                    | Error::InvalidRegion(_)
                    | Error::Unsupported(_)
                    | Error::Domain(_),
                ) => 2,
                Some(_) => 1,
                None => 2,
            };
            std::process::ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Formula { id, m, n } => {
            let id: FormulaId = id.parse::<FormulaId>().map_err(anyhow::Error::new)?;
            println!("{}", formula(id, m, n)?);
            Ok(0)
        }
        Command::Build { board } => {
            let board: Board = board.parse()?;
            let system = build_system(&board)?;
            println!("{}", serde_json::to_string_pretty(&system)?);
            Ok(0)
        }
        Command::Verify { input, json } => verify(&read_input(&input)?, json),
        Command::Extract { board, heights } => {
            let board: Board = board.parse()?;
            let map = HeightMap::parse(&board, &read_input(&heights)?)?;
            let system = map.extract_islands();
            println!("{}", serde_json::to_string_pretty(&system)?);
            Ok(0)
        }
        Command::Synthesize { input, json } => {
            let system = parse_system(&read_input(&input)?)?;
            let map = system.synthesize_heights()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&map.to_json())?);
            } else {
                print!("{}", map.to_text());
            }
            Ok(0)
        }
        Command::Forest { input, no_augment } => {
            let system = parse_system(&read_input(&input)?)?;
            let forest = system.forest(!no_augment)?;
            println!("{}", serde_json::to_string_pretty(&forest.to_json())?);
            Ok(0)
        }
        Command::SearchMax { board, budget } => {
            let board: Board = board.parse()?;
            let result = max_system_exact(&board, &budget.to_budget())?;
            let out = serde_json::json!({
                "optimum": result.optimum,
                "feasible": true,
                "witness": result.witness,
                "explored_nodes": result.explored_nodes,
                "proven_exact": result.proven_exact,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(if result.proven_exact { 0 } else { 3 })
        }
        Command::SearchBlastfree { board, budget } => {
            let board: Board = board.parse()?;
            let result = min_uncovered_blastfree(&board, &budget.to_budget())?;
            let feasible = result.uncovered.is_some();
            let mut out = serde_json::json!({
                "optimum": result.uncovered,
                "feasible": feasible,
                "witness": result.witness,
                "explored_nodes": result.explored_nodes,
                "proven_exact": result.proven_exact,
            });
            if let Some(delta) = result.conjecture_delta {
                out["conjecture_delta"] = delta.into();
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(if !result.proven_exact {
                3
            } else if feasible {
                0
            } else {
                1
            })
        }
        Command::CheckLevels { board, heights, json } => {
            let board: Board = board.parse()?;
            let map = HeightMap::parse(&board, &read_input(&heights)?)?;
            let outcome = blastfree_all_levels(&map)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&outcome)?);
            } else {
                for level in &outcome.levels {
                    println!("level {}: {}", level.level, if level.blast { "blast" } else { "ok" });
                }
                println!("all clear: {}", if outcome.all_clear { "yes" } else { "no" });
            }
            Ok(if outcome.all_clear { 0 } else { 1 })
        }
        Command::CheckHeuristic { m, n, json } => {
            let chain = heuristic_chain(m, n)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&chain)?);
            } else {
                println!("p(m-1,n-1) = {}", chain.peninsula);
                println!("f(m-1,n-1) = {}", chain.rect);
                println!("c1(m-1,n)  = {}", chain.cylinder);
                println!("t(m,n)     = {}", chain.torus);
                println!("chain p = f = c1-1 = t-1: {}", verdict(chain.all_equal));
                println!("order p <= f <= c1 <= t:  {}", verdict(chain.monotone));
            }
            Ok(if chain.all_equal && chain.monotone { 0 } else { 1 })
        }
        Command::Render { heights, input } => {
            let system = match heights {
                Some(board) => {
                    let board: Board = board.parse()?;
                    HeightMap::parse(&board, &read_input(&input)?)?.extract_islands()
                }
                None => parse_system(&read_input(&input)?)?,
            };
            print!("{}", render_system(&system)?);
            Ok(0)
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn parse_system(text: &str) -> anyhow::Result<IslandSystem> {
    serde_json::from_str(text).map_err(|e| anyhow::Error::new(Error::Parse(e.to_string())))
}

fn build_system(board: &Board) -> islands::Result<IslandSystem> {
    match board.topology() {
        Topology::Rect => match board.adjacency() {
            Adjacency::Rook => rook_system(board.rows(), board.cols()),
            _ => peninsula_system(board.rows(), board.cols()),
        },
        Topology::Cylinder => cylinder_system(board.rows(), board.cols(), board.cylinder_shapes()),
        Topology::Torus => torus_system(board.rows(), board.cols()),
        Topology::Hypercube => hypercube_system(board.nbits()),
    }
}

fn verify(text: &str, json: bool) -> anyhow::Result<u8> {
    let system = parse_system(text)?;
    match system.validate() {
        ValidationOutcome::Violation(violation) => {
            if json {
                let out = serde_json::json!({
                    "valid": false,
                    "violation": violation.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("valid: no");
                println!("violation: {violation}");
            }
            Ok(1)
        }
        ValidationOutcome::Valid => {
            let stats = system.forest(true)?.check_bounds()?;
            let budgets = system.budget_report()?;
            let ok = budgets.all_hold();
            if json {
                let out = serde_json::json!({
                    "valid": true,
                    "islands": system.len(),
                    "forest": stats,
                    "budgets": budgets,
                    "budgets_hold": ok,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("valid: yes");
                println!("islands: {}", system.len());
                println!(
                    "forest: vertices={} leaves={} dummies={} minimal={}",
                    stats.vertices, stats.leaves, stats.dummies, stats.minimal_islands
                );
                for (name, line) in [
                    ("leaf budget 4s+2d", budgets.leaf_budget),
                    ("cover budget", budgets.cover_budget),
                    ("mu budget", budgets.mu_budget),
                ] {
                    if let Some(line) = line {
                        println!(
                            "{name}: {} <= {}: {}",
                            line.used,
                            line.capacity,
                            verdict(line.holds())
                        );
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

/// Letter of each cell's innermost island, `a` to `z` cycling in canonical
/// island order, uppercase when that island is maximal; `~` where only the
/// whole board covers the cell.
fn render_system(system: &IslandSystem) -> anyhow::Result<String> {
    let board = system.board();
    let islands: Vec<&Region> = system.islands().iter().filter(|r| **r != Region::Whole).collect();
    let cells: Vec<BTreeSet<Cell>> =
        islands.iter().map(|r| board.region_cells(r)).collect::<islands::Result<_>>()?;
    let maximal: BTreeSet<Region> = system.maximal_islands()?.into_iter().collect();
    let glyph = |cell: Cell| -> char {
        let mut innermost: Option<usize> = None;
        for (i, island_cells) in cells.iter().enumerate() {
            if island_cells.contains(&cell)
                && innermost.is_none_or(|best| island_cells.len() < cells[best].len())
            {
                innermost = Some(i);
            }
        }
        match innermost {
            None => '~',
            Some(i) => {
                let letter = (b'a' + (i % 26) as u8) as char;
                if maximal.contains(islands[i]) {
                    letter.to_ascii_uppercase()
                } else {
                    letter
                }
            }
        }
    };
    let mut out = String::new();
    if board.is_grid() {
        for row in 0..board.rows() {
            for col in 0..board.cols() {
                out.push(glyph(Cell::grid(row, col)));
            }
            out.push('\n');
        }
    } else {
        for cell in board.cells() {
            out.push(glyph(cell));
        }
        out.push('\n');
    }
    Ok(out)
}
