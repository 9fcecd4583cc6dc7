use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "qmslab",
    version,
    about = "Laboratory for the quantum minimal-surface recursions",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, conflicts_with = "digits")]
    pub prec: Option<u32>,
    /// Working precision as decimal digits (converted to bits plus 16 guard bits).
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// TOML file of `key = value` defaults; flags win over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the run manifest here instead of to standard error.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Positive solution of the parabolic recursion.
    Parabolic {
        #[command(subcommand)]
        action: SolveAction,
    },
    /// Positive solution of the cubic recursion.
    Cubic {
        #[command(subcommand)]
        action: CubicAction,
    },
    /// Exact asymptotic polynomials.
    Poly {
        #[command(subcommand)]
        family: PolyCommand,
    },
    /// The tau-polynomial tower.
    Tau {
        #[command(subcommand)]
        action: TauCommand,
    },
    /// Modified Bessel function value.
    Bessel(BesselArgs),
    /// Riccati structure of the parabolic solution as a function of s.
    Riccati {
        #[command(subcommand)]
        action: RiccatiCommand,
    },
    /// Schroedinger potentials and the boundary term.
    Schrodinger {
        #[command(subcommand)]
        action: SchrodingerCommand,
    },
    /// Darboux ladder over the 1/s^2 potential.
    Darboux(DarbouxArgs),
    /// Semiclassical series of the cubic surface.
    Semiclassical {
        #[command(subcommand)]
        action: SemiCommand,
    },
    /// Regenerates every quoted number and reports one line per criterion.
    VerifyPaper(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum SolveAction {
    Solve(SolveArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub eps: Option<String>,
    /// Depth of the returned sequence.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum CubicAction {
    Solve(CubicSolveArgs),
}

#[derive(Args, Debug)]
pub struct CubicSolveArgs {
    #[command(flatten)]
    pub base: SolveArgs,
    /// Series order used for the matching targets.
    #[arg(long)]
    pub series_order: Option<usize>,
    #[arg(long)]
    pub max_newton: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum PolyCommand {
    /// P_k of either recursion.
    Pk {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_parser = ["parabolic", "cubic"])]
        flavor: Option<String>,
    },
    /// gamma_l of the parabolic f-series.
    Gamma {
        #[arg(long)]
        l: Option<usize>,
    },
    /// P_k of the cubic recursion.
    CubicPk {
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TauCommand {
    Build(TauArgs),
}

#[derive(Args, Debug)]
pub struct TauArgs {
    #[arg(long)]
    pub n_max: Option<i64>,
    /// `all`, `none` or a comma list of identity names.
    #[arg(long)]
    pub verify: Option<String>,
    /// Comma list from u,q,p,tau.
    #[arg(long)]
    pub dump: Option<String>,
}

#[derive(Args, Debug)]
pub struct BesselArgs {
    #[arg(long)]
    pub kind: Option<String>,
    /// Order, decimal or p/q.
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum RiccatiCommand {
    Check(RiccatiArgs),
}

#[derive(Args, Debug)]
pub struct RiccatiArgs {
    /// Highest index checked.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum SchrodingerCommand {
    /// W_n on a grid with its closed form and the eigen residual.
    Potential(PotentialArgs),
    /// The boundary term and, optionally, the quadratic-form identity.
    BoundaryTerm(BoundaryArgs),
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// `start:stop:count`, logarithmically spaced.
    #[arg(long)]
    pub s_grid: Option<String>,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub quadratic_form: bool,
    /// Upper integration limit of the quadratic form.
    #[arg(long)]
    pub upper: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DarbouxArgs {
    /// Comma list, first entry 1, strictly increasing.
    #[arg(long)]
    pub kappas: Option<String>,
    /// Comma list of I/K, one per kappa.
    #[arg(long)]
    pub kinds: Option<String>,
    /// Comma list from eigen,potential.
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long)]
    pub s_grid: Option<String>,
    /// Ladder level reported in the grid; defaults to the top level.
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum SemiCommand {
    /// Order-by-order comparison with the exact cubic series.
    Compare {
        #[arg(long)]
        order: Option<usize>,
    },
    /// 3r^2 at x = 9 r~.
    Invert {
        #[arg(long)]
        x: Option<String>,
        #[arg(long, value_parser = ["difference", "cardano", "hyperbolic"])]
        route: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Reduced depth for the tau tower, Riccati points and grids.
    #[arg(long)]
    pub quick: bool,
    /// Comma list of criterion numbers.
    #[arg(long)]
    pub only: Option<String>,
}
