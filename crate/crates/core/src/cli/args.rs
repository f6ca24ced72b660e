//! Command-line grammar and value parsers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::collective::Direction;
use crate::error::{Error, Result};
use crate::su2::HalfInt;

/// Directions read from files or flags may deviate this much from unit norm.
pub const DIRECTION_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "macrospin", version, about = "Collective spin observables and contextuality checks")]
pub struct Cli {
    /// Worker threads; overrides the THREADS environment variable.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Block,
    Dense,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicities of each total spin in N spin-s particles.
    Decompose(EnsembleArgs),
    /// Wigner small-d matrix or a single element.
    Wigner(WignerArgs),
    /// Commutator norm of two magnetization projectors over an angle grid.
    CommutatorScan(ScanArgs),
    /// Compatibility graph over projectors along several directions.
    ContextGraph(GraphArgs),
    /// Checks that projector pairs commute only for parallel directions.
    VerifyTheorem(VerifyArgs),
    /// A total spin and row label proving two projectors do not commute.
    Witness(WitnessArgs),
    /// Whether context marginals admit a joint distribution.
    Feasibility(FeasibilityArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EnsembleArgs {
    /// Number of particles.
    #[arg(long = "n")]
    pub n: u32,
    /// Spin of each particle, e.g. 1/2 or 1.
    #[arg(long)]
    pub spin: HalfInt,
}

#[derive(Debug, Args, Serialize)]
pub struct WignerArgs {
    #[arg(long)]
    pub j: HalfInt,
    /// Rotation angle in [0, pi]; accepts decimals and forms like 2pi/3.
    #[arg(long, value_parser = parse_angle)]
    pub beta: f64,
    /// Row label; requires --mprime.
    #[arg(long, allow_hyphen_values = true, requires = "mprime")]
    pub m: Option<HalfInt>,
    /// Column label; requires --m.
    #[arg(long, allow_hyphen_values = true, requires = "m")]
    pub mprime: Option<HalfInt>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub m: HalfInt,
    #[arg(long, allow_hyphen_values = true)]
    pub mprime: HalfInt,
    /// `start:end:count`, inclusive of both ends.
    #[arg(long, value_parser = parse_grid)]
    pub beta_grid: BetaGrid,
    #[arg(long, value_enum, default_value = "block")]
    pub representation: Representation,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// File with one direction per line: three whitespace-separated decimals.
    #[arg(long)]
    pub directions: Option<PathBuf>,
    /// Inline direction `x,y,z`; may be repeated.
    #[arg(long = "direction", allow_hyphen_values = true, value_parser = parse_direction)]
    #[serde(skip)]
    pub inline: Vec<Direction>,
    /// Largest commutator norm still counted as commuting; defaults to
    /// 1e-10 times the Hilbert space dimension.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "block")]
    pub representation: Representation,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, value_parser = parse_grid)]
    pub beta_grid: BetaGrid,
    /// Norm separating "commutes" from "does not"; defaults to 1e-10 times
    /// the Hilbert space dimension.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    /// Magnetization label of the unrotated projector.
    #[arg(long, allow_hyphen_values = true)]
    pub m: HalfInt,
    /// Magnetization label of the rotated projector.
    #[arg(long = "outcome-n", allow_hyphen_values = true)]
    pub outcome_n: HalfInt,
    #[arg(long, value_parser = parse_angle)]
    pub beta: f64,
    /// Search total spins 0, 1/2, ..., jmax.
    #[arg(long, required_unless_present = "n", conflicts_with_all = ["n", "spin"])]
    pub jmax: Option<HalfInt>,
    /// Search the total spins present in N spin-s particles instead.
    #[arg(long = "n", requires = "spin")]
    pub n: Option<u32>,
    #[arg(long, requires = "n")]
    pub spin: Option<HalfInt>,
}

#[derive(Debug, Args, Serialize)]
pub struct FeasibilityArgs {
    /// Scenario document (JSON).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Consistency and feasibility tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

/// Evenly spaced angles, both ends included. Serializes as its spec string.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaGrid {
    pub spec: String,
    pub points: Vec<f64>,
}

impl Serialize for BetaGrid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.spec)
    }
}

/// Decimal angle or a multiple of pi: `pi`, `pi/2`, `2pi/3`, `3*pi/4`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Parse(format!("bad angle '{text}'"));
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    };
    let numerator = t[..pos].trim_end_matches('*');
    let numerator = if numerator.is_empty() { 1.0 } else { numerator.parse::<f64>().map_err(|_| bad())? };
    let rest = &t[pos + 2..];
    let denominator = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    let value = numerator * std::f64::consts::PI / denominator;
    value.is_finite().then_some(value).ok_or_else(bad)
}

/// `start:end:count`; a count of one yields just `start`.
pub fn parse_grid(text: &str) -> Result<BetaGrid> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, count] = parts[..] else {
        return Err(Error::Parse(format!("grid '{text}' is not start:end:count")));
    };
    let (start, end) = (parse_angle(start)?, parse_angle(end)?);
    let count: usize = count.trim().parse().map_err(|_| Error::Parse(format!("bad grid count '{count}'")))?;
    if count == 0 {
        return Err(Error::Parse("grid count must be positive".into()));
    }
    let points = (0..count)
        .map(|i| match i {
            0 => start,
            i if i == count - 1 => end,
            i => start + (end - start) * i as f64 / (count - 1) as f64,
        })
        .collect();
    Ok(BetaGrid { spec: text.to_string(), points })
}

fn parse_triple(text: &str) -> Result<[f64; 3]> {
    let values: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad coordinate '{t}'"))))
        .collect::<Result<_>>()?;
    <[f64; 3]>::try_from(values).map_err(|v| Error::Parse(format!("expected three coordinates, got {}", v.len())))
}

pub fn parse_direction(text: &str) -> Result<Direction> {
    Direction::normalized_within(parse_triple(text)?, DIRECTION_NORM_TOLERANCE)
}

/// One direction per non-blank line; `#` starts a comment.
pub fn parse_direction_file(contents: &str) -> Result<Vec<Direction>> {
    contents
        .lines()
        .enumerate()
        .map(|(i, line)| (i, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| {
            let v = parse_triple(line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            Direction::normalized_within(v, DIRECTION_NORM_TOLERANCE)
                .map_err(|e| Error::InvalidDirection(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        for bad in ["", "pie", "x", "pi/", "inf"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:pi:5").unwrap();
        assert_eq!(g.points.len(), 5);
        assert_eq!(g.points[0], 0.0);
        assert_eq!(g.points[4], PI);
        assert_eq!(g.points[2], PI / 2.0);
        assert_eq!(parse_grid("0.5:1:1").unwrap().points, vec![0.5]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn directions() {
        let d = parse_direction_file("0 0 1\n\n# comment\n1 0 0.0000001\n").unwrap();
        assert_eq!(d.len(), 2);
        assert!((d[1].dot(&d[1]) - 1.0).abs() < 1e-15);
        assert!(parse_direction_file("1 1 0\n").is_err());
        assert!(parse_direction_file("1 0\n").is_err());
        assert_eq!(parse_direction("0,1,0").unwrap(), Direction::Y);
    }

    #[test]
    fn grammar() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["macrospin", "witness", "--m", "-1", "--outcome-n", "-1/2", "--beta", "1", "--jmax", "5"])
            .unwrap();
        let Command::Witness(w) = cli.command else { panic!() };
        assert_eq!(w.m, HalfInt::from_int(-1));
        assert_eq!(w.outcome_n, HalfInt::from_twice(-1));
        assert!(Cli::try_parse_from(["macrospin", "decompose", "--n", "3", "--spin", "1/2", "--bogus", "1"]).is_err());
    }
}
