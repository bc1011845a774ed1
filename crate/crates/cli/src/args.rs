use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hurwitz_core::odd_covers::DEFAULT_BUDGET;

#[derive(Debug, Clone, Parser)]
#[command(name = "hurwitz-forge", version, about = "Exact experiments on branched covers of the line encoded as permutation tuples")]
pub struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check product, transitivity and genus of a tuple file.
    Validate { file: PathBuf },
    /// Print the genus given by Riemann–Hurwitz.
    Genus { file: PathBuf },
    /// Describe the monodromy group.
    Group { file: PathBuf },
    /// Split every branch point into 3-cycles.
    Refine {
        file: PathBuf,
        /// 1-based entry to leave untouched.
        #[arg(long)]
        keep: Option<usize>,
    },
    /// Search for a simple odd tuple with monodromy A_d.
    Search {
        #[arg(long)]
        genus: u32,
        /// Pole multiplicities n1,n2[,n3].
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..=3)]
        poles: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial cap per worker.
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// List the feasible pole shapes of a given genus and degree.
    Shapes {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        degree: u64,
        /// Also admit a single pole of prime order.
        #[arg(long)]
        include_k1: bool,
    },
    /// Dimension counts and the branch point bound.
    Dims {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        degree: u64,
    },
    /// Random even-generated primitive groups with a 3-cycle must be alternating.
    #[command(name = "lemma1-stress")]
    Lemma1Stress {
        /// `lo-hi`, `lo..hi` or a single degree.
        #[arg(long, default_value = "5-12", value_parser = parse_degree_range)]
        degree_range: RangeInclusive<usize>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Composite covers must show a shared factor over infinity.
    DecompTest {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn parse_degree_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let text = text.trim();
    let (lo, hi) = if let Some((a, b)) = text.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = text.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = text.split_once('-') {
        (a, b)
    } else {
        (text, text)
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad degree {s:?}: {e}"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo < 3 || hi < lo || hi > hurwitz_core::perm::MAX_DEGREE {
        return Err(format!(
            "degree range must satisfy 3 <= lo <= hi <= {}",
            hurwitz_core::perm::MAX_DEGREE
        ));
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degree_range("5-12"), Ok(5..=12));
        assert_eq!(parse_degree_range("5..12"), Ok(5..=12));
        assert_eq!(parse_degree_range("5..=12"), Ok(5..=12));
        assert_eq!(parse_degree_range("7"), Ok(7..=7));
        assert!(parse_degree_range("12-5").is_err());
        assert!(parse_degree_range("2-5").is_err());
        assert!(parse_degree_range("x").is_err());
    }

    #[test]
    fn parses_search_flags() {
        let cli = Cli::try_parse_from([
            "hurwitz-forge", "--format", "json", "search", "--genus", "1", "--poles", "5,4", "--seed", "7",
        ])
        .unwrap();
        assert_eq!(cli.format, Format::Json);
        match cli.command {
            Command::Search { genus, poles, seed, budget } => {
                assert_eq!((genus, poles, seed, budget), (1, vec![5, 4], 7, DEFAULT_BUDGET));
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["hurwitz-forge", "search", "--genus", "1", "--poles", "5,4", "--budget", "0"]).is_err());
    }
}
