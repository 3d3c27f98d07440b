//! Run settings: command-line flags over an optional key-value file over
//! built-in defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Args, Clone, Debug, Default)]
pub struct Flags {
    /// TOML settings file (`n = 64`, `L = 8`, ...); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// cubic, switching, switching-<k>, exact or palette.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Inner sketch of the switching algorithm: palette or exact.
    #[arg(long)]
    pub inner: Option<String>,
    /// mono, flood, random or file.
    #[arg(long)]
    pub adversary: Option<String>,
    /// Stream file for the file adversary, validate and replay.
    #[arg(long)]
    pub stream: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Stream length; defaults to 8·n·L.
    #[arg(long)]
    pub m: Option<usize>,
    /// Degree bound.
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Deletion probability of the random adversary.
    #[arg(long)]
    pub delete_prob: Option<f64>,
    #[arg(long)]
    pub query_every_token: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when the run misses its acceptance threshold.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    algorithm: Option<String>,
    inner: Option<String>,
    adversary: Option<String>,
    stream: Option<PathBuf>,
    n: Option<usize>,
    m: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    k: Option<usize>,
    delta: Option<f64>,
    seed: Option<u64>,
    trials: Option<usize>,
    delete_prob: Option<f64>,
    query_every_token: Option<bool>,
    out: Option<PathBuf>,
    assert: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Cubic,
    Switching { k: usize },
    Exact,
    Palette,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inner {
    Palette,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdversaryKind {
    Mono,
    Flood,
    Random,
    File,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub algorithm: Algorithm,
    pub inner: Inner,
    pub adversary: AdversaryKind,
    pub stream: Option<PathBuf>,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub delta: f64,
    pub seed: u64,
    pub trials: usize,
    pub delete_prob: f64,
    pub query_every_token: bool,
    pub out: Option<PathBuf>,
    pub assert: bool,
}

fn parse_algorithm(s: &str, k: usize) -> Result<Algorithm, CliError> {
    match s {
        "cubic" => Ok(Algorithm::Cubic),
        "exact" => Ok(Algorithm::Exact),
        "palette" => Ok(Algorithm::Palette),
        "switching" => Ok(Algorithm::Switching { k }),
        _ => match s.strip_prefix("switching-").map(str::parse::<usize>) {
            Some(Ok(k)) if k >= 1 => Ok(Algorithm::Switching { k }),
            _ => Err(CliError::invalid(format!("unknown algorithm '{s}' (cubic, switching-<k>, exact, palette)"))),
        },
    }
}

fn parse_inner(s: &str) -> Result<Inner, CliError> {
    match s {
        "palette" => Ok(Inner::Palette),
        "exact" => Ok(Inner::Exact),
        _ => Err(CliError::invalid(format!("unknown inner sketch '{s}' (palette, exact)"))),
    }
}

fn parse_adversary(s: &str) -> Result<AdversaryKind, CliError> {
    match s {
        "mono" => Ok(AdversaryKind::Mono),
        "flood" => Ok(AdversaryKind::Flood),
        "random" => Ok(AdversaryKind::Random),
        "file" => Ok(AdversaryKind::File),
        _ => Err(CliError::invalid(format!("unknown adversary '{s}' (mono, flood, random, file)"))),
    }
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

impl Settings {
    pub fn resolve(flags: &Flags) -> Result<Settings, CliError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let n = flags.n.or(file.n).unwrap_or(64);
        let l = flags.l.or(file.l).unwrap_or(16);
        let k = flags.k.or(file.k).unwrap_or(2);
        let algorithm = parse_algorithm(flags.algorithm.as_deref().or(file.algorithm.as_deref()).unwrap_or("cubic"), k)?;
        let k = match algorithm {
            Algorithm::Switching { k } => k,
            _ => k,
        };
        let inner = parse_inner(flags.inner.as_deref().or(file.inner.as_deref()).unwrap_or("palette"))?;
        let adversary = parse_adversary(flags.adversary.as_deref().or(file.adversary.as_deref()).unwrap_or("random"))?;
        let default_delete = if algorithm == Algorithm::Cubic { 0.0 } else { 0.2 };
        let s = Settings {
            algorithm,
            inner,
            adversary,
            stream: flags.stream.clone().or(file.stream),
            n,
            m: flags.m.or(file.m).unwrap_or(8 * n * l),
            l,
            k,
            delta: flags.delta.or(file.delta).unwrap_or(0.01),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            trials: flags.trials.or(file.trials).unwrap_or(1),
            delete_prob: flags.delete_prob.or(file.delete_prob).unwrap_or(default_delete),
            query_every_token: flags.query_every_token || file.query_every_token.unwrap_or(false),
            out: flags.out.clone().or(file.out),
            assert: flags.assert || file.assert.unwrap_or(false),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n < 2 || self.n > u32::MAX as usize / 2 {
            return Err(CliError::invalid(format!("--n must be in 2..=2^31, got {}", self.n)));
        }
        if self.l == 0 || self.l >= self.n {
            return Err(CliError::invalid(format!("--L must be in 1..n, got {}", self.l)));
        }
        if self.k == 0 || self.k > 8 {
            return Err(CliError::invalid(format!("--k must be in 1..=8, got {}", self.k)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CliError::invalid(format!("--delta must be in (0, 1), got {}", self.delta)));
        }
        if self.m == 0 {
            return Err(CliError::invalid("--m must be positive"));
        }
        if self.trials == 0 {
            return Err(CliError::invalid("--trials must be positive"));
        }
        if !(0.0..1.0).contains(&self.delete_prob) {
            return Err(CliError::invalid(format!("--delete-prob must be in [0, 1), got {}", self.delete_prob)));
        }
        if self.algorithm == Algorithm::Cubic && self.delete_prob > 0.0 && self.adversary == AdversaryKind::Random {
            return Err(CliError::invalid("cubic is insert-only; use --delete-prob 0"));
        }
        if let Some(p) = &self.stream {
            if !p.is_file() {
                return Err(CliError::invalid(format!("stream file {} does not exist", p.display())));
            }
        }
        if self.adversary == AdversaryKind::File && self.stream.is_none() {
            return Err(CliError::invalid("the file adversary needs --stream"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults() {
        let s = Settings::resolve(&Flags::default()).unwrap();
        assert_eq!((s.n, s.l, s.k, s.m, s.trials), (64, 16, 2, 8 * 64 * 16, 1));
        assert_eq!(s.algorithm, Algorithm::Cubic);
        assert_eq!(s.delete_prob, 0.0);
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# experiment\nn = 100\nL = 9\nalgorithm = \"switching-3\"\nseed = 5").unwrap();
        let flags = Flags { config: Some(f.path().into()), n: Some(50), ..Flags::default() };
        let s = Settings::resolve(&flags).unwrap();
        assert_eq!((s.n, s.l, s.seed, s.k), (50, 9, 5, 3));
        assert_eq!(s.algorithm, Algorithm::Switching { k: 3 });
        assert_eq!(s.delete_prob, 0.2);
    }

    #[test]
    fn rejects_bad_ranges_and_keys() {
        for flags in [
            Flags { n: Some(1), ..Flags::default() },
            Flags { l: Some(64), ..Flags::default() },
            Flags { delta: Some(1.5), ..Flags::default() },
            Flags { algorithm: Some("greedy".into()), ..Flags::default() },
            Flags { adversary: Some("file".into()), ..Flags::default() },
        ] {
            assert!(Settings::resolve(&flags).is_err(), "{flags:?}");
        }
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "colour = 3").unwrap();
        assert!(Settings::resolve(&Flags { config: Some(f.path().into()), ..Flags::default() }).is_err());
    }
}
