//! Run configuration and the small text syntaxes used on the command line:
//! comma-separated words and vectors, weights, and operator programs.

use std::path::Path;

use cck_core::isocert::DEFAULT_BUDGET;
use cck_core::program::{Count, Instr, Op};
use cck_core::{CartanDatum, CartanType, CellVec, CellularCrystal, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{self, FormatError};

pub const BUDGET_ENV: &str = "CCK_BUDGET";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Cartan(#[from] cck_core::CartanError),
    #[error(transparent)]
    Cellular(#[from] cck_core::CellularError),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            "text" => Ok(OutputFormat::Text),
            _ => Err(invalid(format!("unknown output format {s:?}"))),
        }
    }
}

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub datum: CartanDatum,
    pub word: Option<Vec<usize>>,
    pub budget: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// The configured word, or the greedy longest word when none was given.
    pub fn word_or_longest(&self) -> Result<Vec<usize>, ConfigError> {
        match &self.word {
            Some(w) => Ok(w.clone()),
            None => cck_core::weyl::longest_word(&self.datum, 4096)
                .map_err(|_| invalid("no --word given and the datum is not of finite type")),
        }
    }

    pub fn crystal(&self) -> Result<CellularCrystal, ConfigError> {
        Ok(CellularCrystal::new(self.datum.clone(), self.word_or_longest()?)?)
    }
}

/// Reads `CCK_BUDGET` if set; it must be a positive integer.
pub fn budget_from_env() -> Result<usize, ConfigError> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(invalid(format!("{BUDGET_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

/// A built-in type name or a JSON file, exactly one of them.
pub fn resolve_datum(ty: Option<&str>, cartan: Option<&Path>) -> Result<CartanDatum, ConfigError> {
    match (ty, cartan) {
        (Some(_), Some(_)) => Err(invalid("give either --type or --cartan, not both")),
        (Some(t), None) => Ok(CartanDatum::builtin(t.parse::<CartanType>()?)),
        (None, Some(p)) => Ok(format::load_cartan(p)?),
        (None, None) => Err(invalid("a Cartan datum is required (--type or --cartan)")),
    }
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Comma-separated index labels.
pub fn parse_word(d: &CartanDatum, s: &str) -> Result<Vec<usize>, ConfigError> {
    Ok(split(s).map(|l| d.index_of(l)).collect::<Result<_, _>>()?)
}

pub fn parse_label(d: &CartanDatum, s: &str) -> Result<usize, ConfigError> {
    Ok(d.index_of(s.trim())?)
}

pub fn parse_vec(s: &str) -> Result<CellVec, ConfigError> {
    split(s)
        .map(|t| t.parse::<i64>().map_err(|_| invalid(format!("not an integer: {t:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(CellVec)
}

/// Vector for `crystal`, defaulting to zero; the length must match.
pub fn parse_vec_for(c: &CellularCrystal, s: Option<&str>) -> Result<CellVec, ConfigError> {
    let x = match s {
        Some(s) => parse_vec(s)?,
        None => c.zero(),
    };
    c.check_len(&x)?;
    Ok(x)
}

/// `c_1,…,c_n` meaning `Σ c_i Λ_i`.
pub fn parse_lambda(d: &CartanDatum, s: &str) -> Result<Weight, ConfigError> {
    let c = parse_vec(s)?.0;
    if c.len() != d.rank() {
        return Err(invalid(format!("weight needs {} coefficients, got {}", d.rank(), c.len())));
    }
    Ok(Weight::from_fundamental(&c))
}

/// Tokens `f3`, `e2`, `emax1`, `f*1`, `e*1`, each optionally followed by
/// `^k`, separated by commas. The string is an operator product, so
/// `f3,f2,f1` means `f̃₃f̃₂f̃₁` and `f1` acts first; the result is in
/// execution order.
pub fn parse_program(d: &CartanDatum, s: &str) -> Result<Vec<Instr>, ConfigError> {
    let mut p = split(s).map(|tok| parse_instr(d, tok)).collect::<Result<Vec<_>, _>>()?;
    p.reverse();
    Ok(p)
}

fn parse_instr(d: &CartanDatum, tok: &str) -> Result<Instr, ConfigError> {
    let (body, times) = match tok.split_once('^') {
        Some((b, k)) => {
            let k = k.parse::<u32>().map_err(|_| invalid(format!("bad count in {tok:?}")))?;
            (b, Some(k))
        }
        None => (tok, None),
    };
    let (op, label, max) = if let Some(l) = body.strip_prefix("emax") {
        (Op::E, l, true)
    } else if let Some(l) = body.strip_prefix("e*") {
        (Op::EStar, l, false)
    } else if let Some(l) = body.strip_prefix("f*") {
        (Op::FStar, l, false)
    } else if let Some(l) = body.strip_prefix('e') {
        (Op::E, l, false)
    } else if let Some(l) = body.strip_prefix('f') {
        (Op::F, l, false)
    } else {
        return Err(invalid(format!("unknown operator in {tok:?}")));
    };
    let count = match (max, times) {
        (true, Some(_)) => return Err(invalid(format!("emax takes no count: {tok:?}"))),
        (true, None) => Count::Max,
        (false, k) => Count::Times(k.unwrap_or(1)),
    };
    Ok(Instr {
        op,
        i: d.index_of(label)?,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn programs() {
        let d = CartanDatum::builtin(CartanType::A1Affine);
        let p = parse_program(&d, "f0, e1^2 ,emax0,f*1^3,e*0").unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p[3], Instr { op: Op::E, i: 1, count: Count::Times(2) });
        assert_eq!(p[2].count, Count::Max);
        assert_eq!(p[1], Instr { op: Op::FStar, i: 1, count: Count::Times(3) });
        assert_eq!(p[4].i, 0);
        assert!(parse_program(&d, "").unwrap().is_empty());
        assert!(parse_program(&d, "g1").is_err());
        assert!(parse_program(&d, "f7").is_err());
        assert!(parse_program(&d, "emax1^2").is_err());
    }

    #[test]
    fn words_and_vectors() {
        let d = CartanDatum::builtin(CartanType::A(3));
        assert_eq!(parse_word(&d, "1,2,3,2,1").unwrap(), vec![0, 1, 2, 1, 0]);
        assert_eq!(parse_vec("1, -2,0").unwrap(), CellVec(vec![1, -2, 0]));
        assert!(parse_vec("1,x").is_err());
        assert_eq!(parse_lambda(&d, "0,1,0").unwrap(), Weight::fundamental(3, 1));
        assert!(parse_lambda(&d, "1").is_err());
    }

    #[test]
    fn datum_sources() {
        assert!(resolve_datum(None, None).is_err());
        assert_eq!(resolve_datum(Some("G2"), None).unwrap().symmetrizers(), &[1, 3]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"labels":["x","y"],"matrix":[[2,-2],[-1,2]]}"#).unwrap();
        assert_eq!(resolve_datum(None, Some(&p)).unwrap().labels(), &["x", "y"]);
        assert!(resolve_datum(Some("A2"), Some(&p)).is_err());
    }
}
