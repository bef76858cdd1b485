//! The online packers as streaming state machines.

mod anyfit;
mod harmonic;
mod hm;
mod matching;
mod rhm;
mod rom;
mod rrm;
mod ss;

pub use anyfit::{BfPacker, FfPacker, NfPacker};
pub use harmonic::HaPacker;
pub use hm::HmPacker;
pub use matching::{MbfPacker, OmPacker};
pub use rhm::RhmPacker;
pub use rom::{RomClass, RomPacker};
pub use rrm::{RrmCounters, RrmPacker, RrmState};
pub use ss::{SsPacker, SS_MAX_DENOM};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::packer::{PackError, Packer};

/// Parsed algorithm identifier. Canonical strings: `nf`, `ff`, `bf`, `mbf`,
/// `om`, `ha`, `rom`, `hm`, `hmm`, `rrm`, `rhm`, `ss`, with parameterized
/// forms `ha:K`, `hm:K`, `hmm:K`, `om:K` (bare forms default to K = 20).
/// Bare `rom` is Relaxed Online Match restricted to class 1 of K = 19; the
/// extended form `rom:CLASS[:K]` selects another class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmId {
    Nf,
    Ff,
    Bf,
    Mbf,
    Om(u32),
    Ha(u32),
    Rom { k: u32, class: u32 },
    Hm(u32),
    Hmm(u32),
    Rrm,
    Rhm,
    Ss,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown algorithm id {0:?}")]
pub struct AlgorithmParseError(pub String);

impl FromStr for AlgorithmId {
    type Err = AlgorithmParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgorithmParseError(s.to_string());
        let mut parts = s.split(':');
        let base = parts.next().unwrap_or("");
        let params: Vec<u32> = parts
            .map(|p| p.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let arity = params.len();
        let k = |min: u32| -> Result<u32, AlgorithmParseError> {
            match arity {
                0 => Ok(20),
                1 if params[0] >= min => Ok(params[0]),
                _ => Err(bad()),
            }
        };
        let id = match base {
            "nf" if arity == 0 => AlgorithmId::Nf,
            "ff" if arity == 0 => AlgorithmId::Ff,
            "bf" if arity == 0 => AlgorithmId::Bf,
            "mbf" if arity == 0 => AlgorithmId::Mbf,
            "om" => AlgorithmId::Om(k(2)?),
            "ha" => AlgorithmId::Ha(k(1)?),
            "hm" => AlgorithmId::Hm(k(1)?),
            "hmm" => AlgorithmId::Hmm(k(1)?),
            "rom" => match arity {
                0 => AlgorithmId::Rom { k: 19, class: 1 },
                1 if params[0] >= 1 && params[0] <= 19 => AlgorithmId::Rom { k: 19, class: params[0] },
                2 if params[1] >= 1 && params[0] >= 1 && params[0] <= params[1] => {
                    AlgorithmId::Rom { k: params[1], class: params[0] }
                }
                _ => return Err(bad()),
            },
            "rrm" if arity == 0 => AlgorithmId::Rrm,
            "rhm" if arity == 0 => AlgorithmId::Rhm,
            "ss" if arity == 0 => AlgorithmId::Ss,
            _ => return Err(bad()),
        };
        Ok(id)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmId::Nf => write!(f, "nf"),
            AlgorithmId::Ff => write!(f, "ff"),
            AlgorithmId::Bf => write!(f, "bf"),
            AlgorithmId::Mbf => write!(f, "mbf"),
            AlgorithmId::Om(k) => write!(f, "om:{k}"),
            AlgorithmId::Ha(k) => write!(f, "ha:{k}"),
            AlgorithmId::Rom { k: 19, class: 1 } => write!(f, "rom"),
            AlgorithmId::Rom { k, class } => write!(f, "rom:{class}:{k}"),
            AlgorithmId::Hm(k) => write!(f, "hm:{k}"),
            AlgorithmId::Hmm(k) => write!(f, "hmm:{k}"),
            AlgorithmId::Rrm => write!(f, "rrm"),
            AlgorithmId::Rhm => write!(f, "rhm"),
            AlgorithmId::Ss => write!(f, "ss"),
        }
    }
}

/// Builds a fresh packer for denominator `denom`.
pub fn make_packer(id: &AlgorithmId, denom: u64) -> Result<Box<dyn Packer>, PackError> {
    Ok(match *id {
        AlgorithmId::Nf => Box::new(NfPacker::new(denom)),
        AlgorithmId::Ff => Box::new(FfPacker::new(denom)),
        AlgorithmId::Bf => Box::new(BfPacker::new(denom)),
        AlgorithmId::Mbf => Box::new(MbfPacker::new(denom)),
        AlgorithmId::Om(k) => Box::new(OmPacker::new(denom, k)),
        AlgorithmId::Ha(k) => Box::new(HaPacker::new(denom, k)),
        AlgorithmId::Rom { k, class } => Box::new(RomPacker::new(denom, k, class)),
        AlgorithmId::Hm(k) => Box::new(HmPacker::hm(denom, k)),
        AlgorithmId::Hmm(k) => Box::new(HmPacker::hmm(denom, k)),
        AlgorithmId::Rrm => Box::new(RrmPacker::new(denom)),
        AlgorithmId::Rhm => Box::new(RhmPacker::new(denom)),
        AlgorithmId::Ss => Box::new(SsPacker::new(denom)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_roundtrip() {
        for (text, canon) in [
            ("nf", "nf"),
            ("bf", "bf"),
            ("om", "om:20"),
            ("om:30", "om:30"),
            ("ha:7", "ha:7"),
            ("hm:20", "hm:20"),
            ("hmm:19", "hmm:19"),
            ("rom", "rom"),
            ("rom:3", "rom:3:19"),
            ("rrm", "rrm"),
            ("rhm", "rhm"),
            ("ss", "ss"),
        ] {
            let id: AlgorithmId = text.parse().unwrap();
            assert_eq!(id.to_string(), canon);
            assert_eq!(canon.parse::<AlgorithmId>().unwrap(), id);
        }
        assert!("xyz".parse::<AlgorithmId>().is_err());
        assert!("nf:3".parse::<AlgorithmId>().is_err());
        assert!("om:1".parse::<AlgorithmId>().is_err());
        assert!("hm:0".parse::<AlgorithmId>().is_err());
    }
}
