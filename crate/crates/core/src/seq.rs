//! Item sizes, sequences, and the on-disk sequence format.
//!
//! A size is an integer numerator over a per-sequence denominator `D`, the
//! bin capacity in units. All threshold tests cross-multiply integers, so
//! interval boundaries such as 37/96 stay exact for any `D`.

use std::fs;
use std::path::Path;

use thiserror::Error;

/// An item size: a numerator over the owning sequence's denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Size(pub u64);

impl Size {
    /// True iff this size is strictly greater than `p/q` of capacity `d`.
    pub fn gt_frac(self, p: u64, q: u64, d: u64) -> bool {
        u128::from(self.0) * u128::from(q) > u128::from(p) * u128::from(d)
    }

    /// True iff this size is at most `p/q` of capacity `d`.
    pub fn le_frac(self, p: u64, q: u64, d: u64) -> bool {
        !self.gt_frac(p, q, d)
    }

    /// Large means strictly greater than half the capacity.
    pub fn is_large(self, d: u64) -> bool {
        self.gt_frac(1, 2, d)
    }
}

/// An ordered input sequence with its denominator (bin capacity in units).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub denom: u64,
    pub items: Vec<u64>,
}

/// Errors from constructing or parsing a sequence.
#[derive(Debug, Error)]
pub enum SeqError {
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("item {index} has size {num}, outside [1, {denom}]")]
    OutOfRange { index: usize, num: u64, denom: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Sequence {
    /// Builds a sequence, checking every item lies in `[1, denom]`.
    pub fn new(denom: u64, items: Vec<u64>) -> Result<Self, SeqError> {
        if denom == 0 {
            return Err(SeqError::ZeroDenominator);
        }
        for (index, &num) in items.iter().enumerate() {
            if num == 0 || num > denom {
                return Err(SeqError::OutOfRange { index, num, denom });
            }
        }
        Ok(Self { denom, items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn sizes(&self) -> impl Iterator<Item = Size> + '_ {
        self.items.iter().map(|&n| Size(n))
    }

    /// Total item size in units.
    pub fn total(&self) -> u128 {
        self.items.iter().map(|&n| u128::from(n)).sum()
    }

    /// Copy with the item at `index` removed.
    pub fn without(&self, index: usize) -> Self {
        let mut items = self.items.clone();
        items.remove(index);
        Self { denom: self.denom, items }
    }

    /// Parses the text format: line 1 is `D <denominator>`, then one
    /// numerator per line. Blank trailing lines are ignored.
    pub fn parse(text: &str) -> Result<Self, SeqError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(SeqError::Parse {
            line: 1,
            msg: "empty file, expected `D <denominator>` header".into(),
        })?;
        let denom = match header.trim().strip_prefix("D ") {
            Some(rest) => rest.trim().parse::<u64>().map_err(|e| SeqError::Parse {
                line: 1,
                msg: format!("bad denominator: {e}"),
            })?,
            None => {
                return Err(SeqError::Parse {
                    line: 1,
                    msg: format!("expected `D <denominator>`, got {header:?}"),
                })
            }
        };
        let mut items = Vec::new();
        for (i, line) in lines {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let num = t.parse::<u64>().map_err(|e| SeqError::Parse {
                line: i + 1,
                msg: format!("bad item: {e}"),
            })?;
            items.push(num);
        }
        Self::new(denom, items)
    }

    /// Renders the text format (ASCII, LF-terminated).
    pub fn to_text(&self) -> String {
        let mut out = format!("D {}\n", self.denom);
        for &n in &self.items {
            out.push_str(&n.to_string());
            out.push('\n');
        }
        out
    }

    pub fn read_file(path: &Path) -> Result<Self, SeqError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), SeqError> {
        Ok(fs::write(path, self.to_text())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_cross_multiplication() {
        let d = 96;
        assert!(Size(37).le_frac(37, 96, d));
        assert!(!Size(38).le_frac(37, 96, d));
        assert!(Size(49).is_large(d));
        assert!(!Size(48).is_large(d));
    }

    #[test]
    fn roundtrip_text() {
        let s = Sequence::new(1000, vec![600, 400, 500]).unwrap();
        let text = s.to_text();
        assert_eq!(text, "D 1000\n600\n400\n500\n");
        assert_eq!(Sequence::parse(&text).unwrap(), s);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Sequence::parse("D 1000\n600\nxyz\n").unwrap_err();
        match err {
            SeqError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(Sequence::parse("1000\n600\n").is_err());
        assert!(matches!(
            Sequence::parse("D 1000\n600\n1001\n"),
            Err(SeqError::OutOfRange { index: 1, num: 1001, .. })
        ));
    }
}
