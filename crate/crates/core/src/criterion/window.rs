use serde::{Deserialize, Serialize};

use crate::corpus::typewriter_pass;
use crate::error::{Error, Result};

/// How far the window [n, m] is probed for each row n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MCapRule {
    /// m_cap(n) = c·n
    Multiple(usize),
    /// m_cap(n) = n + c
    Offset(usize),
    /// m_cap(n) = n + 2^(j+1) where j is the typewriter pass containing n,
    /// so the window sweeps at least one full pass.
    FullPass,
    /// m_cap(n) = c for every row.
    Fixed(usize),
}

impl Default for MCapRule {
    fn default() -> Self {
        MCapRule::Multiple(4)
    }
}

impl MCapRule {
    pub fn cap(self, n: usize) -> usize {
        match self {
            MCapRule::Multiple(c) => c * n,
            MCapRule::Offset(c) => n + c,
            MCapRule::FullPass => n + (1usize << (typewriter_pass(n) + 1)),
            MCapRule::Fixed(c) => c,
        }
    }

    /// Parses `4n`, `n+1`, `pass`, or a fixed integer.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::config("m-cap", format!("cannot parse `{s}` (forms: 4n, n+1, pass, 512)"));
        if t == "pass" || t == "full-pass" || t == "typewriter" {
            return Ok(MCapRule::FullPass);
        }
        if let Some(c) = t.strip_prefix("n+") {
            return c.parse().map(MCapRule::Offset).map_err(|_| bad());
        }
        if t == "n" {
            return Ok(MCapRule::Multiple(1));
        }
        if let Some(c) = t.strip_suffix('n') {
            let c = c.strip_suffix('*').unwrap_or(c);
            return c.parse().map(MCapRule::Multiple).map_err(|_| bad());
        }
        t.parse().map(MCapRule::Fixed).map_err(|_| bad())
    }

    pub fn label(self) -> String {
        match self {
            MCapRule::Multiple(c) => format!("{c}n"),
            MCapRule::Offset(c) => format!("n+{c}"),
            MCapRule::FullPass => "pass".into(),
            MCapRule::Fixed(c) => c.to_string(),
        }
    }
}

/// The (n, m) grid a table is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowGrid {
    pub n_grid: Vec<usize>,
    pub m_cap: MCapRule,
}

pub const DEFAULT_N_GRID: [usize; 6] = [4, 8, 16, 32, 64, 128];

impl Default for WindowGrid {
    fn default() -> Self {
        Self {
            n_grid: DEFAULT_N_GRID.to_vec(),
            m_cap: MCapRule::default(),
        }
    }
}

impl WindowGrid {
    pub fn new(n_grid: Vec<usize>, m_cap: MCapRule) -> Self {
        Self { n_grid, m_cap }
    }

    /// Powers of two from `lo` to `hi` inclusive.
    pub fn dyadic(lo: usize, hi: usize, m_cap: MCapRule) -> Self {
        let mut n_grid = Vec::new();
        let mut n = lo.max(1);
        while n <= hi {
            n_grid.push(n);
            n *= 2;
        }
        Self { n_grid, m_cap }
    }

    pub fn cap(&self, n: usize) -> usize {
        self.m_cap.cap(n)
    }

    pub fn max_index(&self) -> usize {
        self.n_grid.iter().map(|&n| self.cap(n)).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::BadGrid("n_grid is empty".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::BadGrid("sequence indices start at 1".into()));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadGrid("n_grid must be strictly increasing".into()));
        }
        for &n in &self.n_grid {
            let m = self.cap(n);
            if m < n + 1 {
                return Err(Error::WindowEmpty { n, m });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rules() {
        assert_eq!(MCapRule::parse("4n").unwrap(), MCapRule::Multiple(4));
        assert_eq!(MCapRule::parse("4*n").unwrap(), MCapRule::Multiple(4));
        assert_eq!(MCapRule::parse("n+1").unwrap(), MCapRule::Offset(1));
        assert_eq!(MCapRule::parse("n + 16").unwrap(), MCapRule::Offset(16));
        assert_eq!(MCapRule::parse("pass").unwrap(), MCapRule::FullPass);
        assert_eq!(MCapRule::parse("300").unwrap(), MCapRule::Fixed(300));
        assert!(MCapRule::parse("n*").is_err());
        for r in [MCapRule::Multiple(3), MCapRule::Offset(2), MCapRule::FullPass, MCapRule::Fixed(9)] {
            assert_eq!(MCapRule::parse(&r.label()).unwrap(), r);
        }
    }

    #[test]
    fn full_pass_caps() {
        // n = 4 is in pass 2 (indices 3..=6), next pass has 8 blocks
        assert_eq!(MCapRule::FullPass.cap(4), 4 + 8);
        assert_eq!(MCapRule::FullPass.cap(7), 7 + 16);
    }

    #[test]
    fn validation() {
        assert!(WindowGrid::default().validate().is_ok());
        assert!(WindowGrid::new(vec![], MCapRule::default()).validate().is_err());
        assert!(WindowGrid::new(vec![4, 4], MCapRule::default()).validate().is_err());
        assert!(matches!(
            WindowGrid::new(vec![4, 8], MCapRule::Multiple(1)).validate(),
            Err(Error::WindowEmpty { n: 4, m: 4 })
        ));
        assert_eq!(WindowGrid::dyadic(4, 100, MCapRule::Offset(1)).n_grid, vec![4, 8, 16, 32, 64]);
    }
}
