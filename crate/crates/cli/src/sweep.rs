//! Parameter ranges for `verify` and `table`.

use anyhow::{bail, Result};

use crate::record::{expected_ext, CellKey, Family};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub max_a: usize,
    pub max_b: usize,
    /// Bound on `a + b`; ignored when both `a` and `b` are pinned.
    pub max_sum: usize,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub k: Option<usize>,
    pub i: Option<usize>,
    pub family: Option<Family>,
    pub primes: Vec<u64>,
    /// Worker threads; 0 means one per logical CPU.
    pub jobs: usize,
}

impl SweepSpec {
    /// Rejects parameters that cannot describe any cell.
    pub fn validate(&self) -> Result<()> {
        if self.a == Some(0) {
            bail!("a must be at least 1");
        }
        if self.b == Some(0) {
            bail!("b must be at least 1");
        }
        if self.i == Some(0) {
            bail!("i must be at least 1");
        }
        if let (Some(k), Some(b)) = (self.k, self.b) {
            if k > b {
                bail!("k = {k} exceeds b = {b}");
            }
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            bail!("{p} is not a prime");
        }
        if self.hooks().is_empty() {
            bail!("empty sweep: no (a, b) with a <= {}, b <= {}, a + b <= {}", self.max_a, self.max_b, self.max_sum);
        }
        if self.cells().is_empty() {
            bail!("empty sweep: no (k, i) cells match the filters");
        }
        Ok(())
    }

    /// The hooks `(a, b)` in range, in lexicographic order.
    pub fn hooks(&self) -> Vec<(usize, usize)> {
        let a_range = self.a.map_or(1..=self.max_a, |a| a..=a);
        let mut out = Vec::new();
        for a in a_range {
            let b_range = self.b.map_or(1..=self.max_b, |b| b..=b);
            for b in b_range {
                let pinned = self.a.is_some() && self.b.is_some();
                if pinned || a + b <= self.max_sum {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn k_range(&self, b: usize) -> Vec<usize> {
        (0..=b).filter(|k| self.k.is_none_or(|x| x == *k)).collect()
    }

    pub fn i_range(&self, b: usize) -> Vec<usize> {
        (1..=b).filter(|i| self.i.is_none_or(|x| x == *i)).collect()
    }

    pub fn families(&self) -> Vec<Family> {
        match self.family {
            Some(f) => vec![f],
            None => vec![Family::Tensor, Family::Hook],
        }
    }

    /// Every `(a, b, k, i, family)` in range, sorted.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for (a, b) in self.hooks() {
            for k in self.k_range(b) {
                for i in self.i_range(b) {
                    for f in self.families() {
                        out.push((a, b, k, i, f));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// The cells with a closed-form expectation.
    pub fn checkable_cells(&self) -> Vec<CellKey> {
        self.cells().into_iter().filter(|&(a, b, k, i, f)| expected_ext(a, b, k, i, f).is_some()).collect()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SweepSpec {
        SweepSpec {
            max_a: 3,
            max_b: 3,
            max_sum: 4,
            a: None,
            b: None,
            k: None,
            i: None,
            family: None,
            primes: vec![2, 3],
            jobs: 1,
        }
    }

    #[test]
    fn ranges() {
        let s = spec();
        assert_eq!(s.hooks(), vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]);
        let cells = s.cells();
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
        // (1,1): k in {0,1}, i = 1, two families
        assert_eq!(cells.iter().filter(|c| (c.0, c.1) == (1, 1)).count(), 4);
        assert!(s.validate().is_ok());
    }

    #[test]
    fn empty_and_invalid() {
        let mut s = spec();
        s.max_sum = 1;
        assert!(s.validate().is_err());
        let mut s = spec();
        s.i = Some(4);
        assert!(s.validate().is_err());
        let mut s = spec();
        s.primes = vec![4];
        assert!(s.validate().is_err());
        let mut s = spec();
        (s.a, s.b) = (Some(5), Some(5));
        assert_eq!(s.hooks(), vec![(5, 5)]);
    }
}
