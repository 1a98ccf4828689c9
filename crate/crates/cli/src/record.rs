//! One computed Ext group per parameter cell, with its closed-form expectation.

use std::fmt;
use std::time::Instant;

use hookext::combinatorics::{d_k, r_k};
use hookext::{ext_group, AbelianGroupInvariants, Target};
use serde::{Deserialize, Serialize};

/// Which family the target module belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `D_{a+k} ⊗ ∧^{b-k}`.
    Tensor,
    /// `Δ(a+k, 1^{b-k})`.
    Hook,
}

impl Family {
    pub fn target(self, a: usize, b: usize, k: usize) -> hookext::Result<Target> {
        match self {
            Family::Tensor => Target::tensor_shift(a, b, k),
            Family::Hook => Target::hook_shift(a, b, k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Tensor => "tensor",
            Family::Hook => "hook",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A computed `Ext^i(Δ(a, 1^b), M_k)`; groups are kept as invariant factors (decimal
/// strings) and rendered on output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub i: usize,
    pub target: Family,
    pub invariant_factors: Vec<String>,
    pub expected: Option<Vec<String>>,
    pub wall_ms: u64,
}

/// Sort and cache key.
pub type CellKey = (usize, usize, usize, usize, Family);

impl ResultRecord {
    pub fn key(&self) -> CellKey {
        (self.a, self.b, self.k, self.i, self.target)
    }

    pub fn group(&self, ascii: bool) -> String {
        render_factors(&self.invariant_factors, ascii)
    }

    pub fn expected_group(&self, ascii: bool) -> Option<String> {
        self.expected.as_ref().map(|e| render_factors(e, ascii))
    }

    pub fn matches(&self) -> Option<bool> {
        self.expected.as_ref().map(|e| e == &self.invariant_factors)
    }

    pub fn row(&self, ascii: bool) -> RecordRow {
        RecordRow {
            a: self.a,
            b: self.b,
            k: self.k,
            i: self.i,
            target: self.target,
            group: self.group(ascii),
            expected: self.expected_group(ascii),
            matches: self.matches(),
            invariant_factors: self.invariant_factors.clone(),
        }
    }
}

/// Output view of a record; field order is the serialized column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub i: usize,
    pub target: Family,
    pub group: String,
    pub expected: Option<String>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub invariant_factors: Vec<String>,
}

pub const CSV_HEADER: [&str; 8] = ["a", "b", "k", "i", "target", "group", "expected", "match"];

impl RecordRow {
    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.a.to_string(),
            self.b.to_string(),
            self.k.to_string(),
            self.i.to_string(),
            self.target.to_string(),
            self.group.clone(),
            self.expected.clone().unwrap_or_default(),
            self.matches.map(|m| m.to_string()).unwrap_or_default(),
        ]
    }
}

/// Replaces the non-ASCII symbols of module and group names.
pub fn asciify(s: &str, ascii: bool) -> String {
    if !ascii {
        return s.to_string();
    }
    s.replace('⊗', "(x)").replace('∧', "Lambda").replace('Δ', "Delta").replace('⊕', "+")
}

pub fn render_factors(factors: &[String], ascii: bool) -> String {
    if factors.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = factors.iter().map(|t| format!("Z_{t}")).collect();
    parts.join(if ascii { " + " } else { " ⊕ " })
}

fn factors(g: &AbelianGroupInvariants) -> Vec<String> {
    g.torsion.iter().map(ToString::to_string).collect()
}

/// Closed-form value of `Ext^i`, where one is known.
pub fn expected_ext(a: usize, b: usize, k: usize, i: usize, family: Family) -> Option<AbelianGroupInvariants> {
    let cyclic = AbelianGroupInvariants::cyclic;
    if i > b {
        return Some(AbelianGroupInvariants::trivial());
    }
    // D_{a+b} is also Δ(h(b))
    let family = if k == b { Family::Hook } else { family };
    match family {
        Family::Hook => {
            if i > k {
                Some(AbelianGroupInvariants::trivial())
            } else if i == k {
                Some(cyclic(d_k((a + b) as u64, k as u64)))
            } else if i == 1 {
                Some(if (a + b + k) % 2 == 1 { cyclic(2) } else { AbelianGroupInvariants::trivial() })
            } else {
                None
            }
        }
        Family::Tensor if k >= 1 => {
            if i > k {
                Some(AbelianGroupInvariants::trivial())
            } else if i == k {
                Some(cyclic(r_k(k as u64)))
            } else if i == 1 {
                Some(cyclic(2))
            } else {
                None
            }
        }
        Family::Tensor => None,
    }
}

/// Computes one cell.
pub fn compute_record(a: usize, b: usize, k: usize, i: usize, family: Family) -> hookext::Result<ResultRecord> {
    let target = family.target(a, b, k)?;
    let start = Instant::now();
    let result = ext_group(a, b, i, &target)?;
    let wall_ms = start.elapsed().as_millis() as u64;
    Ok(ResultRecord {
        a,
        b,
        k,
        i,
        target: family,
        invariant_factors: factors(&result.ext_group),
        expected: expected_ext(a, b, k, i, family).map(|g| factors(&g)),
        wall_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(render_factors(&[], false), "0");
        assert_eq!(render_factors(&["2".into(), "4".into()], false), "Z_2 ⊕ Z_4");
        assert_eq!(render_factors(&["2".into(), "4".into()], true), "Z_2 + Z_4");
    }

    #[test]
    fn closed_forms() {
        let z = |n| Some(AbelianGroupInvariants::cyclic(n));
        assert_eq!(expected_ext(2, 3, 2, 1, Family::Hook), z(2));
        assert_eq!(expected_ext(3, 3, 2, 2, Family::Hook), z(3));
        assert_eq!(expected_ext(2, 3, 1, 2, Family::Hook), Some(AbelianGroupInvariants::trivial()));
        assert_eq!(expected_ext(1, 5, 3, 3, Family::Tensor), z(2));
        assert_eq!(expected_ext(1, 5, 3, 2, Family::Tensor), None);
    }

    #[test]
    fn records_match_closed_forms() {
        let r = compute_record(2, 3, 2, 1, Family::Hook).unwrap();
        assert_eq!(r.group(false), "Z_2");
        assert_eq!(r.matches(), Some(true));
        assert!(compute_record(2, 3, 4, 1, Family::Hook).is_err());
    }
}
