//! The verification sweep: closed-form comparisons of computed groups plus the
//! structural checks on matrices, generators and induced maps.

use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use hookext::ext_engine::{
    modular_closed_form, cyclicity_check, delta_relations_check, ext1_hook_from_factors, ext1_hook_from_induced_maps,
    ext_modular, g_k_order_check, gamma_order_check, gamma_preimage_check, gamma_top_order_check, pi0_factor_check,
    prime_of_k_plus_one, theta_factor, uct_prediction,
};
use hookext::resolution::{block_recursion_check, first_differential_check};
use hookext::{ext_group, Target, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::ResultCache;
use crate::record::{compute_record, CellKey, Family, ResultRecord};
use crate::sweep::SweepSpec;

/// Groups of checks selectable with `verify --theorem`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Ext into D_{a+k} ⊗ ∧^{b-k}: Z_2 in degree 1, Z_{r_k} in degree k, 0 above.
    #[value(alias = "2.3")]
    DegreeReduction,
    /// Shape of the first differential into D_{a+k} ⊗ ∧^{b-k}.
    #[value(alias = "3.1")]
    FirstDifferential,
    /// g_k has order 2 modulo coboundaries.
    #[value(alias = "3.2")]
    GeneratorOrder,
    /// π₀_*(g_1) is the predicted multiple of S_1.
    #[value(alias = "3.3")]
    Pi0Factor,
    /// θ_*(g_k) is (a + ε_{b-k+1} - 1) g_{k-1}.
    #[value(alias = "3.4")]
    ThetaFactor,
    /// Ext^1(Δ(h), Δ(h(k))), computed and rederived from the induced maps.
    #[value(alias = "3.5")]
    Ext1Hook,
    /// Ext^k(Δ(h), Δ(h(k))) = Z_{d_k}.
    #[value(alias = "4.1")]
    TopDegree,
    /// Ext^i(Δ(h), Δ(h(k))) = 0 for i > k.
    #[value(alias = "4.2")]
    Vanishing,
    /// Block recursion of the higher differentials.
    #[value(alias = "4.3")]
    BlockRecursion,
    /// e(A) = (k+1) Γ_k, and the order of Γ_k.
    #[value(alias = "4.4")]
    GammaGenerator,
    /// δ_{i,j} ≡ C(a+k+i-2, j) δ_1.
    #[value(alias = "4.5")]
    DeltaRelations,
    /// E^k(Δ(h), Δ(h(k))) is cyclic on δ_1.
    #[value(alias = "4.6")]
    Cyclicity,
    /// Dimensions over F_p against the universal coefficient theorem and closed forms.
    #[value(alias = "4.7")]
    Modular,
}

impl CheckKind {
    pub fn all() -> Vec<CheckKind> {
        use clap::ValueEnum;
        Self::value_variants().to_vec()
    }

    pub fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// The kind under which a record's closed-form comparison is reported.
pub fn record_kind((_, b, k, i, family): CellKey) -> CheckKind {
    if family == Family::Tensor && k < b {
        CheckKind::DegreeReduction
    } else if i > k {
        CheckKind::Vanishing
    } else if i == k {
        CheckKind::TopDegree
    } else {
        CheckKind::Ext1Hook
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub kind: CheckKind,
    pub a: usize,
    pub b: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<ResultRecord>,
}

impl CheckOutcome {
    fn sort_key(&self) -> (CheckKind, usize, usize, Option<usize>, Option<usize>, Option<u64>) {
        (self.kind, self.a, self.b, self.k, self.i, self.p)
    }

    pub fn location(&self) -> String {
        let mut s = format!("a={} b={}", self.a, self.b);
        if let Some(k) = self.k {
            s += &format!(" k={k}");
        }
        if let Some(i) = self.i {
            s += &format!(" i={i}");
        }
        if let Some(p) = self.p {
            s += &format!(" p={p}");
        }
        s
    }
}

/// One structural check.
#[derive(Clone, Copy, Debug)]
enum Task {
    FirstDifferential { a: usize, b: usize, k: usize },
    GeneratorOrder { a: usize, b: usize, k: usize },
    Pi0Factor { a: usize, b: usize },
    ThetaFactor { a: usize, b: usize, k: usize },
    Ext1FromMaps { a: usize, b: usize, k: usize },
    BlockRecursion { a: usize, b: usize, i: usize, k: usize },
    GammaGenerator { a: usize, b: usize, k: usize },
    DeltaRelations { a: usize, b: usize, k: usize },
    Cyclicity { a: usize, b: usize, k: usize },
    Modular { a: usize, b: usize, k: usize, p: u64 },
}

fn outcome(kind: CheckKind, a: usize, b: usize, k: Option<usize>, i: Option<usize>, p: Option<u64>) -> CheckOutcome {
    CheckOutcome { kind, a, b, k, i, p, passed: true, detail: String::new(), record: None }
}

fn settle(mut o: CheckOutcome, v: hookext::Result<Verdict>) -> CheckOutcome {
    match v {
        Ok(Verdict::Pass) => o.passed = true,
        Ok(fail) => {
            o.passed = false;
            o.detail = fail.to_string();
        }
        Err(e) => {
            o.passed = false;
            o.detail = format!("error: {e}");
        }
    }
    o
}

impl Task {
    fn run(self) -> CheckOutcome {
        use CheckKind as K;
        match self {
            Task::FirstDifferential { a, b, k } => {
                settle(outcome(K::FirstDifferential, a, b, Some(k), None, None), first_differential_check(a, b, k))
            }
            Task::GeneratorOrder { a, b, k } => {
                settle(outcome(K::GeneratorOrder, a, b, Some(k), None, None), g_k_order_check(a, b, k))
            }
            Task::Pi0Factor { a, b } => settle(outcome(K::Pi0Factor, a, b, None, None, None), pi0_factor_check(a, b)),
            Task::ThetaFactor { a, b, k } => {
                let o = outcome(K::ThetaFactor, a, b, Some(k), None, None);
                let v = theta_factor(a, b, k).map(|f| {
                    if f.shifted_parity_holds {
                        Verdict::Pass
                    } else {
                        Verdict::fail(
                            "θ_*(g_k) = (a + ε_{b-k+1} - 1) g_{k-1}",
                            format!("unshifted parity holds: {}", f.unshifted_parity_holds),
                        )
                    }
                });
                settle(o, v)
            }
            Task::Ext1FromMaps { a, b, k } => {
                let o = outcome(K::Ext1Hook, a, b, Some(k), Some(1), None);
                let v = (|| {
                    let computed = ext_group(a, b, 1, &Target::hook_shift(a, b, k)?)?.ext_group;
                    let maps = ext1_hook_from_induced_maps(a, b, k)?;
                    let factors = ext1_hook_from_factors(a, b, k)?;
                    Ok(if computed == maps && computed == factors {
                        Verdict::Pass
                    } else {
                        Verdict::fail(
                            "Ext^1 from induced maps",
                            format!("computed {computed}, from maps {maps}, from factors {factors}"),
                        )
                    })
                })();
                settle(o, v)
            }
            Task::BlockRecursion { a, b, i, k } => {
                settle(outcome(K::BlockRecursion, a, b, Some(k), Some(i), None), block_recursion_check(a, b, i, k))
            }
            Task::GammaGenerator { a, b, k } => {
                let o = outcome(K::GammaGenerator, a, b, Some(k), None, None);
                let v = gamma_preimage_check(a, b, k).and_then(|first| {
                    if !first.is_pass() {
                        return Ok(first);
                    }
                    if k == b {
                        gamma_top_order_check(a, b)
                    } else if prime_of_k_plus_one(k).is_some() {
                        gamma_order_check(a, b, k)
                    } else {
                        Ok(Verdict::Pass)
                    }
                });
                settle(o, v)
            }
            Task::DeltaRelations { a, b, k } => {
                settle(outcome(K::DeltaRelations, a, b, Some(k), None, None), delta_relations_check(a, b, k))
            }
            Task::Cyclicity { a, b, k } => {
                settle(outcome(K::Cyclicity, a, b, Some(k), None, None), cyclicity_check(a, b, k))
            }
            Task::Modular { a, b, k, p } => {
                let o = outcome(K::Modular, a, b, Some(k), None, Some(p));
                let v = (|| {
                    let t = Target::hook_shift(a, b, k)?;
                    for i in 0..=b {
                        let direct = ext_modular(a, b, i, &t, p)?;
                        let uct = uct_prediction(a, b, i, &t, p)?;
                        if direct != uct {
                            return Ok(Verdict::fail("UCT", format!("i={i}: dimension {direct}, UCT predicts {uct}")));
                        }
                        if let Some(closed) = modular_closed_form(a, b, k, i, p) {
                            if closed != direct {
                                return Ok(Verdict::fail(
                                    "closed-form dimension",
                                    format!("i={i}: dimension {direct}, closed form {closed}"),
                                ));
                            }
                        }
                    }
                    Ok(Verdict::Pass)
                })();
                settle(o, v)
            }
        }
    }
}

fn tasks(spec: &SweepSpec, kinds: &[CheckKind]) -> Vec<Task> {
    let want = |k: CheckKind| kinds.contains(&k);
    let k_ok = |k: usize| spec.k.is_none_or(|x| x == k);
    let i_ok = |i: usize| spec.i.is_none_or(|x| x == i);
    let mut out = Vec::new();
    for (a, b) in spec.hooks() {
        for k in (1..b).filter(|&k| k_ok(k)) {
            if want(CheckKind::FirstDifferential) && i_ok(1) {
                out.push(Task::FirstDifferential { a, b, k });
            }
            if want(CheckKind::GeneratorOrder) && i_ok(1) {
                out.push(Task::GeneratorOrder { a, b, k });
            }
            if want(CheckKind::ThetaFactor) && k >= 2 && i_ok(1) {
                out.push(Task::ThetaFactor { a, b, k });
            }
        }
        if want(CheckKind::Pi0Factor) && b >= 2 && spec.k.is_none() && i_ok(1) {
            out.push(Task::Pi0Factor { a, b });
        }
        for k in (1..=b).filter(|&k| k_ok(k)) {
            if want(CheckKind::Ext1Hook) && k >= 2 && i_ok(1) {
                out.push(Task::Ext1FromMaps { a, b, k });
            }
            if want(CheckKind::BlockRecursion) {
                for i in (2..=b).filter(|&i| i_ok(i)) {
                    out.push(Task::BlockRecursion { a, b, i, k });
                }
            }
            if i_ok(k) {
                if want(CheckKind::GammaGenerator) {
                    out.push(Task::GammaGenerator { a, b, k });
                }
                if want(CheckKind::DeltaRelations) {
                    out.push(Task::DeltaRelations { a, b, k });
                }
                if want(CheckKind::Cyclicity) {
                    out.push(Task::Cyclicity { a, b, k });
                }
            }
            if want(CheckKind::Modular) && spec.i.is_none() {
                for &p in &spec.primes {
                    out.push(Task::Modular { a, b, k, p });
                }
            }
        }
    }
    out
}

/// Computes the records for `cells`, reading and filling `cache`. Output order follows `cells`.
pub fn records(cells: &[CellKey], cache: &mut ResultCache) -> Result<Vec<ResultRecord>> {
    let missing: Vec<CellKey> = cells.iter().copied().filter(|&c| cache.get(c).is_none()).collect();
    let fresh: Vec<ResultRecord> = missing
        .par_iter()
        .map(|&(a, b, k, i, f)| compute_record(a, b, k, i, f).map_err(|e| anyhow!("a={a} b={b} k={k} i={i} {f}: {e}")))
        .collect::<Result<_>>()?;
    for r in fresh {
        cache.insert(r);
    }
    Ok(cells.iter().map(|&c| cache.get(c).expect("just computed").clone()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct KindSummary {
    pub checks: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub by_kind: BTreeMap<String, KindSummary>,
    /// The first failing check in sort order.
    pub first_failure: Option<CheckOutcome>,
    #[serde(skip)]
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs every selected check in range. Callers install the thread pool.
pub fn verify(spec: &SweepSpec, kinds: &[CheckKind], cache: &mut ResultCache) -> Result<VerifyReport> {
    let cells: Vec<CellKey> =
        spec.checkable_cells().into_iter().filter(|&c| kinds.contains(&record_kind(c))).collect();
    let mut outcomes: Vec<CheckOutcome> = records(&cells, cache)?
        .into_iter()
        .map(|r| {
            let passed = r.matches() == Some(true);
            CheckOutcome {
                kind: record_kind(r.key()),
                a: r.a,
                b: r.b,
                k: Some(r.k),
                i: Some(r.i),
                p: None,
                passed,
                detail: if passed {
                    String::new()
                } else {
                    format!("{}: got {}, expected {}", r.target, r.group(false), r.expected_group(false).unwrap_or_default())
                },
                record: Some(r),
            }
        })
        .collect();
    outcomes.extend(tasks(spec, kinds).into_par_iter().map(Task::run).collect::<Vec<_>>());
    outcomes.sort_by(|x, y| {
        x.sort_key().cmp(&y.sort_key()).then_with(|| {
            let fam = |o: &CheckOutcome| o.record.as_ref().map(|r| r.target);
            fam(x).cmp(&fam(y))
        })
    });

    let mut by_kind: BTreeMap<String, KindSummary> = BTreeMap::new();
    for o in &outcomes {
        let e = by_kind.entry(o.kind.name()).or_insert(KindSummary { checks: 0, failed: 0 });
        e.checks += 1;
        e.failed += usize::from(!o.passed);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    Ok(VerifyReport {
        checks: outcomes.len(),
        passed: outcomes.len() - failed,
        failed,
        by_kind,
        first_failure: outcomes.iter().find(|o| !o.passed).cloned(),
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepSpec {
        SweepSpec {
            max_a: 2,
            max_b: 3,
            max_sum: 5,
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
    fn small_sweep_passes_every_kind() {
        let report = verify(&small(), &CheckKind::all(), &mut ResultCache::disabled()).unwrap();
        assert!(report.all_passed(), "{:?}", report.first_failure);
        for kind in CheckKind::all() {
            assert!(report.by_kind.contains_key(&kind.name()), "no {} checks", kind.name());
        }
    }

    #[test]
    fn numeric_aliases_parse() {
        use clap::ValueEnum;
        assert_eq!(CheckKind::from_str("4.1", false).unwrap(), CheckKind::TopDegree);
        assert_eq!(CheckKind::from_str("top-degree", false).unwrap(), CheckKind::TopDegree);
    }

    #[test]
    fn record_kinds() {
        assert_eq!(record_kind((2, 3, 2, 1, Family::Hook)), CheckKind::Ext1Hook);
        assert_eq!(record_kind((2, 3, 2, 2, Family::Hook)), CheckKind::TopDegree);
        assert_eq!(record_kind((2, 3, 1, 2, Family::Hook)), CheckKind::Vanishing);
        assert_eq!(record_kind((2, 3, 1, 2, Family::Tensor)), CheckKind::DegreeReduction);
        assert_eq!(record_kind((2, 3, 3, 3, Family::Tensor)), CheckKind::TopDegree);
    }
}
