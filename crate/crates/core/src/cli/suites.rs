//! Desk-scale batteries. Cases run in parallel; results come back in the
//! canonical parameter order.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::all_characters;
use crate::error::Result;
use crate::numerics::{bridge_cases, bridge_residual, catalan, dirichlet_l, BridgeKind};
use crate::spaces::{verify_theorem, Params, SpanReport, TheoremId, Verdict, VerifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum SuiteName {
    Okada,
    Cor1,
    Kernels,
    Products,
    Theorems,
    NumericsBridge,
}

/// Moduli tuples shared by the cor1 and kernel batteries.
pub const TUPLES: [&[u64]; 7] = [
    &[3, 4],
    &[3, 5],
    &[4, 5],
    &[5, 7],
    &[3, 4, 5],
    &[5, 7, 8],
    &[3, 4, 5, 7],
];

/// Weight vectors run on the product grid `((3,4),(5,7))`.
pub const GRID_WEIGHTS: [[u32; 2]; 3] = [[2, 2], [2, 3], [3, 3]];

fn kq(k: u32, q: &[u64]) -> Params {
    Params {
        k: Some(k),
        q: q.to_vec(),
        ..Params::default()
    }
}

fn grid(ks: &[u32], rows: &[&[u64]]) -> Params {
    Params {
        ks: ks.to_vec(),
        grid: rows.iter().map(|r| r.to_vec()).collect(),
        ..Params::default()
    }
}

fn product_grid() -> [&'static [u64]; 2] {
    [&[3, 4], &[5, 7]]
}

/// The theorem instances of a battery, in report order. Empty for the numeric bridge.
pub fn suite_cases(name: SuiteName) -> Vec<(TheoremId, Params)> {
    use TheoremId::*;
    let mut out = Vec::new();
    match name {
        SuiteName::Okada => {
            for q in 3..=30 {
                for k in 1..=5 {
                    out.push((Okada, kq(k, &[q])));
                }
            }
        }
        SuiteName::Cor1 => {
            for t in TUPLES {
                for k in 2..=5 {
                    out.push((Cor1, kq(k, t)));
                }
            }
        }
        SuiteName::Kernels => {
            for t in TUPLES {
                for k in 2..=5 {
                    out.push((Propinter, kq(k, t)));
                }
            }
            for ks in GRID_WEIGHTS {
                out.push((Propinterm, grid(&ks, &product_grid())));
            }
        }
        SuiteName::Products => {
            for ks in GRID_WEIGHTS {
                for id in [Thm9, Coha, Leminterm] {
                    out.push((id, grid(&ks, &product_grid())));
                }
            }
            out.push((Thm10, grid(&[3, 2], &[&[3, 5], &[4]])));
            out.push((Thm10, grid(&[2, 2], &[&[3, 5], &[4, 7]])));
            out.push((
                Hamahata,
                Params {
                    ks: vec![2, 3],
                    q: vec![3, 5],
                    ..Params::default()
                },
            ));
            out.push((
                Hamahata,
                Params {
                    ks: vec![1, 2],
                    q: vec![4, 5],
                    ..Params::default()
                },
            ));
        }
        SuiteName::Theorems => {
            out.push((Okada, kq(3, &[7])));
            out.push((Cor1, kq(3, &[3, 4, 5])));
            out.push((Cor1, kq(2, &[3, 4, 5])));
            out.push((Cor3, kq(2, &[3, 4, 5])));
            out.push((Prop1, kq(2, &[3, 4, 5])));
            for q in [&[3u64, 4][..], &[3, 5]] {
                out.push((Thm1, kq(1, q)));
                out.push((Thm2, kq(1, q)));
            }
            for (k, q1, q2) in [(3, 5, 7), (2, 5, 7), (3, 12, 18), (2, 12, 18)] {
                out.push((Leminter, kq(k, &[q1, q2])));
            }
            out.push((Leminterm, grid(&[2, 2], &product_grid())));
            out.push((Propinter, kq(2, &[3, 4, 5])));
            out.push((Propinterm, grid(&[2, 2], &product_grid())));
            out.push((Thm9, grid(&[2, 2], &product_grid())));
            out.push((Thm10, grid(&[3, 2], &[&[3, 5], &[4]])));
            out.push((Coha, grid(&[2, 3], &product_grid())));
            out.push((
                Hamahata,
                Params {
                    ks: vec![2, 3],
                    q: vec![3, 5],
                    ..Params::default()
                },
            ));
        }
        SuiteName::NumericsBridge => {}
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub hypothesis_failed: usize,
    pub elapsed_ms: u64,
    pub reports: Vec<SpanReport>,
}

pub fn run_theorem_suite(name: SuiteName, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = std::time::Instant::now();
    let reports = suite_cases(name)
        .par_iter()
        .map(|(id, p)| verify_theorem(*id, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    Ok(SuiteReport {
        suite: super::value_name(&name),
        total: reports.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        hypothesis_failed: count(Verdict::HypothesisFailed),
        elapsed_ms: start.elapsed().as_millis() as u64,
        reports,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgeCase {
    #[serde(flatten)]
    pub kind: BridgeKind,
    /// `log2 |residual|`, or `null` for an exact zero.
    pub residual_log2: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KindMax {
    pub kind: &'static str,
    pub cases: usize,
    pub max_residual_log2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgeSuiteReport {
    pub precision: u32,
    /// Every residual must lie below `2^bound_log2`.
    pub bound_log2: i64,
    pub total: usize,
    pub passed: usize,
    pub maxima: Vec<KindMax>,
    /// Decimal digits on which `L(2, chi_4)` and Catalan's constant agree.
    pub catalan_digits: u32,
    pub catalan_pass: bool,
    pub cases: Vec<BridgeCase>,
}

impl BridgeSuiteReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total && self.catalan_pass
    }
}

/// Residual bound at a working precision: the guard budget plus a safety
/// margin, which is `2^-200` at 256 bits.
pub fn bridge_bound_log2(prec: u32) -> i64 {
    -(prec as i64) + 56
}

fn kind_name(k: &BridgeKind) -> &'static str {
    match k {
        BridgeKind::Reflection { .. } => "reflection",
        BridgeKind::Rep { .. } => "rep",
        BridgeKind::LValue { .. } => "l-value",
    }
}

/// Catalan digits demanded at `prec` bits: 60 at 256 bits.
fn catalan_digits_required(prec: u32) -> u32 {
    ((-bridge_bound_log2(prec)) as f64 * std::f64::consts::LOG10_2).floor() as u32
}

pub fn bridge_suite(max_q: u64, max_k: u32, prec: u32) -> Result<BridgeSuiteReport> {
    let bound = bridge_bound_log2(prec);
    let cases = bridge_cases(max_q, max_k)
        .into_par_iter()
        .map(|kind| {
            let r = bridge_residual(&kind, prec)?;
            let log2 = (!r.is_zero()).then(|| r.log2_abs());
            Ok(BridgeCase {
                pass: r.abs_below_pow2(bound),
                residual_log2: log2,
                kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let maxima = ["reflection", "rep", "l-value"]
        .into_iter()
        .map(|name| {
            let of_kind: Vec<&BridgeCase> = cases
                .iter()
                .filter(|c| kind_name(&c.kind) == name)
                .collect();
            let max = of_kind
                .iter()
                .filter_map(|c| c.residual_log2)
                .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
            KindMax {
                kind: name,
                cases: of_kind.len(),
                max_residual_log2: max,
            }
        })
        .collect();

    // chi_4 is the odd character mod 4, index 1 in the canonical order.
    let chi4 = all_characters(4)
        .into_iter()
        .find(|c| !c.is_even())
        .expect("odd character mod 4");
    let l = dirichlet_l(2, &chi4, prec)?;
    let diff = (&l.re - &catalan(prec)).abs();
    let digits = if diff.is_zero() {
        (prec as f64 * std::f64::consts::LOG10_2) as u32
    } else {
        (-diff.log2_abs() * std::f64::consts::LOG10_2)
            .floor()
            .max(0.0) as u32
    };
    let catalan_pass = digits >= catalan_digits_required(prec) && l.im.abs_below_pow2(bound);

    Ok(BridgeSuiteReport {
        precision: prec,
        bound_log2: bound,
        total: cases.len(),
        passed: cases.iter().filter(|c| c.pass).count(),
        maxima,
        catalan_digits: digits,
        catalan_pass,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_counts() {
        assert_eq!(suite_cases(SuiteName::Okada).len(), 140);
        assert_eq!(suite_cases(SuiteName::Cor1).len(), 28);
        assert_eq!(suite_cases(SuiteName::Kernels).len(), 31);
        assert!(suite_cases(SuiteName::NumericsBridge).is_empty());
        assert_eq!(catalan_digits_required(256), 60);
        assert_eq!(bridge_bound_log2(256), -200);
    }

    #[test]
    fn small_bridge_suite() {
        let r = bridge_suite(5, 3, 128).unwrap();
        assert!(r.all_pass(), "{:?}", r.maxima);
        assert!(r.catalan_digits >= 21);
    }
}
