//! Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use chowla_milnor::characters::{all_characters, char_matrix, full_unit_sum, orthogonality_holds};
use chowla_milnor::cli::{bridge_suite, suite_cases, SuiteName};
use chowla_milnor::cotangent::{cotan_norm, cotan_trace_sum, cotan_via_operator};
use chowla_milnor::cyclotomic::units;
use chowla_milnor::exact::{euler_phi, rat};
use chowla_milnor::spaces::{
    block_uniform, coha_generators, dim_vplus, intersection_dim, span_rank_q, verify_theorem,
    Params, TheoremId, VerifyConfig,
};

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, Box<dyn Fn() -> Check>);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

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

fn run_all(name: SuiteName, cfg: &VerifyConfig) -> Result<usize, String> {
    let cases = suite_cases(name);
    for (id, p) in &cases {
        let r = verify_theorem(*id, p, cfg).map_err(err)?;
        ensure(r.passed(), || {
            format!(
                "{id} {:?}: expected {} computed {:?} ({:?})",
                r.params, r.expected, r.computed, r.note
            )
        })?;
    }
    Ok(cases.len())
}

fn okada(cfg: &VerifyConfig) -> Check {
    let n = run_all(SuiteName::Okada, cfg)?;
    ensure(n == 140, || format!("{n} cases"))?;
    Ok(format!("{n} cases, rank phi(q)/2"))
}

fn cor1(cfg: &VerifyConfig) -> Check {
    let n = run_all(SuiteName::Cor1, cfg)?;
    for (k, want) in [(3, 4), (2, 2)] {
        let r = verify_theorem(TheoremId::Cor1, &kq(k, &[3, 4, 5]), cfg).map_err(err)?;
        ensure(r.computed == Some(want), || {
            format!("(3,4,5) k={k}: {:?}", r.computed)
        })?;
    }
    Ok(format!("{n} cases"))
}

fn kernels(cfg: &VerifyConfig) -> Check {
    let n = run_all(SuiteName::Kernels, cfg)?;
    for (id, p) in suite_cases(SuiteName::Kernels) {
        let r = verify_theorem(id, &p, cfg).map_err(err)?;
        let sizes: Vec<usize> = if p.grid.is_empty() {
            p.q.iter().map(|&q| dim_vplus(p.k.unwrap(), q)).collect()
        } else {
            p.grid
                .iter()
                .map(|row| {
                    p.ks.iter()
                        .zip(row)
                        .map(|(&k, &q)| dim_vplus(k, q))
                        .product()
                })
                .collect()
        };
        for v in &r.kernel {
            ensure(block_uniform(v, &sizes), || {
                format!("{id} {p:?}: {v:?} not uniform on blocks {sizes:?}")
            })?;
        }
    }
    Ok(format!("{n} cases, kernel vectors uniform per block"))
}

fn leminter(cfg: &VerifyConfig) -> Check {
    for (k, q1, q2, want) in [(3, 5, 7, 0), (2, 5, 7, 1), (3, 12, 18, 1), (2, 12, 18, 1)] {
        let r = intersection_dim(k, q1, q2, cfg).map_err(err)?;
        ensure(r.computed == Some(want) && r.passed(), || {
            format!("k={k} ({q1},{q2}): {:?}", r.computed)
        })?;
    }
    Ok("4 intersections".into())
}

fn thm1_thm2(cfg: &VerifyConfig) -> Check {
    for id in [TheoremId::Thm1, TheoremId::Thm2] {
        for q in [&[3u64, 4][..], &[3, 5]] {
            let r = verify_theorem(id, &kq(1, q), cfg).map_err(err)?;
            let m: u64 = q.iter().map(|&x| euler_phi(x)).product();
            ensure(
                r.hypothesis_ok && r.passed() && r.params.m == Some(m),
                || {
                    format!(
                        "{id} {q:?}: {:?} m={:?} {:?}",
                        r.verdict, r.params.m, r.note
                    )
                },
            )?;
        }
    }
    Ok("independent over Q(zeta_prod phi), hypothesis holds".into())
}

fn products(cfg: &VerifyConfig) -> Check {
    let r =
        verify_theorem(TheoremId::Thm9, &grid(&[2, 2], &[&[3, 4], &[5, 7]]), cfg).map_err(err)?;
    ensure(r.computed == Some(6) && r.passed(), || {
        format!("thm9: {:?}", r.computed)
    })?;
    let r = verify_theorem(TheoremId::Thm10, &grid(&[3, 2], &[&[3, 5], &[4]]), cfg).map_err(err)?;
    ensure(r.computed == Some(3) && r.passed(), || {
        format!("thm10: {:?}", r.computed)
    })?;
    for ks in [[2u32, 2], [2, 3], [3, 3]] {
        let g = coha_generators(&ks, &[vec![3, 4], vec![5, 7]]).map_err(err)?;
        let rank = span_rank_q(&g, cfg).map_err(err)?.rank;
        ensure(rank == g.len(), || {
            format!("coha {ks:?}: rank {rank} of {}", g.len())
        })?;
    }
    let n = run_all(SuiteName::Products, cfg)?;
    Ok(format!(
        "thm9 6, thm10 3, coha full rank; {n} product cases"
    ))
}

fn trace() -> Check {
    ensure(
        cotan_trace_sum(2, 3).map_err(err)?.trace == rat(8, 3),
        || "k=2 q=3".into(),
    )?;
    ensure(
        cotan_trace_sum(2, 4).map_err(err)?.trace == rat(4, 1),
        || "k=2 q=4".into(),
    )?;
    let mut n = 0;
    for q in 3..=30 {
        for k in [2, 4, 6, 8] {
            ensure(cotan_trace_sum(k, q).map_err(err)?.holds(), || {
                format!("k={k} q={q}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} cases"))
}

fn bridge() -> Check {
    let r = bridge_suite(12, 5, 256).map_err(err)?;
    ensure(r.bound_log2 <= -200, || format!("bound 2^{}", r.bound_log2))?;
    if let Some(c) = r.cases.iter().find(|c| !c.pass) {
        return Err(format!(
            "{} residual 2^{:?}",
            c.kind.label(),
            c.residual_log2
        ));
    }
    ensure(r.catalan_digits >= 60, || {
        format!("Catalan agrees to {} digits", r.catalan_digits)
    })?;
    let worst = r
        .maxima
        .iter()
        .filter_map(|m| m.max_residual_log2)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(format!(
        "{} residuals, worst 2^{worst:.1}; L(2,chi_4) = Catalan to {} digits",
        r.total, r.catalan_digits
    ))
}

fn characters() -> Check {
    for q in 3..=30 {
        let chars = all_characters(q);
        for c in &chars {
            for d in &chars {
                ensure(orthogonality_holds(c, d), || format!("q={q} {c} {d}"))?;
            }
            for k in 1..=5 {
                if c.is_even() != (k % 2 == 0) {
                    ensure(full_unit_sum(k, c).map_err(err)?.is_zero(), || {
                        format!("q={q} k={k} {c}")
                    })?;
                }
            }
        }
        ensure(char_matrix(q).map_err(err)?.certify_inverse(), || {
            format!("inverse q={q}")
        })?;
    }
    Ok("q <= 30".into())
}

fn routes() -> Check {
    let mut n = 0;
    for q in 3..=20u64 {
        for k in 1..=6 {
            for a in units(q) {
                let x = cotan_norm(k, a as i64, q).map_err(err)?;
                let y = cotan_via_operator(k, a as i64, q).map_err(err)?;
                ensure(x.value == y.value, || format!("k={k} a={a} q={q}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} values"))
}

fn main() {
    let cfg = VerifyConfig::default();
    let criteria: Vec<Criterion> = vec![
        (
            "okada dimension",
            Duration::from_secs(120),
            Box::new(move || okada(&cfg)),
        ),
        (
            "cor1 sum-space ranks",
            Duration::from_secs(300),
            Box::new(move || cor1(&cfg)),
        ),
        (
            "propinter/propinterm kernels",
            Duration::from_secs(120),
            Box::new(move || kernels(&cfg)),
        ),
        (
            "leminter intersections",
            Duration::from_secs(120),
            Box::new(move || leminter(&cfg)),
        ),
        (
            "thm1/thm2 independence",
            Duration::from_secs(60),
            Box::new(move || thm1_thm2(&cfg)),
        ),
        (
            "thm9/thm10/coha products",
            Duration::from_secs(300),
            Box::new(move || products(&cfg)),
        ),
        ("trace identity", Duration::from_secs(120), Box::new(trace)),
        ("numeric bridge", Duration::from_secs(120), Box::new(bridge)),
        (
            "character algebra",
            Duration::from_secs(120),
            Box::new(characters),
        ),
        (
            "route agreement",
            Duration::from_secs(120),
            Box::new(routes),
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if t > *budget => Err(format!("{msg}; took {t:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{:.2}s]", i + 1, t.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.2}s]", i + 1, t.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
