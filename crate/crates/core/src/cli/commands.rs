//! One function per subcommand, each returning a [`Rendered`] document.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use super::render::{self, Rendered};
use super::suites::{bridge_suite, run_theorem_suite, SuiteName};
use super::{
    exit_code, BridgeKindArg, Command, NumericFn, RunConfig, TheoremArgs, EXIT_OK,
    EXIT_VERDICT_FAILED,
};
use crate::characters::{all_characters, char_matrix, char_table};
use crate::cotangent::{cotan_norm, cotan_via_operator};
use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::numerics::{
    bridge_residual, catalan, cot_derivative_numeric, dirichlet_l, hurwitz_zeta,
    l_value_from_coordinates, pi, zeta_even, BigComplex, BigReal, BridgeKind,
};
use crate::spaces::{
    intersection_dim, product_generators, rank_over_cyclotomic, verify_theorem, vplus_generators,
    GeneratorSet, Params, Selection, SpanReport, TheoremId, Verdict, VerifyConfig,
};

pub fn compute(cfg: &RunConfig) -> Result<Rendered> {
    let vc = cfg.verify_config();
    let rendered = match &cfg.command {
        Command::Cot { k, a, q } => cot(*k, *a, *q, cfg.precision)?,
        Command::Chars { q } => chars(*q)?,
        Command::Gens {
            k,
            ks,
            q,
            drop_base,
        } => gens(*k, ks, q, *drop_base, &vc)?,
        Command::Rank { k, q, m, expect } => rank(*k, q, *m, *expect, &vc)?,
        Command::Kernel(args) => kernel(args, &vc)?,
        Command::Intersect { k, q1, q2 } => {
            report_doc(&intersection_dim(*k, *q1, *q2, &vc)?, false)
        }
        Command::Verify { theorem, args } => {
            let r = verify_theorem(*theorem, &theorem_params(args), &vc)?;
            report_doc(&r, false)
        }
        Command::Suite { name } => suite(*name, &vc)?,
        Command::Numeric {
            func,
            k,
            x,
            a,
            q,
            chi,
            kind,
        } => numeric(
            *func,
            NumArgs {
                k: *k,
                x: x.as_deref(),
                a: *a,
                q: *q,
                chi: *chi,
                kind: *kind,
            },
            cfg.precision,
        )?,
    };
    Ok(rendered)
}

pub fn write(cfg: &RunConfig, r: &Rendered, out: &mut dyn Write) -> Result<i32> {
    render::write(out, cfg.format, r)
        .map_err(|e| Error::Domain(format!("cannot write output: {e}")))?;
    Ok(r.exit)
}

fn theorem_params(a: &TheoremArgs) -> Params {
    Params {
        k: a.k,
        ks: a.ks.clone(),
        q: a.q.clone(),
        grid: a.grid.clone().map(|g| g.0).unwrap_or_default(),
        m: a.m,
    }
}

fn big_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn elem_json(x: &CycloElem) -> Value {
    match x.as_rational() {
        Some(r) => json!(r.to_string()),
        None => json!(x.to_string()),
    }
}

/// A report as a JSON object; `detail` adds the kernel basis and generator labels.
pub fn report_value(r: &SpanReport, detail: bool) -> Map<String, Value> {
    let Value::Object(mut m) = serde_json::to_value(r).expect("report serializes") else {
        unreachable!("reports serialize to objects")
    };
    m.insert("formula".into(), json!(r.formula));
    if detail {
        let kernel: Vec<Value> = r
            .kernel
            .iter()
            .map(|v| Value::Array(v.iter().map(big_to_json).collect()))
            .collect();
        m.insert("kernel".into(), Value::Array(kernel));
        m.insert(
            "labels".into(),
            json!(r.labels.iter().map(ToString::to_string).collect::<Vec<_>>()),
        );
    }
    m
}

fn report_doc(r: &SpanReport, detail: bool) -> Rendered {
    let m = report_value(r, detail);
    Rendered {
        doc: Value::Object(m.clone()),
        records: vec![m],
        exit: exit_code([&r.verdict]),
    }
}

fn numeric_bound(prec: u32) -> i64 {
    -(prec as i64) + 64
}

fn cot(k: u32, a: i64, q: u64, prec: u32) -> Result<Rendered> {
    let v = cotan_norm(k, a, q)?;
    let agree = cotan_via_operator(k, a, q)?.value == v.value;
    let residual = bridge_residual(&BridgeKind::Rep { k, a: v.a, q }, prec)?;
    let numeric_ok = residual.abs_below_pow2(numeric_bound(prec));
    let approx = v.value.numeric_eval(prec);
    let pass = agree && numeric_ok;
    let doc = json!({
        "k": k,
        "a": v.a,
        "q": q,
        "value": elem_json(&v.value),
        "field": v.value.field_label(),
        "routes_agree": agree,
        "numeric": {
            "re": approx.re.to_string(),
            "im": approx.im.to_string(),
            "residual_log2": (!residual.is_zero()).then(|| residual.log2_abs()),
            "pass": numeric_ok,
        },
        "verdict": if pass { Verdict::Pass } else { Verdict::Fail },
    });
    Ok(Rendered::single(
        doc,
        if pass { EXIT_OK } else { EXIT_VERDICT_FAILED },
    ))
}

fn chars(q: u64) -> Result<Rendered> {
    if q == 0 {
        return Err(Error::InvalidModulus {
            modulus: 0,
            reason: "modulus must be positive",
        });
    }
    let table = char_table(q);
    let certified = if q >= 3 {
        Some(char_matrix(q)?.certify_inverse())
    } else {
        None
    };
    let records: Vec<Map<String, Value>> = table
        .iter()
        .map(
            |row| match serde_json::to_value(row).expect("row serializes") {
                Value::Object(m) => m,
                _ => unreachable!(),
            },
        )
        .collect();
    let doc = json!({
        "q": q,
        "count": table.len(),
        "inverse_certified": certified,
        "characters": records,
    });
    let exit = if certified == Some(false) {
        EXIT_VERDICT_FAILED
    } else {
        EXIT_OK
    };
    Ok(Rendered { doc, records, exit })
}

fn generator_records(g: &GeneratorSet) -> Vec<Map<String, Value>> {
    g.items()
        .iter()
        .enumerate()
        .map(|(i, (label, x))| {
            let mut m = Map::new();
            m.insert("index".into(), json!(i));
            m.insert("label".into(), json!(label.to_string()));
            m.insert("value".into(), elem_json(x));
            m
        })
        .collect()
}

fn gens(
    k: Option<u32>,
    ks: &[u32],
    q: &[u64],
    drop_base: bool,
    vc: &VerifyConfig,
) -> Result<Rendered> {
    let g = match (k, ks.is_empty()) {
        (Some(k), true) => {
            if q.len() != 1 || drop_base {
                return Err(Error::Domain(
                    "--k takes one modulus; use --ks for products".into(),
                ));
            }
            vplus_generators(k, q[0])?
        }
        (None, false) => {
            let sel = if drop_base {
                Selection::DropBase
            } else {
                Selection::Full
            };
            product_generators(ks, q, sel)?
        }
        _ => return Err(Error::Domain("give exactly one of --k and --ks".into())),
    };
    vc.guard(g.ambient())?;
    let records = generator_records(&g);
    let doc = json!({
        "field": format!("Q(zeta_{})", g.ambient()),
        "count": g.len(),
        "generators": records,
    });
    Ok(Rendered {
        doc,
        records,
        exit: EXIT_OK,
    })
}

fn rank(
    k: u32,
    q: &[u64],
    m: Option<u64>,
    expect: Option<i64>,
    vc: &VerifyConfig,
) -> Result<Rendered> {
    let Some(expected) = expect else {
        let p = Params {
            k: Some(k),
            q: q.to_vec(),
            m,
            ..Params::default()
        };
        return Ok(report_doc(&verify_theorem(TheoremId::Cor1, &p, vc)?, false));
    };
    // A raw rank against a user-supplied value: no hypotheses, any moduli.
    let start = std::time::Instant::now();
    let m = m.unwrap_or(1);
    let g = GeneratorSet::union(
        q.iter()
            .map(|&qj| vplus_generators(k, qj))
            .collect::<Result<Vec<_>>>()?,
    );
    let (dim, info) = rank_over_cyclotomic(&g, m, vc)?;
    let ok = dim as i64 == expected && info.paths_agree();
    let r = SpanReport {
        theorem: "rank".into(),
        params: Params {
            k: Some(k),
            q: q.to_vec(),
            m: Some(m),
            ..Params::default()
        },
        expected,
        computed: Some(dim as i64),
        kernel_dim: None,
        hypothesis_ok: true,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        note: (!info.paths_agree()).then(|| "rank paths disagree".into()),
        elapsed_ms: start.elapsed().as_millis() as u64,
        formula: "user-supplied".into(),
        kernel: Vec::new(),
        labels: g.labels().cloned().collect(),
    };
    Ok(report_doc(&r, false))
}

fn kernel(args: &TheoremArgs, vc: &VerifyConfig) -> Result<Rendered> {
    let id = match (args.k.is_some(), args.grid.is_some() || !args.ks.is_empty()) {
        (true, false) => TheoremId::Propinter,
        (false, true) => TheoremId::Propinterm,
        _ => {
            return Err(Error::Domain(
                "kernel takes --k with --q, or --ks with --grid".into(),
            ))
        }
    };
    if args.m.is_some() {
        return Err(Error::Domain(
            "kernel is computed over Q; --m is not accepted".into(),
        ));
    }
    Ok(report_doc(
        &verify_theorem(id, &theorem_params(args), vc)?,
        true,
    ))
}

fn suite(name: SuiteName, vc: &VerifyConfig) -> Result<Rendered> {
    if name == SuiteName::NumericsBridge {
        let r = bridge_suite(12, 5, vc.precision)?;
        let exit = if r.all_pass() {
            EXIT_OK
        } else {
            EXIT_VERDICT_FAILED
        };
        let doc = serde_json::to_value(&r).expect("bridge report serializes");
        let records = doc["cases"]
            .as_array()
            .expect("cases")
            .iter()
            .filter_map(|v| v.as_object().cloned())
            .collect();
        return Ok(Rendered { doc, records, exit });
    }
    let r = run_theorem_suite(name, vc)?;
    let records: Vec<Map<String, Value>> =
        r.reports.iter().map(|x| report_value(x, false)).collect();
    let mut doc = serde_json::to_value(&r).expect("suite report serializes");
    doc["reports"] = Value::Array(records.iter().cloned().map(Value::Object).collect());
    Ok(Rendered {
        doc,
        records,
        exit: exit_code(r.reports.iter().map(|x| &x.verdict)),
    })
}

struct NumArgs<'a> {
    k: Option<u32>,
    x: Option<&'a str>,
    a: Option<i64>,
    q: Option<u64>,
    chi: Option<usize>,
    kind: Option<BridgeKindArg>,
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("missing --{name}")))
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("cannot read {s:?} as a rational p/q"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn real_json(x: &BigReal) -> Value {
    json!(x.to_string())
}

fn complex_json(z: &BigComplex) -> Value {
    json!({ "re": z.re.to_string(), "im": z.im.to_string() })
}

fn chi_at(q: u64, idx: usize) -> Result<crate::characters::DirichletChar> {
    all_characters(q)
        .into_iter()
        .nth(idx)
        .ok_or_else(|| Error::Domain(format!("character index {idx} out of range for q = {q}")))
}

fn numeric(func: NumericFn, a: NumArgs<'_>, prec: u32) -> Result<Rendered> {
    let mut doc = Map::new();
    doc.insert("fn".into(), json!(super::value_name(&func)));
    doc.insert("precision".into(), json!(prec));
    let mut exit = EXIT_OK;
    match func {
        NumericFn::Hurwitz => {
            let k = need(a.k, "k")?;
            let x = parse_rational(need(a.x, "x")?)?;
            doc.insert("k".into(), json!(k));
            doc.insert("x".into(), json!(x.to_string()));
            doc.insert("value".into(), real_json(&hurwitz_zeta(k, &x, prec)?));
        }
        NumericFn::DirichletL => {
            let (k, q, i) = (need(a.k, "k")?, need(a.q, "q")?, need(a.chi, "chi")?);
            let chi = chi_at(q, i)?;
            doc.insert("k".into(), json!(k));
            doc.insert("chi".into(), json!(chi.label()));
            doc.insert("value".into(), complex_json(&dirichlet_l(k, &chi, prec)?));
        }
        NumericFn::Cot => {
            let (k, x, q) = (need(a.k, "k")?, need(a.a, "a")?, need(a.q, "q")?);
            doc.insert("k".into(), json!(k));
            doc.insert("a".into(), json!(x));
            doc.insert("q".into(), json!(q));
            doc.insert(
                "value".into(),
                real_json(&cot_derivative_numeric(k, x, q, prec)?),
            );
        }
        NumericFn::Zeta => {
            let k = need(a.k, "k")?;
            let by_hurwitz = hurwitz_zeta(k, &Rational::from_integer(1.into()), prec)?;
            let exact = zeta_even(k, prec)?;
            let diff = (&by_hurwitz - &exact).abs();
            let ok = diff.abs_below_pow2(numeric_bound(prec));
            doc.insert("k".into(), json!(k));
            doc.insert("value".into(), real_json(&exact));
            doc.insert("hurwitz".into(), real_json(&by_hurwitz));
            doc.insert("agree".into(), json!(ok));
            if !ok {
                exit = EXIT_VERDICT_FAILED;
            }
        }
        NumericFn::Pi => {
            doc.insert("value".into(), real_json(&pi(prec)));
        }
        NumericFn::Catalan => {
            doc.insert("value".into(), real_json(&catalan(prec)));
        }
        NumericFn::LCoords => {
            let (k, q, i) = (need(a.k, "k")?, need(a.q, "q")?, need(a.chi, "chi")?);
            let chi = chi_at(q, i)?;
            if chi.is_even() != (k % 2 == 0) {
                return Err(Error::Domain(format!(
                    "{} has the wrong parity for k = {k}",
                    chi.label()
                )));
            }
            doc.insert("k".into(), json!(k));
            doc.insert("chi".into(), json!(chi.label()));
            doc.insert(
                "lambda".into(),
                elem_json(&crate::characters::l_coordinates(k, &chi)?),
            );
            doc.insert(
                "value".into(),
                complex_json(&l_value_from_coordinates(k, &chi, prec)?),
            );
        }
        NumericFn::Bridge => {
            let k = need(a.k, "k")?;
            let q = need(a.q, "q")?;
            let kind = match need(a.kind, "kind")? {
                BridgeKindArg::Reflection => BridgeKind::Reflection {
                    k,
                    a: need_unit(a.a, q)?,
                    q,
                },
                BridgeKindArg::Rep => BridgeKind::Rep {
                    k,
                    a: need_unit(a.a, q)?,
                    q,
                },
                BridgeKindArg::LValue => BridgeKind::LValue {
                    k,
                    q,
                    chi: need(a.chi, "chi")?,
                },
            };
            let r = bridge_residual(&kind, prec)?;
            let bound = super::suites::bridge_bound_log2(prec);
            let ok = r.abs_below_pow2(bound);
            doc.insert("case".into(), json!(kind.label()));
            doc.insert(
                "residual_log2".into(),
                json!((!r.is_zero()).then(|| r.log2_abs())),
            );
            doc.insert("bound_log2".into(), json!(bound));
            doc.insert(
                "verdict".into(),
                json!(if ok { Verdict::Pass } else { Verdict::Fail }),
            );
            if !ok {
                exit = EXIT_VERDICT_FAILED;
            }
        }
    }
    Ok(Rendered::single(Value::Object(doc), exit))
}

fn need_unit(a: Option<i64>, q: u64) -> Result<u64> {
    let a = need(a, "a")?;
    if q == 0 {
        return Err(Error::InvalidModulus {
            modulus: 0,
            reason: "modulus must be positive",
        });
    }
    Ok(a.rem_euclid(q as i64) as u64)
}
