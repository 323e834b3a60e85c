//! One instance of every theorem check, followed by instances whose
//! hypotheses fail and are refused before any computation.

use chowla_milnor::spaces::{verify_theorem, Params, TheoremId, VerifyConfig};

fn kq(k: u32, q: &[u64]) -> Params {
    Params {
        k: Some(k),
        q: q.to_vec(),
        ..Params::default()
    }
}

fn main() -> chowla_milnor::Result<()> {
    let cfg = VerifyConfig::default();
    let grid = |ks: &[u32], rows: &[&[u64]]| Params {
        ks: ks.to_vec(),
        grid: rows.iter().map(|r| r.to_vec()).collect(),
        ..Params::default()
    };
    let cases = [
        (TheoremId::Okada, kq(2, &[13])),
        (TheoremId::Cor1, kq(3, &[3, 4, 5])),
        (TheoremId::Cor3, kq(2, &[3, 4, 5])),
        (TheoremId::Prop1, kq(2, &[3, 4, 5])),
        (TheoremId::Thm1, kq(1, &[3, 4])),
        (TheoremId::Thm2, kq(1, &[3, 5])),
        (TheoremId::Leminter, kq(3, &[12, 18])),
        (TheoremId::Propinter, kq(2, &[3, 4, 5])),
        (TheoremId::Thm9, grid(&[2, 2], &[&[3, 4], &[5, 7]])),
        (
            TheoremId::Hamahata,
            Params {
                ks: vec![2, 3],
                q: vec![3, 5],
                ..Params::default()
            },
        ),
        // Refused: Q(zeta_5) meets the real subfield of Q(zeta_5).
        (
            TheoremId::Cor1,
            Params {
                m: Some(5),
                ..kq(2, &[5])
            },
        ),
        // Refused: the moduli are not pairwise coprime.
        (TheoremId::Thm9, grid(&[3], &[&[3], &[3]])),
    ];
    for (id, p) in cases {
        let r = verify_theorem(id, &p, &cfg)?;
        println!(
            "{:<10} expected {:>3} computed {:>6} {:<17} {}",
            id.as_str(),
            r.expected,
            r.computed.map_or("-".into(), |c| c.to_string()),
            r.verdict.as_str(),
            r.note.unwrap_or_default()
        );
    }
    Ok(())
}
