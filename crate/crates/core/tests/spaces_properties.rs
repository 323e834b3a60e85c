use chowla_milnor::cotangent::cotan_norm;
use chowla_milnor::exact::{euler_phi, pairwise_coprime};
use chowla_milnor::spaces::{
    block_uniform, coha_generators, conjugation_eigenspace_dim, independent_over_cyclotomic,
    kernel_of_sum_map, span_rank_q, vplus_generators, GeneratorSet, Label, VerifyConfig,
};

#[test]
fn okada_dimension_and_eigenspace() {
    let cfg = VerifyConfig::default();
    for q in 3..=30u64 {
        for k in 1..=5 {
            let info = span_rank_q(&vplus_generators(k, q).unwrap(), &cfg).unwrap();
            assert_eq!(info.rank as u64, euler_phi(q) / 2, "q={q} k={k}");
            assert!(info.paths_agree());
        }
        for k in 1..=2 {
            assert_eq!(conjugation_eigenspace_dim(k, q) as u64, euler_phi(q) / 2);
        }
    }
}

#[test]
fn smaller_level_spaces_sit_inside_larger_ones() {
    let cfg = VerifyConfig::default();
    for q1 in [12u64, 15, 18, 20, 24, 30] {
        for q in (3..q1).filter(|d| q1 % d == 0) {
            for k in 1..=4 {
                let big = vplus_generators(k, q1).unwrap();
                let r_big = span_rank_q(&big, &cfg).unwrap().rank;
                let union = GeneratorSet::union([big, vplus_generators(k, q).unwrap()]);
                assert_eq!(
                    span_rank_q(&union, &cfg).unwrap().rank,
                    r_big,
                    "q={q} q1={q1} k={k}"
                );
            }
        }
    }
}

#[test]
fn kernel_vectors_are_uniform_on_blocks() {
    let cfg = VerifyConfig::default();
    for qs in [
        &[3u64, 4][..],
        &[3, 5],
        &[4, 5],
        &[5, 7],
        &[3, 4, 5],
        &[5, 7, 8],
        &[3, 4, 5, 7],
    ] {
        assert!(pairwise_coprime(qs));
        let sizes: Vec<usize> = qs.iter().map(|&q| (euler_phi(q) / 2) as usize).collect();
        for k in 2..=5 {
            let r = kernel_of_sum_map(k, qs, &cfg).unwrap();
            let expected = if k % 2 == 0 { qs.len() - 1 } else { 0 };
            assert_eq!(r.kernel.len(), expected);
            assert!(r.passed());
            for v in &r.kernel {
                assert!(block_uniform(v, &sizes), "{qs:?} k={k} {v:?}");
            }
        }
    }
}

#[test]
fn pruned_product_sets_are_independent() {
    let cfg = VerifyConfig::default();
    let grid = vec![vec![3, 4], vec![5, 7]];
    for ks in [[2u32, 2], [2, 3], [3, 3]] {
        let g = coha_generators(&ks, &grid).unwrap();
        assert_eq!(span_rank_q(&g, &cfg).unwrap().rank, g.len(), "{ks:?}");
    }
}

#[test]
fn single_nonzero_vectors_are_independent() {
    let cfg = VerifyConfig::default();
    for (k, a, q) in [(2, 1, 5), (3, 2, 7), (1, 1, 8)] {
        let v = cotan_norm(k, a as i64, q).unwrap().value;
        let g = GeneratorSet::new(vec![(Label::Cot { k, a, q }, v)]);
        for m in [1, 3, 4, 5, 12] {
            assert!(
                independent_over_cyclotomic(&g, m, &cfg).unwrap(),
                "C_{k}({a},{q}) over Q(zeta_{m})"
            );
        }
    }
}

#[test]
fn phi_guard_refuses_large_fields() {
    let cfg = VerifyConfig {
        max_phi: 16,
        ..VerifyConfig::default()
    };
    let g = vplus_generators(2, 35).unwrap();
    assert!(span_rank_q(&g, &cfg).is_err());
}
