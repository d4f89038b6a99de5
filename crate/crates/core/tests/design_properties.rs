use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ternary_steiner::code::build_welch_code;
use ternary_steiner::design::{
    dual_support_design, p_rank, read_block_list, verify_automorphism, verify_t_design, write_block_list,
    DesignVerdict, IncidenceStructure,
};
use ternary_steiner::gf::Field;
use ternary_steiner::pg::pg_point_line_design;

/// Pair coverage by definition: for every pair, count the blocks holding both.
fn pair_counts(v: usize, blocks: &[Vec<usize>]) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 0..v {
        for y in x + 1..v {
            out.push(blocks.iter().filter(|b| b.contains(&x) && b.contains(&y)).count() as u64);
        }
    }
    out
}

fn relabel(d: &IncidenceStructure, perm: &[usize]) -> IncidenceStructure {
    let mut blocks = Vec::new();
    for i in 0..d.distinct_blocks() {
        let b: Vec<usize> = d.block(i).points().iter().map(|&p| perm[p]).collect();
        for _ in 0..d.multiplicity(i) {
            blocks.push(b.clone());
        }
    }
    IncidenceStructure::from_blocks(d.v(), blocks).unwrap()
}

fn random_blocks() -> impl Strategy<Value = (usize, usize, Vec<Vec<usize>>)> {
    (4usize..12, 2usize..5).prop_flat_map(|(v, k)| {
        let k = k.min(v);
        let block = prop::sample::subsequence((0..v).collect::<Vec<_>>(), k);
        (Just(v), Just(k), prop::collection::vec(block, 1..30))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn verdict_matches_definition((v, k, blocks) in random_blocks()) {
        let d = IncidenceStructure::from_blocks(v, &blocks).unwrap();
        let counts = pair_counts(v, &blocks);
        let constant = counts.iter().all(|&c| c == counts[0]);
        match verify_t_design(&d, 2).unwrap() {
            DesignVerdict::Design(c) => {
                prop_assert!(constant);
                prop_assert_eq!(c.lambda, counts[0]);
                prop_assert_eq!((c.v, c.k, c.b), (v, k, blocks.len()));
                prop_assert!(c.verified);
            }
            DesignVerdict::Refuted(r) => {
                prop_assert!(!constant);
                let (x, y) = (r.subset[0], r.subset[1]);
                let actual = blocks.iter().filter(|b| b.contains(&x) && b.contains(&y)).count() as u64;
                prop_assert_eq!(r.count, actual);
                prop_assert_ne!(r.count, r.expected);
            }
        }
    }

    #[test]
    fn block_list_round_trips((v, _k, blocks) in random_blocks()) {
        let d = IncidenceStructure::from_blocks(v, &blocks).unwrap();
        let mut buf = Vec::new();
        write_block_list(&d, 2, &mut buf).unwrap();
        let (t, back) = read_block_list(&buf[..]).unwrap();
        prop_assert_eq!(t, 2);
        prop_assert_eq!(back, d);
        // blocks appear in lexicographic order
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<Vec<usize>> = text.lines().skip(1).map(|l| l.split(' ').map(|s| s.parse().unwrap()).collect()).collect();
        prop_assert!(parsed.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rank_is_a_relabelling_invariant((v, _k, blocks) in random_blocks(), seed in any::<u64>()) {
        let d = IncidenceStructure::from_blocks(v, &blocks).unwrap();
        let mut perm: Vec<usize> = (0..v).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let e = relabel(&d, &perm);
        prop_assert_eq!(p_rank(&d, 3).unwrap(), p_rank(&e, 3).unwrap());
        prop_assert_eq!(p_rank(&d, 2).unwrap(), p_rank(&e, 2).unwrap());
        prop_assert!(p_rank(&d, 3).unwrap() <= v.min(d.b()));
    }
}

#[test]
fn projective_designs_are_steiner_with_formula_rank() {
    for (dim, v, rank) in [(2usize, 13usize, 7usize), (4, 121, 106), (6, 1093, 1065)] {
        let d = pg_point_line_design(dim).unwrap();
        let cert = *verify_t_design(&d, 2).unwrap().certificate().unwrap();
        assert_eq!((cert.v, cert.k, cert.lambda), (v, 4, 1));
        assert_eq!(cert.b, v * (v - 1) / 12);
        assert_eq!(p_rank(&d, 3).unwrap(), rank);
    }
}

#[test]
fn relabelled_steiner_system_keeps_parameters_but_not_blocks() {
    let f = Field::new(5).unwrap();
    let d = dual_support_design(&build_welch_code(&f).unwrap(), 4).unwrap();
    let mut perm: Vec<usize> = (0..d.v()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    let e = relabel(&d, &perm);
    let c = *verify_t_design(&e, 2).unwrap().certificate().unwrap();
    assert_eq!((c.v, c.k, c.lambda, c.b), (121, 4, 1, 1210));
    assert_eq!(p_rank(&e, 3).unwrap(), 111);
    assert!(!verify_automorphism(&d, &perm).unwrap());
}
