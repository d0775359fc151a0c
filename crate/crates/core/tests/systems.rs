use std::collections::BTreeSet;

use hfcode::code::{solve, Dyadic, SolveOptions};
use hfcode::hf::{ack_decode_u64, HfSet};
use hfcode::system::{
    coarsest_bisimulation, graph_to_system, hfset_to_system, is_normal, is_well_founded, normalize,
    random_normal_system, random_system, well_founded_solution, PointedGraph, SetSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn blocks_of(s: &SetSystem, block: &[usize], i: usize) -> BTreeSet<usize> {
    s.rhs(i).iter().map(|&u| block[u]).collect()
}

#[test]
fn partition_is_a_bisimulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let n = rng.gen_range(1..=30);
        let arity = rng.gen_range(0..=4);
        let s = random_system(&mut rng, n, arity);
        let p = coarsest_bisimulation(&s);
        let block = p.assignment();
        for i in 0..n {
            for k in (i + 1)..n {
                if block[i] == block[k] {
                    assert_eq!(blocks_of(&s, block, i), blocks_of(&s, block, k), "{s}");
                }
            }
        }
        assert!(p.rounds() <= n.max(1));
        let (q, map) = normalize(&s);
        assert!(is_normal(&q), "{s}");
        assert_eq!(q.len(), p.block_count());
        assert_eq!(map, block);
        let (qq, id) = normalize(&q);
        assert_eq!(qq, q);
        assert!(id.iter().enumerate().all(|(i, &c)| i == c));
    }
}

#[test]
fn normalize_preserves_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let eps = Dyadic::pow2(-50);
    let opts = SolveOptions::with_eps(eps.clone());
    let two_eps = &eps + &eps;
    for _ in 0..40 {
        let n = rng.gen_range(1..=10);
        let s = random_system(&mut rng, n, 3);
        let (q, map) = normalize(&s);
        let a = solve(&s, &opts).unwrap();
        let b = solve(&q, &opts).unwrap();
        for i in 0..n {
            let (x, y) = (&a.enclosures[i], &b.enclosures[map[i]]);
            assert!(x.inflate(&two_eps).overlaps(y), "{s}");
        }
    }
}

#[test]
fn well_founded_round_trip() {
    for i in (0..4000u64).step_by(7) {
        let h = ack_decode_u64(i);
        let (s, p) = hfset_to_system(&h);
        assert!(is_well_founded(&s));
        assert_eq!(well_founded_solution(&s)[p].as_ref(), Some(&h));
        let edges = (0..s.len())
            .flat_map(|v| s.rhs(v).iter().map(move |&w| (v, w)))
            .collect();
        let g = PointedGraph::new(s.len(), edges, p).unwrap();
        let (t, q) = graph_to_system(&g).unwrap();
        assert_eq!(well_founded_solution(&t)[q].as_ref(), Some(&h));
    }
}

#[test]
fn cyclic_systems_are_not_well_founded() {
    let s: SetSystem = "a = {b}\nb = {c}\nc = {a}\nd = {}".parse().unwrap();
    assert!(!is_well_founded(&s));
    let sol = well_founded_solution(&s);
    assert!(sol[..3].iter().all(Option::is_none));
    assert_eq!(sol[3], Some(HfSet::empty()));
    let (q, _) = normalize(&s);
    assert_eq!(q.len(), 2);
}

#[test]
fn random_normal_systems_are_normal() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let s = random_normal_system(&mut rng, 8, 5);
        assert!(is_normal(&s));
    }
}
