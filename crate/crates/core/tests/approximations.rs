use hfcode::approx::{
    distinguished_step, multiset_approx, multiset_approximations, set_approximations,
    set_stabilization, Kind, Stabilization,
};
use hfcode::system::{random_normal_system, random_system, well_founded_solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn distinctions_persist_and_appear_first_for_multisets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..60 {
        let n = rng.gen_range(2..=8);
        let s = random_normal_system(&mut rng, n, 5);
        let n = s.len();
        let sets: Vec<_> = set_approximations(&s).take(n + 3).collect();
        let msets: Vec<_> = multiset_approximations(&s).take(n + 3).collect();
        for j in 0..sets.len() {
            for i in 0..n {
                assert!(sets[j].values[i].rank() <= j as u64);
                for k in (i + 1)..n {
                    if sets[j].values[i] != sets[j].values[k] {
                        assert_ne!(msets[j].values[i], msets[j].values[k], "{s}");
                        for later in &sets[j..] {
                            assert_ne!(later.values[i], later.values[k], "{s}");
                        }
                    }
                }
            }
        }
        assert!(distinguished_step(&s, Kind::Set).all_distinguished(), "{s}");
        assert!(
            distinguished_step(&s, Kind::Multiset).all_distinguished(),
            "{s}"
        );
    }
}

#[test]
fn first_multiset_step_counts_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..60 {
        let s = random_system(&mut rng, 6, 5);
        let mu = multiset_approx(&s, 1);
        for i in 0..s.len() {
            assert_eq!(mu.values[i].cardinality(), s.arity(i) as u64);
            for k in 0..s.len() {
                assert_eq!(mu.values[i] == mu.values[k], s.arity(i) == s.arity(k));
            }
        }
    }
}

#[test]
fn stabilization_matches_well_foundedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..60 {
        let s = random_system(&mut rng, 7, 3);
        let wf = well_founded_solution(&s);
        let approx: Vec<_> = set_approximations(&s).take(12).collect();
        for (i, st) in set_stabilization(&s).into_iter().enumerate() {
            match (st, &wf[i]) {
                (Stabilization::At(j), Some(h)) => {
                    assert!(j as u64 <= h.rank() + 1);
                    assert_eq!(&approx[j].values[i], h);
                }
                (Stabilization::Never, None) => {
                    for (j, t) in approx.iter().enumerate() {
                        assert_eq!(t.values[i].rank(), j as u64, "{s}");
                    }
                }
                other => panic!("unknown {i} of {s}: {other:?}"),
            }
        }
    }
}
