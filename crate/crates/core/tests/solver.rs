use hfcode::code::{
    code_approximations, delta_seq, pow2_neg, ra_code, solve, CodeEvaluator, Dyadic, Enclosure,
    Round, SolveOptions, SolveStatus,
};
use hfcode::system::{random_normal_system, well_founded_solution, SetSystem};
use hfcode::Error;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Each unknown draws its members from the later ones only.
fn random_well_founded(rng: &mut ChaCha8Rng, n: usize, max_arity: usize) -> SetSystem {
    let rhs = (0..n)
        .map(|i| {
            let rest = n - i - 1;
            let m = rng.gen_range(0..=max_arity.min(rest));
            sample(rng, rest, m)
                .into_iter()
                .map(|k| i + 1 + k)
                .collect()
        })
        .collect();
    SetSystem::new(rhs).unwrap()
}

fn systems(seed: u64, count: usize) -> Vec<SetSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            random_normal_system(&mut rng, n, 5)
        })
        .collect()
}

fn mag_hi(e: &Enclosure) -> Dyadic {
    e.lo().abs().max(e.hi().abs())
}

#[test]
fn solver_agrees_with_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let eps = Dyadic::pow2(-50);
    for _ in 0..100 {
        let n = rng.gen_range(1..=10);
        let s = random_well_founded(&mut rng, n, 4);
        let sol = solve(&s, &SolveOptions::with_eps(eps.clone())).unwrap();
        assert_eq!(sol.status, SolveStatus::ExactStabilized);
        let sets = well_founded_solution(&s);
        let mut ev = CodeEvaluator::new(96).unwrap();
        for i in 0..n {
            let h = sets[i].as_ref().unwrap();
            let r = ra_code(h, &eps, 4096).unwrap();
            assert!(r.overlaps(&sol.enclosures[i]), "{s}");
            assert!(sol.enclosures[i].width() <= eps);
            assert!(ev.eval(h).overlaps(&sol.enclosures[i]));
        }
    }
}

#[test]
fn fixed_point_residual() {
    for s in systems(41, 30) {
        let sol = solve(&s, &SolveOptions::with_eps(Dyadic::pow2(-60))).unwrap();
        let mids: Vec<Dyadic> = sol.enclosures.iter().map(Enclosure::midpoint).collect();
        let w = sol.max_width();
        for i in 0..s.len() {
            let mut lo = Dyadic::zero();
            let mut hi = Dyadic::zero();
            for &u in s.rhs(i) {
                lo = &lo + &pow2_neg(&mids[u], Round::Down, 128).unwrap();
                hi = &hi + &pow2_neg(&mids[u], Round::Up, 128).unwrap();
            }
            let slack = &(&w * &Dyadic::from_int(s.arity(i) as i64)) + &Dyadic::pow2(-100);
            let inflated = sol.enclosures[i].inflate(&slack);
            assert!(inflated.contains(&lo) && inflated.contains(&hi), "{s}");
        }
    }
}

#[test]
fn increments_alternate_and_shrink() {
    let slack = Dyadic::pow2(-40);
    let tiny = Dyadic::parse("1e-6", Round::Down, 64).unwrap();
    for s in systems(20, 20) {
        let deltas: Vec<Vec<Enclosure>> =
            (0..=61).map(|j| delta_seq(&s, j, 160).unwrap()).collect();
        for i in 0..s.len() {
            assert_eq!(
                deltas[0][i],
                Enclosure::exact(Dyadic::from_int(s.arity(i) as i64))
            );
            for j in 0..61 {
                let d = &deltas[j][i];
                if j % 2 == 0 {
                    assert!(d.lo() >= &-&slack, "{s}");
                } else {
                    assert!(d.hi() <= &slack, "{s}");
                }
                let smaller = d.lo().abs().min(d.hi().abs());
                let lower_mag = if d.contains(&Dyadic::zero()) {
                    Dyadic::zero()
                } else {
                    smaller
                };
                assert!(mag_hi(&deltas[j + 1][i]) <= &lower_mag + &slack, "{s}");
            }
            assert!(
                mag_hi(&deltas[60][i]) < tiny,
                "|δ^60_{i}| = {} in\n{s}",
                mag_hi(&deltas[60][i])
            );
        }
    }
}

#[test]
fn approximations_stay_in_range_and_telescope() {
    let slack = Dyadic::pow2(-40);
    for s in systems(21, 20) {
        let vals: Vec<Vec<Enclosure>> = code_approximations(&s, 160).unwrap().take(40).collect();
        for i in 0..s.len() {
            let m = Dyadic::from_int(s.arity(i) as i64);
            let mut sum = Enclosure::exact(Dyadic::zero());
            for j in 0..39 {
                let v = &vals[j + 1][i];
                assert!(v.lo() >= &-&slack && v.hi() <= &(&m + &slack));
                sum = sum.add(&delta_seq(&s, j, 160).unwrap()[i]);
                assert!((&sum.midpoint() - &v.midpoint()).abs() <= slack);
            }
        }
    }
}

#[test]
fn trace_is_a_sandwich() {
    for s in systems(22, 10) {
        let opts = SolveOptions {
            record_trace: true,
            fast_path: false,
            ..SolveOptions::with_eps(Dyadic::pow2(-60))
        };
        let sol = solve(&s, &opts).unwrap();
        for step in &sol.trace {
            assert!(step.lower.iter().zip(&step.upper).all(|(l, u)| l <= u));
        }
        for w in sol.trace.windows(2) {
            assert!(w[0].lower.iter().zip(&w[1].lower).all(|(a, b)| a <= b));
            assert!(w[0].upper.iter().zip(&w[1].upper).all(|(a, b)| a >= b));
        }
        assert!(sol.max_width() <= Dyadic::pow2(-60));
    }
}

#[test]
fn solver_reports_budget_errors() {
    let s: SetSystem = "a = {a, b}\nb = {a}".parse().unwrap();
    let opts = SolveOptions {
        max_precision: 64,
        ..SolveOptions::with_eps(Dyadic::pow2(-200))
    };
    match solve(&s, &opts) {
        Err(Error::PrecisionExhausted {
            precision,
            best: Some(best),
            ..
        }) => {
            assert_eq!(precision, 64);
            assert_eq!(best.enclosures.len(), 2);
        }
        other => panic!("{other:?}"),
    }
    let bad = SolveOptions::with_eps(Dyadic::zero());
    assert!(matches!(solve(&s, &bad), Err(Error::InvalidArgument(_))));
}
