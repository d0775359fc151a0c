use rand::seq::index::sample;
use rand::Rng;

use super::bisim::normalize;
use super::set_system::SetSystem;

/// A uniformly shaped random system: each equation gets an arity in
/// `0..=max_arity` (capped at `n`) and that many distinct members.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R, n: usize, max_arity: usize) -> SetSystem {
    let rhs = (0..n)
        .map(|_| {
            let m = rng.gen_range(0..=max_arity.min(n));
            sample(rng, n, m).into_vec()
        })
        .collect();
    SetSystem::new(rhs).expect("sampled indices lie in range")
}

/// [`random_system`] quotiented by bisimilarity, so it may have fewer than
/// `n` unknowns.
pub fn random_normal_system<R: Rng + ?Sized>(rng: &mut R, n: usize, max_arity: usize) -> SetSystem {
    normalize(&random_system(rng, n, max_arity)).0
}
