//! Shared fixtures for the kernel benchmarks.

use mcgni_core::games::{gen_quadratic, EntryDist, Game, GameInstance};
use mcgni_core::mcgni::{sample_profile_batch, Profile};
use mcgni_core::pushforward::{init_generator, Architecture, GeneratorKind, OmegaBatch};
use mcgni_core::rng;

/// Quadratic game with the standard generator for each player and one batch.
pub fn standard_fixture(n_i: usize, batch: usize) -> (GameInstance, Profile, Vec<OmegaBatch>) {
    let game = gen_quadratic(0, n_i, EntryDist::Uniform01);
    let kind = GeneratorKind::Net(Architecture::standard());
    let profile = Profile::new(
        game.dims()
            .iter()
            .enumerate()
            .map(|(i, &n)| init_generator(&kind, n, n, i as u64))
            .collect(),
    );
    let omega = sample_profile_batch(&mut rng::seeded(0, rng::stream::BATCH), &profile, batch);
    (game, profile, omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let (game, profile, omega) = standard_fixture(3, 16);
        profile.check_game(&game).unwrap();
        assert_eq!(omega.len(), 2);
        assert_eq!(omega[0].len(), 16);
    }
}
