//! Bounds and seeds shared by every computation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{Coeff, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub seed: u64,
    /// Largest power examined for Ratliff-Rush defects and colon checks.
    pub n_max: u32,
    /// Largest number of elements whose grade is computed directly.
    pub koszul_cap: u32,
    /// Largest power in depth tables.
    pub power_cap: u32,
    /// Hard cap on the length of a Ratliff-Rush colon chain.
    pub chain_cap: u32,
    /// Random candidates tried when searching for superficial or regular
    /// elements.
    pub attempts: u32,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            seed: 0,
            n_max: 12,
            koszul_cap: 8,
            power_cap: 4,
            chain_cap: 20,
            attempts: 10,
        }
    }
}

impl Config {
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

/// A nonzero coefficient drawn from `{1, ..., 101}`, reduced into `field`.
pub fn random_coeff(rng: &mut ChaCha8Rng, field: Field) -> Coeff {
    let top = match field.size() {
        Some(p) => (p - 1).min(101),
        None => 101,
    };
    field.from_i64(rng.gen_range(1..=top as i64))
}
