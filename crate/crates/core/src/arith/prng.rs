use super::scalar::{Field, Scalar};

/// Magnitude bound for random integers drawn as rational samples.
pub const RATIONAL_SAMPLE_BOUND: i64 = 9;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator with deterministic substreams.
///
/// The same seed always yields the same stream. [`Prng::split`] derives a substream from the
/// seed and an index only, so per-trial streams do not depend on how much of the parent was
/// consumed or on the order in which trials run.
#[derive(Clone, Debug)]
pub struct Prng {
    seed: u64,
    state: u64,
    position: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng {
            seed,
            state: seed,
            position: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        self.position += 1;
        mix64(self.state)
    }

    /// Independent substream number `index`.
    pub fn split(&self, index: u64) -> Prng {
        let derived = mix64(self.seed ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)));
        Prng::new(derived)
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform integer in `[-bound, bound]`.
    pub fn small_int(&mut self, bound: i64) -> i64 {
        self.below((2 * bound + 1) as u64) as i64 - bound
    }

    /// Uniform residue mod `p`, or a small random integer for the rationals.
    pub fn scalar(&mut self, field: Field) -> Scalar {
        match field {
            Field::Prime(p) => field.from_i64(self.below(p) as i64),
            Field::Rational => field.from_i64(self.small_int(RATIONAL_SAMPLE_BOUND)),
        }
    }

    pub fn nonzero_scalar(&mut self, field: Field) -> Scalar {
        loop {
            let s = self.scalar(field);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn vector(&mut self, field: Field, len: usize) -> Vec<Scalar> {
        (0..len).map(|_| self.scalar(field)).collect()
    }
}
