use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Words of keystream reserved for each (node, iteration) substream.
const ITERATION_SHIFT: u32 = 20;
/// ChaCha stream index reserved for deriving per-trial roots.
const TRIAL_STREAM: u64 = u64::MAX;

/// Counter-based randomness for one run.
///
/// A ChaCha8 key is derived from the root seed. The substream of node `v`
/// in iteration `t` is the keystream with stream id `v` starting at word
/// `t << 20`, so every (node, iteration) pair owns a disjoint block of
/// keystream and draws never depend on evaluation order.
#[derive(Clone, Debug)]
pub struct RngStream {
    root: u64,
    base: ChaCha8Rng,
}

impl RngStream {
    pub fn new(root: u64) -> Self {
        Self {
            root,
            base: ChaCha8Rng::seed_from_u64(root),
        }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// Generator positioned at the start of the `(node, iteration)` substream.
    pub fn substream(&self, node: usize, iteration: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(node as u64);
        rng.set_word_pos(u128::from(iteration) << ITERATION_SHIFT);
        rng
    }

    /// First uniform draw in `[0, 1)` of the `(node, iteration)` substream.
    pub fn rank(&self, node: usize, iteration: u64) -> f64 {
        self.substream(node, iteration).gen::<f64>()
    }

    /// Independent stream for Monte-Carlo trial `trial`.
    pub fn for_trial(&self, trial: u64) -> RngStream {
        let mut rng = self.base.clone();
        rng.set_stream(TRIAL_STREAM);
        rng.set_word_pos(u128::from(trial) * 2);
        RngStream::new(rng.next_u64())
    }
}
