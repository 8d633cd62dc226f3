//! Per-game random streams.
//!
//! Every game draws all of its randomness from one seed. The seed is split into
//! independent ChaCha streams, one per consumer, so that adding draws to one
//! consumer never shifts the values another consumer sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Natural frequencies of every agent.
    Frequencies,
    /// Initial phases.
    Phases,
    /// Initial positions of swarm agents.
    Positions,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Frequencies => 1,
            Stream::Phases => 2,
            Stream::Positions => 3,
        }
    }
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
