use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples drawn from one generator stream.
pub const CHUNK_SIZE: usize = 1 << 16;

/// Generator for chunk `chunk` of a run seeded with `seed`.
///
/// ChaCha is counter based, so each chunk gets its own stream and the draws
/// do not depend on which worker handles which chunk.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// `(chunk index, samples in chunk)` covering `samples` draws.
pub(crate) fn chunks(samples: usize) -> impl Iterator<Item = (u64, usize)> + Clone {
    (0..samples.div_ceil(CHUNK_SIZE))
        .map(move |c| (c as u64, CHUNK_SIZE.min(samples - c * CHUNK_SIZE)))
}
