use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for replica `replica` of a run seeded with `seed`. Streams
/// of different replicas are independent, so replicas can run in any order
/// or in parallel and still reproduce bit for bit.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}
