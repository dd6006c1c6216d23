use prodquot::basket::enumerate_baskets;
use prodquot::rat::rat;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let baskets = enumerate_baskets(1, &rat(3, 1), 13, true).unwrap();
    println!("baskets: {} in {:?}", baskets.len(), t0.elapsed());
}
