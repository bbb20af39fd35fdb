// Span-closure cost over a small grid, with the structural bounds checked.
//
// cargo run --release --example bench_scaling

use lindecomp::bench::{bench_span_closure, summarize, to_csv, Grid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid: Grid = "n=2..4;k=1..2;p=1009".parse()?;
    let records = bench_span_closure(&grid, 2, &mut ChaCha8Rng::seed_from_u64(0));
    print!("{}", to_csv(&records));

    let summary = summarize(&records);
    for fit in &summary.fits {
        println!("log {} ~ {:.2} · log {}", fit.y, fit.slope, fit.x);
    }
    assert_eq!(summary.violations, 0, "bound violations");
    Ok(())
}
