//! Builds the closure diagram of a fixture file and compares it with the
//! covering edges stored there.
//!
//! Usage: `fixture_hasse FIXTURE [MAX_ID]`

use std::collections::BTreeSet;
use std::time::Instant;

use theta_closure::closure::{build_hasse, ClosureConfig};
use theta_closure::fixtures::Fixture;

fn main() -> theta_closure::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().expect("fixture path");
    let max_id: usize = args.next().map_or(usize::MAX, |s| s.parse().expect("MAX_ID"));
    let fx = Fixture::load(&path)?;
    let tg = fx.theta_group()?;
    let t0 = Instant::now();
    let orbits: Vec<_> = fx.orbits(&tg, 1)?.into_iter().filter(|o| o.id <= max_id).collect();
    eprintln!("{} orbits reconstructed in {:.1?}", orbits.len(), t0.elapsed());
    let t1 = Instant::now();
    let (hd, _) = build_hasse(&tg, &orbits, &ClosureConfig::default(), 1)?;
    eprintln!("diagram in {:.1?}", t1.elapsed());
    let got: BTreeSet<(usize, usize)> = hd.covering_edges.iter().copied().collect();
    let want: BTreeSet<(usize, usize)> = fx
        .covering_edges
        .iter()
        .copied()
        .filter(|&(a, b)| a <= max_id && b <= max_id)
        .collect();
    println!("missing: {:?}", want.difference(&got).collect::<Vec<_>>());
    println!("extra:   {:?}", got.difference(&want).collect::<Vec<_>>());
    Ok(())
}
