//! Runs the bundled corpus and prints one line per entry.
//!
//! `cargo run --release --example corpus [entry...]`

use std::time::Instant;

use varfree::corpus::{run_corpus, Corpus};
use varfree::egraph::Budget;

fn main() -> varfree::Result<()> {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let corpus = Corpus::embedded()?;
    let start = Instant::now();
    let filter = (!names.is_empty()).then_some(names.as_slice());
    let report = run_corpus(&corpus, filter, Budget::default())?;
    for e in &report.entries {
        let passed = e.expectations.iter().filter(|x| x.pass).count();
        println!("{:<36} {:>2}/{:<2} sizes  {}", e.name, passed, e.expectations.len(), e.certificate.status);
    }
    if let Some(d) = &report.swap_demo {
        println!(
            "swap demo: involution {}, functorial {}, F(1,0) vs swap isomorphic {}",
            d.involution, d.functorial, d.swapped_isomorphic
        );
    }
    println!("{} in {:.1?}", if report.pass { "pass" } else { "FAIL" }, start.elapsed());
    Ok(())
}
