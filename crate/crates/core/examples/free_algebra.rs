//! Builds a free algebra of a corpus variety and lists its elements.
//!
//! `cargo run --release --example free_algebra [entry] [profile]`
//! e.g. `free_algebra idempotent-commutative-semigroups elem=3`

use varfree::corpus::Corpus;
use varfree::egraph::{build_free_algebra, Budget};
use varfree::GeneratorProfile;

fn main() -> varfree::Result<()> {
    let mut args = std::env::args().skip(1);
    let entry = args.next().unwrap_or_else(|| "boolean-groups".into());
    let spec = args.next().unwrap_or_else(|| "g=3".into());
    let corpus = Corpus::embedded()?;
    let v = &corpus.get(&entry).ok_or_else(|| varfree::Error::Invalid(format!("no corpus entry `{entry}`")))?.variety;
    let x = GeneratorProfile::from_spec(&v.sig, &spec)?;
    let f = build_free_algebra(v, &x, Budget::default())?.saturated()?;
    for r in &f.stats.rounds {
        println!(
            "round {}: +{} nodes, {} classes after grow, {} merges, {} classes after close",
            r.round, r.nodes_added, r.classes_after_grow, r.merges, r.classes_after_close
        );
    }
    println!("free `{}` algebra on {}: sizes {:?}", v.name, x.describe(), f.sizes());
    for sort in v.sig.sorts() {
        for (e, t) in f.reps[sort.index()].iter().enumerate() {
            println!("  {}[{e}] = {t}", v.sig.sort_name(sort));
        }
    }
    Ok(())
}
