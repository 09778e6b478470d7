//! Checks the bundled action-split certificate for group representations
//! over F2 and shows the trivial-action algebras it assembles.
//!
//! `cargo run --release --example action_split [entry]`

use varfree::certify::certify;
use varfree::corpus::Corpus;
use varfree::egraph::Budget;

fn main() -> varfree::Result<()> {
    let entry = std::env::args().nth(1).unwrap_or_else(|| "group-reps-f2".into());
    let corpus = Corpus::embedded()?;
    let e = corpus.get(&entry).ok_or_else(|| varfree::Error::Invalid(format!("no corpus entry `{entry}`")))?;
    let report = certify(&e.variety, &e.certificate, Budget::default())?;
    println!("{} via {}: {}", report.variety, report.route, report.status);
    for a in &report.assemblies {
        match &a.failure {
            None => {
                println!("  {} generators: trivial action on sizes {:?} satisfies the variety", a.generators, a.sizes)
            }
            Some(f) => println!("  {} generators: {f}", a.generators),
        }
    }
    for c in &report.consequences {
        println!("  {}: {} {}", c.variety, c.axiom, c.verdict);
    }
    for note in &report.notes {
        println!("  note: {note}");
    }
    Ok(())
}
