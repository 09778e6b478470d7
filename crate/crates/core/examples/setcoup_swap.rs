//! Swapping the sorts of couples of sets: an involution on free algebras
//! that does not fix them up to isomorphism.
//!
//! `cargo run --release --example setcoup_swap [max]`

use varfree::corpus::{setcoup_swap_demo, Corpus};
use varfree::egraph::Budget;

fn main() -> varfree::Result<()> {
    let max = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let corpus = Corpus::embedded()?;
    let v = &corpus.get("setcoup").expect("bundled entry").variety;
    let d = setcoup_swap_demo(v, max, Budget::default())?;
    println!("{} objects, {} morphisms with up to {max} generators per sort", d.objects_checked, d.morphisms_checked);
    println!("swap twice is the identity: {}", d.involution);
    println!("swap is functorial: {}", d.functorial);
    println!(
        "F(1,0) sizes {:?}, its swap {:?}, isomorphic: {}",
        d.one_generator_sizes, d.swapped_sizes, d.swapped_isomorphic
    );
    println!("empty-theory certificate: {}", d.certificate);
    Ok(())
}
