//! Compares the free Boolean group on two generators with Z2 x Z2 and Z4.
//!
//! `cargo run --release --example isomorphism`

use varfree::corpus::Corpus;
use varfree::egraph::{free_algebra, Budget};
use varfree::finalg::{find_isomorphism, for_each_tuple};
use varfree::FiniteAlgebra;

fn group(
    sig: &std::sync::Arc<varfree::Signature>,
    n: usize,
    add: impl Fn(u32, u32) -> u32,
    neg: impl Fn(u32) -> u32,
) -> varfree::Result<FiniteAlgebra> {
    let mut mul = Vec::new();
    for_each_tuple(&[n, n], |t| mul.push(add(t[0], t[1])));
    FiniteAlgebra::new(sig, vec![n], vec![mul, (0..n as u32).map(neg).collect(), vec![0]])
}

fn main() -> varfree::Result<()> {
    let corpus = Corpus::embedded()?;
    let v = &corpus.get("boolean-groups").expect("bundled entry").variety;
    let f2 = free_algebra(v, &[2], Budget::default())?;
    let klein = group(&v.sig, 4, |a, b| a ^ b, |a| a)?;
    let z4 = group(&v.sig, 4, |a, b| (a + b) % 4, |a| (4 - a) % 4)?;
    for (name, h) in [("Z2 x Z2", &klein), ("Z4", &z4)] {
        match find_isomorphism(&f2.algebra, h) {
            Some(iso) => {
                let images: Vec<String> =
                    f2.reps[0].iter().zip(&iso.maps[0]).map(|(t, e)| format!("{t} -> {e}")).collect();
                println!("F(2) is isomorphic to {name}: {}", images.join(", "));
            }
            None => println!("F(2) is not isomorphic to {name}"),
        }
    }
    let f3 = free_algebra(v, &[3], Budget::default())?;
    println!("F(2) and F(3) isomorphic: {}", find_isomorphism(&f2.algebra, &f3.algebra).is_some());
    Ok(())
}
