//! Checks the cyclic groups Z2 and Z4 against the Boolean-group axioms.
//!
//! `cargo run --release --example identity_check`

use varfree::corpus::Corpus;
use varfree::finalg::{for_each_tuple, satisfies_all};
use varfree::FiniteAlgebra;

/// `Z_n` over the signature `mul inv one`.
fn cyclic(sig: &std::sync::Arc<varfree::Signature>, n: u32) -> varfree::Result<FiniteAlgebra> {
    let mut mul = Vec::new();
    for_each_tuple(&[n as usize, n as usize], |t| mul.push((t[0] + t[1]) % n));
    let inv = (0..n).map(|a| (n - a) % n).collect();
    FiniteAlgebra::new(sig, vec![n as usize], vec![mul, inv, vec![0]])
}

fn main() -> varfree::Result<()> {
    let corpus = Corpus::embedded()?;
    let v = &corpus.get("boolean-groups").expect("bundled entry").variety;
    for n in [2, 4] {
        match satisfies_all(&cyclic(&v.sig, n)?, v) {
            Ok(()) => println!("Z{n} satisfies every axiom of `{}`", v.name),
            Err(f) => {
                let asg: Vec<String> = f.assignment.iter().map(|(x, e)| format!("{} = {e}", x.name)).collect();
                println!("Z{n} fails axiom {} `{}` at {}", f.axiom_index, f.axiom, asg.join(", "));
            }
        }
    }
    Ok(())
}
