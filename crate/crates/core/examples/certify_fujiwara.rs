//! Certifies invariant generator counts for abelian groups of exponent 4
//! through their finite subvariety of Boolean groups.
//!
//! `cargo run --release --example certify_fujiwara`

use varfree::certify::certify_fujiwara;
use varfree::egraph::Budget;
use varfree::{Identity, VarietyDef};

const ABELIAN_EXP4: &str = "
(signature (sort g) (op mul (g g) g) (op inv (g) g) (op one () g))
(variety abelian-exp4
  (axiom ((x g) (y g) (z g)) (= (mul (mul x y) z) (mul x (mul y z))))
  (axiom ((x g)) (= (mul (one) x) x))
  (axiom ((x g)) (= (mul (inv x) x) (one)))
  (axiom ((x g) (y g)) (= (mul x y) (mul y x)))
  (axiom ((x g)) (= (mul x (mul x (mul x x))) (one))))";

fn main() -> varfree::Result<()> {
    let v = VarietyDef::parse(ABELIAN_EXP4)?;
    let square = Identity::parse(&v.sig, &[("x", "g")], "(mul x x)", "(one)")?;
    let collapse = Identity::parse(&v.sig, &[("x", "g")], "x", "(one)")?;
    for (label, extra) in [("x^2 = 1", square), ("x = 1", collapse)] {
        let report = certify_fujiwara(&v, &[extra], 3, Budget::default())?;
        println!("witness {label}: {}", report.status);
        for p in &report.profiles {
            println!("  {} {:?}: {:?}", p.variety, p.profile, p.sizes);
        }
        for n in &report.nondegeneracy {
            println!("  {} sort {}: {}", n.variety, n.sort, n.verdict);
        }
    }
    Ok(())
}
