//! The quotient functor from abelian groups of exponent 4 to Boolean groups.
//!
//! `cargo run --release --example functor_d`

use varfree::dfunctor::{check_functoriality, composable_pairs, DFunctor, SubvarietyPair};
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
    let theta = VarietyDef::parse(ABELIAN_EXP4)?;
    let square = Identity::parse(&theta.sig, &[("x", "g")], "(mul x x)", "(one)")?;
    let mut d = DFunctor::new(SubvarietyPair::extend(&theta, "boolean-groups", &[square]), Budget::default());
    for n in 0..=2 {
        let o = d.object(&[n])?;
        println!("X = {n}: |F_theta| = {}, |F_delta| = {}", o.theta.sizes()[0], o.delta.sizes()[0]);
    }
    let gens = d.object(&[2])?.theta.gen_images.clone();
    let swap = d
        .hom_set(&[2], &[2])?
        .into_iter()
        .find(|m| m.table.maps[0][gens[0] as usize] == gens[1] && m.table.maps[0][gens[1] as usize] == gens[0]);
    if let Some(phi) = swap {
        println!("D(swap of generators) = {:?}", d.on_morphism(&phi)?.maps[0]);
    }
    let objects: Vec<Vec<usize>> = (0..=2).map(|n| vec![n]).collect();
    let pairs = composable_pairs(&mut d, &objects)?;
    let report = check_functoriality(&mut d, &pairs)?;
    println!(
        "{} identities and {} compositions checked, {} violations",
        report.identities_checked,
        report.compositions_checked,
        report.violations.len()
    );
    Ok(())
}
