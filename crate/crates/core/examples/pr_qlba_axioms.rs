//! Builds the quasi-Lie bialgebra of a symmetric metric g and checks its axioms.

use pr_qlba::freealg::{MultiTensor, Word};
use pr_qlba::lie::lyndon_basis;
use pr_qlba::qlba::{
    alt_condition_check, cocycle_check, in_lambda2_of_lie, in_lambda3_of_lie, pr_qlba, quasi_cojacobi_check, Bivector,
};

fn main() -> pr_qlba::error::Result<()> {
    let dim = 3;
    let g = Bivector::minkowski(dim);
    let q = pr_qlba(&g)?;
    for i in 0..dim {
        println!("δ(e{i}) = {}", q.delta.image(i));
    }
    println!("φ has {} terms, in Λ³L(V): {}", q.phi.len(), in_lambda3_of_lie(&q.phi)?);

    let basis = lyndon_basis(dim, 3);
    let handle = q.extend();
    let mut d = handle.derivation();
    for b in &basis {
        assert!(in_lambda2_of_lie(&d.apply(&b.expansion)?)?);
    }
    println!("δ maps {} Lyndon bracketings into Λ²L(V)", basis.len());

    let (x, y) = (&basis[0].expansion, &basis[3].expansion);
    println!("cocycle on ({}, {}): {}", basis[0].word, basis[3].word, cocycle_check(&q, x, y)?.holds());

    for w in Word::all_up_to(dim, 2) {
        assert!(quasi_cojacobi_check(&q, &MultiTensor::word(dim, 1, w))?.holds());
    }
    println!("quasi-co-Jacobi holds on words of length ≤ 2");
    println!("Alt(δ⊗id⊗id)(φ) = 0: {}", alt_condition_check(&q)?.holds());
    Ok(())
}
