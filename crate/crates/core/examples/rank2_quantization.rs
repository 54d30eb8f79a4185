//! Exact quantization of the quasi-Lie bialgebra of a rank-one bivector s = v⊗w.

use pr_qlba::freealg::MultiTensor;
use pr_qlba::qlba::{pr_qlba, Bivector};
use pr_qlba::quant::{classical_limit, coassoc_defect, counit_check, pentagon_defect, rank2_quantize, twist_qh};

fn main() -> pr_qlba::error::Result<()> {
    let order = 4;
    let s = Bivector::elementary(2, 0, 1);
    let q = rank2_quantize(&s, order)?;
    println!("Δ'(e1) = {}", q.aprime.delta.image(1));
    println!("Δ(e1)  = {}", q.a.delta.image(1));
    println!("Φ      = {}", q.a.phi);

    for i in 0..2 {
        let x = MultiTensor::generator(2, order, i);
        assert!(coassoc_defect(&q.a, &x)?.is_zero());
    }
    println!("quasi-coassociative on generators, pentagon defect zero: {}", pentagon_defect(&q.a)?.is_zero());
    println!("counit conditions hold: {}", counit_check(&q.a)?.holds());
    println!("A_h is the twist of A'_h by J: {}", twist_qh(&q.aprime, &q.j)? == q.a);
    println!("classical limit is the PR structure of (s+s²¹)/2: {}", classical_limit(&q.a)? == pr_qlba(&s.symmetric_part())?);
    Ok(())
}
