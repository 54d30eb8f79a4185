//! Twisting quasi-Lie bialgebras by skew bivectors and quasi-Hopf algebras by invertible
//! tensors.

use pr_qlba::qlba::{pr_qlba, qlba_s, twist_qlba, Bivector, QlbaData};
use pr_qlba::quant::{classical_limit, twist_qh, QhData};
use pr_qlba::scalars::rat;

fn main() -> pr_qlba::error::Result<()> {
    let s = Bivector::from_integers(&[&[0, 1, 0], &[-1, 0, 2], &[0, -2, 0]])?;
    println!("twisting δ_s by s itself is trivial: {}", twist_qlba(&qlba_s(&s), &s)? == QlbaData::trivial(3));

    let r = Bivector::elementary(3, 0, 1);
    let g = twist_qlba(&qlba_s(&r), &r.skew_part())?;
    println!("twisting δ_s by its skew part gives the PR structure: {}", g == pr_qlba(&r.symmetric_part())?);

    let order = 3;
    let f = s.to_tensor(order).scale(&rat(1, 2)).shift_h(1).exp()?;
    let quantized = twist_qh(&QhData::undeformed(3, order), &f)?;
    println!("e^(hs/2) applied to the undeformed structure: Φ = {}", quantized.phi);
    println!("its classical limit is (δ_s, φ_s): {}", classical_limit(&quantized)? == qlba_s(&s));
    Ok(())
}
