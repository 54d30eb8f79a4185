//! The shuffle coproduct on words and the co-Leibniz rule for the extension of δ.

use pr_qlba::coalgebra::{co_leibniz_check, counit, delta0};
use pr_qlba::freealg::{MultiTensor, Word};
use pr_qlba::qlba::{pr_qlba, Bivector};

fn main() -> pr_qlba::error::Result<()> {
    let dim = 3;
    let w = MultiTensor::word(dim, 1, Word::from_indices(&[0, 1, 1]));
    println!("Δ₀(e0e1e1) = {}", delta0(&w)?);
    println!("ε(e0e1e1) = {}", counit(&w)?);

    let q = pr_qlba(&Bivector::minkowski(dim))?;
    let handle = q.extend();
    let mut d = handle.derivation();
    println!("D(e0e1) = {}", d.apply(&MultiTensor::word(dim, 1, Word::from_indices(&[0, 1])))?);

    let mut checked = 0;
    for len in 0..=3 {
        for word in Word::all_of_length(dim, len) {
            let t = MultiTensor::word(dim, 1, word);
            assert!(co_leibniz_check(&mut d, &t)?.holds(), "co-Leibniz fails on {t}");
            checked += 1;
        }
    }
    println!("co-Leibniz holds on all {checked} words of length ≤ 3");
    Ok(())
}
