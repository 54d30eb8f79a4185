//! The closed-form antipode of the Hopf structure for s = v⊗w.

use pr_qlba::freealg::MultiTensor;
use pr_qlba::qlba::Bivector;
use pr_qlba::quant::{antipode_closed_form, convolution, rank2_quantize, test_words, unit_counit, EndoMap};

fn main() -> pr_qlba::error::Result<()> {
    let order = 5;
    let s = Bivector::elementary(2, 0, 1);
    let q = rank2_quantize(&s, order)?;
    let anti = antipode_closed_form(&s, order)?;
    println!("S(e1) = {}", anti.apply(&MultiTensor::generator(2, order, 1))?);

    let id = EndoMap::identity(2, order);
    let words = test_words(2, order, 3);
    for t in &words {
        assert_eq!(convolution(&anti, &id, &q.aprime, t)?, unit_counit(t)?, "S⋆id on {t}");
    }
    println!("S⋆id = unit∘counit mod h^{order} on {} words", words.len());
    Ok(())
}
