//! Truncated power series in h with exact rational coefficients.

use pr_qlba::scalars::{rat, HSeries};

fn main() -> pr_qlba::error::Result<()> {
    let order = 6;
    // 1 − h is a unit; its inverse is the geometric series.
    let a = HSeries::parse("1 - h", order)?;
    let inv = a.invert()?;
    println!("(1 - h)^-1 = {inv}  mod h^{order}");
    println!("check: {}", a.try_mul(&inv)?);

    let b = HSeries::parse("2 + 1/3 h^2", order)?;
    println!("({b}) * ({a}) = {}", b.try_mul(&a)?);
    println!("h^2 coefficient of the inverse of b: {}", b.invert()?.coeff(2));

    // Multiplying by h^k pushes terms past the truncation.
    let h4 = HSeries::monomial(rat(1, 1), 4, order);
    println!("h^4 * h^4 = {} (vanishes mod h^{order})", h4.try_mul(&h4)?);
    Ok(())
}
