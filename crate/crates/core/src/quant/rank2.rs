//! Exact quantization when s = v⊗w has matrix rank ≤ 1.

use num_traits::Zero;

use crate::coalgebra::GeneratorMap;
use crate::error::Result;
use crate::freealg::MultiTensor;
use crate::qlba::{vector_tensor, Bivector};
use crate::scalars::{rat, Rational};

use super::{EndoMap, QhData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Quantization {
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
    /// Hopf: Δ'(x) = G(x⊗1)G⁻¹ + 1⊗x with G = e^{hs}, Φ' = 1.
    pub aprime: QhData,
    /// Quasi-Hopf: Δ(x) = J⁻¹(x⊗1)J + J(1⊗x)J⁻¹, Φ = (J⁻¹)²³J¹²J²³(J⁻¹)¹² with
    /// J = e^{−hs/2}.
    pub a: QhData,
    /// The twist J relating the two.
    pub j: MultiTensor,
}

fn leg(dim: usize, order: usize, i: usize, at: usize) -> MultiTensor {
    MultiTensor::generator(dim, order, i).leg_embed(2, &[at]).expect("valid leg")
}

pub fn rank2_quantize(s: &Bivector, order: usize) -> Result<Rank2Quantization> {
    let (v, w) = s.decompose()?;
    let d = s.dim();
    let hs = s.to_tensor(order).shift_h(1);
    let g = hs.exp()?;
    let ginv = hs.scale(&rat(-1, 1)).exp()?;
    let j = hs.scale(&rat(-1, 2)).exp()?;
    let jinv = hs.scale(&rat(1, 2)).exp()?;

    let dprime = GeneratorMap::from_fn(d, |i| {
        let x1 = leg(d, order, i, 1);
        let x2 = leg(d, order, i, 2);
        &g.try_mul(&x1).and_then(|t| t.try_mul(&ginv)).expect("same shape") + &x2
    })?;
    let aprime = QhData::new(dprime, MultiTensor::unit(d, 3, order))?;

    let delta = GeneratorMap::from_fn(d, |i| {
        let x1 = leg(d, order, i, 1);
        let x2 = leg(d, order, i, 2);
        let a = jinv.try_mul(&x1).and_then(|t| t.try_mul(&j)).expect("same shape");
        let b = j.try_mul(&x2).and_then(|t| t.try_mul(&jinv)).expect("same shape");
        &a + &b
    })?;
    let phi = jinv
        .leg_embed(3, &[2, 3])?
        .try_mul(&j.leg_embed(3, &[1, 2])?)?
        .try_mul(&j.leg_embed(3, &[2, 3])?)?
        .try_mul(&jinv.leg_embed(3, &[1, 2])?)?;
    let a = QhData::new(delta, phi)?;
    Ok(Rank2Quantization { v, w, aprime, a, j })
}

/// S(x) = −(Σ_r (−h)^r/r! vʳ x wʳ)·γ⁻¹ with γ = μ₀(e^{−hs}), extended as an
/// antihomomorphism. This is the antipode of the Hopf structure A'_h.
pub fn antipode_closed_form(s: &Bivector, order: usize) -> Result<EndoMap> {
    let (v, w) = s.decompose()?;
    let d = s.dim();
    let vt = vector_tensor(&v, order);
    let wt = vector_tensor(&w, order);
    let gamma = s.to_tensor(order).shift_h(1).scale(&rat(-1, 1)).exp()?.mu_flatten()?;
    let gamma_inv = gamma.invert_unital()?;
    let images = (0..d)
        .map(|i| {
            let mut term = MultiTensor::generator(d, order, i);
            let mut acc = term.clone();
            for r in 1..order {
                term = vt.try_mul(&term)?.try_mul(&wt)?.shift_h(1).scale(&rat(-1, r as i64));
                if term.is_zero() {
                    break;
                }
                acc = acc.try_add(&term)?;
            }
            Ok(acc.try_mul(&gamma_inv)?.scale(&rat(-1, 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EndoMap { map: GeneratorMap::new(images)?, anti: true })
}

/// Whether the vector v is zero (s = 0).
pub fn is_trivial(q: &Rank2Quantization) -> bool {
    q.v.iter().all(Zero::is_zero)
}
