//! Quasi-Hopf structures (μ₀, Δ, Φ) on T(V) modulo h^N.
//!
//! The multiplication is always the concatenation product. Δ is given on generators and
//! extended as an algebra morphism; compound legs such as Φ^{1,23,4} are obtained by
//! applying Δ to the indicated leg.

use crate::coalgebra::{counit, counit_on_leg, delta0, Check, GeneratorMap};
use crate::error::{Error, Result};
use crate::freealg::{MultiTensor, Word};
use crate::qlba::QlbaData;

pub mod order2;
pub mod rank2;

pub use order2::{order2_solve, order2_structure, closed_form_coefficients, Order2System};
pub use rank2::{antipode_closed_form, rank2_quantize, Rank2Quantization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QhData {
    pub dim: usize,
    pub order: usize,
    pub delta: GeneratorMap,
    pub phi: MultiTensor,
}

impl QhData {
    pub fn new(delta: GeneratorMap, phi: MultiTensor) -> Result<Self> {
        if delta.target_legs() != 2 {
            return Err(Error::LegCount { expected: 2, got: delta.target_legs() });
        }
        if phi.legs() != 3 {
            return Err(Error::LegCount { expected: 3, got: phi.legs() });
        }
        if phi.order() != delta.order() {
            return Err(Error::OrderMismatch(delta.order(), phi.order()));
        }
        if phi.dim() != delta.dim() {
            return Err(Error::DimMismatch(delta.dim(), phi.dim()));
        }
        Ok(QhData { dim: delta.dim(), order: delta.order(), delta, phi })
    }

    /// (T(V), μ₀, Δ₀, 1⊗1⊗1).
    pub fn undeformed(dim: usize, order: usize) -> Self {
        QhData {
            dim,
            order,
            delta: GeneratorMap::shuffle_diagonal(dim, order),
            phi: MultiTensor::unit(dim, 3, order),
        }
    }

    /// Δ ≡ Δ₀ mod h on generators and Φ ≡ 1⊗1⊗1 mod h².
    pub fn check_invariants(&self) -> Result<()> {
        let d0 = GeneratorMap::shuffle_diagonal(self.dim, 1);
        for i in 0..self.dim {
            if self.delta.image(i).h_coefficient(0) != *d0.image(i) {
                return Err(Error::Invariant(format!("Δ(e{i}) differs from Δ₀(e{i}) mod h")));
            }
        }
        let one = MultiTensor::unit(self.dim, 3, 1);
        if self.phi.h_coefficient(0) != one || (self.order > 1 && !self.phi.h_coefficient(1).is_zero()) {
            return Err(Error::Invariant("Φ is not 1⊗1⊗1 mod h²".into()));
        }
        Ok(())
    }

    pub fn extend_coproduct(&self, t: &MultiTensor) -> Result<MultiTensor> {
        self.delta.morphism().apply(t)
    }
}

pub fn extend_coproduct(qh: &QhData, t: &MultiTensor) -> Result<MultiTensor> {
    qh.extend_coproduct(t)
}

/// (id⊗Δ)Δ(t)·Φ − Φ·(Δ⊗id)Δ(t).
pub fn coassoc_defect(qh: &QhData, t: &MultiTensor) -> Result<MultiTensor> {
    let mut m = qh.delta.morphism();
    let dt = m.apply(t)?;
    let left = m.apply_on_leg(&dt, 2)?;
    let right = m.apply_on_leg(&dt, 1)?;
    left.try_mul(&qh.phi)?.try_sub(&qh.phi.try_mul(&right)?)
}

/// Φ^{1,2,34}Φ^{12,3,4} − Φ^{2,3,4}Φ^{1,23,4}Φ^{1,2,3}.
pub fn pentagon_defect(qh: &QhData) -> Result<MultiTensor> {
    let mut m = qh.delta.morphism();
    let p = &qh.phi;
    let p_1_2_34 = m.apply_on_leg(p, 3)?;
    let p_12_3_4 = m.apply_on_leg(p, 1)?;
    let p_1_23_4 = m.apply_on_leg(p, 2)?;
    let p_234 = p.leg_embed(4, &[2, 3, 4])?;
    let p_123 = p.leg_embed(4, &[1, 2, 3])?;
    let lhs = p_1_2_34.try_mul(&p_12_3_4)?;
    let rhs = p_234.try_mul(&p_1_23_4)?.try_mul(&p_123)?;
    lhs.try_sub(&rhs)
}

/// (ε⊗id)Δ = (id⊗ε)Δ = id on generators and (id⊗ε⊗id)Φ = 1⊗1. The returned defect
/// is the first nonzero one found, or zero.
pub fn counit_check(qh: &QhData) -> Result<Check> {
    for i in 0..qh.dim {
        let x = MultiTensor::generator(qh.dim, qh.order, i);
        let dx = qh.delta.image(i);
        for leg in [1, 2] {
            let defect = counit_on_leg(dx, leg)?.try_sub(&x)?;
            if !defect.is_zero() {
                return Ok(Check { defect });
            }
        }
    }
    let defect = counit_on_leg(&qh.phi, 2)?.try_sub(&MultiTensor::unit(qh.dim, 2, qh.order))?;
    Ok(Check { defect })
}

/// Δ^F = FΔF⁻¹ and Φ^F = F²³ F^{1,23} Φ (F⁻¹)^{12,3} (F⁻¹)¹², with compound legs taken
/// with respect to the untwisted Δ.
pub fn twist_qh(qh: &QhData, f: &MultiTensor) -> Result<QhData> {
    if f.legs() != 2 {
        return Err(Error::LegCount { expected: 2, got: f.legs() });
    }
    if f.order() != qh.order {
        return Err(Error::OrderMismatch(qh.order, f.order()));
    }
    let finv = f.invert_unital().map_err(|_| Error::NotInvertible)?;
    let images = qh
        .delta
        .images()
        .iter()
        .map(|d| f.try_mul(d)?.try_mul(&finv))
        .collect::<Result<Vec<_>>>()?;
    let mut m = qh.delta.morphism();
    let f23 = f.leg_embed(3, &[2, 3])?;
    let f_1_23 = m.apply_on_leg(f, 2)?;
    let finv_12_3 = m.apply_on_leg(&finv, 1)?;
    let finv12 = finv.leg_embed(3, &[1, 2])?;
    let phi = f23.try_mul(&f_1_23)?.try_mul(&qh.phi)?.try_mul(&finv_12_3)?.try_mul(&finv12)?;
    QhData::new(GeneratorMap::new(images)?, phi)
}

/// δ(x) = h-linear part of Δ(x) − Δ²¹(x) and φ = h²-part of Alt Φ (unnormalized sum
/// over S₃ with signs).
pub fn classical_limit(qh: &QhData) -> Result<QlbaData> {
    qh.check_invariants()?;
    if qh.order < 3 {
        return Err(Error::Invariant(format!("order {} cannot carry the h² part of Φ", qh.order)));
    }
    let images = qh
        .delta
        .images()
        .iter()
        .map(|d| {
            let skew = d.try_sub(&d.swap()?)?;
            Ok(skew.h_coefficient(1))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi = qh.phi.alt_sum().h_coefficient(2);
    Ok(QlbaData { dim: qh.dim, delta: GeneratorMap::new(images)?, phi })
}

/// An algebra endomorphism or antihomomorphism of T(V)[[h]] given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoMap {
    pub map: GeneratorMap,
    pub anti: bool,
}

impl EndoMap {
    pub fn identity(dim: usize, order: usize) -> Self {
        EndoMap { map: GeneratorMap::identity(dim, order), anti: false }
    }

    pub fn apply(&self, t: &MultiTensor) -> Result<MultiTensor> {
        if self.anti {
            self.map.antimorphism().apply(t)
        } else {
            self.map.morphism().apply(t)
        }
    }

    pub fn apply_on_leg(&self, t: &MultiTensor, leg: usize) -> Result<MultiTensor> {
        if self.anti {
            self.map.antimorphism().apply_on_leg(t, leg)
        } else {
            self.map.morphism().apply_on_leg(t, leg)
        }
    }
}

/// (f ⋆ g)(t) = μ₀(f⊗g)Δ(t).
pub fn convolution(f: &EndoMap, g: &EndoMap, qh: &QhData, t: &MultiTensor) -> Result<MultiTensor> {
    let dt = qh.extend_coproduct(t)?;
    let a = f.apply_on_leg(&dt, 1)?;
    g.apply_on_leg(&a, 2)?.mu_flatten()
}

/// t ↦ ε(t)·1.
pub fn unit_counit(t: &MultiTensor) -> Result<MultiTensor> {
    let e = counit(t)?;
    MultiTensor::unit(t.dim(), 1, t.order()).scale_series(&e)
}

/// All words of length ≤ `max_len` as one-leg tensors, in order.
pub fn test_words(dim: usize, order: usize, max_len: usize) -> Vec<MultiTensor> {
    Word::all_up_to(dim, max_len).into_iter().map(|w| MultiTensor::word(dim, order, w)).collect()
}

/// Whether Δ agrees with Δ₀ on generators.
pub fn is_undeformed(qh: &QhData) -> bool {
    (0..qh.dim).all(|i| delta0(&MultiTensor::generator(qh.dim, qh.order, i)).ok().as_ref() == Some(qh.delta.image(i)))
        && qh.phi == MultiTensor::unit(qh.dim, 3, qh.order)
}
