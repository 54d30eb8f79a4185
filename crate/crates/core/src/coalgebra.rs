//! The shuffle coalgebra of T(V), algebra morphisms and derivations over them.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freealg::{MultiTensor, Word};
use crate::scalars::HSeries;

/// Images of the generators e_0 … e_{d-1}, each an n-leg tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    dim: usize,
    order: usize,
    target_legs: usize,
    images: Vec<MultiTensor>,
}

impl GeneratorMap {
    pub fn new(images: Vec<MultiTensor>) -> Result<Self> {
        let first = images.first().ok_or(Error::ShapeMismatch("no generator images".into()))?;
        let (dim, order, legs) = (first.dim(), first.order(), first.legs());
        if images.len() != dim {
            return Err(Error::ShapeMismatch(format!("{} images for dimension {dim}", images.len())));
        }
        for im in &images {
            if im.dim() != dim || im.legs() != legs {
                return Err(Error::ShapeMismatch("generator images differ in shape".into()));
            }
            if im.order() != order {
                return Err(Error::OrderMismatch(order, im.order()));
            }
        }
        Ok(GeneratorMap { dim, order, target_legs: legs, images })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> MultiTensor) -> Result<Self> {
        Self::new((0..dim).map(f).collect())
    }

    /// x ↦ x⊗1 + 1⊗x.
    pub fn shuffle_diagonal(dim: usize, order: usize) -> Self {
        Self::from_fn(dim, |i| delta0(&MultiTensor::generator(dim, order, i)).expect("one leg"))
            .expect("consistent images")
    }

    /// The identity on generators, as a one-leg map.
    pub fn identity(dim: usize, order: usize) -> Self {
        Self::from_fn(dim, |i| MultiTensor::generator(dim, order, i)).expect("consistent images")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn target_legs(&self) -> usize {
        self.target_legs
    }

    pub fn images(&self) -> &[MultiTensor] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &MultiTensor {
        &self.images[i]
    }

    pub fn with_order(&self, order: usize) -> Self {
        GeneratorMap {
            dim: self.dim,
            order,
            target_legs: self.target_legs,
            images: self.images.iter().map(|t| t.with_order(order)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Self::new(images)
    }

    /// Unique algebra morphism T(V) → T(V)^⊗n extending the generator images.
    pub fn morphism(&self) -> Morphism<'_> {
        Morphism { map: self, anti: false, cache: HashMap::new() }
    }

    /// Unique anti-homomorphism extending the generator images: w₁…w_k ↦ f(w_k)…f(w₁).
    pub fn antimorphism(&self) -> Morphism<'_> {
        Morphism { map: self, anti: true, cache: HashMap::new() }
    }
}

/// Multiplicative (or anti-multiplicative) extension of a [`GeneratorMap`], memoized
/// per word.
pub struct Morphism<'a> {
    map: &'a GeneratorMap,
    anti: bool,
    cache: HashMap<Word, MultiTensor>,
}

impl Morphism<'_> {
    pub fn apply_word(&mut self, w: &Word) -> Result<MultiTensor> {
        if let Some(t) = self.cache.get(w) {
            return Ok(t.clone());
        }
        let m = self.map;
        let out = if w.is_empty() {
            MultiTensor::unit(m.dim, m.target_legs, m.order)
        } else {
            let letters = w.letters();
            let (last, prefix) = letters.split_last().unwrap();
            check_letter(*last, m.dim)?;
            let head = self.apply_word(&Word(prefix.to_vec()))?;
            let img = &m.images[*last as usize];
            if self.anti {
                img.try_mul(&head)?
            } else {
                head.try_mul(img)?
            }
        };
        self.cache.insert(w.clone(), out.clone());
        Ok(out)
    }

    /// Applies the extension to a one-leg tensor.
    pub fn apply(&mut self, t: &MultiTensor) -> Result<MultiTensor> {
        self.apply_on_leg(t, 1)
    }

    /// Applies the extension to one leg (1-based) of a multi-leg tensor.
    pub fn apply_on_leg(&mut self, t: &MultiTensor, leg: usize) -> Result<MultiTensor> {
        let legs = self.map.target_legs;
        t.map_leg(leg, legs, |w| self.apply_word(w))
    }
}

fn check_letter(l: u8, dim: usize) -> Result<()> {
    if l as usize >= dim {
        return Err(Error::LetterOutOfRange { letter: l as usize, dim });
    }
    Ok(())
}

/// The derivation D over an algebra morphism φ with D(e_i) = d(e_i):
/// D(xy) = D(x)φ(y) + φ(x)D(y), D(1) = 0.
pub struct Derivation<'a> {
    d_map: &'a GeneratorMap,
    over: Morphism<'a>,
    cache: HashMap<Word, MultiTensor>,
}

pub fn derivation_extend<'a>(d_map: &'a GeneratorMap, morphism: &'a GeneratorMap) -> Derivation<'a> {
    assert_eq!(d_map.target_legs, morphism.target_legs, "derivation and morphism land in different spaces");
    assert_eq!(d_map.order, morphism.order, "derivation and morphism have different orders");
    Derivation { d_map, over: morphism.morphism(), cache: HashMap::new() }
}

impl Derivation<'_> {
    pub fn target_legs(&self) -> usize {
        self.d_map.target_legs
    }

    /// D on a single word, peeling the last letter:
    /// D(p·x) = D(p)φ(x) + φ(p)d(x).
    pub fn apply_word(&mut self, w: &Word) -> Result<MultiTensor> {
        if let Some(t) = self.cache.get(w) {
            return Ok(t.clone());
        }
        let m = self.d_map;
        let out = if w.is_empty() {
            MultiTensor::zero(m.dim, m.target_legs, m.order)
        } else {
            let (last, prefix) = w.letters().split_last().unwrap();
            check_letter(*last, m.dim)?;
            let prefix = Word(prefix.to_vec());
            let d_prefix = self.apply_word(&prefix)?;
            let phi_prefix = self.over.apply_word(&prefix)?;
            let phi_last = self.over.apply_word(&Word::letter(*last))?;
            let left = d_prefix.try_mul(&phi_last)?;
            let right = phi_prefix.try_mul(&m.images[*last as usize])?;
            left.try_add(&right)?
        };
        self.cache.insert(w.clone(), out.clone());
        Ok(out)
    }

    pub fn apply(&mut self, t: &MultiTensor) -> Result<MultiTensor> {
        self.apply_on_leg(t, 1)
    }

    pub fn apply_on_leg(&mut self, t: &MultiTensor, leg: usize) -> Result<MultiTensor> {
        let legs = self.d_map.target_legs;
        t.map_leg(leg, legs, |w| self.apply_word(w))
    }
}

/// Δ₀ on a single word: the sum over all ways of distributing its letters between the
/// two legs, keeping their order.
pub fn delta0_word(w: &Word) -> Vec<(Word, Word)> {
    let n = w.len();
    assert!(n < 64, "word too long for subset enumeration");
    (0u64..1 << n)
        .map(|mask| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, &l) in w.letters().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(l);
                } else {
                    right.push(l);
                }
            }
            (Word(left), Word(right))
        })
        .collect()
}

/// The shuffle coproduct on a one-leg tensor.
pub fn delta0(t: &MultiTensor) -> Result<MultiTensor> {
    if t.legs() != 1 {
        return Err(Error::LegCount { expected: 1, got: t.legs() });
    }
    delta0_on_leg(t, 1)
}

/// Δ₀ applied to one leg (1-based) of a multi-leg tensor, e.g. (Δ₀⊗id) for leg 1.
pub fn delta0_on_leg(t: &MultiTensor, leg: usize) -> Result<MultiTensor> {
    let (dim, order) = (t.dim(), t.order());
    t.map_leg(leg, 2, |w| {
        let mut img = MultiTensor::zero(dim, 2, order);
        for (a, b) in delta0_word(w) {
            img.accumulate(vec![a, b], &HSeries::one(order));
        }
        Ok(img)
    })
}

/// ε₀: the coefficient of the empty word.
pub fn counit(t: &MultiTensor) -> Result<HSeries> {
    if t.legs() != 1 {
        return Err(Error::LegCount { expected: 1, got: t.legs() });
    }
    Ok(t.coefficient(&[Word::empty()]))
}

/// ε₀ applied to one leg, removing it.
pub fn counit_on_leg(t: &MultiTensor, leg: usize) -> Result<MultiTensor> {
    if t.legs() < 2 {
        return Err(Error::LegCount { expected: 2, got: t.legs() });
    }
    let mut out = MultiTensor::zero(t.dim(), t.legs() - 1, t.order());
    for (k, v) in t.terms() {
        if k[leg - 1].is_empty() {
            let mut key = k.clone();
            key.remove(leg - 1);
            out.accumulate(key, v);
        }
    }
    Ok(out)
}

/// Outcome of an identity check: `defect` is LHS − RHS and is zero iff the identity holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub defect: MultiTensor,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.defect.is_zero()
    }

    pub fn witness(&self) -> Option<&MultiTensor> {
        (!self.holds()).then_some(&self.defect)
    }
}

/// (Δ₀⊗id)D(t) − (id⊗D)Δ₀(t) − σ₂₃(D⊗id)Δ₀(t).
pub fn co_leibniz_check(d: &mut Derivation<'_>, t: &MultiTensor) -> Result<Check> {
    let dt = d.apply(t)?;
    let lhs = delta0_on_leg(&dt, 1)?;
    let d0 = delta0(t)?;
    let r1 = d.apply_on_leg(&d0, 2)?;
    let r2 = d.apply_on_leg(&d0, 1)?.permute_legs(&[1, 3, 2])?;
    Ok(Check { defect: lhs.try_sub(&r1)?.try_sub(&r2)? })
}

/// Whether every leg of `t` lies in L(V) ⊂ T(V), i.e. applying Δ₀ to leg i gives the
/// tensor with 1 inserted on either side of that leg.
pub fn legs_primitive(t: &MultiTensor) -> Result<bool> {
    let n = t.legs();
    for leg in 1..=n {
        let lhs = delta0_on_leg(t, leg)?;
        let before: Vec<usize> = (1..=n).map(|i| if i < leg { i } else { i + 1 }).collect();
        let after: Vec<usize> = (1..=n).map(|i| if i <= leg { i } else { i + 1 }).collect();
        let rhs = t.leg_embed(n + 1, &before)?.try_add(&t.leg_embed(n + 1, &after)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the coefficient tensor has zero constant term everywhere.
pub fn divisible_by_h(t: &MultiTensor) -> bool {
    t.terms().all(|(_, c)| c.constant_term().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn w(ix: &[usize]) -> MultiTensor {
        MultiTensor::word(3, 1, Word::from_indices(ix))
    }

    fn t2(a: &[usize], b: &[usize]) -> MultiTensor {
        MultiTensor::rational_term(3, 1, &[a, b], int(1))
    }

    #[test]
    fn coproduct_of_small_words() {
        assert_eq!(delta0(&w(&[0])).unwrap(), &t2(&[0], &[]) + &t2(&[], &[0]));
        assert_eq!(delta0(&w(&[])).unwrap(), MultiTensor::unit(3, 2, 1));
        let expected = [t2(&[0, 1], &[]), t2(&[0], &[1]), t2(&[1], &[0]), t2(&[], &[0, 1])]
            .iter()
            .fold(MultiTensor::zero(3, 2, 1), |acc, x| &acc + x);
        assert_eq!(delta0(&w(&[0, 1])).unwrap(), expected);
        let via_product = &delta0(&w(&[0])).unwrap() * &delta0(&w(&[1])).unwrap();
        assert_eq!(delta0(&w(&[0, 1])).unwrap(), via_product);
    }

    #[test]
    fn counit_values() {
        assert_eq!(counit(&w(&[])).unwrap(), HSeries::one(1));
        assert!(counit(&w(&[0])).unwrap().is_zero());
        let x = &w(&[0, 1]) + &w(&[2]);
        let d = delta0(&x).unwrap();
        assert_eq!(counit_on_leg(&d, 1).unwrap(), x);
        assert_eq!(counit_on_leg(&d, 2).unwrap(), x);
    }

    #[test]
    fn morphism_matches_shuffle_coproduct() {
        let diag = GeneratorMap::shuffle_diagonal(3, 1);
        let mut m = diag.morphism();
        for word in Word::all_up_to(3, 3) {
            let t = MultiTensor::word(3, 1, word);
            assert_eq!(m.apply(&t).unwrap(), delta0(&t).unwrap());
        }
    }

    #[test]
    fn derivation_basics() {
        let d_map = GeneratorMap::from_fn(3, |i| t2(&[i], &[(i + 1) % 3])).unwrap();
        let diag = GeneratorMap::shuffle_diagonal(3, 1);
        let mut d = derivation_extend(&d_map, &diag);
        assert!(d.apply(&w(&[])).unwrap().is_zero());
        assert_eq!(d.apply(&w(&[2])).unwrap(), t2(&[2], &[0]));
        let expected = &(&t2(&[0], &[1]) * &delta0(&w(&[1])).unwrap())
            + &(&delta0(&w(&[0])).unwrap() * &t2(&[1], &[2]));
        assert_eq!(d.apply(&w(&[0, 1])).unwrap(), expected);
    }

    #[test]
    fn primitive_legs() {
        let comm = &w(&[0, 1]) - &w(&[1, 0]);
        assert!(legs_primitive(&comm).unwrap());
        assert!(!legs_primitive(&w(&[0, 1])).unwrap());
        let both = comm.tensor(&w(&[2])).unwrap();
        assert!(legs_primitive(&both).unwrap());
        assert!(!legs_primitive(&w(&[2]).tensor(&w(&[0, 0])).unwrap()).unwrap());
    }

    #[test]
    fn letter_out_of_range_is_reported() {
        let diag = GeneratorMap::shuffle_diagonal(2, 1);
        let mut m = diag.morphism();
        assert!(matches!(m.apply_word(&Word::letter(2)), Err(Error::LetterOutOfRange { .. })));
    }

    #[test]
    fn h_divisibility() {
        assert!(divisible_by_h(&MultiTensor::zero(2, 1, 2)));
        assert!(!divisible_by_h(&MultiTensor::unit(2, 1, 2)));
        assert!(divisible_by_h(&MultiTensor::unit(2, 1, 2).shift_h(1)));
    }
}
