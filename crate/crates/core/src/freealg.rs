//! Sparse exact arithmetic in T(V)^⊗n.
//!
//! Legs are numbered from 1, matching the superscript notation `s¹³` for "s placed in
//! legs 1 and 3".

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{HSeries, Rational};

/// A monomial of T(V): a finite sequence of generator indices. The empty word is 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u8) -> Self {
        Word(vec![i])
    }

    pub fn from_indices(ix: &[usize]) -> Self {
        Word(ix.iter().map(|&i| u8::try_from(i).expect("letter index exceeds 255")).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Left rotation by `k`: `w_k w_{k+1} … w_{k-1}`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        Word(self.0[k..].iter().chain(&self.0[..k]).copied().collect())
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }

    /// All words of length `len` over `d` letters, in lexicographic order.
    pub fn all_of_length(d: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..d).map(move |a| {
                        let mut v = w.0.clone();
                        v.push(a as u8);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All words of length `0..=max_len`.
    pub fn all_up_to(d: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_of_length(d, l)).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "e{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub type Key = Vec<Word>;

/// Sparse element of T(V)^⊗legs with coefficients in ℚ[h]/(h^order).
///
/// Stored coefficients are never zero, so structural equality is equality of tensors.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiTensor {
    dim: usize,
    legs: usize,
    order: usize,
    terms: BTreeMap<Key, HSeries>,
}

/// One serialized term: coefficient text plus one letter list per leg.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    pub words: Vec<Vec<u8>>,
}

impl MultiTensor {
    pub fn zero(dim: usize, legs: usize, order: usize) -> Self {
        assert!(legs >= 1 && order >= 1, "legs and order must be positive");
        MultiTensor { dim, legs, order, terms: BTreeMap::new() }
    }

    pub fn unit(dim: usize, legs: usize, order: usize) -> Self {
        let mut t = Self::zero(dim, legs, order);
        t.terms.insert(vec![Word::empty(); legs], HSeries::one(order));
        t
    }

    /// A single term `coeff · w₁⊗…⊗wₙ`.
    pub fn monomial(dim: usize, order: usize, words: Key, coeff: HSeries) -> Result<Self> {
        let mut t = Self::zero(dim, words.len(), order);
        t.add_term(words, coeff)?;
        Ok(t)
    }

    /// The generator `e_i` as a one-leg tensor.
    pub fn generator(dim: usize, order: usize, i: usize) -> Self {
        Self::word(dim, order, Word::from_indices(&[i]))
    }

    pub fn word(dim: usize, order: usize, w: Word) -> Self {
        Self::monomial(dim, order, vec![w], HSeries::one(order)).expect("invalid word")
    }

    /// Rational-coefficient monomial built from index slices, one per leg.
    pub fn rational_term(dim: usize, order: usize, words: &[&[usize]], c: Rational) -> Self {
        let key = words.iter().map(|w| Word::from_indices(w)).collect();
        Self::monomial(dim, order, key, HSeries::constant(c, order)).expect("invalid term")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &HSeries)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &[Word]) -> HSeries {
        self.terms.get(key).cloned().unwrap_or_else(|| HSeries::zero(self.order))
    }

    /// Longest word appearing in any leg.
    pub fn max_word_len(&self) -> usize {
        self.terms.keys().flat_map(|k| k.iter().map(Word::len)).max().unwrap_or(0)
    }

    /// Adds `coeff` to the coefficient of `key`, evicting the entry if it cancels.
    pub fn add_term(&mut self, key: Key, coeff: HSeries) -> Result<()> {
        if key.len() != self.legs {
            return Err(Error::LegCount { expected: self.legs, got: key.len() });
        }
        if coeff.order() != self.order {
            return Err(Error::OrderMismatch(self.order, coeff.order()));
        }
        for w in &key {
            if let Some(m) = w.max_letter() {
                if m as usize >= self.dim {
                    return Err(Error::LetterOutOfRange { letter: m as usize, dim: self.dim });
                }
            }
        }
        self.accumulate(key, &coeff);
        Ok(())
    }

    pub(crate) fn accumulate(&mut self, key: Key, coeff: &HSeries) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_unchecked(coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!("dim {} vs {}", self.dim, other.dim)));
        }
        if self.legs != other.legs {
            return Err(Error::ShapeMismatch(format!("legs {} vs {}", self.legs, other.legs)));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    fn empty_like(&self) -> Self {
        Self::zero(self.dim, self.legs, self.order)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.empty_like();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.scale(c);
        }
        out
    }

    pub fn scale_series(&self, c: &HSeries) -> Result<Self> {
        if c.order() != self.order {
            return Err(Error::OrderMismatch(self.order, c.order()));
        }
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), &v.mul_unchecked(c));
        }
        Ok(out)
    }

    /// Multiplication by h^k.
    pub fn shift_h(&self, k: usize) -> Self {
        let mut out = self.empty_like();
        for (key, v) in &self.terms {
            out.accumulate(key.clone(), &v.shift(k));
        }
        out
    }

    /// Legwise concatenation product, extended bilinearly.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, None)
    }

    /// Product that drops terms whose words exceed `cap` letters in some leg.
    /// With `cap = None` nothing is dropped.
    pub fn mul_capped(&self, other: &Self, cap: Option<usize>) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.empty_like();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some(cap) = cap {
                    if ka.iter().zip(kb).any(|(a, b)| a.len() + b.len() > cap) {
                        continue;
                    }
                }
                let key: Key = ka.iter().zip(kb).map(|(a, b)| a.concat(b)).collect();
                let c = ca.mul_unchecked(cb);
                out.accumulate(key, &c);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Drops every term with a word longer than `max` letters.
    pub fn truncate_word_degree(&self, max: usize) -> Self {
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            if k.iter().all(|w| w.len() <= max) {
                out.terms.insert(k.clone(), v.clone());
            }
        }
        out
    }

    /// Places an m-leg tensor into `target_legs` legs; leg k goes to `positions[k]`
    /// (1-based), all other legs carry the empty word.
    pub fn leg_embed(&self, target_legs: usize, positions: &[usize]) -> Result<Self> {
        let bad = || Error::InvalidPositions { positions: positions.to_vec(), legs: target_legs };
        if positions.len() != self.legs {
            return Err(bad());
        }
        let mut seen = vec![false; target_legs + 1];
        for &p in positions {
            if p == 0 || p > target_legs || seen[p] {
                return Err(bad());
            }
            seen[p] = true;
        }
        let mut out = Self::zero(self.dim, target_legs, self.order);
        for (k, v) in &self.terms {
            let mut key = vec![Word::empty(); target_legs];
            for (w, &p) in k.iter().zip(positions) {
                key[p - 1] = w.clone();
            }
            out.terms.insert(key, v.clone());
        }
        Ok(out)
    }

    /// Moves leg i to position `perm[i-1]` (both 1-based).
    pub fn permute_legs(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.legs)?;
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            let mut key = vec![Word::empty(); self.legs];
            for (i, w) in k.iter().enumerate() {
                key[perm[i] - 1] = w.clone();
            }
            out.terms.insert(key, v.clone());
        }
        Ok(out)
    }

    /// The flip `a⊗b ↦ b⊗a` on two legs.
    pub fn swap(&self) -> Result<Self> {
        if self.legs != 2 {
            return Err(Error::LegCount { expected: 2, got: self.legs });
        }
        self.permute_legs(&[2, 1])
    }

    /// Reverses every word sitting in `leg`.
    pub fn reverse_leg_words(&self, leg: usize) -> Result<Self> {
        if leg == 0 || leg > self.legs {
            return Err(Error::InvalidPositions { positions: vec![leg], legs: self.legs });
        }
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            let mut key = k.clone();
            key[leg - 1] = key[leg - 1].reversed();
            out.accumulate(key, v);
        }
        Ok(out)
    }

    /// Sum over the three cyclic permutations of a 3-leg tensor.
    pub fn cyclic_sum3(&self) -> Result<Self> {
        if self.legs != 3 {
            return Err(Error::LegCount { expected: 3, got: self.legs });
        }
        let mut out = self.clone();
        for perm in [[2, 3, 1], [3, 1, 2]] {
            let p = self.permute_legs(&perm)?;
            for (k, c) in &p.terms {
                out.accumulate(k.clone(), c);
            }
        }
        Ok(out)
    }

    /// Σ_{π∈Sₙ} sign(π)·π(t), without normalization.
    pub fn alt_sum(&self) -> Self {
        let mut out = self.empty_like();
        for (perm, sign) in permutations_with_sign(self.legs) {
            for (k, v) in &self.terms {
                let mut key = vec![Word::empty(); self.legs];
                for (i, w) in k.iter().enumerate() {
                    key[perm[i] - 1] = w.clone();
                }
                if sign > 0 {
                    out.accumulate(key, v);
                } else {
                    out.accumulate(key, &-v);
                }
            }
        }
        out
    }

    /// Truncated exponential; every coefficient must be divisible by h.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.values().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::NonZeroConstantTerm);
        }
        let mut out = Self::unit(self.dim, self.legs, self.order);
        let mut power = out.clone();
        for r in 1..self.order {
            power = power.try_mul(self)?.scale(&Rational::new(1.into(), (r as i64).into()));
            if power.is_zero() {
                break;
            }
            out = out.try_add(&power)?;
        }
        Ok(out)
    }

    /// Inverse of `1 + r` with r divisible by h, via the terminating Neumann series.
    pub fn invert_unital(&self) -> Result<Self> {
        let unit = Self::unit(self.dim, self.legs, self.order);
        let r = self.try_sub(&unit)?;
        if r.terms.values().any(|c| !c.constant_term().is_zero()) {
            return Err(Error::NotUnital);
        }
        let minus_r = -&r;
        let mut out = unit.clone();
        let mut power = unit;
        for _ in 1..self.order {
            power = power.try_mul(&minus_r)?;
            if power.is_zero() {
                break;
            }
            out = out.try_add(&power)?;
        }
        Ok(out)
    }

    /// μ₀: concatenates the two legs.
    pub fn mu_flatten(&self) -> Result<Self> {
        if self.legs != 2 {
            return Err(Error::LegCount { expected: 2, got: self.legs });
        }
        let mut out = Self::zero(self.dim, 1, self.order);
        for (k, v) in &self.terms {
            out.accumulate(vec![k[0].concat(&k[1])], v);
        }
        Ok(out)
    }

    /// Outer tensor product: legs of `self` followed by legs of `other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let mut out = Self::zero(self.dim, self.legs + other.legs, self.order);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key: Key = ka.iter().chain(kb).cloned().collect();
                out.accumulate(key, &ca.mul_unchecked(cb));
            }
        }
        Ok(out)
    }

    /// Applies a linear map given on words to one leg (1-based), replacing that leg by
    /// the `out_legs` legs of the image. Images are computed once per distinct word.
    pub fn map_leg<F>(&self, leg: usize, out_legs: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&Word) -> Result<MultiTensor>,
    {
        if leg == 0 || leg > self.legs {
            return Err(Error::InvalidPositions { positions: vec![leg], legs: self.legs });
        }
        let new_legs = self.legs - 1 + out_legs;
        let mut cache: HashMap<Word, MultiTensor> = HashMap::new();
        let mut out = Self::zero(self.dim, new_legs, self.order);
        for (k, v) in &self.terms {
            let w = &k[leg - 1];
            if !cache.contains_key(w) {
                let img = f(w)?;
                if img.legs != out_legs {
                    return Err(Error::LegCount { expected: out_legs, got: img.legs });
                }
                if img.order != self.order {
                    return Err(Error::OrderMismatch(self.order, img.order));
                }
                cache.insert(w.clone(), img);
            }
            let img = &cache[w];
            for (ik, iv) in &img.terms {
                let mut key = Vec::with_capacity(new_legs);
                key.extend_from_slice(&k[..leg - 1]);
                key.extend_from_slice(ik);
                key.extend_from_slice(&k[leg..]);
                out.accumulate(key, &v.mul_unchecked(iv));
            }
        }
        Ok(out)
    }

    /// The tensor of h^k coefficients, as an order-1 (rational) tensor.
    pub fn h_coefficient(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim, self.legs, 1);
        for (key, v) in &self.terms {
            let c = v.coeff(k);
            if !c.is_zero() {
                out.terms.insert(key.clone(), HSeries::constant(c, 1));
            }
        }
        out
    }

    /// Same tensor read in ℚ[h]/(h^order), truncating or zero-padding each coefficient.
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zero(self.dim, self.legs, order);
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), &v.with_order(order));
        }
        out
    }

    /// Terms whose words have the given lengths in every leg.
    pub fn multidegree_part(&self, degrees: &[usize]) -> Self {
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            if k.iter().map(Word::len).eq(degrees.iter().copied()) {
                out.terms.insert(k.clone(), v.clone());
            }
        }
        out
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(k, v)| TermRecord {
                coeff: v.to_string(),
                words: k.iter().map(|w| w.0.clone()).collect(),
            })
            .collect()
    }

    pub fn from_records(dim: usize, legs: usize, order: usize, records: &[TermRecord]) -> Result<Self> {
        let mut out = Self::zero(dim, legs, order);
        for r in records {
            let coeff = HSeries::parse(&r.coeff, order)?;
            out.add_term(r.words.iter().map(|w| Word(w.clone())).collect(), coeff)?;
        }
        Ok(out)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p == 0 || p > n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// All permutations of {1..n} (as image lists) with their signs, in lexicographic order.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i8)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<(Vec<usize>, i8)>) {
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, n, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n + 1], n, &mut out);
    out
}

impl fmt::Display for MultiTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *v != HSeries::one(self.order) {
                write!(f, "({v}) ")?;
            }
            let words: Vec<String> = k.iter().map(Word::to_string).collect();
            write!(f, "{}", words.join(" ⊗ "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiTensor[d={}, legs={}, N={}]({})", self.dim, self.legs, self.order, self)
    }
}

// Operator forms panic on shape mismatch; the `try_*` methods report it instead.

impl Add for &MultiTensor {
    type Output = MultiTensor;
    fn add(self, rhs: &MultiTensor) -> MultiTensor {
        self.try_add(rhs).expect("MultiTensor shape mismatch")
    }
}

impl Sub for &MultiTensor {
    type Output = MultiTensor;
    fn sub(self, rhs: &MultiTensor) -> MultiTensor {
        self.try_sub(rhs).expect("MultiTensor shape mismatch")
    }
}

impl Mul for &MultiTensor {
    type Output = MultiTensor;
    fn mul(self, rhs: &MultiTensor) -> MultiTensor {
        self.try_mul(rhs).expect("MultiTensor shape mismatch")
    }
}

impl Neg for &MultiTensor {
    type Output = MultiTensor;
    fn neg(self) -> MultiTensor {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }
}

/// Product of a list of same-shape tensors, left to right.
pub fn product_of(factors: &[&MultiTensor]) -> Result<MultiTensor> {
    let (first, rest) = factors.split_first().expect("empty product");
    let mut acc = (*first).clone();
    for f in rest {
        acc = acc.try_mul(f)?;
    }
    Ok(acc)
}

pub fn mt_product(a: &MultiTensor, b: &MultiTensor) -> Result<MultiTensor> {
    a.try_mul(b)
}

pub fn mt_commutator(a: &MultiTensor, b: &MultiTensor) -> Result<MultiTensor> {
    a.commutator(b)
}
