//! The Poisson algebra of cyclic traces.
//!
//! A [`WordFunctional`] is an element of T(V)* supported on finitely many words; it
//! pairs with T(V) by ⟨u, w⟩ = δ_{uw}. Cyclic functionals (invariant under rotation of
//! words) are the traces; the class of the word μ₁…μ_k is the Z-symbol, stored as the
//! full sum of its rotations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{MultiTensor, Word};
use crate::qlba::{Bivector, QlbaData};
use crate::scalars::{fmt_rational, HSeries, Rational};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct WordFunctional {
    dim: usize,
    terms: BTreeMap<Word, Rational>,
}

impl WordFunctional {
    pub fn zero(dim: usize) -> Self {
        WordFunctional { dim, terms: BTreeMap::new() }
    }

    pub fn from_word(dim: usize, w: Word, c: Rational) -> Result<Self> {
        let mut f = Self::zero(dim);
        f.add_term(w, c)?;
        Ok(f)
    }

    pub fn from_indices(dim: usize, ix: &[usize]) -> Result<Self> {
        Self::from_word(dim, Word::from_indices(ix), Rational::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) -> Result<()> {
        if let Some(m) = w.max_letter() {
            if m as usize >= self.dim {
                return Err(Error::LetterOutOfRange { letter: m as usize, dim: self.dim });
            }
        }
        self.accumulate(w, c);
        Ok(())
    }

    fn accumulate(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        WordFunctional { dim: self.dim, terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    /// Homogeneous degrees present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Word::len).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Invariance of every coefficient under rotation of its word.
    pub fn is_cyclic(&self) -> bool {
        self.terms.iter().all(|(w, c)| (1..w.len().max(1)).all(|k| self.coefficient(&w.rotate(k)) == *c))
    }

    /// ⟨f, t⟩ for a one-leg tensor t.
    pub fn pair(&self, t: &MultiTensor) -> Result<HSeries> {
        if t.legs() != 1 {
            return Err(Error::LegCount { expected: 1, got: t.legs() });
        }
        let mut acc = HSeries::zero(t.order());
        for (k, v) in t.terms() {
            if let Some(c) = self.terms.get(&k[0]) {
                acc = &acc + &v.scale(c);
            }
        }
        Ok(acc)
    }

    /// ⟨f ⊗ g, t⟩ for a two-leg tensor t (constant coefficients).
    pub fn pair2(&self, other: &Self, t: &MultiTensor) -> Result<Rational> {
        if t.legs() != 2 {
            return Err(Error::LegCount { expected: 2, got: t.legs() });
        }
        let mut acc = Rational::zero();
        for (k, v) in t.terms() {
            if let (Some(a), Some(b)) = (self.terms.get(&k[0]), other.terms.get(&k[1])) {
                acc += a * b * v.constant_term();
            }
        }
        Ok(acc)
    }

    pub fn to_records(&self) -> Vec<FunctionalRecord> {
        self.terms
            .iter()
            .map(|(w, c)| FunctionalRecord { word: w.0.clone(), coeff: fmt_rational(c) })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalRecord {
    pub word: Vec<u8>,
    pub coeff: String,
}

impl fmt::Display for WordFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{} ", fmt_rational(&mag))?;
            }
            let letters: Vec<String> = w.letters().iter().map(u8::to_string).collect();
            write!(f, "f[{}]", letters.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for WordFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A rotation-invariant [`WordFunctional`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicTensor(WordFunctional);

impl CyclicTensor {
    pub fn new(f: WordFunctional) -> Result<Self> {
        if !f.is_cyclic() {
            return Err(Error::Invariant("functional is not rotation invariant".into()));
        }
        Ok(CyclicTensor(f))
    }

    pub fn zero(dim: usize) -> Self {
        CyclicTensor(WordFunctional::zero(dim))
    }

    pub fn functional(&self) -> &WordFunctional {
        &self.0
    }

    pub fn into_functional(self) -> WordFunctional {
        self.0
    }

    /// Decomposition Σ λ·Z_w over canonical (lexicographically minimal) rotations w.
    pub fn classes(&self) -> Vec<(Word, Rational)> {
        let mut out = Vec::new();
        for (w, c) in self.0.terms() {
            if *w == canonical_rotation(w) {
                let per = primitive_period(w);
                let lambda = c * Rational::new(per.into(), w.len().max(1).into());
                out.push((w.clone(), lambda));
            }
        }
        out
    }

    /// The single class λ·Z_w this tensor consists of, if it is one.
    pub fn as_single_class(&self) -> Option<(Word, Rational)> {
        let classes = self.classes();
        match classes.as_slice() {
            [(w, l)] => Some((w.clone(), l.clone())),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(CyclicTensor(self.0.try_add(&other.0)?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CyclicTensor(self.0.scale(c))
    }
}

impl fmt::Display for CyclicTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes = self.classes();
        if classes.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in classes.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{} ", fmt_rational(&mag))?;
            }
            let letters: Vec<String> = w.letters().iter().map(u8::to_string).collect();
            write!(f, "Z({})", letters.join(","))?;
        }
        Ok(())
    }
}

pub fn canonical_rotation(w: &Word) -> Word {
    (0..w.len().max(1)).map(|k| w.rotate(k)).min().unwrap_or_default()
}

fn primitive_period(w: &Word) -> usize {
    let n = w.len();
    (1..=n).find(|&p| n % p == 0 && w.rotate(p) == *w).unwrap_or(n.max(1))
}

/// Canonical representatives of the cyclic classes of length k over d letters.
pub fn necklaces(d: usize, k: usize) -> Vec<Word> {
    Word::all_of_length(d, k).into_iter().filter(|w| *w == canonical_rotation(w)).collect()
}

/// Z_{μ₁…μ_k}: the sum of all k rotations of the word, each with coefficient 1.
pub fn z_symbol(dim: usize, indices: &[usize]) -> Result<CyclicTensor> {
    if indices.is_empty() {
        return Err(Error::Invariant("a Z-symbol needs at least one index".into()));
    }
    if let Some(&m) = indices.iter().max() {
        if m >= dim {
            return Err(Error::LetterOutOfRange { letter: m, dim });
        }
    }
    Ok(z_of_word(dim, &Word::from_indices(indices)))
}

fn z_of_word(dim: usize, w: &Word) -> CyclicTensor {
    let mut f = WordFunctional::zero(dim);
    for k in 0..w.len() {
        f.accumulate(w.rotate(k), Rational::one());
    }
    CyclicTensor(f)
}

/// All interleavings of `u` and `v` preserving internal order, with multiplicity.
pub fn shuffle_words(u: &[u8], v: &[u8]) -> Vec<Word> {
    fn rec(u: &[u8], v: &[u8], prefix: &mut Vec<u8>, out: &mut Vec<Word>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.push(Word(w));
            return;
        }
        prefix.push(u[0]);
        rec(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        rec(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = Vec::new();
    rec(u, v, &mut Vec::new(), &mut out);
    out
}

/// F •₀ G = (F⊗G)Δ₀, i.e. the shuffle product of word functionals.
pub fn unshuffle_product(a: &WordFunctional, b: &WordFunctional) -> Result<WordFunctional> {
    a.check_dim(b)?;
    let mut out = WordFunctional::zero(a.dim);
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            let c = cu * cv;
            for w in shuffle_words(u.letters(), v.letters()) {
                out.accumulate(w, c.clone());
            }
        }
    }
    Ok(out)
}

/// Terms α⊗β of δ on generators, indexed by (α, β) for the transposed evaluation of
/// {,}_D.
struct DeltaIndex {
    by_pair: HashMap<(Word, Word), Vec<(u8, Rational)>>,
    left_lens: Vec<usize>,
    right_lens: Vec<usize>,
}

impl DeltaIndex {
    fn new(q: &QlbaData) -> Self {
        let mut by_pair: HashMap<(Word, Word), Vec<(u8, Rational)>> = HashMap::new();
        let mut left_lens = Vec::new();
        let mut right_lens = Vec::new();
        for (x, img) in q.delta.images().iter().enumerate() {
            for (k, c) in img.terms() {
                let c0 = c.constant_term().clone();
                if c0.is_zero() {
                    continue;
                }
                left_lens.push(k[0].len());
                right_lens.push(k[1].len());
                by_pair.entry((k[0].clone(), k[1].clone())).or_default().push((x as u8, c0));
            }
        }
        left_lens.sort_unstable();
        left_lens.dedup();
        right_lens.sort_unstable();
        right_lens.dedup();
        DeltaIndex { by_pair, left_lens, right_lens }
    }
}

/// {F, G}_D = (F⊗G)∘D with D the derivation extension of q's δ over Δ₀.
///
/// Evaluated through the transpose of D: since
/// D(w) = Σ Δ₀(p)·δ(x)·Δ₀(r) over factorizations w = p·x·r, a pair of words u, v
/// contributes sh(u₁,v₁)·x·sh(u₂,v₂) for each split u = u₁αu₂, v = v₁βv₂ with α⊗β
/// a term of δ(x).
pub fn bracket_d(a: &WordFunctional, b: &WordFunctional, q: &QlbaData) -> Result<WordFunctional> {
    a.check_dim(b)?;
    if a.dim != q.dim {
        return Err(Error::DimMismatch(a.dim, q.dim));
    }
    let index = DeltaIndex::new(q);
    let mut out = WordFunctional::zero(a.dim);
    for (u, cu) in &a.terms {
        let u = u.letters();
        for (v, cv) in &b.terms {
            let v = v.letters();
            let cuv = cu * cv;
            for &p in &index.left_lens {
                for i in 0..=u.len().saturating_sub(p) {
                    if i + p > u.len() {
                        continue;
                    }
                    let alpha = Word(u[i..i + p].to_vec());
                    for &r in &index.right_lens {
                        for j in 0..=v.len().saturating_sub(r) {
                            if j + r > v.len() {
                                continue;
                            }
                            let beta = Word(v[j..j + r].to_vec());
                            let Some(hits) = index.by_pair.get(&(alpha.clone(), beta)) else {
                                continue;
                            };
                            let left = shuffle_words(&u[..i], &v[..j]);
                            let right = shuffle_words(&u[i + p..], &v[j + r..]);
                            for (x, c) in hits {
                                let coeff = &cuv * c;
                                for l in &left {
                                    for rr in &right {
                                        let mut w = Vec::with_capacity(l.len() + 1 + rr.len());
                                        w.extend_from_slice(l.letters());
                                        w.push(*x);
                                        w.extend_from_slice(rr.letters());
                                        out.accumulate(Word(w), coeff.clone());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// {F, G}_D by its definition: for every word w of each degree that can pair nonzero,
/// evaluate ⟨F⊗G, D(w)⟩.
pub fn bracket_d_by_pairing(a: &WordFunctional, b: &WordFunctional, q: &QlbaData) -> Result<WordFunctional> {
    a.check_dim(b)?;
    let mut shifts: Vec<usize> = q
        .delta
        .images()
        .iter()
        .flat_map(|img| img.terms().map(|(k, _)| k[0].len() + k[1].len()))
        .filter(|&s| s >= 1)
        .map(|s| s - 1)
        .collect();
    shifts.sort_unstable();
    shifts.dedup();
    let mut targets = Vec::new();
    for da in a.degrees() {
        for db in b.degrees() {
            for s in &shifts {
                if da + db >= *s {
                    targets.push(da + db - s);
                }
            }
        }
    }
    targets.sort_unstable();
    targets.dedup();
    let handle = q.extend();
    let mut d = handle.derivation();
    let mut out = WordFunctional::zero(a.dim);
    for m in targets {
        for w in Word::all_of_length(a.dim, m) {
            let dw = d.apply_word(&w)?;
            let c = a.pair2(b, &dw)?;
            out.accumulate(w, c);
        }
    }
    Ok(out)
}

/// The direct bracket of two single cyclic classes Z_μ, Z_ν:
/// 2 Σ_{i,j} g_{μ_i ν_j} (Z_{μ_{i+1} ⊔(μ_{i+2}…μ_{i−1}, ν_{j+1}…ν_{j−2}) ν_{j−1}}
///                     − Z_{ν_{j+1} ⊔(μ_{i+1}…μ_{i−2}, ν_{j+2}…ν_{j−1}) μ_{i−1}})
/// with subscripts taken cyclically; ⊔ is the shuffle of the two inner strings.
pub fn pr_bracket_direct(a: &CyclicTensor, b: &CyclicTensor, g: &Bivector) -> Result<CyclicTensor> {
    let (mu, la) = a.as_single_class().ok_or(Error::NotSingleClass)?;
    let (nu, lb) = b.as_single_class().ok_or(Error::NotSingleClass)?;
    if a.0.dim != g.dim() || b.0.dim != g.dim() {
        return Err(Error::DimMismatch(a.0.dim, g.dim()));
    }
    let dim = g.dim();
    let (mu, nu) = (mu.letters(), nu.letters());
    let (k, l) = (mu.len(), nu.len());
    let two = Rational::from_integer(2.into());
    let mut out = WordFunctional::zero(dim);
    let seg = |w: &[u8], start: usize, count: usize| -> Vec<u8> {
        (0..count).map(|t| w[(start + t) % w.len()]).collect()
    };
    for i in 0..k {
        for j in 0..l {
            let gij = g.entry(mu[i] as usize, nu[j] as usize);
            if gij.is_zero() {
                continue;
            }
            let c = &two * gij * &la * &lb;
            let head = mu[(i + 1) % k];
            let tail = nu[(j + l - 1) % l];
            let inner_mu = seg(mu, i + 2, k.saturating_sub(2));
            let inner_nu = seg(nu, j + 1, l.saturating_sub(2));
            for s in shuffle_words(&inner_mu, &inner_nu) {
                let mut w = vec![head];
                w.extend_from_slice(s.letters());
                w.push(tail);
                add_class(&mut out, &Word(w), &c);
            }
            let head = nu[(j + 1) % l];
            let tail = mu[(i + k - 1) % k];
            let inner_mu = seg(mu, i + 1, k.saturating_sub(2));
            let inner_nu = seg(nu, j + 2, l.saturating_sub(2));
            for s in shuffle_words(&inner_mu, &inner_nu) {
                let mut w = vec![head];
                w.extend_from_slice(s.letters());
                w.push(tail);
                add_class(&mut out, &Word(w), &-&c);
            }
        }
    }
    Ok(CyclicTensor(out))
}

fn add_class(out: &mut WordFunctional, w: &Word, c: &Rational) {
    for k in 0..w.len() {
        out.accumulate(w.rotate(k), c.clone());
    }
}

/// Bilinear extension of [`pr_bracket_direct`] over the class decompositions.
pub fn pr_bracket(a: &CyclicTensor, b: &CyclicTensor, g: &Bivector) -> Result<CyclicTensor> {
    let dim = g.dim();
    let mut out = CyclicTensor::zero(dim);
    for (u, lu) in a.classes() {
        for (v, lv) in b.classes() {
            let za = z_of_word(dim, &u).scale(&lu);
            let zb = z_of_word(dim, &v).scale(&lv);
            out = out.try_add(&pr_bracket_direct(&za, &zb, g)?)?;
        }
    }
    Ok(out)
}

/// {a,{b,c}} + {c,{a,b}} + {b,{c,a}} under the supplied bracket.
pub fn jacobiator<F>(bracket: F, a: &WordFunctional, b: &WordFunctional, c: &WordFunctional) -> Result<WordFunctional>
where
    F: Fn(&WordFunctional, &WordFunctional) -> Result<WordFunctional>,
{
    let t1 = bracket(a, &bracket(b, c)?)?;
    let t2 = bracket(c, &bracket(a, b)?)?;
    let t3 = bracket(b, &bracket(c, a)?)?;
    t1.try_add(&t2)?.try_add(&t3)
}

/// A triple of single words whose Jacobiator under {,}_D is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiWitness {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    pub c: Vec<u8>,
    pub jacobiator: Vec<FunctionalRecord>,
}

/// Searches triples of single words (non-cyclic functionals) by increasing total degree
/// for a nonzero Jacobiator of {,}_D.
pub fn find_noncyclic_jacobi_witness(q: &QlbaData, max_total_degree: usize) -> Result<Option<JacobiWitness>> {
    let d = q.dim;
    let bracket = |x: &WordFunctional, y: &WordFunctional| bracket_d(x, y, q);
    for total in 3..=max_total_degree {
        for da in 1..=total {
            for db in 1..=total - da {
                let dc = total - da - db;
                if dc == 0 {
                    continue;
                }
                for ua in Word::all_of_length(d, da) {
                    for ub in Word::all_of_length(d, db) {
                        for uc in Word::all_of_length(d, dc) {
                            let fa = WordFunctional::from_word(d, ua.clone(), Rational::one())?;
                            let fb = WordFunctional::from_word(d, ub.clone(), Rational::one())?;
                            let fc = WordFunctional::from_word(d, uc.clone(), Rational::one())?;
                            let j = jacobiator(bracket, &fa, &fb, &fc)?;
                            if !j.is_zero() {
                                return Ok(Some(JacobiWitness {
                                    a: ua.0,
                                    b: ub.0,
                                    c: uc.0,
                                    jacobiator: j.to_records(),
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of comparing [`pr_bracket_direct`] with [`bracket_d`] over cyclic classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketComparison {
    /// The constant c with direct = c·algebraic, read off the first nonvanishing pair.
    pub constant: Option<Rational>,
    pub determined_at: Option<(Word, Word)>,
    pub pairs_checked: usize,
    pub mismatch: Option<(Word, Word)>,
}

impl BracketComparison {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Pairs of necklaces (μ, ν) ordered by k+l, then k.
pub fn class_pairs(d: usize, max_total: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for total in 2..=max_total {
        for k in 1..total {
            let l = total - k;
            for mu in necklaces(d, k) {
                for nu in necklaces(d, l) {
                    out.push((mu.clone(), nu));
                }
            }
        }
    }
    out
}

/// Determines c on the first pair where either bracket is nonzero, searching pairs with
/// k+l up to `search_total`, and checks direct = c·algebraic on every pair with
/// k+l ≤ `check_total`.
pub fn compare_pr_with_algebraic(g: &Bivector, check_total: usize, search_total: usize) -> Result<BracketComparison> {
    let q = crate::qlba::pr_qlba(g)?;
    let dim = g.dim();
    let mut res = BracketComparison { constant: None, determined_at: None, pairs_checked: 0, mismatch: None };
    for (mu, nu) in class_pairs(dim, check_total.max(search_total)) {
        let beyond = mu.len() + nu.len() > check_total;
        if beyond && res.constant.is_some() {
            break;
        }
        let a = z_of_word(dim, &mu);
        let b = z_of_word(dim, &nu);
        let direct = pr_bracket_direct(&a, &b, g)?.into_functional();
        let alg = bracket_d(a.functional(), b.functional(), &q)?;
        if !beyond {
            res.pairs_checked += 1;
        }
        if res.constant.is_none() && !(direct.is_zero() && alg.is_zero()) {
            match alg.terms().next() {
                Some((w, c)) => {
                    res.constant = Some(direct.coefficient(w) / c);
                    res.determined_at = Some((mu.clone(), nu.clone()));
                }
                None => {
                    res.mismatch = Some((mu, nu));
                    return Ok(res);
                }
            }
        }
        let c = res.constant.clone().unwrap_or_else(Rational::zero);
        if direct != alg.scale(&c) {
            res.mismatch = Some((mu, nu));
            return Ok(res);
        }
    }
    Ok(res)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub nonzero_brackets: usize,
    pub failure: Option<(Word, Word, Word)>,
}

/// Jacobiator of {,}_D on every multiset {Z_a, Z_b, Z_c} of cyclic classes with total
/// degree ≤ `max_total`. The Jacobiator of an antisymmetric bracket is totally
/// antisymmetric, so one ordering per multiset suffices.
pub fn jacobi_on_traces(q: &QlbaData, max_total: usize, parallel: bool) -> Result<JacobiReport> {
    use rayon::prelude::*;
    let dim = q.dim;
    let classes: Vec<Word> = (1..=max_total.saturating_sub(2)).flat_map(|k| necklaces(dim, k)).collect();
    let mut triples = Vec::new();
    for i in 0..classes.len() {
        for j in i..classes.len() {
            for k in j..classes.len() {
                if classes[i].len() + classes[j].len() + classes[k].len() <= max_total {
                    triples.push((i, j, k));
                }
            }
        }
    }
    let check = |&(i, j, k): &(usize, usize, usize)| -> Result<(bool, bool)> {
        let za = z_of_word(dim, &classes[i]).into_functional();
        let zb = z_of_word(dim, &classes[j]).into_functional();
        let zc = z_of_word(dim, &classes[k]).into_functional();
        let br = |x: &WordFunctional, y: &WordFunctional| bracket_d(x, y, q);
        let inner_nonzero = !br(&zb, &zc)?.is_zero() || !br(&za, &zb)?.is_zero() || !br(&zc, &za)?.is_zero();
        Ok((jacobiator(br, &za, &zb, &zc)?.is_zero(), inner_nonzero))
    };
    let results: Vec<Result<(bool, bool)>> =
        if parallel { triples.par_iter().map(check).collect() } else { triples.iter().map(check).collect() };
    let mut report = JacobiReport { triples_checked: triples.len(), nonzero_brackets: 0, failure: None };
    for (t, r) in triples.iter().zip(results) {
        let (ok, nz) = r?;
        report.nonzero_brackets += nz as usize;
        if !ok && report.failure.is_none() {
            report.failure = Some((classes[t.0].clone(), classes[t.1].clone(), classes[t.2].clone()));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::delta0;
    use crate::qlba::pr_qlba;
    use crate::scalars::int;

    fn f(ix: &[usize]) -> WordFunctional {
        WordFunctional::from_indices(3, ix).unwrap()
    }

    fn sum(fs: &[WordFunctional]) -> WordFunctional {
        fs.iter().fold(WordFunctional::zero(3), |acc, x| acc.try_add(x).unwrap())
    }

    #[test]
    fn z_symbols() {
        assert_eq!(z_symbol(3, &[2]).unwrap().functional(), &f(&[2]));
        assert_eq!(z_symbol(3, &[0, 1]).unwrap().functional(), &sum(&[f(&[0, 1]), f(&[1, 0])]));
        assert_eq!(z_symbol(3, &[0, 0]).unwrap().functional(), &f(&[0, 0]).scale(&int(2)));
        assert!(z_symbol(3, &[3]).is_err());
        assert!(z_symbol(3, &[]).is_err());
    }

    #[test]
    fn class_decomposition() {
        let z = z_symbol(3, &[1, 0, 1, 0]).unwrap();
        assert_eq!(z.as_single_class(), Some((Word::from_indices(&[0, 1, 0, 1]), int(1))));
        let two = z.try_add(&z_symbol(3, &[2, 1]).unwrap().scale(&int(-3))).unwrap();
        assert_eq!(two.as_single_class(), None);
        assert_eq!(two.to_string(), "Z(0,1,0,1) - 3 Z(1,2)");
        assert!(CyclicTensor::new(f(&[0, 1])).is_err());
    }

    #[test]
    fn shuffle_products() {
        assert_eq!(unshuffle_product(&f(&[0]), &f(&[1])).unwrap(), sum(&[f(&[0, 1]), f(&[1, 0])]));
        assert_eq!(
            unshuffle_product(&f(&[0]), &f(&[1, 2])).unwrap(),
            sum(&[f(&[0, 1, 2]), f(&[1, 0, 2]), f(&[1, 2, 0])])
        );
        assert!(unshuffle_product(&f(&[0]), &WordFunctional::zero(3)).unwrap().is_zero());
        assert!(unshuffle_product(&f(&[0]), &WordFunctional::zero(2)).is_err());
    }

    #[test]
    fn shuffle_product_is_dual_to_coproduct() {
        let a = f(&[0]);
        let b = f(&[1, 2]);
        let prod = unshuffle_product(&a, &b).unwrap();
        for w in Word::all_of_length(3, 3) {
            let d0 = delta0(&MultiTensor::word(3, 1, w.clone())).unwrap();
            assert_eq!(prod.coefficient(&w), a.pair2(&b, &d0).unwrap(), "{w}");
        }
    }

    #[test]
    fn transpose_formula_matches_definition() {
        let q = pr_qlba(&Bivector::minkowski(3)).unwrap();
        let samples = [f(&[0, 1]), f(&[2, 0, 1]), f(&[1]), sum(&[f(&[0, 0]), f(&[1, 2, 2])]), f(&[1, 1, 0, 2])];
        for a in &samples {
            for b in &samples {
                assert_eq!(bracket_d(a, b, &q).unwrap(), bracket_d_by_pairing(a, b, &q).unwrap(), "{a} , {b}");
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let q = pr_qlba(&Bivector::minkowski(3)).unwrap();
        let a = sum(&[f(&[0, 1, 2]), f(&[2, 2]).scale(&int(3))]);
        let b = f(&[1, 0, 0, 2]);
        let ab = bracket_d(&a, &b, &q).unwrap();
        let ba = bracket_d(&b, &a, &q).unwrap();
        assert_eq!(ab, ba.scale(&int(-1)));
    }

    #[test]
    fn degree_one_classes_bracket_to_zero() {
        let g = Bivector::minkowski(3);
        let q = pr_qlba(&g).unwrap();
        let a = z_symbol(3, &[0]).unwrap();
        let b = z_symbol(3, &[0]).unwrap();
        assert!(bracket_d(a.functional(), b.functional(), &q).unwrap().is_zero());
        assert!(pr_bracket_direct(&a, &b, &g).unwrap().functional().is_zero());
        let c = z_symbol(3, &[0, 1]).unwrap();
        assert!(pr_bracket_direct(&c, &a, &g).unwrap().functional().is_zero());
        assert!(pr_bracket_direct(&c, &a, &Bivector::zero(3)).unwrap().functional().is_zero());
    }

    #[test]
    fn single_class_required() {
        let g = Bivector::minkowski(3);
        let two = z_symbol(3, &[0, 1]).unwrap().try_add(&z_symbol(3, &[2]).unwrap()).unwrap();
        let a = z_symbol(3, &[0]).unwrap();
        assert_eq!(pr_bracket_direct(&two, &a, &g), Err(Error::NotSingleClass));
        assert!(pr_bracket(&two, &a, &g).is_ok());
    }

    #[test]
    fn leibniz_rule() {
        let q = pr_qlba(&Bivector::minkowski(3)).unwrap();
        let br = |x: &WordFunctional, y: &WordFunctional| bracket_d(x, y, &q).unwrap();
        let a = z_symbol(3, &[0, 1]).unwrap().into_functional();
        let b = z_symbol(3, &[1, 2]).unwrap().into_functional();
        let c = z_symbol(3, &[0, 2]).unwrap().into_functional();
        let lhs = br(&a, &unshuffle_product(&b, &c).unwrap());
        let rhs = unshuffle_product(&br(&a, &b), &c).unwrap().try_add(&unshuffle_product(&b, &br(&a, &c)).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_of_traces_is_a_trace() {
        let q = pr_qlba(&Bivector::minkowski(3)).unwrap();
        let a = z_symbol(3, &[0, 1, 2]).unwrap();
        let b = z_symbol(3, &[1, 2, 2, 0]).unwrap();
        let r = bracket_d(a.functional(), b.functional(), &q).unwrap();
        assert!(r.is_cyclic());
        assert!(!r.is_zero());
    }

    #[test]
    fn direct_bracket_matches_algebraic_one() {
        let g = Bivector::minkowski(3);
        let cmp = compare_pr_with_algebraic(&g, 7, 7).unwrap();
        assert!(cmp.holds(), "{cmp:?}");
        assert_eq!(cmp.constant, Some(int(1)));
        let (mu, nu) = cmp.determined_at.unwrap();
        assert_eq!((mu.len(), nu.len()), (3, 4));
    }

    #[test]
    fn low_degree_brackets_vanish() {
        let g = Bivector::minkowski(3);
        let cmp = compare_pr_with_algebraic(&g, 6, 6).unwrap();
        assert!(cmp.holds());
        assert_eq!(cmp.constant, None);
        let searched = compare_pr_with_algebraic(&g, 6, 9).unwrap();
        assert!(searched.holds());
        assert_eq!(searched.constant, Some(int(1)));
        assert_eq!(searched.pairs_checked, cmp.pairs_checked);
    }

    #[test]
    fn necklace_counts() {
        let counts: Vec<usize> = (1..=6).map(|k| necklaces(3, k).len()).collect();
        assert_eq!(counts, vec![3, 6, 11, 24, 51, 130]);
    }
}
