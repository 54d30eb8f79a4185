//! Lyndon bracketings of the free Lie algebra L(V) ⊂ T(V) and a primitivity test.

use crate::coalgebra::delta0;
use crate::error::{Error, Result};
use crate::freealg::{MultiTensor, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonBracketing {
    pub word: Word,
    /// The iterated commutator expanded in T(V), as a one-leg rational tensor.
    pub expansion: MultiTensor,
}

/// Lyndon words over `{0..d-1}` of length `1..=max_len`, ordered by length then
/// lexicographically (Duval's generation algorithm).
pub fn lyndon_words(d: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if d == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(Word(w.clone()));
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while matches!(w.last(), Some(&l) if l as usize == d - 1) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(l) => *l += 1,
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn is_lyndon(w: &Word) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| w.rotate(k) > *w)
}

/// Standard factorization w = u·v with v the longest proper suffix that is Lyndon.
pub fn standard_factorization(w: &Word) -> Option<(Word, Word)> {
    let l = w.letters();
    (1..l.len()).find_map(|i| {
        let v = Word(l[i..].to_vec());
        is_lyndon(&v).then(|| (Word(l[..i].to_vec()), v))
    })
}

fn bracket_expansion(w: &Word, dim: usize) -> MultiTensor {
    match standard_factorization(w) {
        None => MultiTensor::word(dim, 1, w.clone()),
        Some((u, v)) => {
            let a = bracket_expansion(&u, dim);
            let b = bracket_expansion(&v, dim);
            a.commutator(&b).expect("same shape")
        }
    }
}

/// One bracketing per Lyndon word of length ≤ `max_degree`.
pub fn lyndon_basis(d: usize, max_degree: usize) -> Vec<LyndonBracketing> {
    lyndon_words(d, max_degree)
        .into_iter()
        .map(|word| {
            let expansion = bracket_expansion(&word, d);
            LyndonBracketing { word, expansion }
        })
        .collect()
}

/// Whether Δ₀(t) = t⊗1 + 1⊗t.
pub fn is_primitive(t: &MultiTensor) -> Result<bool> {
    if t.legs() != 1 {
        return Err(Error::LegCount { expected: 1, got: t.legs() });
    }
    let rhs = t.leg_embed(2, &[1])?.try_add(&t.leg_embed(2, &[2])?)?;
    Ok(delta0(t)? == rhs)
}

/// Number of Lyndon words of length `m` over `d` letters: (1/m) Σ_{k|m} μ(k) d^{m/k}.
pub fn witt_dimension(d: usize, m: usize) -> usize {
    let total: i128 = (1..=m)
        .filter(|k| m % k == 0)
        .map(|k| mobius(k) as i128 * (d as i128).pow((m / k) as u32))
        .sum();
    (total / m as i128) as usize
}

fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn word(ix: &[usize]) -> Word {
        Word::from_indices(ix)
    }

    #[test]
    fn small_bases() {
        let b1: Vec<Word> = lyndon_basis(2, 1).into_iter().map(|b| b.word).collect();
        assert_eq!(b1, vec![word(&[0]), word(&[1])]);
        let b2 = lyndon_basis(2, 2);
        assert_eq!(b2.len(), 3);
        let comm = &MultiTensor::word(2, 1, word(&[0, 1])) - &MultiTensor::word(2, 1, word(&[1, 0]));
        assert_eq!(b2[2].expansion, comm);
        let b3: Vec<Word> = lyndon_basis(2, 3).into_iter().map(|b| b.word).collect();
        assert_eq!(&b3[3..], &[word(&[0, 0, 1]), word(&[0, 1, 1])]);
    }

    #[test]
    fn factorizations() {
        assert_eq!(standard_factorization(&word(&[0, 1, 1])), Some((word(&[0, 1]), word(&[1]))));
        assert_eq!(standard_factorization(&word(&[0, 0, 1])), Some((word(&[0]), word(&[0, 1]))));
        assert_eq!(standard_factorization(&word(&[0])), None);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&MultiTensor::generator(2, 1, 0)).unwrap());
        let comm = &MultiTensor::word(2, 1, word(&[0, 1])) - &MultiTensor::word(2, 1, word(&[1, 0]));
        assert!(is_primitive(&comm).unwrap());
        assert!(!is_primitive(&MultiTensor::word(2, 1, word(&[0, 1]))).unwrap());
    }

    #[test]
    fn witt_counts_match_enumeration() {
        for d in 1..=3 {
            for m in 1..=5 {
                let count = lyndon_words(d, m).iter().filter(|w| w.len() == m).count();
                assert_eq!(count, witt_dimension(d, m), "d={d} m={m}");
            }
        }
        assert_eq!(witt_dimension(2, 3), 2);
    }

    #[test]
    fn bracketings_are_primitive_with_leading_lyndon_word() {
        for b in lyndon_basis(3, 4) {
            assert!(is_primitive(&b.expansion).unwrap(), "{}", b.word);
            let leading = b.expansion.terms().map(|(k, _)| k[0].clone()).min().unwrap();
            assert_eq!(leading, b.word);
            assert_eq!(b.expansion.coefficient(&[b.word.clone()]).coeff(0), int(1));
        }
    }
}
