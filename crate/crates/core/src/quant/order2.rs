//! The general-rank quantization to order h².
//!
//! Δ = Δ₀ + hΔ₁ + h²Δ₂ with Δ₁(x) = [g, x⊗1] and Δ₂(x) a combination of twelve
//! arrangements of g², x; Φ = 1 − ½h²[g¹²,g¹³]. Coassociativity at order h² is affine
//! in the twelve coefficients and is solved exactly.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coalgebra::GeneratorMap;
use crate::error::{Error, Result};
use crate::freealg::{Key, MultiTensor};
use crate::linalg::{solve_affine, AffineSpace, Matrix};
use crate::qlba::{embeddings3, Bivector};
use crate::scalars::{fmt_rational, int, rat, Rational};

use super::{coassoc_defect, QhData};

pub const ORDER: usize = 3;
pub const UNKNOWNS: usize = 12;

pub const TERM_NAMES: [&str; UNKNOWNS] = [
    "g^2 x1",
    "g x1 g",
    "x1 g^2",
    "(id*tau)(g^2 x1)",
    "(id*tau)(g x1 g)",
    "(id*tau)(x1 g^2)",
    "g^2 x2",
    "g x2 g",
    "x2 g^2",
    "(tau*id)(g^2 x2)",
    "(tau*id)(g x2 g)",
    "(tau*id)(x2 g^2)",
];

/// The twelve ansatz tensors for the generator e_i (h-free). τ exchanges the two
/// letters in the leg that carries g² (the two factors of g meet there).
pub fn ansatz_terms(g: &Bivector, i: usize) -> Result<Vec<MultiTensor>> {
    let d = g.dim();
    let gt = g.to_tensor(1);
    let g2 = gt.try_mul(&gt)?;
    let x = MultiTensor::generator(d, 1, i);
    let x1 = x.leg_embed(2, &[1])?;
    let x2 = x.leg_embed(2, &[2])?;
    let block = |xl: &MultiTensor| -> Result<[MultiTensor; 3]> {
        Ok([g2.try_mul(xl)?, gt.try_mul(xl)?.try_mul(&gt)?, xl.try_mul(&g2)?])
    };
    let b1 = block(&x1)?;
    let b2 = block(&x2)?;
    let mut out = Vec::with_capacity(UNKNOWNS);
    out.extend(b1.iter().cloned());
    for t in &b1 {
        out.push(t.reverse_leg_words(2)?);
    }
    out.extend(b2.iter().cloned());
    for t in &b2 {
        out.push(t.reverse_leg_words(1)?);
    }
    Ok(out)
}

/// Coefficients (α, −½, ½−α, ½−α, −½, α, β−½, ½, −β, ½−β, −½, β) of the closed-form Δ₂.
pub fn closed_form_coefficients(alpha: &Rational, beta: &Rational) -> Vec<Rational> {
    let half = rat(1, 2);
    vec![
        alpha.clone(),
        -half.clone(),
        &half - alpha,
        &half - alpha,
        -half.clone(),
        alpha.clone(),
        beta - &half,
        half.clone(),
        -beta.clone(),
        &half - beta,
        -half,
        beta.clone(),
    ]
}

/// The structure at N = 3 for the given twelve coefficients.
pub fn order2_structure(g: &Bivector, coeffs: &[Rational]) -> Result<QhData> {
    if coeffs.len() != UNKNOWNS {
        return Err(Error::ShapeMismatch(format!("{} coefficients, expected {UNKNOWNS}", coeffs.len())));
    }
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let d = g.dim();
    let gt = g.to_tensor(ORDER);
    let images = (0..d)
        .map(|i| {
            let x = MultiTensor::generator(d, ORDER, i);
            let x1 = x.leg_embed(2, &[1])?;
            let x2 = x.leg_embed(2, &[2])?;
            let mut img = x1.try_add(&x2)?.try_add(&gt.commutator(&x1)?.shift_h(1))?;
            for (t, c) in ansatz_terms(g, i)?.iter().zip(coeffs) {
                if !c.is_zero() {
                    img = img.try_add(&t.with_order(ORDER).scale(c).shift_h(2))?;
                }
            }
            Ok(img)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QhData::new(GeneratorMap::new(images)?, order2_phi(g)?)?)
}

/// Φ = 1⊗1⊗1 − ½h²[g¹²,g¹³].
pub fn order2_phi(g: &Bivector) -> Result<MultiTensor> {
    let (g12, g13, _) = embeddings3(&g.to_tensor(ORDER));
    MultiTensor::unit(g.dim(), 3, ORDER).try_add(&g12.commutator(&g13)?.scale(&rat(-1, 2)).shift_h(2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order2System {
    pub matrix: Matrix,
    pub rhs: Vec<Rational>,
    /// Rank by fraction-free elimination.
    pub rank: usize,
    /// Rank read off the reduced row echelon form.
    pub rank_rref: usize,
    pub solutions: AffineSpace,
    /// The closed-form two-parameter family as an affine space.
    pub closed_form: AffineSpace,
}

impl Order2System {
    pub fn closed_form_matches(&self) -> bool {
        self.solutions.same_as(&self.closed_form)
    }

    pub fn to_record(&self) -> Order2Record {
        let row = |r: &[Rational]| r.iter().map(fmt_rational).collect::<Vec<_>>();
        Order2Record {
            unknowns: TERM_NAMES.iter().map(|s| s.to_string()).collect(),
            matrix: self.matrix.to_rows().iter().map(|r| row(r)).collect(),
            rhs: row(&self.rhs),
            rank: self.rank,
            particular: row(&self.solutions.particular),
            basis: self.solutions.basis.iter().map(|b| row(b)).collect(),
        }
    }
}

/// Auditable JSON form of the linear system and its solution set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order2Record {
    pub unknowns: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub rhs: Vec<String>,
    pub rank: usize,
    pub particular: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

/// h² coefficients of the coassociativity defects on all generators, keyed by
/// (generator, term).
fn defect_vector(g: &Bivector, coeffs: &[Rational]) -> Result<BTreeMap<(usize, Key), Rational>> {
    let qh = order2_structure(g, coeffs)?;
    let mut out = BTreeMap::new();
    for i in 0..g.dim() {
        let x = MultiTensor::generator(g.dim(), ORDER, i);
        let defect = coassoc_defect(&qh, &x)?;
        if !defect.h_coefficient(0).is_zero() || !defect.h_coefficient(1).is_zero() {
            return Err(Error::Invariant(format!("coassociativity fails below order h² on e{i}")));
        }
        for (k, v) in defect.terms() {
            let c = v.coeff(2);
            if !c.is_zero() {
                out.insert((i, k.clone()), c);
            }
        }
    }
    Ok(out)
}

/// Builds and solves the order-h² coassociativity system for a symmetric g, stacking the
/// equations of all generators.
pub fn order2_solve(g: &Bivector) -> Result<Order2System> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if g.dim() < 2 {
        return Err(Error::Invariant("the order-h² system needs dim ≥ 2".into()));
    }
    let zero = vec![Rational::zero(); UNKNOWNS];
    let base = defect_vector(g, &zero)?;
    let columns = (0..UNKNOWNS)
        .map(|k| {
            let mut e = zero.clone();
            e[k] = int(1);
            defect_vector(g, &e)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<&(usize, Key)> = base.keys().chain(columns.iter().flat_map(|c| c.keys())).collect();
    rows.sort();
    rows.dedup();
    let get = |m: &BTreeMap<(usize, Key), Rational>, r: &(usize, Key)| m.get(r).cloned().unwrap_or_else(Rational::zero);
    let matrix = Matrix::from_rows(
        rows.iter()
            .map(|r| columns.iter().map(|col| get(col, r) - get(&base, r)).collect())
            .collect(),
    );
    let rhs: Vec<Rational> = rows.iter().map(|r| -get(&base, r)).collect();
    let rank = matrix.rank_fraction_free();
    let rank_rref = matrix.rank();
    let solutions = solve_affine(&matrix, &rhs)?;
    let p0 = closed_form_coefficients(&int(0), &int(0));
    let pa = closed_form_coefficients(&int(1), &int(0));
    let pb = closed_form_coefficients(&int(0), &int(1));
    let diff = |a: &[Rational]| a.iter().zip(&p0).map(|(x, y)| x - y).collect::<Vec<_>>();
    let closed_form = AffineSpace { basis: vec![diff(&pa), diff(&pb)], particular: p0 };
    Ok(Order2System { matrix, rhs, rank, rank_rref, solutions, closed_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlba::pr_qlba;
    use crate::quant::{classical_limit, pentagon_defect};

    #[test]
    fn closed_form_points_are_coassociative() {
        let g = Bivector::minkowski(3);
        for (a, b) in [(int(0), int(0)), (rat(1, 2), rat(1, 2)), (int(1), int(-2))] {
            let qh = order2_structure(&g, &closed_form_coefficients(&a, &b)).unwrap();
            for i in 0..3 {
                let x = MultiTensor::generator(3, ORDER, i);
                assert!(coassoc_defect(&qh, &x).unwrap().is_zero(), "α={a} β={b} e{i}");
            }
            assert!(pentagon_defect(&qh).unwrap().is_zero());
        }
    }

    #[test]
    fn off_solution_point_fails() {
        let g = Bivector::minkowski(3);
        let mut c = closed_form_coefficients(&int(0), &int(0));
        c[1] = int(0);
        let qh = order2_structure(&g, &c).unwrap();
        let defect = coassoc_defect(&qh, &MultiTensor::generator(3, ORDER, 0)).unwrap();
        assert!(!defect.h_coefficient(2).is_zero());
    }

    #[test]
    fn minkowski_system() {
        let sys = order2_solve(&Bivector::minkowski(3)).unwrap();
        assert_eq!(sys.matrix.cols(), UNKNOWNS);
        assert_eq!(sys.rank, 10);
        assert_eq!(sys.rank_rref, 10);
        assert_eq!(sys.solutions.dimension(), 2);
        assert!(sys.closed_form_matches());
    }

    #[test]
    fn classical_limit_of_family() {
        let g = Bivector::minkowski(3);
        let expected = pr_qlba(&g).unwrap();
        for (a, b) in [(int(0), int(0)), (int(3), rat(-1, 5))] {
            let qh = order2_structure(&g, &closed_form_coefficients(&a, &b)).unwrap();
            assert_eq!(classical_limit(&qh).unwrap(), expected);
        }
    }

    #[test]
    fn rejects_skew_input() {
        let f = Bivector::elementary(2, 0, 1).skew_part();
        assert_eq!(order2_solve(&f).unwrap_err(), Error::NotSymmetric);
    }
}
