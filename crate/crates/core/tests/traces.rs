use pr_qlba::qlba::{pr_qlba, Bivector};
use pr_qlba::traces::{
    bracket_d, bracket_d_by_pairing, find_noncyclic_jacobi_witness, jacobiator, z_symbol, FunctionalRecord,
    WordFunctional,
};
use serde::Deserialize;

#[derive(Deserialize)]
struct Golden {
    dim: usize,
    metric: String,
    a: Vec<usize>,
    b: Vec<usize>,
    c: Vec<usize>,
    jacobiator: Vec<FunctionalRecord>,
}

fn golden() -> Golden {
    serde_json::from_str(include_str!("golden/noncyclic_jacobi_witness.json")).unwrap()
}

#[test]
fn noncyclic_witness_matches_golden() {
    let gold = golden();
    assert_eq!(gold.metric, "minkowski");
    let q = pr_qlba(&Bivector::minkowski(gold.dim)).unwrap();
    let found = find_noncyclic_jacobi_witness(&q, 5).unwrap().expect("a witness exists");
    let as_u8 = |v: &[usize]| v.iter().map(|&x| x as u8).collect::<Vec<_>>();
    assert_eq!(found.a, as_u8(&gold.a));
    assert_eq!(found.b, as_u8(&gold.b));
    assert_eq!(found.c, as_u8(&gold.c));
    assert_eq!(found.jacobiator, gold.jacobiator);
}

#[test]
fn noncyclic_witness_by_pairing_route() {
    // Recompute the jacobiator of the golden triple through the literal pairing definition.
    let gold = golden();
    let q = pr_qlba(&Bivector::minkowski(gold.dim)).unwrap();
    let f = |ix: &[usize]| WordFunctional::from_indices(gold.dim, ix).unwrap();
    let jac = jacobiator(|x, y| bracket_d_by_pairing(x, y, &q), &f(&gold.a), &f(&gold.b), &f(&gold.c)).unwrap();
    assert_eq!(jac.to_records(), gold.jacobiator);
}

#[test]
fn jacobi_on_sampled_degree_eleven_traces() {
    // Total degree 8 and below is degenerate (every inner bracket of low degree vanishes),
    // so sample triples where the inner brackets are genuinely nonzero.
    let g = Bivector::minkowski(3);
    let q = pr_qlba(&g).unwrap();
    let br = |x: &WordFunctional, y: &WordFunctional| bracket_d(x, y, &q);
    let triples: [(&[usize], &[usize], &[usize]); 3] = [
        (&[0, 1, 2], &[1, 2, 2, 0], &[0, 2, 1, 1]),
        (&[0, 1, 2], &[0, 0, 1, 1], &[1, 1, 2, 2]),
        (&[0, 2, 1], &[0, 1, 0, 2], &[2, 2, 1, 0]),
    ];
    let mut nonzero_inner = 0;
    for (a, b, c) in triples {
        let (a, b, c) = (z_symbol(3, a).unwrap(), z_symbol(3, b).unwrap(), z_symbol(3, c).unwrap());
        let (a, b, c) = (a.functional(), b.functional(), c.functional());
        if !br(b, c).unwrap().is_zero() {
            nonzero_inner += 1;
        }
        assert!(jacobiator(br, a, b, c).unwrap().is_zero());
    }
    assert!(nonzero_inner > 0, "sample should exercise nonzero inner brackets");
}
