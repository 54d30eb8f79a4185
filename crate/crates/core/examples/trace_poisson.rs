//! The bracket on cyclic tensors: Z-symbols, the algebraic and direct brackets, and the
//! Jacobi identity on traces versus its failure off traces.

use pr_qlba::qlba::{pr_qlba, Bivector};
use pr_qlba::traces::{
    bracket_d, compare_pr_with_algebraic, find_noncyclic_jacobi_witness, jacobi_on_traces, pr_bracket,
    pr_bracket_direct, z_symbol,
};

fn main() -> pr_qlba::error::Result<()> {
    let dim = 3;
    let g = Bivector::minkowski(dim);
    let q = pr_qlba(&g)?;

    let a = z_symbol(dim, &[0, 1, 2])?;
    let b = z_symbol(dim, &[0, 0, 1, 1])?;
    println!("{{{a}, {b}}}_D has {} terms", bracket_d(a.functional(), b.functional(), &q)?.len());
    println!("direct bracket: {}", pr_bracket_direct(&a, &b, &g)?);
    println!("as Z-symbols:   {}", pr_bracket(&a, &b, &g)?);

    let cmp = compare_pr_with_algebraic(&g, 6, 7)?;
    if let (Some(c), Some((u, v))) = (&cmp.constant, &cmp.determined_at) {
        println!("constant c = {c}, read off Z({u}), Z({v}); agreement on k+l ≤ 6: {}", cmp.holds());
    }

    let report = jacobi_on_traces(&q, 7, true)?;
    println!("Jacobi on {} triples of cyclic classes: {}", report.triples_checked, report.failure.is_none());

    if let Some(w) = find_noncyclic_jacobi_witness(&q, 5)? {
        let jac: Vec<String> = w.jacobiator.iter().map(|r| format!("{} f{:?}", r.coeff, r.word)).collect();
        println!("off traces: f{:?}, f{:?}, f{:?} have jacobiator {}", w.a, w.b, w.c, jac.join(" + "));
    }
    Ok(())
}
