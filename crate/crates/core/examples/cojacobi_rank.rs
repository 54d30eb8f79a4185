//! δ_s satisfies co-Jacobi exactly when the bivector s has matrix rank at most one.

use pr_qlba::qlba::{cojacobi_rank_test, Bivector};
use pr_qlba::scalars::int;

fn main() -> pr_qlba::error::Result<()> {
    let cases = [
        ("e0⊗e1", Bivector::elementary(3, 0, 1)),
        ("(1,2,0)⊗(0,-1,3)", Bivector::outer(&[int(1), int(2), int(0)], &[int(0), int(-1), int(3)])),
        ("diag(-1,1)", Bivector::from_integers(&[&[-1, 0], &[0, 1]])?),
        ("minkowski(3)", Bivector::minkowski(3)),
    ];
    for (name, s) in cases {
        let out = cojacobi_rank_test(&s)?;
        print!("{name:<20} rank {}  co-Jacobi {}", s.rank(), if out.holds { "holds" } else { "fails" });
        match out.witness {
            Some((i, t)) => println!("  (witness on e{i}, {} terms)", t.len()),
            None => println!(),
        }
    }
    Ok(())
}
