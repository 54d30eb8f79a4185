//! Solves for the order-h² correction of the coproduct in the general case and compares the
//! solution set with the closed-form two-parameter family.

use pr_qlba::qlba::Bivector;
use pr_qlba::quant::order2_solve;

fn main() -> pr_qlba::error::Result<()> {
    let sys = order2_solve(&Bivector::minkowski(3))?;
    println!("{} equations, {} unknowns", sys.matrix.rows(), sys.matrix.cols());
    println!("rank {} (fraction-free) / {} (rref)", sys.rank, sys.rank_rref);
    println!("solution space dimension {}", sys.solutions.dimension());
    println!("matches the closed-form family: {}", sys.closed_form_matches());
    let record = sys.to_record();
    println!("particular solution: {:?}", record.particular);
    Ok(())
}
