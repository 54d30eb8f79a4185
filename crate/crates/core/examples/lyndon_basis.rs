//! Lyndon words, their standard bracketings and the Witt dimension formula.

use pr_qlba::lie::{is_primitive, lyndon_basis, witt_dimension};

fn main() -> pr_qlba::error::Result<()> {
    let dim = 2;
    let basis = lyndon_basis(dim, 5);
    for m in 1..=5 {
        let count = basis.iter().filter(|b| b.word.len() == m).count();
        println!("degree {m}: {count} Lyndon words (Witt: {})", witt_dimension(dim, m));
    }
    for b in basis.iter().filter(|b| b.word.len() <= 3) {
        assert!(is_primitive(&b.expansion)?);
        println!("{:>8}  ↦  {}", b.word.to_string(), b.expansion);
    }
    Ok(())
}
