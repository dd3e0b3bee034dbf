//! Lattice shell counts on ℤ^d and on the quadrant.

use longedge::geometry::{quadrant_shell_count, shell_count};

fn main() -> longedge::Result<()> {
    println!("{:>4} {:>12} {:>12} {:>12}", "k", "N_2(k)", "N_3(k)", "q_3(k)");
    for k in [0u64, 1, 2, 5, 10, 100, 1000] {
        println!(
            "{k:>4} {:>12} {:>12} {:>12}",
            shell_count(2, k)?,
            shell_count(3, k)?,
            quadrant_shell_count(3, k)?
        );
    }
    Ok(())
}
