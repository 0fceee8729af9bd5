//! Fractional ranks and Spearman's rho, including tie handling.

use cmg_eval::stats::{average_human, rank, spearman};

fn main() -> cmg_eval::Result<()> {
    let human: Vec<f64> = [[3, 4, 3], [0, 1, 0], [4, 4, 4], [2, 3, 2], [2, 2, 2]]
        .iter()
        .map(|s| average_human(s))
        .collect::<Result<_, _>>()?;
    let metric = [0.71, 0.05, 1.0, 0.44, 0.44];

    println!("human means  {human:?}");
    println!("metric ranks {:?}", rank(&metric));
    let r = spearman(&metric, &human)?;
    println!("rho {:.4} over {} pairs (ties: {})", r.rho, r.n, r.ties_present);

    println!("[1,2,3] vs [1,3,2]: {}", spearman(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0])?.rho);
    match spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]) {
        Ok(r) => println!("constant: {}", r.rho),
        Err(e) => println!("constant: {e}"),
    }
    Ok(())
}
