//! Dominated sets and pairwise dominance in affine A1, where
//! (n+1, n) dominates (k+1, k) exactly when k < n.
//!
//!     cargo run --example dominance

use coxdom::dominance::{dominated_set, dominates};
use coxdom::{systems, Result, Root};

fn main() -> Result<()> {
    let d = systems::tilde_a1();
    for n in 0..4 {
        let x = Root::from_ints(&d, &[n + 1, n]);
        let rec = dominated_set(&d, &x)?;
        let ds: Vec<String> = rec.dominated.iter().map(|y| y.to_string()).collect();
        println!("D({x}) = {{{}}}  depth {}", ds.join(", "), rec.depth);
    }
    let x = Root::from_ints(&d, &[3, 2]);
    let y = Root::from_ints(&d, &[2, 1]);
    let z = Root::from_ints(&d, &[1, 2]);
    println!("{x} dom {y}: {}", dominates(&d, &x, &y)?);
    println!("{x} dom {z}: {}", dominates(&d, &x, &z)?);
    Ok(())
}
