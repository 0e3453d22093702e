//! Balls, local modelling and automorphism groups.
use graph_rigidity::graph::families::{lattice_chunk, petersen, torus};
use graph_rigidity::graph::{automorphism_group, ball, empirical_rc, is_r_locally};
use graph_rigidity::Budget;

fn main() -> graph_rigidity::Result<()> {
    let mut budget = Budget::default();
    let (z2, pts) = lattice_chunk(6);
    let o = pts.iter().position(|&p| p == (0, 0)).unwrap();
    for n in [6, 7, 8] {
        for r in 1..=4 {
            let model = ball(&z2, o, r)?;
            let rep = is_r_locally(&torus(n, n), &[model], r, &budget)?;
            println!("(Z/{n})^2 is {r}-locally Z^2: {}", rep.verdict);
        }
    }
    let p = petersen();
    println!("|Aut(Petersen)| = {}", automorphism_group(&p, false, &mut budget)?.order);
    let t = torus(8, 8);
    println!("|Aut((Z/8)^2 torus)| = {}", automorphism_group(&t, false, &mut budget)?.order);
    println!("empirical r_c of the torus = {}", empirical_rc(&t, &mut budget)?);
    Ok(())
}
