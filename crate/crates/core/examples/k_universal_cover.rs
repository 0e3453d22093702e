//! k-universal covers, k-simple connectivity and filling radii.
use graph_rigidity::complexes::{fill_radius, is_k_simply_connected, k_universal_cover_ball};
use graph_rigidity::graph::families::{cycle, petersen, torus};

fn main() -> graph_rigidity::Result<()> {
    for k in [3, 6] {
        let cb = k_universal_cover_ball(&cycle(6), 0, k, 4, 1_000_000)?;
        println!("C6, k = {k}: radius-4 cover ball has {} vertices ({:?})", cb.ball.len(), cb.status);
    }
    let cb = k_universal_cover_ball(&torus(8, 8), 0, 4, 3, 1_000_000)?;
    println!("(Z/8)^2, k = 4: radius-3 cover ball has {} vertices (Z^2 ball: 25)", cb.ball.len());
    for (name, g, k) in [("C6", cycle(6), 6), ("(Z/8)^2", torus(8, 8), 4), ("(Z/8)^2", torus(8, 8), 8), ("Petersen", petersen(), 5)] {
        let rep = is_k_simply_connected(&g, k, 5_000_000)?;
        println!("{name} {k}-simply connected: {:?}", rep.verdict);
    }
    println!("Fill^4 of the torus at r1 = 2: {:?}", fill_radius(&torus(8, 8), 4, 2, 5_000_000)?.r2);
    Ok(())
}
