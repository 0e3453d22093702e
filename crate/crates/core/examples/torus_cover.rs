//! Recover the covering (Z/16)^2 -> (Z/8)^2 from a radius-4 seed and read off its deck group.
use graph_rigidity::graph::ball;
use graph_rigidity::graph::families::torus;
use graph_rigidity::rigidity::{deck_quotient, propagate_covering, PartialMap, PropagationOutcome, PropagationParams};
use graph_rigidity::Budget;

fn main() -> graph_rigidity::Result<()> {
    let (x, y) = (torus(16, 16), torus(8, 8));
    let seed: PartialMap = ball(&x, 0, 4)?.ambient.into_iter().map(|v| (v, (v / 16 % 8) * 8 + v % 16 % 8)).collect();
    let mut budget = Budget::new(100_000_000);
    let p = propagate_covering(&x, &y, 0, &seed, &PropagationParams { k: 4, ..Default::default() }, &mut budget)?;
    println!("r_c = {}, r1 = {}, r2 = {}", p.r_c, p.r1, p.r2);
    match p.outcome {
        PropagationOutcome::Covering(c) => {
            println!("covering with fiber {:?}", c.fiber_size);
            let d = deck_quotient(&c, &x, &y, &mut budget)?;
            println!("deck group: order {}, free {}, abelian {}, exponent {:?}", d.order, d.free, d.abelian, d.exponent);
        }
        other => println!("no covering: {other:?}"),
    }
    Ok(())
}
