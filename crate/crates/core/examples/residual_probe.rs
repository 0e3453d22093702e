//! Right multiplication by Z^2 transported to (Z/8)^2 through a propagated covering.
use graph_rigidity::graph::families::torus;
use graph_rigidity::group::{Elem, GenSet, Group};
use graph_rigidity::rigidity::residual_finiteness_probe;
use graph_rigidity::Budget;

fn main() -> graph_rigidity::Result<()> {
    let z2 = Group::FreeAbelian(2);
    let s = GenSet::symmetric_closure(&z2, &[Elem::Vec(vec![1, 0]), Elem::Vec(vec![0, 1])])?;
    let f: Vec<Elem> = [[1, 0], [1, 1], [2, 0], [3, 1]].iter().map(|v| Elem::Vec(v.to_vec())).collect();
    let rep = residual_finiteness_probe(&z2, &s, &torus(8, 8), 3, &f, 4, &mut Budget::new(100_000_000))?;
    for e in &rep.elements {
        println!("{}: {} fixed points", e.element, e.fixed_points);
    }
    Ok(())
}
