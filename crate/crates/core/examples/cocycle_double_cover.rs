//! The carry cocycle on Z/4: extension Z/8, the double cover C8 -> C4, and short vanishing representatives.
use graph_rigidity::cocycle::{
    carry_cocycle, central_extension, disconnected_preimage_radius, find_group_isomorphism, is_coboundary, short_vanishing_cocycle_search,
    two_covering_from_cocycle, validate_cocycle,
};
use graph_rigidity::group::{Elem, GenSet, Group};
use graph_rigidity::Budget;

fn main() -> graph_rigidity::Result<()> {
    let mut budget = Budget::default();
    let phi = carry_cocycle(4)?;
    println!("cocycle identity: {:?}", validate_cocycle(&phi, &mut budget)?);
    println!("coboundary: {}", is_coboundary(&phi, &mut budget)?.is_coboundary());
    let ext = central_extension(&phi)?;
    println!("extension is Z/8: {}", find_group_isomorphism(&ext, &Group::Cyclic(8), &mut budget)?.is_some());
    let s = GenSet::symmetric_closure(&Group::Cyclic(4), &[Elem::Int(1)])?;
    let c = two_covering_from_cocycle(&phi, &s, &mut budget)?;
    println!("double cover: {} -> {} vertices, connected {}", c.total.graph.n(), c.base.graph.n(), c.connected);
    for n in [1, 2] {
        match short_vanishing_cocycle_search(&Group::Cyclic(4), &s, n, &mut budget)? {
            Some(t) => {
                let c = two_covering_from_cocycle(&t, &s, &mut budget)?;
                println!("n = {n}: found; preimages of balls disconnected up to radius {:?}", disconnected_preimage_radius(&c));
            }
            None => println!("n = {n}: every vanishing cocycle is a coboundary"),
        }
    }
    Ok(())
}
