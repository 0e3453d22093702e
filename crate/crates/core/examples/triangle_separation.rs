//! Triangle counts, the augmentation towards a discrete generating set, and cyclic padding.
use graph_rigidity::discreteness::{build_discrete_genset, build_padded_genset, n3_profile};
use graph_rigidity::group::{Elem, GenSet, Group};
use graph_rigidity::Budget;

fn main() -> graph_rigidity::Result<()> {
    let z = Group::FreeAbelian(1);
    let s0 = GenSet::symmetric_closure(&z, &[Elem::Vec(vec![1])])?;
    let d = build_discrete_genset(&z, &s0, &Elem::Vec(vec![1]), 200, 64)?;
    for st in &d.steps {
        println!("augment at n = {:>3}, increment {:?}", st.n, st.increment);
    }
    println!("N3(1) = {}, |S| = {}", d.profile.get(&Elem::Vec(vec![1])), d.genset.len());

    let z5 = Group::Cyclic(5);
    let s = GenSet::symmetric_closure(&z5, &[Elem::Int(1), Elem::Int(2)])?;
    println!("N3 on (Z/5, {{±1, ±2}}): {}", n3_profile(&z5, &s)?.to_json());
    let s0 = GenSet::symmetric_closure(&z5, &[Elem::Int(1)])?;
    let p = build_padded_genset(&z5, &s, &s0, &mut Budget::new(200_000_000))?;
    println!("padding primes {:?}, {} vertices, fibers are maximum cliques: {}", p.primes, p.graph.graph.n(), p.fibers_are_max_cliques);
    Ok(())
}
