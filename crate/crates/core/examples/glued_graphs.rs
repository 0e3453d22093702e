//! X0 against X_q over H = Z/16: the admissible-set invariant tells them apart.
use graph_rigidity::cocycle::{carry_cocycle, two_covering_from_cocycle};
use graph_rigidity::gluing::{admissible_edge_analysis, bilipschitz_compare, build_x0, build_xq, check_cayley_triangle_condition, detect_vertical_relation, AdmissibleOutcome};
use graph_rigidity::group::{Elem, GenSet, Group};
use graph_rigidity::Budget;

fn zn(n: u64, xs: &[i64]) -> GenSet {
    GenSet::symmetric_closure(&Group::Cyclic(n), &xs.iter().map(|&x| Elem::Int(x)).collect::<Vec<_>>()).unwrap()
}

fn main() -> graph_rigidity::Result<()> {
    let mut budget = Budget::default();
    let h = Group::Cyclic(16);
    let t = zn(16, &[2, 3]);
    let even = |e: &Elem| matches!(e, Elem::Int(x) if x % 2 == 0);
    println!("{:?}", check_cayley_triangle_condition(&h, &t, &zn(16, &[2]))?);
    let cover = two_covering_from_cocycle(&carry_cocycle(8)?, &zn(8, &[1]), &mut budget)?;
    let q: Vec<Elem> = cover
        .total
        .elements
        .iter()
        .map(|e| match e {
            Elem::Ext(_, g) => match **g {
                Elem::Int(k) => Elem::Int(2 * k),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        })
        .collect();
    let x0 = build_x0(&h, &t, &even, &mut budget)?;
    let xq = build_xq(&h, &t, &even, &cover.total.graph, &q, &mut budget)?;
    for (name, g) in [("X0", &x0), ("X_q", &xq)] {
        let rel = detect_vertical_relation(&g.graph)?;
        let verdict = match admissible_edge_analysis(g, &mut budget)? {
            AdmissibleOutcome::Disconnecting { .. } => "disconnecting admissible set",
            AdmissibleOutcome::None { .. } => "no disconnecting admissible set",
        };
        println!("{name}: {} vertices, {} fibers, {verdict}", g.graph.n(), rel.fibers.len());
    }
    let r = bilipschitz_compare(&x0, &xq)?;
    println!("Lipschitz constants {:?} / {:?}", r.forward, r.backward);
    Ok(())
}
