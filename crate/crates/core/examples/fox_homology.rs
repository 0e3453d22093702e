//! Fox matrices and the Betti-number bound for kernels of u: G -> Z.
use graph_rigidity::fox::{betti_bound, fox_matrix, product_presentation_counts, surface_product_counts, Presentation};

fn main() -> graph_rigidity::Result<()> {
    let f2f2 = Presentation::new(&["a", "b", "c", "d"], &["acAC", "adAD", "bcBC", "bdBD"], &[1, 1, 1, 1])?;
    let m = fox_matrix(&f2f2)?;
    println!("D2 = {}", m.d2.to_json());
    println!("F2 x F2: {:?}", betti_bound(&f2f2)?);
    println!("Z^2:     {:?}", betti_bound(&Presentation::new(&["a", "b"], &["abAB"], &[1, 1])?)?);
    println!("genus-2 presentation product: {:?}", product_presentation_counts(4, 1, 4, 1)?);
    let (p, q, r) = surface_product_counts(2, 2);
    println!("surface product cells (p, q, r) = ({p}, {q}, {r}), q - (p + r) = {}", q - (p + r));
    Ok(())
}
