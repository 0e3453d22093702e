mod common;

use common::*;
use graph_rigidity::cocycle::{coboundary_of, is_coboundary, normalize, is_normalized, validate_cocycle, CoboundaryAnswer};
use graph_rigidity::discreteness::n3_profile;
use graph_rigidity::fox::{fox_derivative, Gf16, Laurent, LaurentMatrix, Poly2, RatFunc};
use graph_rigidity::gf2::Gf2Matrix;
use graph_rigidity::gluing::{build_x0, GluedGraph};
use graph_rigidity::graph::{automorphism_group, SimpleGraph};
use graph_rigidity::group::{cayley_graph, Elem, GenSet, Group};
use graph_rigidity::Budget;
use proptest::prelude::*;

fn small_group() -> impl Strategy<Value = Group> {
    prop_oneof![
        (1u64..=9).prop_map(Group::Cyclic),
        (2u64..=4, 2u64..=3).prop_map(|(a, b)| Group::product(Group::Cyclic(a), Group::Cyclic(b))),
        (3u64..=5).prop_map(|n| Group::semidirect(Group::Cyclic(n), 2, vec![vec![-1]]).unwrap()),
    ]
}

fn word() -> impl Strategy<Value = Vec<(usize, i8)>> {
    prop::collection::vec((0usize..3, prop_oneof![Just(1i8), Just(-1i8)]), 0..12)
}

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec(-4i64..=4, 0..5).prop_map(|e| Laurent::from_exponents(&e))
}

fn poly() -> impl Strategy<Value = Poly2> {
    prop::collection::vec(0usize..12, 0..6).prop_map(|e| e.iter().fold(Poly2::zero(), |p, &k| p.add(&Poly2::monomial(k))))
}

fn rat() -> impl Strategy<Value = RatFunc> {
    (poly(), poly().prop_filter("nonzero denominator", |d| !d.is_zero())).prop_map(|(n, d)| RatFunc::new(n, d))
}

fn concat(a: &[(usize, i8)], b: &[(usize, i8)]) -> Vec<(usize, i8)> {
    a.iter().chain(b).copied().collect()
}

fn wt(w: &[(usize, i8)], u: &[i64]) -> i64 {
    w.iter().map(|&(g, e)| e as i64 * u[g]).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_round_trip(g in small_group(), seed in any::<u64>()) {
        let mut b = Budget::default();
        let (elems, mt) = mult_table(&g);
        let psi: Vec<u8> = (0..elems.len()).map(|i| (seed >> (i % 64) & 1) as u8).collect();
        let t = coboundary_of(&g, &psi, &mut b).unwrap();
        prop_assert_eq!(&t.bits, &delta(&mt, &psi));
        prop_assert!(validate_cocycle(&t, &mut b).unwrap().is_ok());
        match is_coboundary(&t, &mut b).unwrap() {
            CoboundaryAnswer::Coboundary { psi: back } => prop_assert_eq!(delta(&mt, &back), t.bits),
            other => prop_assert!(false, "dψ reported as {:?}", other),
        }
    }

    #[test]
    fn normalize_keeps_the_class(g in small_group(), seed in any::<u64>()) {
        let mut b = Budget::default();
        let (_, mt) = mult_table(&g);
        let (cobs, homs) = coboundaries(&mt);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        for bits in bilinear_cocycles(&mt, &homs, &mut rng) {
            let t = table(&g, bits.clone());
            let n = normalize(&t).unwrap();
            prop_assert!(is_normalized(&n));
            let diff: Vec<u8> = bits.iter().zip(&n.bits).map(|(a, b)| a ^ b).collect();
            prop_assert!(cobs.contains(&diff));
            prop_assert_eq!(is_coboundary(&n, &mut b).unwrap().is_coboundary(), cobs.contains(&bits));
        }
    }

    #[test]
    fn n3_matches_edge_triangles(n in 5u64..30, picks in prop::collection::vec(1i64..30, 1..5)) {
        let g = Group::Cyclic(n);
        let elems: Vec<Elem> = picks.iter().map(|&k| Elem::Int(k % n as i64)).filter(|e| *e != Elem::Int(0)).collect();
        prop_assume!(!elems.is_empty());
        let s = GenSet::symmetric_closure(&g, &elems).unwrap();
        let prof = n3_profile(&g, &s).unwrap();
        let cg = cayley_graph(&g, &s, false, &mut Budget::default()).unwrap();
        let e = cg.index_of(&Elem::Int(0)).unwrap();
        for x in &s.elements {
            prop_assert_eq!(cg.graph.edge_triangle_count(e, cg.index_of(x).unwrap()).unwrap(), prof.get(x));
        }
    }

    #[test]
    fn fox_derivative_matches_product_rule(w in word(), u in prop::collection::vec(-2i64..=2, 3)) {
        for j in 0..3 {
            prop_assert_eq!(fox_derivative(&w, j, &u), fox_by_product_rule(&w, j, &u));
        }
    }

    #[test]
    fn fox_product_rule(a in word(), b in word(), u in prop::collection::vec(-2i64..=2, 3)) {
        let ab = concat(&a, &b);
        for j in 0..3 {
            let rhs = fox_derivative(&a, j, &u).add(&Laurent::monomial(wt(&a, &u)).mul(&fox_derivative(&b, j, &u)));
            prop_assert_eq!(fox_derivative(&ab, j, &u), rhs);
        }
    }

    #[test]
    fn fundamental_formula(w in word(), u in prop::collection::vec(-2i64..=2, 3)) {
        // Σ_j ∂w/∂x_j (t^{u_j} − 1) = t^{u(w)} − 1
        let mut lhs = Laurent::zero();
        for j in 0..3 {
            lhs = lhs.add(&fox_derivative(&w, j, &u).mul(&Laurent::monomial(u[j]).add(&Laurent::one())));
        }
        prop_assert_eq!(lhs, Laurent::monomial(wt(&w, &u)).add(&Laurent::one()));
    }

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&a), Laurent::zero());
    }

    #[test]
    fn laurent_eval_is_a_homomorphism(a in laurent(), b in laurent(), t in 2u16..=u16::MAX) {
        let t = Gf16(t);
        prop_assert_eq!(a.mul(&b).eval(t), a.eval(t).mul(b.eval(t)));
        prop_assert_eq!(a.add(&b).eval(t), a.eval(t).add(b.eval(t)));
    }

    #[test]
    fn poly_division(a in poly(), d in poly().prop_filter("nonzero", |d| !d.is_zero())) {
        let (q, r) = a.divrem(&d).unwrap();
        prop_assert_eq!(q.mul(&d).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn ratfunc_field_laws(x in rat(), y in rat()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        if !x.is_zero() {
            let one = RatFunc::new(Poly2::one(), Poly2::one());
            prop_assert_eq!(x.mul(&x.inv().unwrap()), one);
        }
    }

    #[test]
    fn gf16_inverse(a in 1u16..=u16::MAX) {
        prop_assert_eq!(Gf16(a).mul(Gf16(a).inv()), Gf16(1));
    }

    #[test]
    fn gf2_solve_and_nullspace(rows in prop::collection::vec(prop::collection::vec(0u8..2, 7), 1..7), x in prop::collection::vec(0u8..2, 7)) {
        let m = Gf2Matrix::from_rows(&rows, 7);
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
        let null = m.nullspace();
        prop_assert_eq!(null.len() + m.rank(), 7);
        for v in null {
            prop_assert!(m.mul_vec(&v).iter().all(|&z| z == 0));
        }
    }

    #[test]
    fn aut_order_matches_enumeration(n in 1usize..=7, seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let g = random_graph(n, 0.5, &mut rng);
        prop_assert_eq!(automorphism_group(&g, false, &mut Budget::default()).unwrap().order, brute_aut_order(&g));
    }

    #[test]
    fn graph_json_round_trip(n in 1usize..=9, seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let g = random_graph(n, 0.4, &mut rng);
        prop_assert_eq!(SimpleGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn laurent_matrix_json_round_trip(entries in prop::collection::vec(laurent(), 6)) {
        let mut m = LaurentMatrix::zeros(2, 3);
        for (k, e) in entries.into_iter().enumerate() {
            m.set(k / 3, k % 3, e);
        }
        prop_assert_eq!(LaurentMatrix::from_json(&m.to_json()).unwrap(), m);
    }
}

#[test]
fn glued_graph_json_round_trip() {
    let h = Group::Cyclic(8);
    let t = zn(8, &[2, 3]);
    let x0 = build_x0(&h, &t, &|e| matches!(e, Elem::Int(x) if x % 2 == 0), &mut Budget::default()).unwrap();
    let back = GluedGraph::from_json(&x0.to_json()).unwrap();
    assert_eq!(back.graph, x0.graph);
    assert_eq!(back.kinds, x0.kinds);
    assert_eq!(back.projection, x0.projection);
    assert_eq!(back.to_json(), x0.to_json());
}
