use num::BigInt;
use proptest::prelude::*;

use super::*;
use crate::sample::Sampler;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// One base dimension, an even field `y` and a ghost `c` with two components.
fn small_system() -> (FieldSystem, FieldId, FieldId) {
    let mut sys = FieldSystem::new(1).unwrap();
    let y = sys.add_dynamic("y", &[1], Parity::Even).unwrap();
    let c = sys.add_ghost("c", &[2], None).unwrap();
    (sys, y, c)
}

fn mixed_system() -> FieldSystem {
    let mut sys = FieldSystem::new(2).unwrap();
    sys.add_dynamic("y", &[2], Parity::Even).unwrap();
    sys.add_dynamic("psi", &[2], Parity::Odd).unwrap();
    sys.add_ghost("c", &[2], None).unwrap();
    sys
}

#[test]
fn ghost_products_anticommute() {
    let (sys, _, c) = small_system();
    let c1 = sys.var_expr(c, &[0], &[]).unwrap();
    let c2 = sys.var_expr(c, &[1], &[]).unwrap();
    let c1c2 = &c1 * &c2;
    let c2c1 = &c2 * &c1;
    assert_eq!(c2c1, -&c1c2);
    assert_eq!(c1c2.display(&sys).to_string(), "c[1] * c[2]");
    assert_eq!(c2c1.display(&sys).to_string(), "-c[1] * c[2]");
    assert!((&c1 * &c1).is_zero());
}

#[test]
fn even_products_commute() {
    let (sys, y, _) = small_system();
    let yv = sys.var_expr(y, &[0], &[]).unwrap();
    let p = &(&yv + &Expr::one()) * &(&yv - &Expr::one());
    assert_eq!(p, &(&yv * &yv) - &Expr::one());
}

#[test]
fn addition_cancels_and_merges() {
    let (sys, y, c) = small_system();
    let yv = sys.var_expr(y, &[0], &[]).unwrap();
    assert!((&yv + &(-&yv)).is_zero());
    let c1 = sys.var_expr(c, &[0], &[]).unwrap();
    let c2 = sys.var_expr(c, &[1], &[]).unwrap();
    assert!((&(&c1 * &c2) + &(&c2 * &c1)).is_zero());
    let y1 = sys.var_expr(y, &[0], &[0]).unwrap();
    let sum = &y1.scale(&q(2, 1)) + &y1.scale(&q(3, 1));
    assert_eq!(sum, y1.scale(&q(5, 1)));
}

#[test]
fn grading_examples() {
    let (sys, y, c) = small_system();
    let yv = sys.var_expr(y, &[0], &[]).unwrap();
    let c1 = sys.var_expr(c, &[0], &[]).unwrap();
    let c2 = sys.var_expr(c, &[1], &[]).unwrap();
    let g = sys.grading(&(&c1 * &c2));
    assert_eq!(g.parity, Some(Parity::Even));
    assert_eq!(g.ghost_degree, Some(2));
    let g = sys.grading(&(&yv * &c1));
    assert_eq!(g.parity, Some(Parity::Odd));
    assert_eq!(g.ghost_degree, Some(1));
    let g = sys.grading(&(&yv + &c1));
    assert!(g.is_mixed());
    assert_eq!(g.parity, None);
    assert_eq!(g.ghost_degree, None);
}

#[test]
fn role_parity_and_pairing_rules() {
    let mut sys = FieldSystem::new(1).unwrap();
    let xi = sys.add_parameter("xi", &[2]).unwrap();
    let err = sys.declare(FieldDecl {
        name: "g".into(),
        shape: vec![2],
        parity: Parity::Even,
        role: FieldRole::Ghost,
        ghost_for: None,
    });
    assert!(matches!(err, Err(ExprError::RoleParity { .. })));
    assert!(matches!(sys.add_parameter("xi", &[1]), Err(ExprError::DuplicateField(_))));
    assert!(matches!(sys.add_ghost("bad", &[3], Some(xi)), Err(ExprError::InvalidGhostPairing(_))));
    let c = sys.add_ghost("c", &[2], None).unwrap();
    assert_eq!(sys.ghost_for_parameter(xi), Some(c));
    assert!(FieldSystem::new(0).is_err());
}

#[test]
fn fiber_tuples_flatten_row_major() {
    let mut sys = FieldSystem::new(3).unwrap();
    let a = sys.add_dynamic("a", &[2, 3], Parity::Even).unwrap();
    assert_eq!(sys.flat_fiber(a, &[1, 2]).unwrap(), 5);
    assert_eq!(sys.fiber_tuple(a, 5), vec![1, 2]);
    assert!(sys.flat_fiber(a, &[2, 0]).is_err());
    assert!(sys.flat_fiber(a, &[0]).is_err());
}

#[test]
fn checked_ops_reject_foreign_variables() {
    let (sys, _, _) = small_system();
    let mut other = FieldSystem::new(2).unwrap();
    let z = other.add_dynamic("z", &[4], Parity::Even).unwrap();
    let foreign = other.var_expr(z, &[3], &[1]).unwrap();
    assert!(sys.mul(&foreign, &Expr::one()).is_err());
    assert!(sys.add(&Expr::one(), &foreign).is_err());
    assert!(sys.mul(&Expr::int(2), &Expr::int(3)).is_ok());
}

/// Sign of sorting a sequence of distinct keys, by counting adjacent swaps.
fn bubble_sign<T: Ord + Clone>(seq: &[T]) -> Option<(Vec<T>, bool)> {
    let mut v = seq.to_vec();
    let mut negate = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            match v[j].cmp(&v[j + 1]) {
                std::cmp::Ordering::Greater => {
                    v.swap(j, j + 1);
                    negate = !negate;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, negate))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn odd_products_match_bubble_sort_oracle(picks in prop::collection::vec((0usize..3, 0usize..2), 0..6)) {
        let mut sys = FieldSystem::new(2).unwrap();
        let c = sys.add_ghost("c", &[3], None).unwrap();
        let vars: Vec<JetVar> = picks
            .iter()
            .map(|&(f, d)| {
                let mi = MultiIndex::from_entries(2, &vec![0; d]).unwrap();
                sys.jet_var(Component { field: c, fiber: f as u32 }, mi).unwrap()
            })
            .collect();
        let product = vars.iter().fold(Expr::one(), |acc, v| &acc * &Expr::var(v.clone()));
        match bubble_sign(&vars) {
            None => prop_assert!(product.is_zero()),
            Some((sorted, negate)) => {
                prop_assert_eq!(product.len(), 1);
                let (m, coef) = product.terms().next().unwrap();
                prop_assert_eq!(m.odd_part(), &sorted[..]);
                prop_assert_eq!(coef, &Rational::from_integer(BigInt::from(if negate { -1 } else { 1 })));
            }
        }
    }

    #[test]
    fn ring_laws(seed in any::<u64>()) {
        let sys = mixed_system();
        let mut s = Sampler::new(&sys, seed);
        let (a, b, c) = (s.expr(), s.expr(), s.expr());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        let sys = mixed_system();
        let mut s = Sampler::new(&sys, seed);
        let a = s.expr_with_parity(Parity::from_odd(pa));
        let b = s.expr_with_parity(Parity::from_odd(pb));
        let ab = &a * &b;
        let ba = &b * &a;
        if pa && pb {
            prop_assert_eq!(ab, -ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn odd_squares_vanish(seed in any::<u64>()) {
        let sys = mixed_system();
        let mut s = Sampler::new(&sys, seed);
        let odd = s.expr_with_parity(Parity::Odd);
        let m = s.expr();
        prop_assert!((&odd * &odd).is_zero());
        // A fresh odd variable inserted twice annihilates any monomial.
        let v = Expr::var(sys.jet_var(Component { field: FieldId(1), fiber: 0 }, s.multi_index(1)).unwrap());
        prop_assert!((&(&v * &m) * &v).is_zero());
    }
}
