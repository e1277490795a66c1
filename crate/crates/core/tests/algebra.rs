use std::sync::Arc;

use fpcheck_core::{ExecutionUniverse, Process, Rational};
use proptest::prelude::*;

fn grade() -> impl Strategy<Value = Rational> {
    (1i64..=6).prop_flat_map(|den| (0..=den).prop_map(move |num| Rational::new(num, den)))
}

fn process_over(universe: Arc<ExecutionUniverse>) -> impl Strategy<Value = Process> {
    let n = universe.len();
    (
        prop::collection::vec(grade(), n),
        prop::collection::vec(grade(), n),
    )
        .prop_map(move |(delta, gamma)| {
            let labels = universe.labels().to_vec();
            Process::from_maps(
                &universe,
                labels.clone().into_iter().zip(delta),
                labels.into_iter().zip(gamma),
            )
            .unwrap()
        })
}

/// `count` processes over one shared universe of 1..=4 executions.
fn processes(count: usize) -> impl Strategy<Value = Vec<Process>> {
    (1usize..=4).prop_flat_map(move |n| {
        prop::collection::vec(process_over(ExecutionUniverse::numbered(n)), count)
    })
}

fn total_processes(count: usize) -> impl Strategy<Value = Vec<Process>> {
    processes(count).prop_filter("total", |ps| ps.iter().all(Process::is_total))
}

proptest! {
    #[test]
    fn refinement_is_a_partial_order(ps in processes(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        prop_assert!(p.fuzzy_refines(p).unwrap());
        if p.fuzzy_refines(q).unwrap() && q.fuzzy_refines(r).unwrap() {
            prop_assert!(p.fuzzy_refines(r).unwrap());
        }
        if p.fuzzy_refines(q).unwrap() && q.fuzzy_refines(p).unwrap() {
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn membership_refinement_implies_support_refinement(ps in processes(2)) {
        if ps[0].fuzzy_refines(&ps[1]).unwrap() {
            prop_assert!(ps[0].support_refines(&ps[1]).unwrap());
        }
    }

    #[test]
    fn join_and_meet_are_bounds(ps in processes(2)) {
        let (p, q) = (&ps[0], &ps[1]);
        let (j, m) = (p.join(q).unwrap(), p.meet(q).unwrap());
        prop_assert!(p.fuzzy_refines(&j).unwrap() && q.fuzzy_refines(&j).unwrap());
        prop_assert!(m.fuzzy_refines(p).unwrap() && m.fuzzy_refines(q).unwrap());
        prop_assert_eq!(p.join(&m).unwrap(), p.clone());
        prop_assert_eq!(p.meet(&j).unwrap(), p.clone());
    }

    #[test]
    fn operators_commute(ps in processes(2)) {
        let (p, q) = (&ps[0], &ps[1]);
        prop_assert_eq!(p.product(q).unwrap(), q.product(p).unwrap());
        prop_assert_eq!(p.sum(q).unwrap(), q.sum(p).unwrap());
    }

    #[test]
    fn sum_is_dual_to_product(ps in processes(2)) {
        let (p, q) = (&ps[0], &ps[1]);
        let dual = p.reflect().product(&q.reflect()).unwrap().reflect();
        prop_assert_eq!(p.sum(q).unwrap(), dual);
    }

    #[test]
    fn omega_is_a_unit_and_reflection_an_involution(ps in processes(1)) {
        let p = &ps[0];
        prop_assert_eq!(p.product(&Process::omega(p.universe())).unwrap(), p.clone());
        prop_assert_eq!(p.reflect().reflect(), p.clone());
    }

    #[test]
    fn product_is_delta_monotone(ps in processes(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        if p.fuzzy_refines(q).unwrap() {
            let (pr, qr) = (p.product(r).unwrap(), q.product(r).unwrap());
            prop_assert!(pr.delta().iter().zip(qr.delta()).all(|(a, b)| a >= b));
        }
    }

    #[test]
    fn support_monotone_for_total_context(ps in total_processes(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        if p.support_refines(q).unwrap() {
            prop_assert!(p.product(r).unwrap().support_refines(&q.product(r).unwrap()).unwrap());
        }
    }

    #[test]
    fn factors_are_robust_and_chaotic(ps in processes(1)) {
        let f = ps[0].factor();
        prop_assert!(f.robust.is_robust());
        prop_assert!(f.chaotic.is_chaotic());
        prop_assert_eq!(f.reconstruction_exact(), ps[0].is_total());
    }

    #[test]
    fn design_inequality_for_totals(ps in total_processes(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        let r_min = p.sum(&q.reflect()).unwrap();
        prop_assert_eq!(
            p.support_refines(&q.product(r).unwrap()).unwrap(),
            r_min.support_refines(r).unwrap()
        );
    }

    #[test]
    fn json_round_trip(ps in processes(1)) {
        let text = ps[0].to_json();
        prop_assert_eq!(Process::from_json(&text).unwrap(), ps[0].clone());
    }
}

#[test]
fn f64_instantiation_agrees_on_dyadic_values() {
    use fpcheck_core::{FuzzyProcess, Membership};
    let u = ExecutionUniverse::new(["a", "b"]).unwrap();
    let m = |x: f64| Membership::new(x).unwrap();
    let p = FuzzyProcess::new(u.clone(), vec![m(0.5), m(1.0)], vec![m(0.25), m(0.0)]).unwrap();
    let q = FuzzyProcess::new(u, vec![m(0.25), m(0.0)], vec![m(1.0), m(0.5)]).unwrap();
    let s = p.sum(&q).unwrap();
    assert_eq!(s, p.reflect().product(&q.reflect()).unwrap().reflect());
    assert!(q.fuzzy_refines(&p.join(&q).unwrap()).unwrap());
}
