//! Algebraic laws checked over randomized inputs.

use ponet::kb::{AverageKb, WeightedFormula};
use ponet::logic::{enumerate_worlds, evaluate, models, Clause, Formula, Literal, Scope};
use ponet::measure::{Degree, DistKind, WorldDistribution};
use ponet::TriangularDegree;
use proptest::prelude::*;

const N_VARS: usize = 3;

fn scope() -> Scope {
    Scope::from_names(&["A", "B", "C"]).unwrap()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        4 => (0..N_VARS, any::<bool>()).prop_map(|(v, p)| Formula::lit(v, p)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
        ]
    })
}

fn grid_degree() -> impl Strategy<Value = Degree> {
    (0..=10u32).prop_map(|i| Degree::new(f64::from(i) / 10.0).unwrap())
}

fn distribution() -> impl Strategy<Value = WorldDistribution> {
    prop::collection::vec(grid_degree(), 1 << N_VARS).prop_map(|values| {
        WorldDistribution::new(scope(), DistKind::Possibility, values).unwrap()
    })
}

fn clause() -> impl Strategy<Value = Clause> {
    prop::collection::btree_map(0..N_VARS, any::<bool>(), 1..=N_VARS).prop_map(|lits| {
        Clause::new(lits.into_iter().map(|(v, p)| Literal::new(v, p))).unwrap()
    })
}

fn weighted_formula() -> impl Strategy<Value = WeightedFormula> {
    (clause(), 1..=10u32, 0..=10u32).prop_map(|(c, a, b)| {
        WeightedFormula::new(
            c,
            Degree::new(f64::from(a) / 10.0).unwrap(),
            Degree::new(f64::from(b) / 10.0).unwrap(),
        )
        .unwrap()
    })
}

fn kb(max_formulas: usize) -> impl Strategy<Value = AverageKb> {
    prop::collection::vec(weighted_formula(), 0..=max_formulas)
        .prop_map(|fs| AverageKb::from_formulas(scope(), fs).unwrap())
}

fn triangle() -> impl Strategy<Value = TriangularDegree> {
    prop::collection::vec(grid_degree(), 3).prop_map(|mut d| {
        d.sort();
        TriangularDegree::new(d[0], d[1], d[2]).unwrap()
    })
}

proptest! {
    #[test]
    fn negation_flips_evaluation(f in formula()) {
        for world in enumerate_worlds(&scope()).unwrap() {
            let plain = evaluate(&f, &world).unwrap();
            let negated = evaluate(&f.clone().not(), &world).unwrap();
            prop_assert_eq!(plain, !negated);
        }
    }

    #[test]
    fn models_partition_the_worlds(f in formula()) {
        let yes = models(&f, &scope()).unwrap().len();
        let no = models(&f.clone().not(), &scope()).unwrap().len();
        prop_assert_eq!(yes + no, 1 << N_VARS);
    }

    #[test]
    fn possibility_distributes_over_disjunction(d in distribution(), p in formula(), q in formula()) {
        let joint = d.possibility_of(&p.clone().or(q.clone())).unwrap();
        let split = d.possibility_of(&p).unwrap().max(d.possibility_of(&q).unwrap());
        prop_assert_eq!(joint, split);
    }

    #[test]
    fn dual_necessity_distributes_over_conjunction(d in distribution(), p in formula(), q in formula()) {
        let joint = d.necessity_by_duality(&p.clone().and(q.clone())).unwrap();
        let split = d
            .necessity_by_duality(&p)
            .unwrap()
            .min(d.necessity_by_duality(&q).unwrap());
        prop_assert_eq!(joint, split);
    }

    #[test]
    fn possibility_is_monotone_under_entailment(d in distribution(), p in formula(), r in formula()) {
        // p entails p | r
        let weaker = p.clone().or(r);
        prop_assert!(d.possibility_of(&p).unwrap() <= d.possibility_of(&weaker).unwrap());
    }

    #[test]
    fn possibility_of_tautology_is_the_distribution_max(d in distribution()) {
        prop_assert_eq!(d.possibility_of(&Formula::True).unwrap(), d.max());
    }

    #[test]
    fn adding_a_formula_only_lowers_possibility(base in kb(6), extra in weighted_formula()) {
        let mut extended = base.clone();
        extended.insert(extra).unwrap();
        let before = base.possibility_distribution().unwrap();
        let after = extended.possibility_distribution().unwrap();
        for (b, a) in before.values().iter().zip(after.values()) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn necessity_dominates_possibility_when_betas_stay_below_alphas(base in kb(6)) {
        let capped = AverageKb::from_formulas(
            scope(),
            base.formulas().iter().map(|f| {
                WeightedFormula::new(f.clause().clone(), f.alpha(), f.beta().min(f.alpha())).unwrap()
            }),
        )
        .unwrap();
        let pi = capped.possibility_distribution().unwrap();
        let n = capped.necessity_distribution().unwrap();
        for (nv, pv) in n.values().iter().zip(pi.values()) {
            prop_assert!(nv >= pv);
        }
    }

    #[test]
    fn merging_a_dominated_duplicate_changes_nothing(base in kb(6), index in 0..6usize, a in 1..=10u32, b in 0..=10u32) {
        prop_assume!(!base.is_empty());
        let target = base.formulas()[index % base.len()].clone();
        let dup = WeightedFormula::new(
            target.clause().clone(),
            target.alpha().min(Degree::new(f64::from(a) / 10.0).unwrap()),
            target.beta().min(Degree::new(f64::from(b) / 10.0).unwrap()),
        )
        .unwrap();
        let mut merged = base.clone();
        merged.insert(dup).unwrap();
        prop_assert_eq!(base.len(), merged.len());
        prop_assert!(base.equivalent(&merged).unwrap());
    }

    #[test]
    fn normalization_preserves_both_distributions(base in kb(6)) {
        let normalized = base.normalized().unwrap();
        prop_assert!(normalized.len() <= base.len());
        prop_assert!(base.equivalent(&normalized).unwrap());
    }

    #[test]
    fn componentwise_min_is_an_ordered_triangle(x in triangle(), y in triangle()) {
        let m = x.min(y);
        prop_assert!(m.lower() <= m.peak() && m.peak() <= m.upper());
    }

    #[test]
    fn peak_of_min_is_min_of_peaks(ts in prop::collection::vec(triangle(), 1..6)) {
        let combined = ts.iter().copied().reduce(TriangularDegree::min).unwrap();
        let min_peak = ts.iter().map(|t| t.defuzzify()).min().unwrap();
        prop_assert_eq!(combined.defuzzify(), min_peak);
    }

    #[test]
    fn membership_peaks_exactly_at_the_peak(t in triangle(), x in grid_degree()) {
        let m = t.membership(x);
        prop_assert!(m <= Degree::ONE);
        if x == t.peak() {
            prop_assert_eq!(m, Degree::ONE);
        } else if t.lower() < t.peak() && t.peak() < t.upper() {
            prop_assert!(m < Degree::ONE);
        }
    }
}
