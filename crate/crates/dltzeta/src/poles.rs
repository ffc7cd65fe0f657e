//! Candidate and effective pole extraction and the pole-set comparisons.
//!
//! Effective poles are read off the normalized denominator; because the
//! coefficient ring is modeled freely, the reported multiset is an upper
//! bound for the true pole set (cancellation that holds only modulo
//! geometric relations is invisible here).

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::model::StratifiedModel;
use crate::ring::NormalZeta;

/// Candidates and surviving poles with their order upper bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleReport {
    pub candidates: BTreeSet<Rational64>,
    pub effective: BTreeMap<Rational64, u32>,
}

impl PoleReport {
    pub fn new(model: &StratifiedModel, z: &NormalZeta) -> Self {
        PoleReport { candidates: candidate_poles(model), effective: effective_poles(z) }
    }
}

/// `{-v_i / N_i}` over the divisors with `N_i > 0`.
pub fn candidate_poles(model: &StratifiedModel) -> BTreeSet<Rational64> {
    model
        .divisors
        .iter()
        .filter(|d| !d.n.is_zero())
        .map(|d| -d.v / d.n)
        .collect()
}

/// Poles of the normalized form: one entry per distinct ratio `-v/N` among
/// the remaining s-dependent binomials, with its multiset count as the order
/// upper bound.
pub fn effective_poles(z: &NormalZeta) -> BTreeMap<Rational64, u32> {
    let mut out = BTreeMap::new();
    for b in z.denominator() {
        if let Some(pole) = b.pole() {
            *out.entry(pole).or_insert(0) += 1;
        }
    }
    out
}

/// Sound certificate for "pole at `s0` of order at most `m`": the normalized
/// denominator is one witnessing representation.
pub fn pole_order_at_most(z: &NormalZeta, s0: Rational64, m: u32) -> bool {
    effective_poles(z).get(&s0).copied().unwrap_or(0) <= m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoleComparison {
    /// Poles of the second argument are contained in those of the first.
    pub subset: bool,
    /// Poles of the second argument equal those of the first intersected
    /// with `[-1, 0]`.
    pub equals_unit_interval_intersection: bool,
}

/// Compare the pole set of a dlt-style zeta against a naive one.
pub fn compare_pole_sets(z_naive: &NormalZeta, z_dlt: &NormalZeta) -> PoleComparison {
    let naive: BTreeSet<Rational64> = effective_poles(z_naive).into_keys().collect();
    let dlt: BTreeSet<Rational64> = effective_poles(z_dlt).into_keys().collect();
    let unit = Rational64::from_integer(1);
    let clipped: BTreeSet<Rational64> = naive
        .iter()
        .copied()
        .filter(|p| !p.is_positive() && *p >= -unit)
        .collect();
    PoleComparison {
        subset: dlt.is_subset(&naive),
        equals_unit_interval_intersection: dlt == clipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DivisorDatum, ModelKind, StratumDatum};
    use crate::ring::{FactorStyle, MotiveExpr, ZetaExpr, ZetaFactor};

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn model_with_divisors(data: &[(i64, i64, i64, i64)]) -> StratifiedModel {
        StratifiedModel {
            kind: ModelKind::Naive,
            dimension: 2,
            r: 1,
            divisors: data
                .iter()
                .enumerate()
                .map(|(i, (np, nq, vp, vq))| DivisorDatum {
                    id: format!("E{i}"),
                    n: rat(*np, *nq),
                    v: rat(*vp, *vq),
                })
                .collect(),
            strata: vec![StratumDatum {
                subset: std::collections::BTreeSet::new(),
                payload: MotiveExpr::one(1),
            }],
            fan: None,
        }
    }

    #[test]
    fn candidates_for_cone_data() {
        // blow-up model of the n=3, d=2 cone: divisors (1,1) and (2,3)
        let m = model_with_divisors(&[(1, 1, 1, 1), (2, 1, 3, 1)]);
        let c = candidate_poles(&m);
        assert_eq!(c, [rat(-1, 1), rat(-3, 2)].into_iter().collect());
    }

    #[test]
    fn candidates_skip_s_free_divisors() {
        let m = model_with_divisors(&[(0, 1, 1, 1)]);
        assert!(candidate_poles(&m).is_empty());
    }

    #[test]
    fn effective_orders_count_the_multiset() {
        // (L-1) * F(1,1) * F(2,2): both binomials sit at -1, order 2.
        let mut z = ZetaExpr::new(1);
        let f1 = ZetaFactor::new(rat(1, 1), rat(1, 1), FactorStyle::Naive).unwrap();
        let f2 = ZetaFactor::new(rat(2, 1), rat(2, 1), FactorStyle::Naive).unwrap();
        let lm1 = &MotiveExpr::lefschetz(1) - &MotiveExpr::one(1);
        z.add_term(lm1, vec![f1, f2]).unwrap();
        let poles = effective_poles(&z.normalize());
        assert_eq!(poles.len(), 1);
        assert_eq!(poles.get(&rat(-1, 1)), Some(&2));
    }

    fn f_x_normal() -> NormalZeta {
        let m = StratifiedModel {
            kind: ModelKind::Naive,
            dimension: 1,
            r: 1,
            divisors: vec![DivisorDatum { id: "D".into(), n: rat(1, 1), v: rat(1, 1) }],
            strata: vec![
                StratumDatum {
                    subset: std::collections::BTreeSet::new(),
                    payload: &MotiveExpr::lefschetz(1) - &MotiveExpr::one(1),
                },
                StratumDatum {
                    subset: ["D".to_string()].into_iter().collect(),
                    payload: MotiveExpr::one(1),
                },
            ],
            fan: None,
        };
        crate::engine::compute_naive_zeta(&m).unwrap().normalize()
    }

    #[test]
    fn f_x_has_single_simple_pole() {
        let n = f_x_normal();
        let poles = effective_poles(&n);
        assert_eq!(poles, [(rat(-1, 1), 1)].into_iter().collect());
        assert!(pole_order_at_most(&n, rat(-1, 1), 1));
        assert!(!pole_order_at_most(&n, rat(-1, 1), 0));
        assert!(pole_order_at_most(&n, rat(-7, 2), 0));
    }

    #[test]
    fn comparison_flags() {
        // naive poles {-1, -3/2}, dlt poles {-1}
        let mut naive = ZetaExpr::new(1);
        naive
            .add_term(
                MotiveExpr::symbol("A", 1),
                vec![
                    ZetaFactor::new(rat(1, 1), rat(1, 1), FactorStyle::Naive).unwrap(),
                    ZetaFactor::new(rat(2, 1), rat(3, 1), FactorStyle::Naive).unwrap(),
                ],
            )
            .unwrap();
        let mut dlt = ZetaExpr::new(1);
        dlt.add_term(
            MotiveExpr::symbol("B", 1),
            vec![ZetaFactor::new(rat(1, 1), rat(1, 1), FactorStyle::Naive).unwrap()],
        )
        .unwrap();
        let report = compare_pole_sets(&naive.normalize(), &dlt.normalize());
        assert!(report.subset);
        assert!(report.equals_unit_interval_intersection);

        // synthetic dlt pole -1/2 not among naive poles {-1}
        let mut odd = ZetaExpr::new(1);
        odd.add_term(
            MotiveExpr::symbol("C", 1),
            vec![ZetaFactor::new(rat(2, 1), rat(1, 1), FactorStyle::Naive).unwrap()],
        )
        .unwrap();
        let report = compare_pole_sets(&dlt.normalize(), &odd.normalize());
        assert!(!report.subset);
        assert!(!report.equals_unit_interval_intersection);
    }

    #[test]
    fn effective_poles_come_from_the_divisor_data() {
        // no new denominators appear: every surviving binomial is one of the
        // divisor binomials, so effective poles are a subset of candidates
        let m = StratifiedModel {
            kind: ModelKind::Naive,
            dimension: 2,
            r: 1,
            divisors: vec![
                DivisorDatum { id: "X".into(), n: rat(2, 1), v: rat(1, 1) },
                DivisorDatum { id: "Y".into(), n: rat(3, 1), v: rat(1, 1) },
            ],
            strata: vec![
                StratumDatum {
                    subset: std::collections::BTreeSet::new(),
                    payload: (&MotiveExpr::lefschetz(1) - &MotiveExpr::one(1)).pow(2),
                },
                StratumDatum {
                    subset: ["X".to_string()].into_iter().collect(),
                    payload: &MotiveExpr::lefschetz(1) - &MotiveExpr::one(1),
                },
                StratumDatum {
                    subset: ["Y".to_string()].into_iter().collect(),
                    payload: &MotiveExpr::lefschetz(1) - &MotiveExpr::one(1),
                },
                StratumDatum {
                    subset: ["X".to_string(), "Y".to_string()].into_iter().collect(),
                    payload: MotiveExpr::one(1),
                },
            ],
            fan: None,
        };
        let n = crate::engine::compute_naive_zeta(&m).unwrap().normalize();
        let divisor_binomials: Vec<(Rational64, Rational64)> =
            m.divisors.iter().map(|d| (d.n, d.v)).collect();
        for b in n.denominator() {
            assert!(divisor_binomials.contains(&(b.n, b.v)));
        }
        let candidates = candidate_poles(&m);
        for pole in effective_poles(&n).keys() {
            assert!(candidates.contains(pole));
        }
    }

    #[test]
    fn dlt_poles_stay_in_the_unit_interval_when_v_at_most_n() {
        // -v/N in [-1, 0] for every divisor forces the pole set inside [-1, 0]
        let m = model_with_divisors(&[(3, 1, 2, 1), (5, 2, 1, 1), (1, 1, 1, 1)]);
        let candidates = candidate_poles(&m);
        for p in &candidates {
            assert!(*p >= rat(-1, 1) && *p <= rat(0, 1));
        }
        let n = crate::engine::compute_naive_zeta(&m).unwrap().normalize();
        for pole in effective_poles(&n).keys() {
            assert!(*pole >= rat(-1, 1) && *pole <= rat(0, 1));
        }
    }

    #[test]
    fn identical_models_compare_equal() {
        let n = f_x_normal();
        let report = compare_pole_sets(&n, &n);
        assert!(report.subset);
        assert!(report.equals_unit_interval_intersection);
    }
}
