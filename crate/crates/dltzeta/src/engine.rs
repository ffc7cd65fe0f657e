//! Formula evaluators: naive, dlt, topological, stringy, generalized stringy
//! and global zeta functions from a stratified model.
//!
//! All of these are instances of one sum-over-subsets shape that differs only
//! in four switches: the `L^{-d}` prefactor, the factor style, the
//! `(L-1)^{|J|-1}` per-term multiplier, and whether the empty subset
//! contributes. One assembler handles them all so that conventions cannot
//! drift apart.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{ModelKind, StratifiedModel};
use crate::qfun::{QPoly, RationalFunction};
use crate::ring::{FactorStyle, MotiveExpr, NormalZeta, ZetaExpr, ZetaFactor};

/// Local factor of the zeta product for divisor data `(N, v)`.
pub fn local_factor(n: Rational64, v: Rational64, style: FactorStyle) -> Result<ZetaFactor> {
    ZetaFactor::new(n, v, style)
}

struct FormulaSwitches {
    /// `Some(d)` multiplies every term by `L^{-d}`.
    prefactor_dim: Option<u32>,
    style: FactorStyle,
    /// Multiply each term by `(L-1)^{|J|-1}` (the global-formula switch).
    torus_multiplier: bool,
    /// Substitute the whole product at `s = t` (factors become `(0, N t + v)`),
    /// used by the s-free stringy specializations.
    evaluate_at: Option<Rational64>,
}

fn assemble(model: &StratifiedModel, switches: &FormulaSwitches) -> Result<ZetaExpr> {
    let mut z = ZetaExpr::new(model.r);
    let lm1 = &MotiveExpr::lefschetz(model.r) - &MotiveExpr::one(model.r);
    for stratum in &model.strata {
        let mut coeff = stratum.payload.clone();
        if let Some(d) = switches.prefactor_dim {
            coeff = coeff.mul_l_pow(Rational64::from_integer(-i64::from(d)))?;
        }
        if switches.torus_multiplier {
            debug_assert!(!stratum.subset.is_empty(), "validated global model has no empty subset");
            coeff = &coeff * &lm1.pow((stratum.subset.len() - 1) as u32);
        }
        let mut factors = Vec::with_capacity(stratum.subset.len());
        for id in &stratum.subset {
            let div = model
                .divisor(id)
                .ok_or_else(|| Error::Domain(format!("stratum references unknown divisor {id:?}")))?;
            let factor = match switches.evaluate_at {
                None => ZetaFactor::new(div.n, div.v, switches.style)?,
                Some(t) => ZetaFactor::new(
                    Rational64::zero(),
                    div.n * t + div.v,
                    switches.style,
                )?,
            };
            factors.push(factor);
        }
        z.add_term(coeff, factors)?;
    }
    Ok(z)
}

fn expect_kind(model: &StratifiedModel, allowed: &[ModelKind]) -> Result<()> {
    if allowed.contains(&model.kind) {
        Ok(())
    } else {
        Err(Error::Kind {
            expected: allowed.iter().map(|k| k.as_str()).collect::<Vec<_>>().join("|"),
            found: model.kind.as_str().to_string(),
        })
    }
}

/// Naive motivic zeta function
/// `L^{-d} sum_J [E0_J] prod_{i in J} (L-1) L^{-N_i s - v_i} / (1 - L^{-N_i s - v_i})`.
pub fn compute_naive_zeta(model: &StratifiedModel) -> Result<ZetaExpr> {
    model.ensure_valid()?;
    expect_kind(model, &[ModelKind::Naive])?;
    assemble(
        model,
        &FormulaSwitches {
            prefactor_dim: Some(model.dimension),
            style: FactorStyle::Naive,
            torus_multiplier: false,
            evaluate_at: None,
        },
    )
}

/// Dlt motivic zeta function: same sum with stringy-motive payloads. On snc
/// input (payloads equal to raw classes) it coincides with the naive one.
pub fn compute_dlt_zeta(model: &StratifiedModel) -> Result<ZetaExpr> {
    model.ensure_valid()?;
    expect_kind(model, &[ModelKind::Dlt])?;
    assemble(
        model,
        &FormulaSwitches {
            prefactor_dim: Some(model.dimension),
            style: FactorStyle::Naive,
            torus_multiplier: false,
            evaluate_at: None,
        },
    )
}

/// Euler-number specialization `sum_J chi_J prod_{i in J} 1/(N_i s + v_i)`
/// over Q(s), fully reduced.
///
/// Each stratum's chi value is its payload specialized at `L = 1` with the
/// supplied symbol Euler numbers.
pub fn compute_topological_zeta(
    model: &StratifiedModel,
    chi: &BTreeMap<String, BigRational>,
) -> Result<RationalFunction> {
    model.ensure_valid()?;
    expect_kind(model, &[ModelKind::Naive, ModelKind::Dlt])?;
    let one = BigRational::one();
    let mut parts = Vec::new();
    for stratum in &model.strata {
        let mut value = stratum
            .payload
            .substitute(&one, chi)
            .map_err(|e| Error::Specialize(format!("stratum chi at L = 1: {e}")))?;
        if value.is_zero() {
            continue;
        }
        let mut roots: BTreeMap<BigRational, u32> = BTreeMap::new();
        for id in &stratum.subset {
            let div = model.divisor(id).expect("validated");
            if div.n.is_zero() {
                // constant factor 1/v
                value /= big_rat(div.v);
            } else {
                value /= big_rat(div.n);
                *roots.entry(-big_rat(div.v / div.n)).or_insert(0) += 1;
            }
        }
        parts.push(RationalFunction::new(QPoly::constant(value), roots));
    }
    Ok(RationalFunction::sum(&parts))
}

/// A klt resolution datum for the plain stringy motive: exceptional log
/// discrepancies `a_i > 0` plus raw stratum classes.
#[derive(Clone, Debug)]
pub struct StringyResolution {
    pub r: u32,
    /// `(divisor id, log discrepancy a_i)`.
    pub discrepancies: Vec<(String, Rational64)>,
    pub strata: Vec<(BTreeSet<String>, MotiveExpr)>,
}

/// Stringy motive `sum_J [E0_J] prod_{i in J} (L-1) L^{-a_i} / (1 - L^{-a_i})`
/// as a normalized s-free fraction.
pub fn compute_stringy_motive(res: &StringyResolution) -> Result<NormalZeta> {
    let mut z = ZetaExpr::new(res.r);
    for (id, a) in &res.discrepancies {
        if !a.is_positive() {
            return Err(Error::Domain(format!(
                "stringy motive needs all log discrepancies positive; {id} has a = {a}"
            )));
        }
    }
    for (subset, payload) in &res.strata {
        let mut factors = Vec::new();
        for id in subset {
            let a = res
                .discrepancies
                .iter()
                .find(|(d, _)| d == id)
                .map(|(_, a)| *a)
                .ok_or_else(|| Error::Domain(format!("stratum references unknown divisor {id:?}")))?;
            factors.push(ZetaFactor::new(Rational64::zero(), a, FactorStyle::Naive)?);
        }
        z.add_term(payload.clone(), factors)?;
    }
    Ok(z.normalize())
}

/// Generalized stringy motive of a dlt model with `v_i = 0`, `N_i > 0`: the
/// dlt zeta evaluated at `s = 1`, normalized.
///
/// `drop_prefactor` omits the `L^{-d}` in front, matching the log-terminal
/// normalization without it.
pub fn compute_generalized_stringy(
    model: &StratifiedModel,
    drop_prefactor: bool,
) -> Result<NormalZeta> {
    model.ensure_valid()?;
    expect_kind(model, &[ModelKind::Dlt])?;
    for d in &model.divisors {
        if !d.v.is_zero() {
            return Err(Error::Domain(format!(
                "generalized stringy motive needs v = 0 on every divisor; {} has v = {}",
                d.id, d.v
            )));
        }
        if !d.n.is_positive() {
            return Err(Error::Domain(format!(
                "generalized stringy motive needs N > 0 on every divisor; {} has N = {}",
                d.id, d.n
            )));
        }
    }
    let z = assemble(
        model,
        &FormulaSwitches {
            prefactor_dim: if drop_prefactor { None } else { Some(model.dimension) },
            style: FactorStyle::Naive,
            torus_multiplier: false,
            evaluate_at: Some(Rational64::one()),
        },
    )?;
    Ok(z.normalize())
}

/// Companion Euler number of the generalized stringy motive: the topological
/// zeta evaluated at `s = 1`.
pub fn generalized_stringy_euler(
    model: &StratifiedModel,
    chi: &BTreeMap<String, BigRational>,
) -> Result<BigRational> {
    let top = compute_topological_zeta(model, chi)?;
    top.eval(&BigRational::one())
        .ok_or_else(|| Error::Specialize("topological zeta has a pole at s = 1".into()))
}

/// Global degeneration zeta function
/// `sum_{J != empty} (L-1)^{|J|-1} [payload_J] prod_{i in J} L^{-s N_i - mu_i} / (1 - L^{-s N_i - mu_i})`.
pub fn compute_global_zeta(model: &StratifiedModel) -> Result<ZetaExpr> {
    model.ensure_valid()?;
    expect_kind(model, &[ModelKind::GlobalNaive, ModelKind::GlobalDlt])?;
    assemble(
        model,
        &FormulaSwitches {
            prefactor_dim: None,
            style: FactorStyle::Global,
            torus_multiplier: true,
            evaluate_at: None,
        },
    )
}

/// Minimal-weight test for a global dlt model: all `mu_i / N_i` equal.
pub fn validate_global_minimality(model: &StratifiedModel) -> Result<bool> {
    model.ensure_valid()?;
    expect_kind(model, &[ModelKind::GlobalDlt])?;
    let mut ratio: Option<Rational64> = None;
    for d in &model.divisors {
        let this = d.v / d.n;
        match ratio {
            None => ratio = Some(this),
            Some(r) if r == this => {}
            Some(_) => return Ok(false),
        }
    }
    Ok(true)
}

fn big_rat(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DivisorDatum, StratumDatum};
    use crate::ring::parse_motive_expr;
    use crate::ring::zeta::Binomial;

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn stratum(ids: &[&str], class: &str, r: u32) -> StratumDatum {
        StratumDatum {
            subset: ids.iter().map(|s| s.to_string()).collect(),
            payload: parse_motive_expr(class, r).unwrap(),
        }
    }

    fn divisor(id: &str, n: Rational64, v: Rational64) -> DivisorDatum {
        DivisorDatum { id: id.to_string(), n, v }
    }

    /// f = x on the affine line: one divisor (1,1), strata (L-1) and 1.
    fn f_x_model() -> StratifiedModel {
        StratifiedModel {
            kind: ModelKind::Naive,
            dimension: 1,
            r: 1,
            divisors: vec![divisor("D", rat(1, 1), rat(1, 1))],
            strata: vec![stratum(&[], "L - 1", 1), stratum(&["D"], "1", 1)],
            fan: None,
        }
    }

    #[test]
    fn f_x_zeta_normal_form() {
        let z = compute_naive_zeta(&f_x_model()).unwrap();
        let n = z.normalize();
        assert_eq!(n.denominator(), &[Binomial { n: rat(1, 1), v: rat(1, 1) }]);
        let terms: Vec<_> = n.numerator_terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, rat(0, 1));
        let expect = parse_motive_expr("(L - 1)*L^-1", 1).unwrap();
        assert_eq!(terms[0].1, &expect);
    }

    #[test]
    fn empty_index_set_gives_prefactor_times_class() {
        let m = StratifiedModel {
            kind: ModelKind::Naive,
            dimension: 3,
            r: 1,
            divisors: vec![],
            strata: vec![stratum(&[], "[X]", 1)],
            fan: None,
        };
        let n = compute_naive_zeta(&m).unwrap().normalize();
        assert!(n.denominator().is_empty());
        assert_eq!(
            n.as_constant().unwrap(),
            parse_motive_expr("[X]*L^-3", 1).unwrap()
        );
    }

    #[test]
    fn single_divisor_two_three() {
        // divisor (2,3) over a point: L^{-d} (L-1) L^{-3} T^2 / (1 - L^{-3} T^2)
        let m = StratifiedModel {
            kind: ModelKind::Dlt,
            dimension: 2,
            r: 1,
            divisors: vec![divisor("E", rat(2, 1), rat(3, 1))],
            strata: vec![stratum(&[], "0", 1), stratum(&["E"], "1", 1)],
            fan: None,
        };
        let n = compute_dlt_zeta(&m).unwrap().normalize();
        assert_eq!(n.denominator(), &[Binomial { n: rat(2, 1), v: rat(3, 1) }]);
        let terms: Vec<_> = n.numerator_terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, rat(2, 1));
        assert_eq!(terms[0].1, &parse_motive_expr("(L-1)*L^-5", 1).unwrap());
    }

    #[test]
    fn dlt_equals_naive_on_identical_payloads() {
        // f = x^2 y^3 on the identity toric model, both engine flavors.
        let mk = |kind: ModelKind| StratifiedModel {
            kind,
            dimension: 2,
            r: 1,
            divisors: vec![
                divisor("X", rat(2, 1), rat(1, 1)),
                divisor("Y", rat(3, 1), rat(1, 1)),
            ],
            strata: vec![
                stratum(&[], "(L-1)^2", 1),
                stratum(&["X"], "L-1", 1),
                stratum(&["Y"], "L-1", 1),
                stratum(&["X", "Y"], "1", 1),
            ],
            fan: None,
        };
        let zn = compute_naive_zeta(&mk(ModelKind::Naive)).unwrap();
        let zd = compute_dlt_zeta(&mk(ModelKind::Dlt)).unwrap();
        assert_eq!(zn.normalize(), zd.normalize());
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let m = f_x_model();
        assert!(matches!(compute_dlt_zeta(&m), Err(Error::Kind { .. })));
        assert!(matches!(compute_global_zeta(&m), Err(Error::Kind { .. })));
    }

    #[test]
    fn sfree_factor_with_v_one_is_the_constant_one() {
        // (0,1) factor: (L-1) L^{-1} / (1 - L^{-1}) = 1
        let mut z = ZetaExpr::new(1);
        z.add_term(
            MotiveExpr::one(1),
            vec![local_factor(rat(0, 1), rat(1, 1), FactorStyle::Naive).unwrap()],
        )
        .unwrap();
        let n = z.normalize();
        assert!(n.denominator().is_empty());
        assert!(n.as_constant().unwrap().is_one());
    }

    #[test]
    fn zero_zero_factor_is_rejected() {
        assert!(matches!(
            local_factor(rat(0, 1), rat(0, 1), FactorStyle::Naive),
            Err(Error::ForbiddenZeroPair)
        ));
    }

    #[test]
    fn topological_zeta_of_f_x() {
        let top = compute_topological_zeta(&f_x_model(), &BTreeMap::new()).unwrap();
        // 1/(s+1): single simple pole at -1, numerator constant 1
        assert_eq!(top.poles().len(), 1);
        assert_eq!(top.poles().get(&q(-1, 1)), Some(&1));
        assert_eq!(top.eval(&q(0, 1)).unwrap(), q(1, 1));
    }

    #[test]
    fn topological_zeta_single_divisor_two_three() {
        let m = StratifiedModel {
            kind: ModelKind::Naive,
            dimension: 2,
            r: 1,
            divisors: vec![divisor("E", rat(2, 1), rat(3, 1))],
            strata: vec![stratum(&[], "0", 1), stratum(&["E"], "1", 1)],
            fan: None,
        };
        let top = compute_topological_zeta(&m, &BTreeMap::new()).unwrap();
        // 1/(2s+3)
        assert_eq!(top.poles().get(&q(-3, 2)), Some(&1));
        assert_eq!(top.eval(&q(0, 1)).unwrap(), q(1, 3));
        assert_eq!(top.eval(&q(1, 1)).unwrap(), q(1, 5));
    }

    #[test]
    fn stringy_motive_with_unit_discrepancy() {
        let res = StringyResolution {
            r: 1,
            discrepancies: vec![("E".into(), rat(1, 1))],
            strata: vec![
                (BTreeSet::new(), parse_motive_expr("[X_minus_pt]", 1).unwrap()),
                (
                    ["E".to_string()].into_iter().collect(),
                    parse_motive_expr("L + 1", 1).unwrap(),
                ),
            ],
        };
        let n = compute_stringy_motive(&res).unwrap();
        assert!(n.denominator().is_empty());
        assert_eq!(
            n.as_constant().unwrap(),
            parse_motive_expr("[X_minus_pt] + L + 1", 1).unwrap()
        );
    }

    #[test]
    fn stringy_motive_half_discrepancy_needs_r_two() {
        let res = StringyResolution {
            r: 2,
            discrepancies: vec![("E".into(), rat(1, 2))],
            strata: vec![(
                ["E".to_string()].into_iter().collect(),
                MotiveExpr::one(2),
            )],
        };
        let n = compute_stringy_motive(&res).unwrap();
        assert!(n.denominator().is_empty());
        assert_eq!(
            n.as_constant().unwrap(),
            parse_motive_expr("L^(1/2) + 1", 2).unwrap()
        );
    }

    #[test]
    fn stringy_motive_rejects_nonpositive_discrepancy() {
        let res = StringyResolution {
            r: 1,
            discrepancies: vec![("E".into(), rat(0, 1))],
            strata: vec![],
        };
        assert!(compute_stringy_motive(&res).is_err());
    }

    fn generalized_model(n: i64) -> StratifiedModel {
        StratifiedModel {
            kind: ModelKind::Dlt,
            dimension: 2,
            r: 1,
            divisors: vec![divisor("E", rat(n, 1), rat(0, 1))],
            strata: vec![stratum(&[], "[X_minus_pt]", 1), stratum(&["E"], "[S]", 1)],
            fan: None,
        }
    }

    #[test]
    fn generalized_stringy_klt_input() {
        let m = StratifiedModel {
            kind: ModelKind::Dlt,
            dimension: 3,
            r: 1,
            divisors: vec![],
            strata: vec![stratum(&[], "[X]", 1)],
            fan: None,
        };
        let n = compute_generalized_stringy(&m, false).unwrap();
        assert_eq!(n.as_constant().unwrap(), parse_motive_expr("[X]*L^-3", 1).unwrap());
        let without = compute_generalized_stringy(&m, true).unwrap();
        assert_eq!(without.as_constant().unwrap(), parse_motive_expr("[X]", 1).unwrap());
    }

    #[test]
    fn generalized_stringy_single_exceptional() {
        // N = 2: L^{-d}([X \ pt] + [S](L-1)L^{-2}/(1-L^{-2})), binomial kept
        let n = compute_generalized_stringy(&generalized_model(2), false).unwrap();
        assert_eq!(n.denominator(), &[Binomial { n: rat(0, 1), v: rat(2, 1) }]);
        // N = 1: the factor collapses to 1
        let n1 = compute_generalized_stringy(&generalized_model(1), false).unwrap();
        assert!(n1.denominator().is_empty());
        assert_eq!(
            n1.as_constant().unwrap(),
            parse_motive_expr("([X_minus_pt] + [S])*L^-2", 1).unwrap()
        );
    }

    #[test]
    fn generalized_stringy_rejects_bad_data() {
        let mut m = generalized_model(2);
        m.divisors[0].v = rat(1, 1);
        assert!(compute_generalized_stringy(&m, false).is_err());
        let mut m2 = generalized_model(2);
        m2.divisors[0].n = rat(0, 1);
        m2.divisors[0].v = rat(1, 1);
        assert!(compute_generalized_stringy(&m2, false).is_err());
    }

    #[test]
    fn generalized_stringy_euler_number() {
        // chi_st = chi(X \ pt) + chi(S)/N at s = 1
        let mut chi = BTreeMap::new();
        chi.insert("X_minus_pt".to_string(), q(3, 1));
        chi.insert("S".to_string(), q(2, 1));
        let e = generalized_stringy_euler(&generalized_model(2), &chi).unwrap();
        assert_eq!(e, q(3, 1) + q(2, 2));
    }

    fn global_model(data: &[(i64, i64)], kind: ModelKind) -> StratifiedModel {
        let divisors: Vec<DivisorDatum> = data
            .iter()
            .enumerate()
            .map(|(i, (n, mu))| divisor(&format!("E{i}"), rat(*n, 1), rat(*mu, 1)))
            .collect();
        let mut strata = Vec::new();
        for mask in 1u32..(1 << data.len()) {
            let ids: Vec<String> = (0..data.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| format!("E{i}"))
                .collect();
            let name = format!("S{}", ids.join(""));
            strata.push(StratumDatum {
                subset: ids.into_iter().collect(),
                payload: MotiveExpr::symbol(&name, 1),
            });
        }
        StratifiedModel { kind, dimension: 0, r: 1, divisors, strata, fan: None }
    }

    #[test]
    fn global_single_component() {
        let m = global_model(&[(1, 1)], ModelKind::GlobalNaive);
        let n = compute_global_zeta(&m).unwrap().normalize();
        assert_eq!(n.denominator(), &[Binomial { n: rat(1, 1), v: rat(1, 1) }]);
        let terms: Vec<_> = n.numerator_terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, rat(1, 1));
        assert_eq!(terms[0].1, &parse_motive_expr("[SE0]*L^-1", 1).unwrap());
    }

    #[test]
    fn global_deepest_stratum_carries_torus_multiplier() {
        let m = global_model(&[(1, 1), (1, 1), (2, 3)], ModelKind::GlobalNaive);
        let z = compute_global_zeta(&m).unwrap();
        let deepest = z
            .terms()
            .iter()
            .find(|(_, factors)| factors.len() == 3)
            .expect("deepest stratum present");
        let expect =
            &MotiveExpr::symbol("SE0E1E2", 1) * &(&MotiveExpr::lefschetz(1) - &MotiveExpr::one(1)).pow(2);
        assert_eq!(deepest.0, expect);
    }

    #[test]
    fn global_two_components_formula() {
        // payloads [E1],[E2],[E12]: ([E1]+[E2]) F + (L-1)[E12] F^2
        let m = global_model(&[(1, 1), (1, 1)], ModelKind::GlobalNaive);
        let z = compute_global_zeta(&m).unwrap();
        let mut by_hand = ZetaExpr::new(1);
        let f = ZetaFactor::new(rat(1, 1), rat(1, 1), FactorStyle::Global).unwrap();
        by_hand
            .add_term(
                &MotiveExpr::symbol("SE0", 1) + &MotiveExpr::symbol("SE1", 1),
                vec![f],
            )
            .unwrap();
        let lm1 = &MotiveExpr::lefschetz(1) - &MotiveExpr::one(1);
        by_hand
            .add_term(&MotiveExpr::symbol("SE0E1", 1) * &lm1, vec![f, f])
            .unwrap();
        assert_eq!(z.normalize(), by_hand.normalize());
    }

    #[test]
    fn global_minimality_check() {
        let equal = global_model(&[(1, 1), (2, 2)], ModelKind::GlobalDlt);
        assert!(validate_global_minimality(&equal).unwrap());
        let unequal = global_model(&[(1, 1), (2, 3)], ModelKind::GlobalDlt);
        assert!(!validate_global_minimality(&unequal).unwrap());
        let single = global_model(&[(3, 2)], ModelKind::GlobalDlt);
        assert!(validate_global_minimality(&single).unwrap());
        // wrong kind
        let naive = global_model(&[(1, 1)], ModelKind::GlobalNaive);
        assert!(validate_global_minimality(&naive).is_err());
    }

    #[test]
    fn factor_limit_at_l_one_matches_topological_factor() {
        // First-order jets at L = 1 + eps over Q(s): the naive factor
        // (L-1)L^{-Ns-v} / (1 - L^{-Ns-v}) tends to 1/(Ns+v).
        // (1+eps)^{c} == 1 + c*eps to first order for a linear form c in s.
        struct Jet {
            c0: QPoly,
            c1: QPoly,
        }
        let poly = |coeffs: &[BigRational]| QPoly::from_coeffs(coeffs.to_vec());
        let mul = |a: &Jet, b: &Jet| Jet {
            c0: a.c0.mul(&b.c0),
            c1: a.c0.mul(&b.c1).add(&a.c1.mul(&b.c0)),
        };
        for (nn, vv) in [(1i64, 1i64), (2, 3), (6, 5), (3, 1)] {
            let c = poly(&[q(-vv, 1), q(-nn, 1)]); // -Ns - v
            let l_pow = Jet { c0: poly(&[q(1, 1)]), c1: c.clone() }; // (1+eps)^c
            let l_minus_1 = Jet { c0: QPoly::zero(), c1: poly(&[q(1, 1)]) };
            let numerator = mul(&l_minus_1, &l_pow);
            let denominator = Jet {
                c0: poly(&[q(1, 1)]).add(&l_pow.c0.scale(&q(-1, 1))),
                c1: l_pow.c1.scale(&q(-1, 1)),
            };
            // both sides vanish at order 0, so the limit is the ratio of the
            // eps-coefficients: 1 / (Ns + v)
            assert!(numerator.c0.is_zero());
            assert!(denominator.c0.is_zero());
            assert_eq!(numerator.c1, poly(&[q(1, 1)]));
            assert_eq!(denominator.c1, poly(&[q(vv, 1), q(nn, 1)]));
            // and that matches the factor used by the topological engine
            let m = StratifiedModel {
                kind: ModelKind::Naive,
                dimension: 1,
                r: 1,
                divisors: vec![divisor("E", rat(nn, 1), rat(vv, 1))],
                strata: vec![stratum(&[], "0", 1), stratum(&["E"], "1", 1)],
                fan: None,
            };
            let top = compute_topological_zeta(&m, &BTreeMap::new()).unwrap();
            let at_zero = top.eval(&q(0, 1)).unwrap();
            assert_eq!(at_zero, q(1, vv));
            let at_one = top.eval(&q(1, 1)).unwrap();
            assert_eq!(at_one, q(1, nn + vv));
        }
    }
}
