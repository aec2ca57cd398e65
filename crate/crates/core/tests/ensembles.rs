use std::collections::BTreeMap;

use kac_roots::ensembles::{sample, truncate, Distribution, EnsembleSpec};
use kac_roots::root_count::{count_roots, RootRange};
use kac_roots::{Error, IntPolynomial};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

#[test]
fn golden_samples() {
    let golden: BTreeMap<String, Vec<i64>> =
        serde_json::from_str(include_str!("data/golden_samples.json")).unwrap();
    assert_eq!(golden.len(), 4);
    for dist in Distribution::ALL {
        let p = sample(&EnsembleSpec::new(dist, 7, 0).unwrap(), 0);
        let got: Vec<i64> = p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(got, golden[dist.name()], "{dist}");
    }
}

#[test]
fn gaussian_law_of_large_numbers() {
    let spec = EnsembleSpec::new(Distribution::Gaussian, 99, 2024).unwrap();
    let draws: Vec<f64> = (0..100)
        .flat_map(|i| sample(&spec, i).coeffs().iter().map(|c| c.to_f64().unwrap() / 2f64.powi(53)).collect::<Vec<_>>())
        .collect();
    assert_eq!(draws.len(), 10_000);
    let mean = draws.iter().sum::<f64>() / 1e4;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (1e4 - 1.0);
    assert!(mean.abs() <= 4.0 / 100.0, "mean {mean}");
    assert!((var - 1.0).abs() <= 0.1, "variance {var}");
}

#[test]
fn zero_degree_rejected() {
    assert!(matches!(EnsembleSpec::new(Distribution::Gaussian, 0, 1), Err(Error::BadDegree(_))));
}

#[test]
fn samples_independent_of_thread_schedule() {
    use rayon::prelude::*;
    let spec = EnsembleSpec::new(Distribution::UniformPm1, 30, 77).unwrap();
    let serial: Vec<IntPolynomial> = (0..64).map(|i| sample(&spec, i)).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let parallel: Vec<IntPolynomial> = pool.install(|| (0..64usize).into_par_iter().rev().map(|i| sample(&spec, i as u64)).collect());
    let mut parallel = parallel;
    parallel.reverse();
    assert_eq!(serial, parallel);
}

#[test]
fn truncate_examples() {
    let p = IntPolynomial::from_i64s(&[1, 1, 1, 1]);
    assert_eq!(truncate(&p, 1).unwrap(), IntPolynomial::from_i64s(&[1, 1]));
    assert_eq!(truncate(&p, 3).unwrap(), p);
    assert!(matches!(truncate(&p, 4), Err(Error::BadDegree(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_tail_starts_after_m(n in 1usize..60, m_frac in 0.0f64..1.0, seed: u64) {
        let spec = EnsembleSpec::new(Distribution::Gaussian, n, seed).unwrap();
        let p = sample(&spec, 0);
        let m = ((n as f64) * m_frac) as usize;
        let t = truncate(&p, m).unwrap();
        prop_assert_eq!(t.scale_exp(), p.scale_exp());
        let g = &p - &t;
        prop_assert!(g.coeffs().iter().take(m + 1).all(|c| *c == BigInt::from(0)));
    }

    #[test]
    fn uniform_counts_survive_rescaling(n in 1usize..25, seed: u64, k in 1i64..1_000_000) {
        // The variance-one uniform law is a fixed positive multiple of
        // uniform_pm1, so counts cannot change.
        let p = sample(&EnsembleSpec::new(Distribution::UniformPm1, n, seed).unwrap(), 0);
        let q = p.scaled(&BigInt::from(k));
        prop_assert_eq!(count_roots(&p, &RootRange::real_line()).unwrap(), count_roots(&q, &RootRange::real_line()).unwrap());
    }

    #[test]
    fn rademacher_never_vanishes_near_zero(n in 1usize..80, seed: u64, i in 0u64..1000) {
        let p = sample(&EnsembleSpec::new(Distribution::Rademacher, n, seed).unwrap(), i);
        let zone = RootRange::from_f64(-0.5, 0.5, false, false).unwrap();
        prop_assert_eq!(count_roots(&p, &zone).unwrap(), 0);
    }
}
