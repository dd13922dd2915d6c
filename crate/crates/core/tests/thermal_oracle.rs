use nlosc::ladder::{build_spectrum, LambdaFunction, LambdaSource, Spectrum};
use nlosc::oracle::converged_levels;
use nlosc::semiclassical::QuadratureConfig;
use nlosc::thermal::{
    classical_partition, partition_function, verify_avg_energy_identity, verify_kms_identity, verify_number_identity,
};
use nlosc::OscillatorSpec;

fn quartic_ladder(k: f64, n_max: usize) -> (Spectrum, LambdaFunction) {
    let lf = LambdaFunction::quartic_closed(k).unwrap();
    (build_spectrum(&lf, 0.5, n_max).unwrap(), lf)
}

#[test]
fn partition_function_from_diagonalized_levels() {
    let levels = converged_levels(&OscillatorSpec::quartic(0.01), 41, 1e-10).unwrap().levels;
    let s = Spectrum::from_levels(levels.clone(), LambdaSource::Custom("oracle".into())).unwrap();
    let beta = 1.0;
    let t = partition_function(&s, beta, 1e-12).unwrap();
    let direct: f64 = levels.iter().map(|e| (-beta * e).exp()).sum();
    assert!((t.z - direct).abs() < 1e-6 * direct);
    let mean: f64 = levels.iter().map(|e| e * (-beta * e).exp()).sum::<f64>() / direct;
    assert!((t.avg_energy - mean).abs() < 1e-10 * mean);
}

#[test]
fn ground_state_dominates_at_low_temperature() {
    let (s, _) = quartic_ladder(0.01, 80);
    for beta in [20.0, 40.0] {
        let t = partition_function(&s, beta, 1e-12).unwrap();
        let r = t.z * (beta * s.ground_level()).exp();
        assert!((r - 1.0).abs() < 2.0 * (-beta * 0.9).exp());
    }
}

#[test]
fn mean_energy_grows_with_temperature() {
    let (s, _) = quartic_ladder(0.01, 1000);
    let mut prev = 0.0;
    for beta in [5.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05] {
        let t = partition_function(&s, beta, 1e-12).unwrap();
        assert!(t.avg_energy >= prev);
        assert!(t.avg_energy >= s.ground_level());
        prev = t.avg_energy;
    }
}

#[test]
fn quartic_identities() {
    let (s, lf) = quartic_ladder(0.01, 1000);
    for beta in [0.1, 0.5, 1.0, 2.0, 5.0] {
        assert!(verify_kms_identity(&s, &lf, beta).unwrap().residual < 1e-8, "beta = {beta}");
        let e = verify_avg_energy_identity(&s, &lf, beta).unwrap();
        assert!(e.residual < 1e-6, "beta = {beta}: {e:?}");
        assert!(e.finite_difference < 1e-6);
        assert!(verify_number_identity(&s, &lf, beta).unwrap() < 1e-8);
    }
}

#[test]
fn harmonic_closed_forms() {
    let lf = LambdaFunction::constant(1.0).unwrap();
    let s = build_spectrum(&lf, 0.5, 200).unwrap();
    for beta in [0.5f64, 1.0, 2.0] {
        let t = partition_function(&s, beta, 1e-15).unwrap();
        let z = (-beta / 2.0).exp() / (1.0 - (-beta).exp());
        assert!((t.z - z).abs() < 1e-12 * z);
        assert!((t.avg_energy - (0.5 + 1.0 / (beta.exp() - 1.0))).abs() < 1e-12);
    }
}

#[test]
fn classical_limit() {
    let cfg = QuadratureConfig::default();
    let spec = OscillatorSpec::quartic(0.01);
    let (s, _) = quartic_ladder(0.01, 2000);
    let mut prev_dev = f64::INFINITY;
    for beta in [0.2, 0.05, 0.02] {
        let zc = classical_partition(&spec, beta, &cfg).unwrap();
        let zq = partition_function(&s, beta, 1e-10).unwrap().z;
        let dev = (zq / zc - 1.0).abs();
        assert!(dev < prev_dev, "beta = {beta}: {dev}");
        prev_dev = dev;
    }
    assert!(prev_dev < 0.02);
    let mut last = f64::INFINITY;
    for beta in [0.01, 0.1, 1.0] {
        let zc = classical_partition(&spec, beta, &cfg).unwrap();
        assert!(zc < last);
        last = zc;
    }
}
