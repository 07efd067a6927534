//! The Taylor expansion against closed forms coming from the identity lab.

use ellidelta::cnum::{rel_error, C64};
use ellidelta::expansion::{expand, expand_oracle, sample_basis, wp_ratio, wp_ratio_coefficients, ExpansionBasis};
use ellidelta::identities::{connection_coefficients, eval_rn, RnSpec};
use ellidelta::operator::SymmetricFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn near_unit(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(rng.random_range(0.85..1.15), rng.random_range(0.0..std::f64::consts::TAU))
}

fn max_rel(a: &[C64], b: &[C64]) -> f64 {
    let scale = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm() / scale).fold(0.0, f64::max)
}

#[test]
fn well_poised_ratio_coefficients_are_ten_v_nine_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for trial in 0..20 {
        let n = 1 + trial % 8;
        let (basis, _) = sample_basis(&mut rng, n, true, 200).unwrap();
        let b = near_unit(&mut rng);
        let f = wp_ratio(b, &basis);
        let closed = wp_ratio_coefficients(b, &basis).unwrap();
        let report = expand(&f, &basis).unwrap();
        assert!(max_rel(&report.coefficients, &closed) < 1e-8, "trial {trial}");
        // Summing the closed-form terms against the basis gives f back.
        let z = near_unit(&mut rng) * 1.2;
        let sum: C64 = basis.values(z).unwrap().iter().zip(&closed).map(|(v, c)| v * c).sum();
        assert!(rel_error(sum, f.eval(z).unwrap()) < 1e-9, "trial {trial}");
    }
}

fn rn_function(spec: RnSpec) -> SymmetricFunction {
    SymmetricFunction::new(move |z| eval_rn(&spec, z))
}

#[test]
fn rn_expansion_gives_connection_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    for trial in 0..20 {
        let n = 1 + trial % 5;
        let (anchor, _) = sample_basis(&mut rng, n, true, 200).unwrap();
        let ps = anchor.params();
        let spec = RnSpec::new(near_unit(&mut rng), anchor.c(), near_unit(&mut rng), near_unit(&mut rng), near_unit(&mut rng), n, ps)
            .unwrap();
        let basis = ExpansionBasis::new(anchor.a(), spec.c, n, ps).unwrap();
        let f = rn_function(spec);
        let closed: Vec<C64> = connection_coefficients(&spec, basis.a()).unwrap().into_iter().map(|(c, _)| c).collect();
        let report = expand(&f, &basis).unwrap();
        assert!(max_rel(&report.coefficients, &closed) < 1e-8, "trial {trial}");
        if let Ok(oracle) = expand_oracle(&f, &basis) {
            assert!(max_rel(&oracle, &closed) < 1e-8, "trial {trial}");
            checked += 1;
        }
    }
    assert!(checked >= 15, "oracle solved only {checked} of 20 systems");
}
