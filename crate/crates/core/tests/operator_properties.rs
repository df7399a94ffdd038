use fracprop::{diag_operator, fd_laplacian, FdLaplacian, Grid, GridFunction, SectorialOperator};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn rel_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    let num = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    num / b.sup_norm().max(f64::MIN_POSITIVE)
}

fn check_identity(op: &dyn SectorialOperator, w: Complex64, x: &GridFunction) -> f64 {
    let shifted = x.scale(w).axpy(Complex64::new(1.0, 0.0), &op.apply(x).unwrap()).unwrap();
    let back = op.resolvent_shifted(w, &shifted).unwrap();
    rel_diff(&back, x)
}

proptest! {
    #[test]
    fn resolvent_inverts_shifted_operator(
        re in 0.0f64..50.0,
        im in -200.0f64..200.0,
        vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 40),
    ) {
        let w = Complex64::new(re, im);
        let x: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let fd = fd_laplacian(40).unwrap();
        let xf = GridFunction::new(Grid::Uniform(40), x.clone()).unwrap();
        prop_assert!(check_identity(&fd, w, &xf) < 1e-12);
        let modes: Vec<i64> = (1..=40).collect();
        let diag = diag_operator(&modes).unwrap();
        let xd = GridFunction::new(Grid::Spectral((1..=40).collect()), x).unwrap();
        prop_assert!(check_identity(&diag, w, &xd) < 1e-12);
    }

    #[test]
    fn resolvent_commutes_with_conjugation(
        re in 0.0f64..50.0,
        im in -200.0f64..200.0,
        vals in proptest::collection::vec(-1.0f64..1.0, 30),
    ) {
        let w = Complex64::new(re, im);
        let fd = fd_laplacian(30).unwrap();
        let x = GridFunction::from_real(Grid::Uniform(30), &vals).unwrap();
        let a = fd.resolvent_shifted(w.conj(), &x).unwrap();
        let b = fd.resolvent_shifted(w, &x).unwrap();
        for (p, q) in a.values().iter().zip(b.values()) {
            prop_assert!((p - q.conj()).norm() <= 1e-15 * q.norm().max(1e-300) + 1e-300);
        }
    }
}

#[test]
fn fd_spectrum_is_real_and_positive() {
    for m in [10, 100, 1000] {
        let fd = FdLaplacian::new(m).unwrap();
        let dx = 1.0 / (m as f64 + 1.0);
        for j in 1..=m {
            let l = fd.eigenvalue(j);
            let want = 4.0 / (dx * dx) * (j as f64 * PI * dx / 2.0).sin().powi(2);
            assert!(l > 0.0 && (l - want).abs() <= 1e-12 * want);
        }
    }
}

#[test]
fn fd_resolvent_converges_to_spectral_at_second_order() {
    let w = Complex64::new(0.3, 2.0);
    for k in [1u32, 3] {
        let lk = (PI * k as f64).powi(2);
        let errs: Vec<f64> = [50usize, 100, 200]
            .iter()
            .map(|&m| {
                let fd = fd_laplacian(m).unwrap();
                let x = GridFunction::sample(m, |s| (PI * k as f64 * s).sin());
                let r = fd.resolvent_shifted(w, &x).unwrap();
                let exact = x.scale(Complex64::new(1.0, 0.0) / (w + lk));
                r.values().iter().zip(exact.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            })
            .collect();
        for pair in errs.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((3.6..4.4).contains(&ratio), "k={k}: {errs:?}");
        }
    }
}
