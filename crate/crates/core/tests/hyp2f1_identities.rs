use dengfan::hyp2f1::{gauss_2f1, hyp2f1, Hyp2F1Request};
use dengfan::scatter::match_coefficients;
use dengfan::{BarrierParams, TauBranch};
use num_complex::Complex64;
use proptest::prelude::*;

fn cplx(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Keeps `c` (and `c + 1`, `c - 1` shifts used by the identities) away
/// from the poles at non-positive integers.
fn safe_c() -> impl Strategy<Value = Complex64> {
    cplx(3.0).prop_filter("near a pole", |c| {
        (0..8).all(|n| (c + n as f64).norm() > 0.2)
    })
}

fn small_z(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn f(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Complex64 {
    hyp2f1(a, b, c, z).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn symmetric_in_a_and_b(a in cplx(3.0), b in cplx(3.0), c in safe_c(), z in small_z(0.8)) {
        prop_assert_eq!(f(a, b, c, z), f(b, a, c, z));
    }

    #[test]
    fn pfaff(a in cplx(2.0), b in cplx(2.0), c in safe_c(), z in small_z(0.5)) {
        let w = z / (z - 1.0);
        prop_assume!(w.norm() < 0.75);
        let lhs = f(a, b, c, z);
        let rhs = (1.0 - z).powc(-a) * f(a, c - b, c, w);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn euler(a in cplx(2.0), b in cplx(2.0), c in safe_c(), z in small_z(0.5)) {
        let lhs = f(a, b, c, z);
        let rhs = (1.0 - z).powc(c - a - b) * f(c - a, c - b, c, z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gauss_contiguous(a in cplx(2.0), b in cplx(2.0), c in safe_c(), z in small_z(0.6)) {
        let t1 = c * (1.0 - z) * f(a, b, c, z);
        let t2 = -c * f(a - 1.0, b, c, z);
        let t3 = (c - b) * z * f(a, b, c + 1.0, z);
        let scale = t1.norm() + t2.norm() + t3.norm();
        prop_assert!((t1 + t2 + t3).norm() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn b_equals_c_is_binomial(a in cplx(3.0), c in safe_c(), z in small_z(0.7)) {
        let got = f(a, c, c, z);
        let want = (1.0 - z).powc(-a);
        prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn derivative_is_finite_difference(a in cplx(2.0), b in cplx(2.0), c in safe_c(), x in 0.05..0.7f64) {
        let h = 1e-6;
        let d = dengfan::hyp2f1::gauss_2f1_derivative(a, b, c, x.into()).unwrap();
        let fd = (f(a, b, c, (x + h).into()) - f(a, b, c, (x - h).into())) / (2.0 * h);
        let scale = f(a, b, c, x.into()).norm().max(d.norm()).max(1.0);
        prop_assert!((d - fd).norm() <= 1e-7 * scale, "{} vs {}", d, fd);
    }
}

/// Plain summation with exact term count control, used as an oracle for the
/// matching-point hypergeometric values.
fn brute_force(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..100_000 {
        // Kahan-compensated accumulation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        let n = n as f64;
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    }
    sum
}

#[test]
fn matching_values_agree_with_brute_force_series() {
    let p = BarrierParams::table1();
    let mc = match_coefficients(0.05, &p, TauBranch::Plus).unwrap();
    let (al, bl, gl) = (mc.left.alpha, mc.left.beta, mc.left.gamma);
    let (ar, br, gr) = (mc.right.alpha, mc.right.beta, mc.right.gamma);
    let expected = [
        brute_force(al, bl, gl, p.q),
        brute_force(al + 1.0 - gl, bl + 1.0 - gl, 2.0 - gl, p.q),
        brute_force(ar + 1.0 - gr, br + 1.0 - gr, 2.0 - gr, p.q_tilde),
        brute_force(al + 1.0, bl + 1.0, gl + 1.0, p.q),
        brute_force(al + 2.0 - gl, bl + 2.0 - gl, 3.0 - gl, p.q),
        brute_force(ar + 2.0 - gr, br + 2.0 - gr, 3.0 - gr, p.q_tilde),
    ];
    for (i, (got, want)) in mc.zeta.iter().zip(expected).enumerate() {
        assert!((got - want).norm() <= 1e-12 * want.norm(), "zeta{}: {got} vs {want}", i + 1);
    }
}

#[test]
fn request_defaults() {
    let req = Hyp2F1Request::real(1.0, 1.0, 2.0, 0.5);
    assert_eq!(req.rel_tol, 1e-15);
    assert_eq!(req.max_terms, 20_000);
    assert!(gauss_2f1(&req).is_ok());
}
