//! Property tests for the function algebra.

use proptest::prelude::*;

use pseudoherm::funcspace::RadialFunction;

fn smooth_case(which: u8, c: f64, a: f64) -> RadialFunction {
    match which % 4 {
        0 => RadialFunction::gauss(c, a),
        1 => RadialFunction::scaled_tanh(c, a),
        2 => RadialFunction::sech_pow(c, 2),
        _ => RadialFunction::product(
            RadialFunction::monomial(c, 1),
            RadialFunction::gauss(1.0, a),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // antiderivative(f,a,b) + antiderivative(f,b,c) = antiderivative(f,a,c)
    // within 2 tol
    #[test]
    fn antiderivative_additivity(
        which in 0u8..4,
        coeff in 0.2f64..1.5,
        rate in 0.3f64..1.2,
        x0 in -2.0f64..2.0,
        d1 in 0.05f64..1.5,
        d2 in 0.05f64..1.5,
    ) {
        let f = smooth_case(which, coeff, rate);
        let (a, b, c) = (x0, x0 + d1, x0 + d1 + d2);
        let tol = 1e-10;
        let ab = f.antiderivative(a, b, tol).unwrap();
        let bc = f.antiderivative(b, c, tol).unwrap();
        let ac = f.antiderivative(a, c, tol).unwrap();
        prop_assert!((ab + bc - ac).abs() <= 2.0 * tol,
            "additivity defect {}", (ab + bc - ac).abs());
    }

    // sums and scalings are exact to floating-point rounding for values and
    // derivatives
    #[test]
    fn sum_and_scale_linearity_is_exact(
        which in 0u8..4,
        coeff in 0.2f64..1.5,
        rate in 0.3f64..1.2,
        factor in -3.0f64..3.0,
        r in -4.0f64..4.0,
    ) {
        let f = smooth_case(which, coeff, rate);
        let g = RadialFunction::gauss(0.7, 0.9);
        let sum = RadialFunction::sum(vec![f.clone(), g.clone()]);
        prop_assert_eq!(sum.eval(r).unwrap(), f.eval(r).unwrap() + g.eval(r).unwrap());
        prop_assert_eq!(sum.d1(r).unwrap(), f.d1(r).unwrap() + g.d1(r).unwrap());
        prop_assert_eq!(sum.d2(r).unwrap(), f.d2(r).unwrap() + g.d2(r).unwrap());

        let scaled = RadialFunction::scale(factor, f.clone());
        prop_assert_eq!(scaled.eval(r).unwrap(), factor * f.eval(r).unwrap());
        prop_assert_eq!(scaled.d1(r).unwrap(), factor * f.d1(r).unwrap());
        prop_assert_eq!(scaled.d2(r).unwrap(), factor * f.d2(r).unwrap());
    }

    // descriptor JSON round-trips bit-exactly
    #[test]
    fn descriptor_round_trip(c in -5.0f64..5.0, a in 0.01f64..10.0, p in 1i32..6) {
        use pseudoherm::funcspace::Descriptor;
        let d = Descriptor::node(
            "sum",
            &[],
            vec![
                Descriptor::leaf("gauss", &[c, a]),
                Descriptor::leaf("monomial", &[c / 3.0, p as f64]),
                Descriptor::node("scale", &[a], vec![Descriptor::leaf("scaled_tanh", &[c, a])]),
            ],
        );
        let json = serde_json::to_string(&d).unwrap();
        let back: Descriptor = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&d, &back);
        prop_assert_eq!(json, serde_json::to_string(&back).unwrap());
    }
}

#[test]
fn shared_function_is_safe_across_threads() {
    // one quadrature-backed function, many threads, one shared cache
    let f = RadialFunction::scaled_tanh(0.5, 1.0);
    let g = std::sync::Arc::new(RadialFunction::exp_integral(-2.0, &f, 1e-13));
    let serial: Vec<f64> = (0..64)
        .map(|k| g.eval(-6.0 + 0.19 * k as f64).unwrap())
        .collect();
    let mut handles = Vec::new();
    for t in 0..4 {
        let g = g.clone();
        handles.push(std::thread::spawn(move || {
            (0..64)
                .rev()
                .map(|k| {
                    let _ = t;
                    g.eval(-6.0 + 0.19 * k as f64).unwrap()
                })
                .collect::<Vec<f64>>()
        }));
    }
    for h in handles {
        let mut got = h.join().unwrap();
        got.reverse();
        for (a, b) in got.iter().zip(serial.iter()) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }
}
