mod common;

use num_traits::Zero;
use proptest::prelude::*;
use richlines::config::random_points;
use richlines::design::{dependency_coeffs, tuple_cover};
use richlines::incidence::{canonical_line, rich_lines};
use richlines::veronese::Polynomial;
use richlines::{PointSet, Scalar};

use common::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6, any::<bool>()).prop_map(|(a, b, c, d, gaussian)| {
        let re = Scalar::ratio(a, b);
        if gaussian {
            &re + &(&Scalar::ratio(c, d) * &Scalar::i())
        } else {
            re
        }
    })
}

fn point(d: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_roundtrip(x in scalar()) {
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn division_inverts_multiplication(x in scalar(), y in scalar()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn canonical_line_ignores_the_chosen_pair(p in point(3), q in point(3), t in -5i64..=5, u in -5i64..=5) {
        prop_assume!(p != q && t != u);
        let dir = sub(&q, &p);
        let at = |k: i64| -> Vec<Scalar> { p.iter().zip(&dir).map(|(a, b)| a + &(&s(k) * b)).collect() };
        let l1 = canonical_line(&p, &q).unwrap();
        let l2 = canonical_line(&at(t), &at(u)).unwrap();
        prop_assert_eq!(&l1, &l2);
        prop_assert!(l1.contains(&at(7)));
    }

    #[test]
    fn rich_lines_match_reference(seed in any::<u64>(), n in 3usize..25, r in 2usize..5) {
        let v = random_points(2, n, 3, seed).unwrap();
        let mut got: Vec<Vec<usize>> = rich_lines(&v, r).unwrap().iter().map(|l| l.incident().to_vec()).collect();
        got.sort();
        prop_assert_eq!(got, common::rich_lines(&v, r));
    }

    #[test]
    fn tuple_cover_properties(len in 1usize..30, r in 2usize..7) {
        prop_assume!(len >= r);
        let pts: Vec<usize> = (0..len).map(|i| 3 * i + 1).collect();
        let tuples = tuple_cover(&pts, r).unwrap();
        prop_assert!(tuples.iter().all(|t| t.len() == r));
        for &p in &pts {
            prop_assert!(tuples.iter().any(|t| t.contains(&p)));
        }
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                prop_assert!(tuples.iter().filter(|t| t.contains(&a) && t.contains(&b)).count() <= 2);
            }
        }
    }

    #[test]
    fn progression_coefficients_are_binomial(r in 3usize..7, start in -5i64..5, step in 1i64..4) {
        let v = PointSet::new(1, (0..r as i64).map(|j| vec![s(start + j * step)]).collect()).unwrap();
        let idx: Vec<usize> = (0..r).collect();
        let alpha = dependency_coeffs(&v, &idx, (r - 2) as u32).unwrap();
        // alternating binomials (-1)^j C(r-1, j), scaled so the first is 1
        let mut c = 1i64;
        for (j, a) in alpha.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(a, &s(sign * c));
            c = c * (r as i64 - 1 - j as i64) / (j as i64 + 1);
        }
    }

    #[test]
    fn gradient_is_the_linear_term_along_axes(
        coeffs in prop::collection::vec(-4i64..=4, 10),
        a in prop::collection::vec(-3i64..=3, 2),
    ) {
        let exps: [&[u32]; 10] = [&[0, 0], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2], &[3, 0], &[2, 1], &[1, 2], &[0, 3]];
        let terms: Vec<(&[u32], i64)> = exps.iter().copied().zip(coeffs.iter().copied()).collect();
        let f = Polynomial::from_i64_terms(2, &terms);
        prop_assume!(!f.is_zero());
        let a: Vec<Scalar> = a.into_iter().map(s).collect();
        let grad = f.gradient_at(&a);
        for i in 0..2 {
            let mut e = vec![Scalar::zero(); 2];
            e[i] = s(1);
            let g = f.restrict_to_line(&a, &e);
            let linear = g.get(1).cloned().unwrap_or_else(Scalar::zero);
            prop_assert_eq!(&grad[i], &linear);
            // symmetric difference quotient with h = 1/1000 differs by O(h²)
            let h = Scalar::ratio(1, 1000);
            let plus: Vec<Scalar> = a.iter().zip(&e).map(|(x, y)| x + &(&h * y)).collect();
            let minus: Vec<Scalar> = a.iter().zip(&e).map(|(x, y)| x - &(&h * y)).collect();
            let quotient = &(&f.eval(&plus) - &f.eval(&minus)) / &(&h * &s(2));
            let gap = (&quotient - &grad[i]).re_f64().abs();
            prop_assert!(gap <= 1e-4, "gap {}", gap);
        }
    }
}
