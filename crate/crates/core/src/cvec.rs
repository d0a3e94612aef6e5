//! Small dense complex-vector helpers.
//!
//! Beamformers and channels here are at most a handful of antennas long, so
//! plain `Vec<Complex64>` with free functions is all the linear algebra the
//! solvers need.

use num_complex::Complex64;

use crate::error::{CoopError, Result};

pub type C64 = Complex64;

/// Hermitian inner product `a† b`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    norm_sqr(a).sqrt()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|x| x * s).collect()
}

pub fn scale_re(a: &[C64], s: f64) -> Vec<C64> {
    a.iter().map(|x| x * s).collect()
}

/// `a * x + y`
pub fn axpy(a: C64, x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); n]
}

/// Unit vector along `a`. Errors on a zero vector.
pub fn unit(a: &[C64]) -> Result<Vec<C64>> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        return Err(CoopError::input("cannot normalise a zero or non-finite vector"));
    }
    Ok(scale_re(a, 1.0 / n))
}

/// Splits `h` into its component along `h_ref` and the orthogonal remainder.
pub fn project_pair(h_ref: &[C64], h: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    if h_ref.len() != h.len() {
        return Err(CoopError::input(format!(
            "length mismatch: {} vs {}",
            h_ref.len(),
            h.len()
        )));
    }
    let r2 = norm_sqr(h_ref);
    if r2 == 0.0 {
        return Err(CoopError::input("reference vector is zero"));
    }
    let coef = inner(h_ref, h) / r2;
    let parallel = scale(h_ref, coef);
    let orthogonal = sub(h, &parallel);
    Ok((parallel, orthogonal))
}

/// Squared cosine of the angle between two vectors, `|h1† h2|² / (‖h1‖² ‖h2‖²)`.
pub fn alignment_cos2(h1: &[C64], h2: &[C64]) -> Result<f64> {
    if h1.len() != h2.len() {
        return Err(CoopError::input(format!(
            "length mismatch: {} vs {}",
            h1.len(),
            h2.len()
        )));
    }
    let n1 = norm_sqr(h1);
    let n2 = norm_sqr(h2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(CoopError::input("alignment of a zero vector is undefined"));
    }
    Ok((inner(h1, h2).norm_sqr() / (n1 * n2)).clamp(0.0, 1.0))
}

/// Unit vector along the part of `h` orthogonal to `h_ref`, or `None` when
/// `h` is (numerically) collinear with `h_ref`.
pub fn orthogonal_direction(h_ref: &[C64], h: &[C64]) -> Result<Option<Vec<C64>>> {
    let (_, perp) = project_pair(h_ref, h)?;
    let pn = norm(&perp);
    if pn <= 1e-12 * norm(h) {
        return Ok(None);
    }
    Ok(Some(scale_re(&perp, 1.0 / pn)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e(i: usize, n: usize) -> Vec<C64> {
        let mut v = zeros(n);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn project_same_direction() {
        let (par, perp) = project_pair(&e(0, 3), &e(0, 3)).unwrap();
        assert_eq!(par, e(0, 3));
        assert!(norm(&perp) < 1e-15);
    }

    #[test]
    fn project_orthogonal() {
        let (par, perp) = project_pair(&e(0, 3), &e(1, 3)).unwrap();
        assert!(norm(&par) < 1e-15);
        assert_eq!(perp, e(1, 3));
    }

    #[test]
    fn project_rejects_zero_reference() {
        assert!(matches!(
            project_pair(&zeros(2), &e(0, 2)),
            Err(CoopError::InvalidInput(_))
        ));
    }

    #[test]
    fn alignment_cases() {
        assert!((alignment_cos2(&e(0, 2), &scale_re(&e(0, 2), 3.0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(alignment_cos2(&e(0, 2), &e(1, 2)).unwrap(), 0.0);
        let s = 1.0 / 2f64.sqrt();
        let h2 = vec![c(s, 0.0), c(s, 0.0)];
        assert!((alignment_cos2(&e(0, 2), &h2).unwrap() - 0.5).abs() < 1e-15);
        assert!(alignment_cos2(&zeros(2), &h2).is_err());
    }

    fn cvec_strategy(n: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
    }

    fn pair_strategy() -> impl Strategy<Value = (Vec<C64>, Vec<C64>, C64)> {
        (1usize..6).prop_flat_map(|n| {
            (
                cvec_strategy(n),
                cvec_strategy(n),
                (0.1..4.0f64, 0.0..std::f64::consts::TAU).prop_map(|(m, p)| C64::from_polar(m, p)),
            )
        })
    }

    proptest! {
        #[test]
        fn projection_recombines_and_is_orthogonal((r, h, _) in pair_strategy()) {
            prop_assume!(norm(&r) > 1e-3);
            let (par, perp) = project_pair(&r, &h).unwrap();
            let back = axpy(c(1.0, 0.0), &par, &perp);
            prop_assert!(norm(&sub(&back, &h)) <= 1e-12 * (1.0 + norm(&h)));
            prop_assert!(inner(&r, &perp).norm() <= 1e-12 * (1.0 + norm(&h) * norm(&r)));
            // idempotent on the parallel part
            let (par2, _) = project_pair(&r, &par).unwrap();
            prop_assert!(norm(&sub(&par2, &par)) <= 1e-12 * (1.0 + norm(&par)));
        }

        #[test]
        fn alignment_symmetric_and_scale_invariant((a, b, s) in pair_strategy()) {
            prop_assume!(norm(&a) > 1e-3 && norm(&b) > 1e-3);
            let ab = alignment_cos2(&a, &b).unwrap();
            let ba = alignment_cos2(&b, &a).unwrap();
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!((ab - ba).abs() <= 1e-12);
            let scaled = alignment_cos2(&scale(&a, s), &b).unwrap();
            prop_assert!((ab - scaled).abs() <= 1e-12);
        }
    }
}
