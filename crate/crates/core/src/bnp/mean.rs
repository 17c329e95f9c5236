use crate::measure::SignedMeasure;
use crate::quad::{self, QuadOptions};

/// `f(t) = ∫ K(x, t) ξ(dx)` at each grid point: atoms are summed exactly and
/// each constant piece of the diffuse part is integrated by quadrature.
pub fn eval_mean_function(
    kernel: impl Fn(f64, f64) -> f64,
    xi: &SignedMeasure<f64>,
    grid: &[f64],
) -> Vec<f64> {
    let opts = QuadOptions {
        rel_tol: 1e-14,
        abs_tol: 0.0,
        max_intervals: 200,
    };
    grid.iter()
        .map(|&t| {
            let atomic: f64 = xi
                .atoms()
                .iter()
                .map(|a| kernel(a.location, t) * a.weight)
                .sum();
            let diffuse: f64 = xi
                .diffuse()
                .cells()
                .filter(|(_, _, level)| **level != 0.0)
                .map(|(lo, hi, level)| {
                    let q = match quad::integrate_finite(|x| kernel(x, t), *lo, *hi, &opts) {
                        Ok(q) => q.value,
                        Err(quad::QuadError::NotConverged { value, .. }) => value,
                        Err(e) => panic!("kernel must be finite on the support: {e}"),
                    };
                    level * q
                })
                .sum();
            atomic + diffuse
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, StepDensity};

    #[test]
    fn constant_kernel_gives_total_mass() {
        let xi =
            SignedMeasure::from_atoms(vec![Atom::new(0.5, 2.0), Atom::new(0.7, -3.0)]).unwrap();
        assert_eq!(
            eval_mean_function(|_, _| 1.0, &xi, &[0.0, 0.3, 1.0]),
            vec![-1.0; 3]
        );
        assert_eq!(
            eval_mean_function(|_, _| 1.0, &SignedMeasure::zero(), &[0.1]),
            vec![0.0]
        );
    }

    #[test]
    fn diffuse_part_is_integrated() {
        let xi = SignedMeasure::from_density(StepDensity::constant(0.0, 1.0, 2.0).unwrap());
        // ∫_0^1 2·x·t dx = t
        let f = eval_mean_function(|x, t| x * t, &xi, &[0.5, 3.0]);
        assert!((f[0] - 0.5).abs() < 1e-14 && (f[1] - 3.0).abs() < 1e-14);
    }
}
