//! Deterministic approximation from the interior lattice `{1/m, ..., (m-1)/m}^d`.
//!
//! Each of the `m^d` subcubes gets the midpoint of what monotonicity pins
//! down at its corners: the value at the lower corner (or `-1` when that
//! corner touches the lower boundary) and at the upper corner (or `+1` on
//! the upper boundary). The worst-case `L1` error is at most `d/m`.

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{domain, Error, Result};
use crate::functions::{flat_index, unflatten, Oracle};
use crate::haar::cell_of_point_base;

#[derive(Debug, Clone)]
pub struct GridModel {
    m: u64,
    d: usize,
    /// Values at `i/m`, `i in {1..m-1}^d`, flat with base `m-1`, axis 0 least significant.
    lattice_values: Vec<f64>,
    monotone_consistent: bool,
}

/// Evaluate `oracle` on the `(m-1)^d` interior lattice points.
pub fn fit_grid<F: Oracle + ?Sized>(oracle: &F, m: u64, budget: &Budget) -> Result<GridModel> {
    let d = oracle.dim();
    if d == 0 {
        return Err(domain("oracle dimension must be positive"));
    }
    if m < 2 {
        return Err(domain(format!("grid needs m >= 2, got {m}")));
    }
    let count = budget.check_power("interior lattice points", m - 1, d)?;
    let lattice_values: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|flat| {
            let x: Vec<f64> = unflatten(flat, m - 1, d)
                .into_iter()
                .map(|i| (i + 1) as f64 / m as f64)
                .collect();
            oracle.eval(&x)
        })
        .collect();
    if let Some(v) = lattice_values.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
        return Err(Error::InputContract(format!(
            "lattice value {v} outside [-1,1]"
        )));
    }
    let mut model = GridModel {
        m,
        d,
        lattice_values,
        monotone_consistent: true,
    };
    model.monotone_consistent = model.check_monotone();
    if !model.monotone_consistent {
        log::warn!("lattice values violate monotonicity; the input is not monotone");
    }
    Ok(model)
}

impl GridModel {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lattice_len(&self) -> usize {
        self.lattice_values.len()
    }

    /// Whether the stored values are nondecreasing along every axis.
    pub fn is_monotone_consistent(&self) -> bool {
        self.monotone_consistent
    }

    /// Stored value at lattice point `i/m`, `i in {1..m-1}^d`.
    pub fn lattice_value(&self, i: &[u64]) -> Option<f64> {
        if i.len() != self.d || i.iter().any(|&c| c == 0 || c >= self.m) {
            return None;
        }
        let shifted: Vec<u64> = i.iter().map(|&c| c - 1).collect();
        Some(self.lattice_values[flat_index(&shifted, self.m - 1)])
    }

    fn check_monotone(&self) -> bool {
        let side = self.m - 1;
        let d = self.d;
        (0..self.lattice_values.len() as u64).all(|flat| {
            let cell = unflatten(flat, side, d);
            let mut stride = 1u64;
            cell.iter().all(|&c| {
                let ok = c + 1 >= side
                    || self.lattice_values[(flat + stride) as usize]
                        >= self.lattice_values[flat as usize];
                stride *= side;
                ok
            })
        })
    }

    /// Lower and upper corner knowledge for the subcube with index `cell`.
    pub fn corner_bounds(&self, cell: &[u64]) -> (f64, f64) {
        let lower = if cell.iter().any(|&c| c == 0) {
            -1.0
        } else {
            self.lattice_value(cell).expect("interior corner")
        };
        let upper_corner: Vec<u64> = cell.iter().map(|&c| c + 1).collect();
        let upper = if upper_corner.iter().any(|&c| c == self.m) {
            1.0
        } else {
            self.lattice_value(&upper_corner).expect("interior corner")
        };
        (lower, upper)
    }

    pub fn eval_grid(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.d {
            return Err(domain(format!(
                "point has dimension {}, model has {}",
                x.len(),
                self.d
            )));
        }
        let cell = x
            .iter()
            .map(|&v| cell_of_point_base(v, self.m))
            .collect::<Result<Vec<_>>>()?;
        let (lo, hi) = self.corner_bounds(&cell);
        Ok(0.5 * (lo + hi))
    }
}

impl Oracle for GridModel {
    fn dim(&self) -> usize {
        self.d
    }

    /// Panics on points outside the unit cube.
    fn eval(&self, x: &[f64]) -> f64 {
        self.eval_grid(x).expect("evaluation point inside the unit cube")
    }
}

/// Worst-case error guarantee `d/m`.
pub fn grid_error_bound(d: usize, m: u64) -> f64 {
    d as f64 / m as f64
}

/// Smallest `m` with `d/m <= eps`.
pub fn grid_size_for(d: usize, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(domain("eps must be positive"));
    }
    Ok(((d as f64 / eps).ceil() as u64).max(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{boxbslash, Constant, FnOracle, LinearRamp};

    #[test]
    fn fit_examples() {
        let g = fit_grid(&LinearRamp { d: 1 }, 2, &Budget::default()).unwrap();
        assert_eq!(g.lattice_len(), 1);
        assert_eq!(g.lattice_value(&[1]), Some(0.0));
        let g = fit_grid(&LinearRamp { d: 2 }, 3, &Budget::default()).unwrap();
        assert_eq!(g.lattice_len(), 4);
        let g = fit_grid(&boxbslash(1).unwrap(), 4, &Budget::default()).unwrap();
        let vals: Vec<f64> = (1..4).map(|i| g.lattice_value(&[i]).unwrap()).collect();
        assert_eq!(vals, vec![-1.0, 1.0, 1.0]);
        assert!(fit_grid(&LinearRamp { d: 1 }, 1, &Budget::default()).is_err());
        assert!(matches!(
            fit_grid(&LinearRamp { d: 30 }, 3, &Budget::default()),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        let g = fit_grid(&LinearRamp { d: 1 }, 2, &Budget::default()).unwrap();
        assert_eq!(g.eval_grid(&[0.2]).unwrap(), -0.5);
        assert_eq!(g.eval_grid(&[0.5]).unwrap(), 0.5);
        assert_eq!(g.eval_grid(&[1.0]).unwrap(), 0.5);

        let g = fit_grid(&Constant { d: 2, value: 1.0 }, 2, &Budget::default()).unwrap();
        assert_eq!(g.eval_grid(&[0.1, 0.2]).unwrap(), 0.0);

        let c = 0.3;
        let g = fit_grid(&Constant { d: 2, value: c }, 4, &Budget::default()).unwrap();
        assert!((g.eval_grid(&[0.1, 0.1]).unwrap() - (c - 1.0) / 2.0).abs() < 1e-15);
        assert!((g.eval_grid(&[0.9, 0.9]).unwrap() - (c + 1.0) / 2.0).abs() < 1e-15);
        assert!((g.eval_grid(&[0.4, 0.6]).unwrap() - c).abs() < 1e-15);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(grid_error_bound(1, 4), 0.25);
        assert_eq!(grid_error_bound(2, 2), 1.0);
        for d in 1..6 {
            for eps in [0.3, 0.1, 0.07] {
                let m = grid_size_for(d, eps).unwrap();
                assert!(grid_error_bound(d, m) <= eps);
            }
        }
    }

    #[test]
    fn output_sandwiched_by_corners() {
        let f = LinearRamp { d: 2 };
        let g = fit_grid(&f, 5, &Budget::default()).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let x = [i as f64 / 20.0, j as f64 / 20.0];
                let cell: Vec<u64> = x.iter().map(|&v| cell_of_point_base(v, 5).unwrap()).collect();
                let (lo, hi) = g.corner_bounds(&cell);
                let v = g.eval_grid(&x).unwrap();
                assert!(lo <= v && v <= hi);
            }
        }
    }

    #[test]
    fn non_monotone_input_is_flagged() {
        let f = FnOracle::new(1, |x: &[f64]| -x[0]);
        let g = fit_grid(&f, 4, &Budget::default()).unwrap();
        assert!(!g.is_monotone_consistent());
        let g = fit_grid(&LinearRamp { d: 3 }, 4, &Budget::default()).unwrap();
        assert!(g.is_monotone_consistent());
    }
}
