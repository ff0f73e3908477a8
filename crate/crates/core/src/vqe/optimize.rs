//! Derivative-free minimizers.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use cobyla::{RhoBeg, StopTols, SuccessStatus};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    Cobyla,
    NelderMead,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Cobyla => "cobyla",
            Algorithm::NelderMead => "nelder_mead",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "cobyla" => Ok(Algorithm::Cobyla),
            "nelder_mead" | "neldermead" | "nm" => Ok(Algorithm::NelderMead),
            _ => Err(Error::InvalidArgument(format!(
                "unknown optimizer '{s}' (expected cobyla or nelder_mead)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    /// Initial step (COBYLA trust radius, Nelder-Mead simplex edge).
    pub initial_step: f64,
    /// Final trust radius / simplex size.
    pub xtol: f64,
    /// Nelder-Mead spread of simplex values.
    pub ftol: f64,
    pub max_evaluations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            initial_step: 0.5,
            xtol: 1e-6,
            ftol: 1e-12,
            max_evaluations: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective value of every evaluation, in call order.
    pub history: Vec<f64>,
    pub evaluations: usize,
    /// Stopped by the evaluation budget rather than a tolerance.
    pub exhausted: bool,
}

/// Minimizes `objective` from `x0`. Running out of evaluations is not an
/// error; it is flagged in [`Minimum::exhausted`].
pub fn minimize<F>(objective: F, x0: &[f64], algorithm: Algorithm, opts: &MinimizeOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    if opts.max_evaluations == 0 || opts.initial_step <= 0.0 || opts.xtol <= 0.0 {
        return Err(Error::InvalidArgument(
            "optimizer needs a positive step, tolerance and evaluation budget".into(),
        ));
    }
    let objective = RefCell::new(objective);
    let history = RefCell::new(Vec::new());
    let best = RefCell::new((f64::INFINITY, x0.to_vec()));
    let eval = |x: &[f64]| -> f64 {
        let v = (objective.borrow_mut())(x);
        history.borrow_mut().push(v);
        let mut b = best.borrow_mut();
        if v < b.0 {
            *b = (v, x.to_vec());
        }
        v
    };

    let exhausted = if x0.is_empty() {
        eval(x0);
        false
    } else {
        match algorithm {
            Algorithm::Cobyla => cobyla(&eval, x0, opts)?,
            Algorithm::NelderMead => nelder_mead(&eval, x0, opts),
        }
    };

    let history = history.into_inner();
    let (value, x) = best.into_inner();
    Ok(Minimum {
        x,
        value,
        evaluations: history.len(),
        history,
        exhausted,
    })
}

fn cobyla(eval: &dyn Fn(&[f64]) -> f64, x0: &[f64], opts: &MinimizeOptions) -> Result<bool> {
    let d = x0.len();
    let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); d];
    let no_constraints: &[fn(&[f64], &mut ()) -> f64] = &[];
    let stop = StopTols {
        xtol_abs: vec![opts.xtol; d],
        ..StopTols::default()
    };
    match cobyla::minimize(
        |x: &[f64], _: &mut ()| eval(x),
        x0,
        &bounds,
        no_constraints,
        (),
        opts.max_evaluations,
        RhoBeg::All(opts.initial_step),
        Some(stop),
    ) {
        Ok((status, _, _)) => Ok(matches!(status, SuccessStatus::MaxEvalReached)),
        // Round-off stops still leave the best point recorded.
        Err((cobyla::FailStatus::RoundoffLimited, _, _)) => Ok(false),
        Err((status, _, _)) => Err(Error::InvalidArgument(format!("COBYLA failed: {status:?}"))),
    }
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction ½, shrink ½).
fn nelder_mead(eval: &dyn Fn(&[f64]) -> f64, x0: &[f64], opts: &MinimizeOptions) -> bool {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let mut count = 0usize;
    let call = |x: &[f64], count: &mut usize| {
        *count += 1;
        eval(x)
    };
    simplex.push((x0.to_vec(), call(x0, &mut count)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let f = call(&x, &mut count);
        simplex.push((x, f));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[d].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.ftol && size <= opts.xtol {
            return false;
        }
        if count >= opts.max_evaluations {
            return true;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = call(&xr, &mut count);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = call(&xe, &mut count);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[d].1 {
            let x = along(0.5);
            let f = call(&x, &mut count);
            (x, f)
        } else {
            let x = along(-0.5);
            let f = call(&x, &mut count);
            (x, f)
        };
        if fc < simplex[d].1.min(fr) {
            simplex[d] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = vertex.0.iter().zip(&best).map(|(v, b)| b + 0.5 * (v - b)).collect();
            let f = call(&x, &mut count);
            *vertex = (x, f);
        }
    }
}
