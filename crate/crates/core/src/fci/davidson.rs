//! Block Davidson eigensolver for the lowest eigenpairs of a real symmetric
//! operator, with a diagonal preconditioner and thick restart.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DavidsonOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub max_subspace: usize,
    pub restart_size: usize,
}

impl Default for DavidsonOptions {
    fn default() -> Self {
        DavidsonOptions {
            tol: 1e-8,
            max_iterations: 500,
            max_subspace: 30,
            restart_size: 5,
        }
    }
}

pub struct DavidsonResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Lowest `k` eigenpairs of the operator `apply(x, y): y = A x`.
pub fn davidson<F>(apply: F, diagonal: &[f64], k: usize, opts: &DavidsonOptions) -> Result<DavidsonResult>
where
    F: Fn(&[f64], &mut [f64]),
{
    let dim = diagonal.len();
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!(
            "requested {k} roots of a {dim}-dimensional operator"
        )));
    }
    let max_subspace = opts.max_subspace.max(3 * k).min(dim);
    let restart = opts.restart_size.max(k).min(max_subspace);

    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut images: Vec<DVector<f64>> = Vec::new();

    // Unit vectors on the smallest diagonal entries.
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| diagonal[a].total_cmp(&diagonal[b]).then(a.cmp(&b)));
    for &i in order.iter().take(k) {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        push_vector(&mut basis, &mut images, v, &apply);
    }

    let mut last_residual = f64::INFINITY;
    for iteration in 1..=opts.max_iterations {
        let m = basis.len();
        let projected = DMatrix::from_fn(m, m, |i, j| basis[i].dot(&images[j]));
        let projected = (&projected + projected.transpose()) * 0.5;
        let eig = SymmetricEigen::new(projected);
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let ritz = |col: usize, set: &[DVector<f64>]| -> DVector<f64> {
            let y = eig.eigenvectors.column(col);
            let mut out = DVector::zeros(dim);
            for (v, c) in set.iter().zip(y.iter()) {
                out.axpy(*c, v, 1.0);
            }
            out
        };

        let mut corrections = Vec::new();
        let mut worst: f64 = 0.0;
        let mut values = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        for &col in idx.iter().take(k) {
            let theta = eig.eigenvalues[col];
            let x = ritz(col, &basis);
            let ax = ritz(col, &images);
            let r = &ax - &x * theta;
            let rn = r.norm();
            worst = worst.max(rn);
            if rn >= opts.tol {
                let t = DVector::from_fn(dim, |i, _| {
                    let d = theta - diagonal[i];
                    let d = if d.abs() < 1e-8 { 1e-8f64.copysign(d) } else { d };
                    r[i] / d
                });
                corrections.push(t);
            }
            values.push(theta);
            vectors.push(x);
        }
        last_residual = worst;
        if corrections.is_empty() {
            return Ok(DavidsonResult {
                eigenvalues: values,
                eigenvectors: vectors.into_iter().map(|v| v.as_slice().to_vec()).collect(),
                iterations: iteration,
            });
        }

        if basis.len() + corrections.len() > max_subspace {
            let keep: Vec<DVector<f64>> = idx.iter().take(restart).map(|&c| ritz(c, &basis)).collect();
            let keep_images: Vec<DVector<f64>> =
                idx.iter().take(restart).map(|&c| ritz(c, &images)).collect();
            basis = keep;
            images = keep_images;
            reorthonormalize(&mut basis, &mut images);
        }

        let before = basis.len();
        for t in corrections {
            if basis.len() >= max_subspace {
                break;
            }
            push_vector(&mut basis, &mut images, t, &apply);
        }
        if basis.len() == before {
            // Subspace exhausted or stagnated.
            if basis.len() == dim {
                continue;
            }
            return Err(Error::NotConverged {
                iterations: iteration,
                residual: worst,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iterations,
        residual: last_residual,
    })
}

/// Gram-Schmidt (twice) against the current basis; appends `v` and `A v`
/// if anything survives.
fn push_vector<F>(basis: &mut Vec<DVector<f64>>, images: &mut Vec<DVector<f64>>, mut v: DVector<f64>, apply: &F)
where
    F: Fn(&[f64], &mut [f64]),
{
    let initial = v.norm();
    if initial == 0.0 {
        return;
    }
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
    }
    let n = v.norm();
    if n < 1e-10 * initial.max(1.0) || n < 1e-14 {
        return;
    }
    v /= n;
    let mut av = DVector::zeros(v.len());
    apply(v.as_slice(), av.as_mut_slice());
    basis.push(v);
    images.push(av);
}

/// Restores orthonormality after a restart, transforming images alongside.
fn reorthonormalize(basis: &mut [DVector<f64>], images: &mut [DVector<f64>]) {
    for i in 0..basis.len() {
        for j in 0..i {
            let c = basis[j].dot(&basis[i]);
            let (lo, hi) = basis.split_at_mut(i);
            hi[0].axpy(-c, &lo[j], 1.0);
            let (lo, hi) = images.split_at_mut(i);
            hi[0].axpy(-c, &lo[j], 1.0);
        }
        let n = basis[i].norm();
        basis[i] /= n;
        images[i] /= n;
    }
}
