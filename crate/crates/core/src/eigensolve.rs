//! Dense non-symmetric complex eigenvalue computation: Householder
//! Hessenberg reduction and explicit single-shift QR iteration with
//! Wilkinson shifts and deflation, plus inverse iteration for eigenvectors
//! and conjugate-pair spectrum classification.


use crate::discrete::{inner, lu_decompose, norm2, scale_vec, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Dense eigensolves refuse matrices beyond this order: the O(n^3) budget
/// is desk-scale by design.
pub const MAX_DENSE_N: usize = 4096;

fn guard_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_N {
        return Err(Error::SizeGuard(format!(
            "dense eigensolve limited to n <= {MAX_DENSE_N}, got {n}"
        )));
    }
    Ok(())
}

/// Householder reduction to upper Hessenberg form.
///
/// Returns (H, Q) with Q unitary and Q^dagger A Q = H.
pub fn hessenberg(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.dim();
    guard_size(n)?;
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return Ok((h, q));
    }
    for k in 0..n - 2 {
        // Householder vector for column k, rows k+1..n
        let mut x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm2(&x);
        // nothing below the subdiagonal: already in Hessenberg form here
        if xnorm == 0.0 || norm2(&x[1..]) == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0 == C64::new(0.0, 0.0) {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        x[0] -= alpha;
        let vnorm = norm2(&x);
        if vnorm == 0.0 {
            continue;
        }
        scale_vec(&mut x, C64::new(1.0 / vnorm, 0.0));
        let v = x; // unit Householder vector over rows/cols k+1..n

        // H <- (I - 2 v v*) H : rows k+1..n
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + idx, j)];
            }
            let two_dot = dot * 2.0;
            for (idx, vi) in v.iter().enumerate() {
                let delta = vi * two_dot;
                h[(k + 1 + idx, j)] -= delta;
            }
        }
        // H <- H (I - 2 v v*) : cols k+1..n
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + idx)] * vi;
            }
            let two_dot = dot * 2.0;
            for (idx, vi) in v.iter().enumerate() {
                let delta = two_dot * vi.conj();
                h[(i, k + 1 + idx)] -= delta;
            }
        }
        // Q <- Q (I - 2 v v*)
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += q[(i, k + 1 + idx)] * vi;
            }
            let two_dot = dot * 2.0;
            for (idx, vi) in v.iter().enumerate() {
                let delta = two_dot * vi.conj();
                q[(i, k + 1 + idx)] -= delta;
            }
        }
        // enforce exact zeros below the subdiagonal in this column
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    Ok((h, q))
}

/// Complex Givens rotation (c real, s complex) with
/// [[c, s], [-conj(s), c]] (a, b)^T = (r, 0)^T.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b == C64::new(0.0, 0.0) {
        return (1.0, C64::new(0.0, 0.0));
    }
    if a == C64::new(0.0, 0.0) {
        return (0.0, b.conj() / b.norm());
    }
    let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / t;
    let s = (a / a.norm()) * b.conj() / t;
    (c, s)
}

/// Eigenvalue of the trailing 2x2 block closest to its lower-right entry.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

struct SchurResult {
    t: ComplexMatrix,
    q: Option<ComplexMatrix>,
}

/// Explicit single-shift QR iteration on an upper-Hessenberg matrix.
/// `q`, when present, accumulates the applied rotations.
fn qr_iterate(
    mut h: ComplexMatrix,
    mut q: Option<ComplexMatrix>,
    tol: f64,
    max_sweeps: usize,
) -> Result<SchurResult> {
    let n = h.dim();
    if n == 0 {
        return Ok(SchurResult { t: h, q });
    }
    let scale = h.max_row_sum().max(f64::MIN_POSITIVE);
    let negligible = |h: &ComplexMatrix, i: usize| -> bool {
        let s = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
        let s = if s == 0.0 { scale } else { s };
        h[(i, i - 1)].norm() <= tol * s
    };

    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    while hi > 0 {
        // deflate converged trailing 1x1 blocks
        if negligible(&h, hi) {
            h[(hi, hi - 1)] = C64::new(0.0, 0.0);
            hi -= 1;
            stalled = 0;
            continue;
        }
        // active block [lo, hi]
        let mut lo = hi;
        while lo > 0 && !negligible(&h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = C64::new(0.0, 0.0);
        }

        if sweeps >= max_sweeps {
            return Err(Error::Convergence(format!(
                "QR iteration exceeded {max_sweeps} sweeps; block {lo}..={hi} not deflated"
            )));
        }
        sweeps += 1;
        stalled += 1;

        let sigma = if stalled % 12 == 0 {
            // exceptional shift to break symmetric stagnation
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            let d = h[(i, i)] - sigma;
            h[(i, i)] = d;
        }
        // left Givens pass: zero the subdiagonal of the shifted block
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let t1 = h[(k, j)];
                let t2 = h[(k + 1, j)];
                h[(k, j)] = C64::new(c, 0.0) * t1 + s * t2;
                h[(k + 1, j)] = -s.conj() * t1 + C64::new(c, 0.0) * t2;
            }
            h[(k + 1, k)] = C64::new(0.0, 0.0);
            rots.push((c, s));
        }
        // right pass: multiply by the adjoints, restoring Hessenberg form
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            let top = (k + 1).min(hi);
            for i in 0..=top {
                let t1 = h[(i, k)];
                let t2 = h[(i, k + 1)];
                h[(i, k)] = C64::new(c, 0.0) * t1 + s.conj() * t2;
                h[(i, k + 1)] = -s * t1 + C64::new(c, 0.0) * t2;
            }
            if let Some(qm) = q.as_mut() {
                for i in 0..n {
                    let t1 = qm[(i, k)];
                    let t2 = qm[(i, k + 1)];
                    qm[(i, k)] = C64::new(c, 0.0) * t1 + s.conj() * t2;
                    qm[(i, k + 1)] = -s * t1 + C64::new(c, 0.0) * t2;
                }
            }
        }
        for i in lo..=hi {
            let d = h[(i, i)] + sigma;
            h[(i, i)] = d;
        }
    }
    Ok(SchurResult { t: h, q })
}

fn default_max_sweeps(n: usize) -> usize {
    40 * n.max(8)
}

/// All n eigenvalues by shifted QR with deflation.
///
/// `tol` controls the deflation threshold (relative to local diagonal
/// scale); `max_sweeps` caps total QR sweeps, 0 meaning the default 40 n.
pub fn qr_eigenvalues(a: &ComplexMatrix, tol: f64, max_sweeps: usize) -> Result<Vec<C64>> {
    let n = a.dim();
    guard_size(n)?;
    if !(tol > 0.0) {
        return Err(Error::spec(format!("QR tolerance must be > 0, got {tol}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (h, _q) = hessenberg(a)?;
    let sweeps = if max_sweeps == 0 {
        default_max_sweeps(n)
    } else {
        max_sweeps
    };
    let res = qr_iterate(h, None, tol, sweeps)?;
    Ok((0..n).map(|i| res.t[(i, i)]).collect())
}

/// Full eigen decomposition: Schur form with accumulated unitary, then
/// triangular back-substitution for the eigenvectors.
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    /// `vectors[k]` is a unit eigenvector for `values[k]`
    pub vectors: Vec<Vec<C64>>,
}

pub fn eigen_decomposition(
    a: &ComplexMatrix,
    tol: f64,
    max_sweeps: usize,
) -> Result<EigenDecomposition> {
    let n = a.dim();
    guard_size(n)?;
    let (h, q) = hessenberg(a)?;
    let sweeps = if max_sweeps == 0 {
        default_max_sweeps(n)
    } else {
        max_sweeps
    };
    let res = qr_iterate(h, Some(q), tol, sweeps)?;
    let t = res.t;
    let q = res.q.expect("accumulated");
    let tnorm = t.max_row_sum().max(f64::MIN_POSITIVE);

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        values.push(lambda);
        // solve (T - lambda) y = 0 with y[k] = 1, y[j>k] = 0
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut rhs = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                rhs += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            // repeated eigenvalue: nudge the denominator at rounding scale
            if denom.norm() < f64::EPSILON * tnorm {
                denom = C64::new(f64::EPSILON * tnorm, 0.0);
            }
            y[i] = -rhs / denom;
        }
        let mut v = q.apply(&y)?;
        let nv = norm2(&v);
        if nv > 0.0 {
            scale_vec(&mut v, C64::new(1.0 / nv, 0.0));
        }
        vectors.push(v);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Inverse iteration with a fixed shift; the shift must lie within
/// backward-error distance of the spectrum.
pub fn eigenvector(a: &ComplexMatrix, lambda: C64) -> Result<Vec<C64>> {
    let n = a.dim();
    guard_size(n)?;
    if n == 0 {
        return Err(Error::Dimension("eigenvector of an empty matrix".into()));
    }
    let anorm = a.max_row_sum().max(f64::MIN_POSITIVE);
    let mut shift = lambda;
    for attempt in 0..3 {
        let mut shifted = a.clone();
        for i in 0..n {
            let d = shifted[(i, i)] - shift;
            shifted[(i, i)] = d;
        }
        let lu = lu_decompose(&shifted);
        // deterministic start vector with incommensurate phases
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::from_polar(1.0, 0.7 * i as f64 + 0.3))
            .collect();
        let nv = norm2(&v);
        scale_vec(&mut v, C64::new(1.0 / nv, 0.0));
        for _ in 0..60 {
            let mut w = lu.solve(&v)?;
            let nw = norm2(&w);
            if !nw.is_finite() || nw == 0.0 {
                break;
            }
            scale_vec(&mut w, C64::new(1.0 / nw, 0.0));
            v = w;
            let av = a.apply(&v)?;
            let mut res = av;
            for (ri, vi) in res.iter_mut().zip(v.iter()) {
                *ri -= lambda * vi;
            }
            if norm2(&res) <= 1e-10 * anorm {
                return Ok(v);
            }
        }
        // residual contract check before giving up on this attempt
        let av = a.apply(&v)?;
        let mut res = av;
        for (ri, vi) in res.iter_mut().zip(v.iter()) {
            *ri -= lambda * vi;
        }
        if norm2(&res) <= 1e-8 * anorm {
            return Ok(v);
        }
        // singular-to-rounding shift: perturb and retry
        shift += C64::new(anorm * 1e-12 * (attempt + 1) as f64, 0.0);
    }
    Err(Error::Convergence(format!(
        "inverse iteration did not reach the residual contract at shift {lambda}"
    )))
}

/// Smallest eigenpair of a Hermitian matrix by inverse iteration at shift 0.
/// Returns the Rayleigh quotient (real) and the eigenvector.
pub fn hermitian_smallest_eigenpair(a: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let n = a.dim();
    guard_size(n)?;
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let lu = lu_decompose(a);
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::from_polar(1.0, 1.1 * i as f64))
        .collect();
    let nv = norm2(&v);
    scale_vec(&mut v, C64::new(1.0 / nv, 0.0));
    let mut rayleigh = f64::INFINITY;
    for _ in 0..80 {
        let mut w = lu.solve(&v)?;
        let nw = norm2(&w);
        if !nw.is_finite() || nw == 0.0 {
            break;
        }
        scale_vec(&mut w, C64::new(1.0 / nw, 0.0));
        v = w;
        let av = a.apply(&v)?;
        let new_rayleigh = inner(&v, &av).re;
        if (new_rayleigh - rayleigh).abs() <= 1e-14 * a.max_row_sum().max(1.0) {
            rayleigh = new_rayleigh;
            break;
        }
        rayleigh = new_rayleigh;
    }
    Ok((rayleigh, v))
}

/// Partition of a computed spectrum into real values, conjugate pairs and
/// unpaired leftovers, within a relative tolerance.
#[derive(Debug, Clone)]
pub struct SpectrumClassification {
    pub eigenvalues: Vec<C64>,
    pub real_set: Vec<usize>,
    pub conjugate_pairs: Vec<(usize, usize)>,
    pub unpaired: Vec<usize>,
    pub tol: f64,
    /// Classification scale: max(1, spectral radius estimate).
    pub scale: f64,
}

impl SpectrumClassification {
    pub fn unpaired_fraction(&self) -> f64 {
        if self.eigenvalues.is_empty() {
            0.0
        } else {
            self.unpaired.len() as f64 / self.eigenvalues.len() as f64
        }
    }

    /// CSV rows (re, im, class) sorted by real part.
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        let mut class = vec!["unpaired"; self.eigenvalues.len()];
        for &i in &self.real_set {
            class[i] = "real";
        }
        for &(i, j) in &self.conjugate_pairs {
            class[i] = "pair";
            class[j] = "pair";
        }
        let mut order: Vec<usize> = (0..self.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| {
            self.eigenvalues[a]
                .re
                .total_cmp(&self.eigenvalues[b].re)
                .then(self.eigenvalues[a].im.total_cmp(&self.eigenvalues[b].im))
        });
        writeln!(out, "re,im,class")?;
        for idx in order {
            let z = self.eigenvalues[idx];
            writeln!(out, "{:.16e},{:.16e},{}", z.re, z.im, class[idx])?;
        }
        Ok(())
    }
}

/// Greedy classification: near-real values first, then nearest-conjugate
/// matching, leftovers unpaired.
pub fn spectrum_classify(eigenvalues: &[C64], tol: f64) -> SpectrumClassification {
    let scale = eigenvalues
        .iter()
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let thresh = tol * scale;
    let n = eigenvalues.len();
    let mut real_set = Vec::new();
    let mut rest: Vec<usize> = Vec::new();
    for (i, z) in eigenvalues.iter().enumerate() {
        if z.im.abs() <= thresh {
            real_set.push(i);
        } else {
            rest.push(i);
        }
    }
    let mut used = vec![false; n];
    let mut conjugate_pairs = Vec::new();
    let mut unpaired = Vec::new();
    for idx_pos in 0..rest.len() {
        let i = rest[idx_pos];
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut best: Option<(usize, f64)> = None;
        for &j in rest.iter().skip(idx_pos + 1) {
            if used[j] {
                continue;
            }
            let d = (eigenvalues[i] - eigenvalues[j].conj()).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= thresh => {
                used[j] = true;
                conjugate_pairs.push((i, j));
            }
            _ => unpaired.push(i),
        }
    }
    SpectrumClassification {
        eigenvalues: eigenvalues.to_vec(),
        real_set,
        conjugate_pairs,
        unpaired,
        tol,
        scale,
    }
}
