//! Dense complex eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, then single-shift QR with Wilkinson shifts and deflation.

use crate::linalg::Complex;

/// Relative subdiagonal size at which the active block is split.
pub const DEFLATION_EPS: f64 = 1e-14;

const RADIX: f64 = 2.0;

/// Failure of the QR iteration. `found` holds the eigenvalues that had
/// deflated before the step cap was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct NotConverged {
    pub found: Vec<Complex>,
    pub steps: usize,
}

/// Row-major `n×n` working matrix.
struct Work {
    n: usize,
    a: Vec<Complex>,
}

impl Work {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex {
        &mut self.a[i * self.n + j]
    }
}

/// All eigenvalues of the row-major `n×n` matrix `a`, in deflation order.
///
/// At most `max_steps` QR sweeps are performed over the whole reduction.
pub fn eigenvalues(n: usize, a: &[Complex], max_steps: usize) -> Result<Vec<Complex>, NotConverged> {
    assert_eq!(a.len(), n * n);
    let mut w = Work { n, a: a.to_vec() };
    balance(&mut w);
    hessenberg(&mut w);
    hessenberg_qr(&mut w, max_steps)
}

/// Diagonal similarity scaling (powers of two) equalising row and column norms.
fn balance(w: &mut Work) {
    let n = w.n;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += w.at(j, i).l1_norm();
                    r += w.at(i, j).l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    *w.at_mut(i, j) *= inv;
                }
                for j in 0..n {
                    *w.at_mut(j, i) *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm_x: f64 = (k + 1..n).map(|i| w.at(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = w.at(k + 1, k);
        let phase = if x0.norm() == 0.0 { Complex::new(1.0, 0.0) } else { x0 / x0.norm() };
        // v = x + e^{iθ}‖x‖ e_1 sends x to −e^{iθ}‖x‖ e_1
        for i in k + 1..n {
            v[i] = w.at(i, k);
        }
        v[k + 1] += phase * norm_x;
        let vnorm_sq: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm_sq;
        // A ← (I − τ v v^H) A
        for j in k..n {
            let s: Complex = (k + 1..n).map(|i| v[i].conj() * w.at(i, j)).sum();
            let s = s * tau;
            for i in k + 1..n {
                let vi = v[i];
                *w.at_mut(i, j) -= vi * s;
            }
        }
        // A ← A (I − τ v v^H)
        for i in 0..n {
            let s: Complex = (k + 1..n).map(|j| w.at(i, j) * v[j]).sum();
            let s = s * tau;
            for j in k + 1..n {
                let vj = v[j].conj();
                *w.at_mut(i, j) -= s * vj;
            }
        }
        for i in k + 2..n {
            *w.at_mut(i, k) = Complex::new(0.0, 0.0);
        }
    }
}

/// Givens rotation `[c s; −s̄ c]` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens(x: Complex, y: Complex) -> (f64, Complex) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, Complex::new(1.0, 0.0));
    }
    let norm = ax.hypot(ay);
    let c = ax / norm;
    let s = (x / ax) * y.conj() / norm;
    (c, s)
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let l1 = d + half + disc;
    let l2 = d + half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(w: &mut Work, max_steps: usize) -> Result<Vec<Complex>, NotConverged> {
    let n = w.n;
    let mut found = Vec::with_capacity(n);
    let mut rotations: Vec<(f64, Complex)> = Vec::with_capacity(n);
    let mut steps = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            found.push(w.at(0, 0));
            break;
        }
        // locate the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = w.at(lo, lo - 1).norm();
            let mut scale = w.at(lo - 1, lo - 1).norm() + w.at(lo, lo).norm();
            if scale == 0.0 {
                scale = (lo.saturating_sub(1)..=hi.min(lo + 1))
                    .map(|i| w.at(i, i.saturating_sub(1)).norm())
                    .sum();
            }
            if sub <= DEFLATION_EPS * scale {
                *w.at_mut(lo, lo - 1) = Complex::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            found.push(w.at(hi, hi));
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if steps >= max_steps {
            return Err(NotConverged { found, steps });
        }
        steps += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 0 {
            // exceptional shift to break cycles
            let sub = w.at(hi, hi - 1).norm() + if hi >= 2 { w.at(hi - 1, hi - 2).norm() } else { 0.0 };
            w.at(hi, hi) + Complex::new(0.75 * sub, 0.0)
        } else {
            wilkinson_shift(w.at(hi - 1, hi - 1), w.at(hi - 1, hi), w.at(hi, hi - 1), w.at(hi, hi))
        };

        // explicit shifted QR step on rows/cols lo..=hi
        for k in lo..=hi {
            *w.at_mut(k, k) -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let (c, s) = givens(w.at(k, k), w.at(k + 1, k));
            rotations.push((c, s));
            for j in k..=hi {
                let u = w.at(k, j);
                let v = w.at(k + 1, j);
                *w.at_mut(k, j) = u * c + s * v;
                *w.at_mut(k + 1, j) = -s.conj() * u + v * c;
            }
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 1).min(hi) {
                let u = w.at(i, k);
                let v = w.at(i, k + 1);
                *w.at_mut(i, k) = u * c + v * s.conj();
                *w.at_mut(i, k + 1) = -u * s + v * c;
            }
        }
        for k in lo..=hi {
            *w.at_mut(k, k) += shift;
        }
    }
    Ok(found)
}
