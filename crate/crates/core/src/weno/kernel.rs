//! Scalar WENO reconstruction of order 2r - 1.
//!
//! Coefficients are derived once in exact rational arithmetic: candidate
//! interpolants come from inverting the cell-average moment matrix, linear
//! weights from matching the big-stencil interpolant, and smoothness
//! indicators from the quadratic form Σ_l ∫ (p^(l))² written as a weighted
//! sum of squares.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Largest supported order parameter.
pub const MAX_R: usize = 5;
/// Largest window length, 2 * MAX_R - 1.
pub const MAX_WINDOW: usize = 2 * MAX_R - 1;

/// Exact coefficient tables for one order parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalCoefficients {
    pub r: usize,
    /// `candidate[k][l]`: weight of cell `k + l` in the k-th stencil's value at the right face.
    pub candidate: Vec<Vec<BigRational>>,
    /// Weights of the 2r - 1 cells in the optimal (big-stencil) value.
    pub optimal: Vec<BigRational>,
    /// Linear weights d_k, summing to one.
    pub linear: Vec<BigRational>,
    /// `indicator[k]`: symmetric r x r matrix B with β_k = wᵀ B w.
    pub indicator: Vec<Vec<Vec<BigRational>>>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow(x: &BigRational, n: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..n {
        out *= x;
    }
    out
}

/// Average of xⁿ over the unit cell centered at integer offset `s`.
fn moment(s: i64, n: usize) -> BigRational {
    let half = rat(1, 2);
    let hi = BigRational::from_integer(BigInt::from(s)) + &half;
    let lo = BigRational::from_integer(BigInt::from(s)) - &half;
    (pow(&hi, n + 1) - pow(&lo, n + 1)) / BigRational::from_integer(BigInt::from(n as i64 + 1))
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("moment matrix is nonsingular");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[i][j] = &a[i][j] - t;
                    let t = &f * &inv[col][j];
                    inv[i][j] = &inv[i][j] - t;
                }
            }
        }
    }
    inv
}

/// Face-value weights for cells at offsets `first..first + len` from the center cell.
fn face_weights(first: i64, len: usize) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let m: Vec<Vec<BigRational>> = (0..len)
        .map(|i| (0..len).map(|n| moment(first + i as i64, n)).collect())
        .collect();
    let minv = invert(m);
    let half = rat(1, 2);
    let weights = (0..len)
        .map(|i| (0..len).fold(BigRational::zero(), |acc, n| acc + pow(&half, n) * &minv[n][i]))
        .collect();
    (weights, minv)
}

fn falling(n: usize, l: usize) -> BigRational {
    let mut out = BigRational::one();
    for k in 0..l {
        out *= BigRational::from_integer(BigInt::from((n - k) as i64));
    }
    out
}

/// ∫_{-1/2}^{1/2} x^a dx.
fn unit_integral(a: usize) -> BigRational {
    if a % 2 == 1 {
        BigRational::zero()
    } else {
        rat(2, 1) * pow(&rat(1, 2), a + 1) / BigRational::from_integer(BigInt::from(a as i64 + 1))
    }
}

impl RationalCoefficients {
    pub fn derive(r: usize) -> Result<Self> {
        if r == 0 || r > MAX_R {
            return Err(SolverError::Config(format!("unsupported WENO order parameter r = {r}")));
        }
        let center = r as i64 - 1;
        let mut candidate = Vec::with_capacity(r);
        let mut indicator = Vec::with_capacity(r);
        for k in 0..r {
            let (weights, minv) = face_weights(k as i64 - center, r);
            candidate.push(weights);

            // Q[n][n'] = Σ_l fall(n,l) fall(n',l) ∫ x^{n+n'-2l}
            let mut q = vec![vec![BigRational::zero(); r]; r];
            for (n, row) in q.iter_mut().enumerate() {
                for (np, qv) in row.iter_mut().enumerate() {
                    for l in 1..r {
                        if n >= l && np >= l {
                            *qv += falling(n, l) * falling(np, l) * unit_integral(n + np - 2 * l);
                        }
                    }
                }
            }
            // B = M⁻ᵀ Q M⁻¹ acting on cell averages.
            let mut b = vec![vec![BigRational::zero(); r]; r];
            for i in 0..r {
                for j in 0..r {
                    let mut acc = BigRational::zero();
                    for n in 0..r {
                        for np in 0..r {
                            acc += &minv[n][i] * &q[n][np] * &minv[np][j];
                        }
                    }
                    b[i][j] = acc;
                }
            }
            indicator.push(b);
        }

        let (optimal, _) = face_weights(-center, 2 * r - 1);
        let mut linear = vec![BigRational::zero(); r];
        for i in 0..r {
            let mut rest = optimal[i].clone();
            for (k, dk) in linear.iter().enumerate().take(i) {
                rest -= dk * &candidate[k][i - k];
            }
            linear[i] = rest / &candidate[i][0];
        }
        for (i, target) in optimal.iter().enumerate().skip(r) {
            let mut acc = BigRational::zero();
            for (k, dk) in linear.iter().enumerate() {
                if i >= k && i - k < r {
                    acc += dk * &candidate[k][i - k];
                }
            }
            if &acc != target {
                return Err(SolverError::Config(format!(
                    "linear weights do not reproduce the optimal stencil for r = {r}"
                )));
            }
        }
        Ok(Self {
            r,
            candidate,
            optimal,
            linear,
            indicator,
        })
    }

    /// Writes indicator `k` as Σ_j c_j (ℓ_j · w)² via LDLᵀ (the last pivot vanishes).
    pub fn indicator_squares(&self, k: usize) -> Vec<(BigRational, Vec<BigRational>)> {
        let r = self.r;
        let b = &self.indicator[k];
        let mut l = vec![vec![BigRational::zero(); r]; r];
        let mut d = vec![BigRational::zero(); r];
        for j in 0..r {
            let mut dj = b[j][j].clone();
            for p in 0..j {
                dj -= &l[j][p] * &l[j][p] * &d[p];
            }
            d[j] = dj;
            l[j][j] = BigRational::one();
            for i in j + 1..r {
                let mut v = b[i][j].clone();
                for p in 0..j {
                    v -= &l[i][p] * &l[j][p] * &d[p];
                }
                l[i][j] = if d[j].is_zero() { BigRational::zero() } else { v / &d[j] };
            }
        }
        (0..r)
            .filter(|&j| !d[j].is_zero())
            .map(|j| (d[j].clone(), (0..r).map(|i| l[i][j].clone()).collect()))
            .collect()
    }
}

fn to_real<T: Real>(x: &BigRational) -> T {
    T::of(x.to_f64().expect("finite rational coefficient"))
}

/// Floating-point WENO kernel for a fixed order parameter.
#[derive(Clone, Debug)]
pub struct WenoKernel<T> {
    r: usize,
    eps: T,
    candidate: [[T; MAX_R]; MAX_R],
    linear: [T; MAX_R],
    /// Per stencil: weights and row vectors of the sum-of-squares form.
    sq_weight: [[T; MAX_R]; MAX_R],
    sq_rows: [[[T; MAX_R]; MAX_R]; MAX_R],
    sq_len: [usize; MAX_R],
}

/// Indicator floor used in the nonlinear weights.
pub const DEFAULT_WENO_EPS: f64 = 1e-6;

impl<T: Real> WenoKernel<T> {
    pub fn new(r: usize) -> Result<Self> {
        Self::with_eps(r, T::of(DEFAULT_WENO_EPS))
    }

    pub fn with_eps(r: usize, eps: T) -> Result<Self> {
        if r != 3 && r != 5 {
            return Err(SolverError::Config(format!(
                "WENO order parameter must be 3 or 5, got {r}"
            )));
        }
        Self::from_rational(&RationalCoefficients::derive(r)?, eps)
    }

    /// Builds a kernel for any r ≤ 5, including r = 1 (first order).
    pub fn from_rational(c: &RationalCoefficients, eps: T) -> Result<Self> {
        let r = c.r;
        if r == 0 || r > MAX_R || !(eps > T::zero()) {
            return Err(SolverError::Config(format!("invalid WENO kernel (r = {r}, eps = {eps})")));
        }
        let z = T::zero();
        let mut out = Self {
            r,
            eps,
            candidate: [[z; MAX_R]; MAX_R],
            linear: [z; MAX_R],
            sq_weight: [[z; MAX_R]; MAX_R],
            sq_rows: [[[z; MAX_R]; MAX_R]; MAX_R],
            sq_len: [0; MAX_R],
        };
        for k in 0..r {
            for l in 0..r {
                out.candidate[k][l] = to_real(&c.candidate[k][l]);
            }
            out.linear[k] = to_real(&c.linear[k]);
            let squares = c.indicator_squares(k);
            out.sq_len[k] = squares.len();
            for (j, (w, row)) in squares.iter().enumerate() {
                debug_assert!(w.is_positive());
                out.sq_weight[k][j] = to_real(w);
                for (i, x) in row.iter().enumerate() {
                    out.sq_rows[k][j][i] = to_real(x);
                }
            }
        }
        Ok(out)
    }

    #[inline(always)]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline(always)]
    pub fn window_len(&self) -> usize {
        2 * self.r - 1
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn linear_weights(&self) -> &[T] {
        &self.linear[..self.r]
    }

    /// Smoothness indicator of candidate stencil `k`.
    #[inline(always)]
    pub fn indicator(&self, w: &[T], k: usize) -> T {
        let mut beta = T::zero();
        for j in 0..self.sq_len[k] {
            let row = &self.sq_rows[k][j];
            let mut s = T::zero();
            for i in 0..self.r {
                s = s + row[i] * w[k + i];
            }
            beta = beta + self.sq_weight[k][j] * s * s;
        }
        beta
    }

    /// Candidate value of stencil `k` at the right face of the center cell.
    #[inline(always)]
    pub fn candidate_value(&self, w: &[T], k: usize) -> T {
        w[self.r - 1] + self.candidate_offset(w, k)
    }

    /// Candidate value minus the center cell value; coefficients sum to one,
    /// so constant windows give exactly zero.
    #[inline(always)]
    fn candidate_offset(&self, w: &[T], k: usize) -> T {
        let c = w[self.r - 1];
        let mut s = T::zero();
        for l in 0..self.r {
            s = s + self.candidate[k][l] * (w[k + l] - c);
        }
        s
    }

    /// Normalized nonlinear weights ω_k.
    pub fn nonlinear_weights(&self, w: &[T]) -> Vec<T> {
        let mut alpha = [T::zero(); MAX_R];
        let total = self.alphas(w, &mut alpha);
        alpha[..self.r].iter().map(|&a| a / total).collect()
    }

    #[inline(always)]
    fn alphas(&self, w: &[T], alpha: &mut [T; MAX_R]) -> T {
        let mut total = T::zero();
        for k in 0..self.r {
            let e = self.eps + self.indicator(w, k);
            alpha[k] = self.linear[k] / (e * e);
            total = total + alpha[k];
        }
        total
    }

    /// Left-limited value at the right face of the center cell of `w`.
    #[inline(always)]
    pub fn left_value(&self, w: &[T]) -> T {
        debug_assert_eq!(w.len(), self.window_len());
        if self.r == 1 {
            return w[0];
        }
        let mut alpha = [T::zero(); MAX_R];
        let total = self.alphas(w, &mut alpha);
        let mut acc = T::zero();
        for k in 0..self.r {
            acc = acc + alpha[k] * self.candidate_offset(w, k);
        }
        w[self.r - 1] + acc / total
    }

    /// Right-limited value at the left face of the center cell of `w`.
    #[inline(always)]
    pub fn right_value(&self, w: &[T]) -> T {
        let n = self.window_len();
        let mut rev = [T::zero(); MAX_WINDOW];
        for i in 0..n {
            rev[i] = w[n - 1 - i];
        }
        self.left_value(&rev[..n])
    }

    /// Linear (optimal-weight) value, used for accuracy diagnostics.
    pub fn linear_value(&self, w: &[T]) -> T {
        let mut acc = T::zero();
        for k in 0..self.r {
            acc = acc + self.linear[k] * self.candidate_offset(w, k);
        }
        w[self.r - 1] + acc
    }
}

/// Left-limited value of a window of length 2r - 1 (r ∈ {3, 5}).
pub fn weno_left_value<T: Real>(w: &[T]) -> Result<T> {
    let kernel = kernel_for_len(w.len())?;
    Ok(kernel.left_value(w))
}

/// Right-limited value; equals `weno_left_value` of the reversed window.
pub fn weno_right_value<T: Real>(w: &[T]) -> Result<T> {
    let kernel = kernel_for_len(w.len())?;
    Ok(kernel.right_value(w))
}

fn kernel_for_len<T: Real>(len: usize) -> Result<WenoKernel<T>> {
    match len {
        5 => WenoKernel::new(3),
        9 => WenoKernel::new(5),
        _ => Err(SolverError::Config(format!(
            "window length must be 5 or 9, got {len}"
        ))),
    }
}
