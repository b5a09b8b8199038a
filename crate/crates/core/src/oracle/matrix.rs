use crate::error::{Error, Result};
use matrixmultiply::{zgemm, CGemmOption};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Taylor degree of the scaled exponential; `1/19!` is below `1e-17`.
const TAYLOR_DEGREE: usize = 18;
/// Paterson-Stockmeyer block size for degree 18.
const PS_BLOCK: usize = 4;
/// Largest 1-norm accepted by [`FockMatrix::exp`].
pub const MAX_EXP_NORM: f64 = 1e12;

/// Dense complex square matrix in row-major order, indexed by Fock states
/// `|0⟩..|dim−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        FockMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        FockMatrix { dim, data }
    }

    /// Annihilation operator, `a[n−1, n] = √n`.
    pub fn annihilation(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for n in 1..dim {
            m.data[(n - 1) * dim + n] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        m
    }

    /// Creation operator, the adjoint of [`FockMatrix::annihilation`].
    pub fn creation(dim: usize) -> Self {
        Self::annihilation(dim).adjoint()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_note(&self) -> String {
        format!("Fock basis |0⟩..|{}⟩", self.dim.saturating_sub(1))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FockMatrix { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn add(&self, other: &FockMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        FockMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &FockMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        FockMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// `self += s · other`
    fn axpy(&mut self, s: Complex64, other: &FockMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    fn add_diagonal(&mut self, s: Complex64) {
        for i in 0..self.dim {
            self.data[i * self.dim + i] += s;
        }
    }

    /// Leading `size × size` block.
    pub fn leading_block(&self, size: usize) -> Self {
        assert!(size <= self.dim);
        Self::from_fn(size, |i, j| self.get(i, j))
    }

    pub fn matmul(&self, other: &FockMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        if n == 0 {
            return out;
        }
        let rs = n as isize;
        // SAFETY: Complex64 is #[repr(C)] { re, im }, layout-identical to
        // [f64; 2]; all three buffers hold n·n elements with row stride n.
        unsafe {
            zgemm(
                CGemmOption::Standard,
                CGemmOption::Standard,
                n,
                n,
                n,
                [1.0, 0.0],
                self.data.as_ptr() as *const [f64; 2],
                rs,
                1,
                other.data.as_ptr() as *const [f64; 2],
                rs,
                1,
                [0.0, 0.0],
                out.data.as_mut_ptr() as *mut [f64; 2],
                rs,
                1,
            );
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.dim).map(|j| (0..self.dim).map(|i| self.get(i, j).norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value by power iteration on `A⁺A`.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.dim;
        if n == 0 {
            return 0.0;
        }
        let fro = self.frobenius();
        if fro == 0.0 {
            return 0.0;
        }
        let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.01 * i as f64, 0.0)).collect();
        let mut sigma = 0.0;
        for _ in 0..500 {
            let av = self.apply(&v);
            let w = self.apply_adjoint(&av);
            let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next = norm.sqrt();
            v = w.into_iter().map(|c| c / norm).collect();
            if (next - sigma).abs() <= 1e-12 * next {
                sigma = next;
                break;
            }
            sigma = next;
        }
        sigma.min(fro)
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|j| (0..self.dim).map(|i| self.get(i, j).conj() * v[i]).sum()).collect()
    }

    /// `e^M` by scaling and squaring around a degree-18 Taylor polynomial
    /// evaluated with the Paterson-Stockmeyer scheme.
    pub fn exp(&self) -> Result<FockMatrix> {
        if self.data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::domain("matrix_exponential", "matrix has non-finite entries"));
        }
        let norm = self.norm1();
        if norm > MAX_EXP_NORM {
            return Err(Error::Overflow {
                func: "matrix_exponential",
                detail: format!("1-norm {norm:e} exceeds {MAX_EXP_NORM:e}"),
            });
        }
        let squarings = if norm <= 1.0 { 0 } else { norm.log2().ceil() as i32 };
        let a = self.scale(Complex64::new(2f64.powi(-squarings), 0.0));
        let mut t = taylor_ps(&a);
        for _ in 0..squarings {
            t = t.matmul(&t);
        }
        Ok(t)
    }
}

fn taylor_ps(a: &FockMatrix) -> FockMatrix {
    let n = a.dim();
    let mut coef = [0.0f64; TAYLOR_DEGREE + 1];
    coef[0] = 1.0;
    for k in 1..=TAYLOR_DEGREE {
        coef[k] = coef[k - 1] / k as f64;
    }
    // powers A^1..A^{PS_BLOCK}
    let mut pows = vec![a.clone()];
    for _ in 1..PS_BLOCK {
        let next = pows.last().expect("non-empty").matmul(a);
        pows.push(next);
    }
    let y = pows.pop().expect("A^4");
    let block = |j: usize| {
        let mut b = FockMatrix::zeros(n);
        b.add_diagonal(Complex64::new(coef[PS_BLOCK * j], 0.0));
        for (i, p) in pows.iter().enumerate() {
            let idx = PS_BLOCK * j + i + 1;
            if idx <= TAYLOR_DEGREE {
                b.axpy(Complex64::new(coef[idx], 0.0), p);
            }
        }
        b
    };
    let top = TAYLOR_DEGREE / PS_BLOCK;
    let mut acc = block(top);
    for j in (0..top).rev() {
        acc = acc.matmul(&y).add(&block(j));
    }
    acc
}

/// `e^M` (see [`FockMatrix::exp`]).
pub fn matrix_exponential(m: &FockMatrix) -> Result<FockMatrix> {
    m.exp()
}
