//! Truncated Taylor-series ("jet") arithmetic in one variable.
//!
//! A `Jet` stores the coefficients `c_0 .. c_D` of a function expanded
//! around some base point of the independent variable; arithmetic is exact
//! truncated-series algebra at order `D`. Used to propagate τ-derivatives
//! through the elliptic-integral recurrences.

use std::ops::{Add, Mul, Neg, Sub};

/// Truncated Taylor series with coefficients `c_0 .. c_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub coeffs: Vec<f64>,
}

impl Jet {
    /// A constant: `c_0 = value`, all higher coefficients zero.
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The identity variable around `base`: value `base`, first derivative 1.
    pub fn variable(base: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = base;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// k-th derivative at the base point: `k! * c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        assert!(k <= self.order(), "jet order {} too low for derivative {k}", self.order());
        let mut fact = 1.0;
        for i in 1..=k {
            fact *= i as f64;
        }
        self.coeffs[k] * fact
    }

    /// The jet of the derivative function, one order shorter.
    pub fn differentiate(&self) -> Jet {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        let coeffs = (1..self.coeffs.len())
            .map(|k| k as f64 * self.coeffs[k])
            .collect();
        Jet { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order());
        Jet {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Truncated reciprocal; requires `c_0 != 0`.
    pub fn recip(&self) -> Jet {
        assert!(self.coeffs[0] != 0.0, "jet reciprocal at zero");
        let d = self.order();
        let mut out = vec![0.0; d + 1];
        out[0] = 1.0 / self.coeffs[0];
        for k in 1..=d {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc / self.coeffs[0];
        }
        Jet { coeffs: out }
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self * &other.recip()
    }

    /// Truncated exponential.
    pub fn exp(&self) -> Jet {
        let d = self.order();
        let mut out = vec![0.0; d + 1];
        out[0] = self.coeffs[0].exp();
        // e' = e * f'  =>  (k+1) e_{k+1} = Σ_{j} (j+1) f_{j+1} e_{k-j}
        for k in 0..d {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += (j + 1) as f64 * self.coeffs[j + 1] * out[k - j];
            }
            out[k + 1] = acc / (k + 1) as f64;
        }
        Jet { coeffs: out }
    }

    /// Truncated square root; requires `c_0 > 0`.
    pub fn sqrt(&self) -> Jet {
        assert!(self.coeffs[0] > 0.0, "jet sqrt at non-positive base");
        let d = self.order();
        let mut out = vec![0.0; d + 1];
        out[0] = self.coeffs[0].sqrt();
        // (s^2)_k = f_k  =>  2 s_0 s_k = f_k - Σ_{j=1}^{k-1} s_j s_{k-j}
        for k in 1..=d {
            let mut acc = 0.0;
            for j in 1..k {
                acc += out[j] * out[k - j];
            }
            out[k] = (self.coeffs[k] - acc) / (2.0 * out[0]);
        }
        Jet { coeffs: out }
    }

    /// Evaluates a power series `Σ a_n x^n` at this jet by Horner's scheme.
    pub fn eval_series(&self, series: &[f64]) -> Jet {
        let d = self.order();
        let mut acc = Jet::constant(0.0, d);
        for &a in series.iter().rev() {
            acc = &acc * self;
            acc.coeffs[0] += a;
        }
        acc
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        let d = self.order();
        let mut out = vec![0.0; d + 1];
        for k in 0..=d {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            out[k] = acc;
        }
        Jet { coeffs: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
