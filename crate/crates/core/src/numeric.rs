//! Floating-point building blocks for the log-domain kernel.
//!
//! Log-factorials are kept as unevaluated sums `hi + lo` of two `f64`s so that
//! `ln C(n, s)` keeps roughly 1e-15 absolute accuracy even when the individual
//! log-factorials are in the tens of thousands.

use std::sync::OnceLock;

/// Largest `n` for which the log-factorial table is populated.
pub const MAX_TABLE_N: u32 = 1 << 17;

/// A double-double value `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles, via fused multiply-add.
    pub fn from_product(a: f64, b: f64) -> Self {
        let p = a * b;
        let e = a.mul_add(b, -p);
        Dd { hi: p, lo: e }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `exp(self)` evaluated as `exp(hi) * exp(lo)`; `exp(lo)` is `1 + lo` to working precision.
    pub fn exp(self) -> f64 {
        self.hi.exp() * self.lo.exp()
    }
}

fn log_factorial_table() -> &'static [Dd] {
    static TABLE: OnceLock<Vec<Dd>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(MAX_TABLE_N as usize + 1);
        let mut acc = Dd::default();
        table.push(acc);
        for k in 1..=MAX_TABLE_N {
            acc = acc.add(Dd::from_f64(f64::from(k).ln()));
            table.push(acc);
        }
        table
    })
}

/// `ln(k!)` as a double-double. Panics if `k > MAX_TABLE_N`; callers validate first.
pub(crate) fn ln_factorial_dd(k: u32) -> Dd {
    log_factorial_table()[k as usize]
}

/// `ln(k!)`.
pub fn ln_factorial(k: u32) -> f64 {
    ln_factorial_dd(k).to_f64()
}

/// `ln C(n, s)` as a double-double; requires `s <= n <= MAX_TABLE_N`.
pub(crate) fn ln_binomial_dd(n: u32, s: u32) -> Dd {
    debug_assert!(s <= n);
    ln_factorial_dd(n)
        .sub(ln_factorial_dd(s))
        .sub(ln_factorial_dd(n - s))
}

/// `ln C(n, s)`; `-inf` when `s > n`.
pub fn ln_binomial(n: u32, s: u32) -> f64 {
    if s > n {
        f64::NEG_INFINITY
    } else {
        ln_binomial_dd(n, s).to_f64()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
