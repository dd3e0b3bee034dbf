//! Norms, observation windows and one-norm shell counts on ℤ^d and on the
//! quadrant ℚ(d).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of stored coordinates `enumerate_window` will allocate.
pub const WINDOW_COORD_BUDGET: u128 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    OneNorm,
    TwoNorm,
    SupNorm,
}

impl NormKind {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            NormKind::OneNorm => v.iter().map(|x| x.abs()).sum(),
            NormKind::TwoNorm => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::SupNorm => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            NormKind::OneNorm => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            NormKind::TwoNorm => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            NormKind::SupNorm => a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())),
        }
    }

    /// Lattice models are only defined for the one-norm.
    pub fn require_one_norm(self) -> Result<()> {
        if self == NormKind::OneNorm {
            Ok(())
        } else {
            Err(Error::param(format!(
                "discrete models use the one-norm, got {self:?}"
            )))
        }
    }
}

/// The observation window `[-n, n]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub d: u32,
    pub n: u64,
}

impl Window {
    pub fn new(d: u32, n: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("dimension must be at least 1"));
        }
        Ok(Window { d, n })
    }

    pub fn side(&self) -> u64 {
        2 * self.n + 1
    }

    /// Number of lattice points `(2n+1)^d`.
    pub fn vertex_count(&self) -> Result<u128> {
        let side = self.side() as u128;
        (0..self.d).try_fold(1u128, |acc, _| {
            acc.checked_mul(side)
                .ok_or_else(|| Error::Overflow("window vertex count".into()))
        })
    }

    /// Lebesgue volume `(2n)^d` of the continuous window.
    pub fn volume(&self) -> f64 {
        (2.0 * self.n as f64).powi(self.d as i32)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let n = self.n as i64;
        x.iter().all(|&c| -n <= c && c <= n)
    }

    /// Lexicographic position of a window vertex.
    pub fn index_of(&self, x: &[i64]) -> u64 {
        let side = self.side();
        x.iter()
            .fold(0u64, |acc, &c| acc * side + (c + self.n as i64) as u64)
    }

    /// Inverse of [`Window::index_of`].
    pub fn vertex_at(&self, mut idx: u64, out: &mut [i64]) {
        let side = self.side();
        for slot in out.iter_mut().rev() {
            *slot = (idx % side) as i64 - self.n as i64;
            idx /= side;
        }
    }
}

/// Membership in ℚ(d): first `d-1` coordinates nonnegative, last at least 1.
pub fn in_quadrant(z: &[i64]) -> bool {
    match z.split_last() {
        Some((last, rest)) => *last >= 1 && rest.iter().all(|&c| c >= 0),
        None => false,
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Overflow(format!("binomial({n}, {k})")))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// `N_d(k) = #{y ∈ ℤ^d : ‖y‖₁ = k}`.
pub fn shell_count(d: u32, k: u64) -> Result<u128> {
    if d == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    if k == 0 {
        return Ok(1);
    }
    let overflow = || Error::Overflow(format!("shell_count({d}, {k})"));
    let mut total: u128 = 0;
    for i in 1..=(d as u64).min(k) {
        let term = 1u128
            .checked_shl(i as u32)
            .filter(|_| i < 127)
            .ok_or_else(overflow)?
            .checked_mul(binomial(d as u64, i)?)
            .and_then(|v| v.checked_mul(binomial(k - 1, i - 1).ok()?))
            .ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// `q_d(k) = #{y ∈ ℚ(d) : ‖y‖₁ = k} = C(k+d-2, d-1)`.
pub fn quadrant_shell_count(d: u32, k: u64) -> Result<u128> {
    if d == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    if k == 0 {
        return Ok(0);
    }
    binomial(k + d as u64 - 2, d as u64 - 1)
}

/// Surface constant κ with `∫_{‖x‖>r} f(‖x‖) dx = κ ∫_r^∞ s^{d-1} f(s) ds`.
pub fn surface_constant(norm: NormKind, d: u32) -> f64 {
    let df = d as f64;
    let two_d = 2f64.powi(d as i32);
    match norm {
        NormKind::OneNorm => {
            let fact: f64 = (1..=d).map(|i| i as f64).product();
            df * two_d / fact
        }
        NormKind::SupNorm => df * two_d,
        NormKind::TwoNorm => {
            df * std::f64::consts::PI.powf(df / 2.0) / crate::special::gamma(df / 2.0 + 1.0)
        }
    }
}

/// Lexicographic enumeration of `[-n, n]^d ∩ ℤ^d`.
pub fn enumerate_window(d: u32, n: u64) -> Result<Vec<Vec<i64>>> {
    let window = Window::new(d, n)?;
    let count = window.vertex_count()?;
    let required = count.saturating_mul(d as u128);
    if required > WINDOW_COORD_BUDGET {
        return Err(Error::Budget {
            what: "window enumeration".into(),
            required,
            limit: WINDOW_COORD_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut buf = vec![0i64; d as usize];
    for idx in 0..count as u64 {
        window.vertex_at(idx, &mut buf);
        out.push(buf.clone());
    }
    Ok(out)
}
