//! Bessel functions of the first kind, their derivatives and positive zeros,
//! plus the squared `L²(D)` norms of the steady disk modes.
//!
//! Small arguments use the defining power series. Larger arguments use
//! Miller's backward recurrence normalized by `J₀ + 2ΣJ₂ₖ = 1`, which keeps
//! the absolute error near machine precision well beyond `|s| = 50`.

use std::collections::BTreeMap;
use std::sync::RwLock;

use crate::error::SpecialFnError;
use crate::quad;
use crate::scalar::Real;

/// Above this `|s|` the power series loses digits to cancellation.
const SERIES_LIMIT: f64 = 6.0;

/// Bessel function of the first kind `J_n(s)`.
pub fn bessel_j<T: Real>(n: u32, s: T) -> Result<T, SpecialFnError> {
    if !s.is_finite() {
        return Err(SpecialFnError::InvalidArgument(format!(
            "J_{n} evaluated at non-finite argument {s}"
        )));
    }
    Ok(jn(n, s))
}

/// Derivative `dJ_n/ds`.
pub fn bessel_j_prime<T: Real>(n: u32, s: T) -> Result<T, SpecialFnError> {
    if !s.is_finite() {
        return Err(SpecialFnError::InvalidArgument(format!(
            "J_{n}' evaluated at non-finite argument {s}"
        )));
    }
    Ok(jn_prime(n, s))
}

pub(crate) fn jn<T: Real>(n: u32, s: T) -> T {
    let x = s.abs();
    let v = if x == T::zero() {
        if n == 0 {
            T::one()
        } else {
            T::zero()
        }
    } else if x <= T::lit(SERIES_LIMIT) {
        series(n, x)
    } else {
        miller(n, x)
    };
    if s < T::zero() && n % 2 == 1 {
        -v
    } else {
        v
    }
}

pub(crate) fn jn_prime<T: Real>(n: u32, s: T) -> T {
    if n == 0 {
        -jn(1, s)
    } else {
        (jn(n - 1, s) - jn(n + 1, s)) * T::lit(0.5)
    }
}

fn series<T: Real>(n: u32, x: T) -> T {
    let half = x * T::lit(0.5);
    let mut term = T::one();
    for i in 1..=n {
        term = term * half / T::from_u32(i).unwrap();
    }
    let q = -(half * half);
    let mut sum = term;
    let mut i = 0u32;
    loop {
        i += 1;
        term = term * q / (T::from_u32(i).unwrap() * T::from_u32(n + i).unwrap());
        sum += term;
        if term.abs() <= T::epsilon() * T::lit(1e-2) * sum.abs().max(T::min_positive_value())
            || i > 200
        {
            break;
        }
    }
    sum
}

fn miller<T: Real>(n: u32, x: T) -> T {
    let top = (n as f64).max(x.to_f64_lossy());
    let mut m = (top + 40.0 + 2.0 * top.sqrt()).ceil() as u32;
    m += m % 2;
    let two_over_x = T::lit(2.0) / x;
    let rescale_at = T::lit(1e10);
    let shrink = T::lit(1e-10);
    let mut next = T::zero(); // b_{k+1}
    let mut cur = T::lit(1e-20); // b_k, starting at k = m
    let mut sum = T::zero();
    let mut target = if n == m { cur } else { T::zero() };
    let mut k = m;
    while k > 0 {
        if k % 2 == 0 {
            sum += cur * T::lit(2.0);
        }
        let prev = T::from_u32(k).unwrap() * two_over_x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if k == n {
            target = cur;
        }
        if cur.abs() > rescale_at {
            cur = cur * shrink;
            next = next * shrink;
            sum = sum * shrink;
            target = target * shrink;
        }
    }
    // cur now holds b_0
    sum += cur;
    target / sum
}

fn zero_search<T: Real>(n: u32, k: u32) -> Result<T, SpecialFnError> {
    if k == 0 {
        return Err(SpecialFnError::InvalidArgument(
            "zero index k must be at least 1".into(),
        ));
    }
    let step = T::lit(0.25);
    let mut a = T::from_u32(n).unwrap();
    let mut fa = jn(n, a);
    let mut found = 0u32;
    let limit = 100_000u32;
    for _ in 0..limit {
        let b = a + step;
        let fb = jn(n, b);
        if fa != T::zero() && (fa < T::zero()) != (fb < T::zero()) {
            found += 1;
            if found == k {
                return polish(n, k, a, b, fa);
            }
        }
        a = b;
        fa = fb;
    }
    Err(SpecialFnError::NoConvergence { n, k })
}

fn polish<T: Real>(n: u32, k: u32, mut lo: T, mut hi: T, flo: T) -> Result<T, SpecialFnError> {
    let half = T::lit(0.5);
    let coarse = T::lit(1e-6).max(T::epsilon() * T::lit(64.0) * hi);
    while hi - lo > coarse {
        let mid = (lo + hi) * half;
        let fm = jn(n, mid);
        if (fm < T::zero()) == (flo < T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = (lo + hi) * half;
    for _ in 0..50 {
        let d = jn_prime(n, s);
        if d == T::zero() {
            break;
        }
        let delta = jn(n, s) / d;
        s -= delta;
        if delta.abs() <= T::lit(4.0) * T::epsilon() * s.abs() {
            return Ok(s);
        }
    }
    if jn(n, s).abs() <= T::epsilon().sqrt() {
        Ok(s)
    } else {
        Err(SpecialFnError::NoConvergence { n, k })
    }
}

/// The `k`-th positive zero `j_{n,k}` of `J_n` (`k ≥ 1`).
///
/// Brackets by scanning with a step well below the zero spacing, bisects to
/// `1e-6` and finishes with Newton iterations on `J_n / J_n'`.
pub fn bessel_zero<T: Real>(n: u32, k: u32) -> Result<T, SpecialFnError> {
    zero_search(n, k)
}

/// `j = j_{1,1}`, the wavenumber of the steady space.
pub fn steady_wavenumber<T: Real>() -> T {
    bessel_zero(1, 1).expect("first zero of J_1 exists")
}

/// Memoized zeros `j_{n,k}`.
#[derive(Debug, Default)]
pub struct BesselZeroTable<T> {
    entries: RwLock<BTreeMap<(u32, u32), T>>,
}

impl<T: Real> BesselZeroTable<T> {
    pub fn new() -> Self {
        Self {
            entries: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn get(&self, n: u32, k: u32) -> Result<T, SpecialFnError> {
        if let Some(v) = self.entries.read().expect("zero table poisoned").get(&(n, k)) {
            return Ok(*v);
        }
        let v = bessel_zero(n, k)?;
        self.entries
            .write()
            .expect("zero table poisoned")
            .insert((n, k), v);
        Ok(v)
    }

    /// Copy of every stored `((n, k), j_{n,k})` entry.
    pub fn entries(&self) -> Vec<((u32, u32), T)> {
        self.entries
            .read()
            .expect("zero table poisoned")
            .iter()
            .map(|(k, v)| (*k, *v))
            .collect()
    }
}

/// Squared `L²(D)` norm of the steady basis element of angular order `n`:
/// `‖J₀(jr)‖²` for `n = 0` and `‖J₁(jr) cos θ‖²` for `n = 1`.
///
/// Evaluated by adaptive quadrature of the radial integral; the angular
/// factor is `2π` for `n = 0` and `π` for `n = 1`.
pub fn mode_norm_sq<T: Real>(n: u32) -> Result<T, SpecialFnError> {
    let angular = match n {
        0 => T::PI() * T::lit(2.0),
        1 => T::PI(),
        _ => return Err(SpecialFnError::UnsupportedMode(n)),
    };
    let j: T = steady_wavenumber();
    let radial = quad::integrate(
        |r: T| {
            let v = jn(n, j * r);
            v * v * r
        },
        T::zero(),
        T::one(),
        T::epsilon() * T::lit(10.0),
    );
    Ok(angular * radial)
}

/// `∫₀¹ r³ J₀(jr) dr`, the radial factor of the impulse of `J₀(jr)`.
pub fn impulse_moment_j0<T: Real>() -> T {
    let j: T = steady_wavenumber();
    quad::integrate(
        |r: T| r * r * r * jn(0, j * r),
        T::zero(),
        T::one(),
        T::epsilon() * T::lit(10.0),
    )
}
