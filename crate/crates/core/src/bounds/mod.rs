//! Lower and upper bounds on `D(n)` and `R(n) = D(n) / n^(n/2)`, evaluated
//! in natural-log space.
//!
//! Every function is generic over the floating type; `f64` is the type
//! the reports and CLI use.

mod report;

pub use report::{bound_report, BoundEntry, BoundReport, EntryKind};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::ln_abs;
use crate::orders::{delta, Delta, OrderRegistry};
use crate::Real;

/// Exact values wider than this many bits are not materialized.
const MAX_EXACT_BITS: f64 = 65_536.0;

/// Tolerance for comparisons of log-values of magnitude `scale`.
pub fn tolerance<F: Real>(scale: F) -> F {
    let base = F::lit(1e-12).max(F::epsilon() * F::lit(64.0));
    base * F::one().max(scale.abs())
}

/// Natural logarithm of a positive quantity, with the exact integer when it
/// is one and small enough to hold.
#[derive(Clone, Debug, PartialEq)]
pub struct LogValue<F> {
    pub ln: F,
    pub exact: Option<BigInt>,
}

impl<F: Real> LogValue<F> {
    pub fn approx(ln: F) -> Self {
        Self { ln, exact: None }
    }

    pub fn from_exact(x: BigInt) -> Self {
        let ln = F::lit(ln_abs(&x));
        Self { ln, exact: Some(x) }
    }

    /// `|ln(exact) - ln| <= 1e-9 * max(1, |ln|)`, or no exact value.
    pub fn is_consistent(&self) -> bool {
        match &self.exact {
            None => self.ln.is_finite(),
            Some(x) => {
                let diff = (ln_abs(x) - self.ln.to_f64_lossy()).abs();
                diff <= 1e-9 * self.ln.to_f64_lossy().abs().max(1.0)
            }
        }
    }

    /// `ln R = ln D - (n/2) ln n`.
    pub fn normalized(&self, n: usize) -> F {
        self.ln - hadamard_ln(n)
    }
}

/// `(n/2) ln n`, the log of Hadamard's upper bound.
pub fn hadamard_ln<F: Real>(n: usize) -> F {
    F::of(n) * F::lit(0.5) * F::of(n).ln()
}

fn is_hadamard_order(h: usize) -> bool {
    h == 1 || h == 2 || (h > 0 && h.is_multiple_of(4))
}

fn check_order(h: usize) -> Result<()> {
    if is_hadamard_order(h) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{h} is not a possible Hadamard order")))
    }
}

/// `2^a * h^b` as an exact integer, when `a, b >= 0` and it fits.
fn exact_power(two_exp: i64, base: usize, base_exp: i64) -> Option<BigInt> {
    if two_exp < 0 || base_exp < 0 {
        return None;
    }
    let bits = two_exp as f64 + base_exp as f64 * (base.max(1) as f64).log2();
    if bits > MAX_EXACT_BITS {
        return None;
    }
    Some(BigInt::from(base).pow(base_exp as u32) << two_exp as usize)
}

/// Checks `(n - a)^(n - a) / n^n > (n e)^(-a)` for `n > |a| > 0` in log
/// space. With `x = a / n` the difference of logs is
/// `n ((1 - x) ln(1 - x) + x)`; the result is whether that exceeds
/// `-1e-12`.
pub fn check_ineq1<F: Real>(alpha: F, n: i64) -> Result<bool> {
    let nf = F::from_i64(n).ok_or_else(|| Error::Precondition("n not representable".into()))?;
    if !(alpha.abs() > F::zero() && nf > alpha.abs()) {
        return Err(Error::Precondition(format!("need n > |alpha| > 0, got alpha={alpha}, n={n}")));
    }
    let x = alpha / nf;
    let diff = nf * ((F::one() - x) * (-x).ln_1p() + x);
    Ok(diff > -F::lit(1e-12))
}

/// `D(n) >= 2^(d-1) h^(h/2 - d)` with `d = h - n`, from a nonsingular
/// complementary minor of a Hadamard matrix of order `h`.
pub fn minor_bound<F: Real>(h: usize, n: usize) -> Result<LogValue<F>> {
    check_order(h)?;
    if n == 0 || n >= h {
        return Err(Error::Precondition(format!("minor bound needs 0 < n < h, got n={n}, h={h}")));
    }
    let d = h - n;
    let ln = F::of(d - 1) * F::LN_2() + (F::of(h) * F::lit(0.5) - F::of(d)) * F::of(h).ln();
    let exact = if h.is_multiple_of(2) { exact_power(d as i64 - 1, h, h as i64 / 2 - d as i64) } else { None };
    Ok(LogValue { ln, exact })
}

/// `D(n) >= 2^(n-h) h^(h/2)`, by bordering a Hadamard matrix of order `h`.
pub fn major_bound<F: Real>(h: usize, n: usize) -> Result<LogValue<F>> {
    check_order(h)?;
    if n <= h {
        return Err(Error::Precondition(format!("major bound needs n > h, got n={n}, h={h}")));
    }
    let ln = F::of(n - h) * F::LN_2() + hadamard_ln::<F>(h);
    let exact = if h == 1 { exact_power((n - h) as i64, 1, 0) } else { exact_power((n - h) as i64, h, h as i64 / 2) };
    Ok(LogValue { ln, exact })
}

/// Both branches of the nearest-Hadamard-order bound for one `n`.
#[derive(Clone, Debug)]
pub struct UnconditionalBound<F> {
    pub n: usize,
    pub delta: Delta,
    /// Minor of the order `n + delta`, when it is in the registry.
    pub minor: Option<LogValue<F>>,
    /// Bordering of the order `n - delta`, when it is in the registry.
    pub major: Option<LogValue<F>>,
    /// Largest available `ln D` (the Hadamard value when `delta = 0`).
    pub ln_d: F,
    /// Closed-form floor `(delta/2) ln(4 / (n e))` on `ln R`.
    pub floor_ln_r: F,
    /// Order whose branch gave `ln_d`.
    pub winning_order: usize,
}

impl<F: Real> UnconditionalBound<F> {
    pub fn ln_r(&self) -> F {
        self.ln_d - hadamard_ln::<F>(self.n)
    }
}

/// Evaluates both branches around the nearest registry order and keeps the
/// larger, checking it against the closed-form `(4/(ne))^(delta/2)` floor.
pub fn unconditional_bound<F: Real>(n: usize, reg: &OrderRegistry) -> Result<UnconditionalBound<F>> {
    let dl = delta(n, reg)?;
    let floor_ln_r = F::of(dl.delta) * F::lit(0.5) * (F::lit(4.0) / (F::of(n) * F::E())).ln();
    if dl.delta == 0 {
        return Ok(UnconditionalBound {
            n,
            delta: dl,
            minor: None,
            major: None,
            ln_d: hadamard_ln(n),
            floor_ln_r,
            winning_order: n,
        });
    }
    let minor = dl.above.map(|h| minor_bound::<F>(h, n)).transpose()?;
    let major = dl.below.map(|h| major_bound::<F>(h, n)).transpose()?;
    let (ln_d, winning_order) = match (&minor, &major) {
        (Some(a), Some(b)) if a.ln > b.ln => (a.ln, n + dl.delta),
        (_, Some(b)) => (b.ln, n - dl.delta),
        (Some(a), None) => (a.ln, n + dl.delta),
        (None, None) => return Err(Error::Invariant("delta without an attaining order".into())),
    };
    let out = UnconditionalBound { n, delta: dl, minor, major, ln_d, floor_ln_r, winning_order };
    if out.ln_r() < floor_ln_r - tolerance(floor_ln_r) {
        return Err(Error::Invariant(format!(
            "n={n}: branch bound {} below closed-form floor {floor_ln_r}",
            out.ln_r()
        )));
    }
    Ok(out)
}

fn check_multiple_of_four(h: usize) -> Result<()> {
    if h >= 4 && h.is_multiple_of(4) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("need h >= 4 with h ≡ 0 mod 4, got {h}")))
    }
}

/// `ln((2/pi)^(1/2) h^(3/2))`, the guaranteed maximal excess of order `h`.
pub fn excess_lower<F: Real>(h: usize) -> Result<LogValue<F>> {
    check_multiple_of_four(h)?;
    let ln = F::lit(0.5) * (F::lit(2.0) / F::PI()).ln() + F::lit(1.5) * F::of(h).ln();
    Ok(LogValue::approx(ln))
}

/// `D(h+1) >= h^(h/2) (1 + (2h/pi)^(1/2))`.
pub fn plus_one_bound<F: Real>(h: usize) -> Result<LogValue<F>> {
    check_multiple_of_four(h)?;
    let ln = hadamard_ln::<F>(h) + (F::one() + (F::lit(2.0) * F::of(h) / F::PI()).sqrt()).ln();
    Ok(LogValue::approx(ln))
}

/// `D(h+2) >= 2 h^(h/2) (1 + (2h/pi)^(1/2))`.
pub fn plus_two_bound<F: Real>(h: usize) -> Result<LogValue<F>> {
    let one = plus_one_bound::<F>(h)?;
    Ok(LogValue::approx(one.ln + F::LN_2()))
}

/// The bound for `n` that assumes every multiple of 4 is a Hadamard order.
#[derive(Clone, Debug)]
pub struct ConditionalBound<F> {
    pub n: usize,
    pub residue: usize,
    /// The stated bound on `ln R`: the simplified constant when
    /// `n ≡ 1, 2 (mod 4)`, `(n+1)^((n-1)/2) / n^(n/2)` when `n ≡ 3`, and 0
    /// for Hadamard orders.
    pub theorem_ln_r: F,
    /// `ln D` before simplification.
    pub exact_ln_d: F,
    /// The order `h` whose Hadamard matrix the bound rests on.
    pub base_order: Option<usize>,
    /// Asymptotic form `(e/n)^(1/2)` for `n ≡ 3 (mod 4)`; not a bound.
    pub asymptotic_ln_r: Option<F>,
}

impl<F: Real> ConditionalBound<F> {
    pub fn exact_ln_r(&self) -> F {
        self.exact_ln_d - hadamard_ln::<F>(self.n)
    }

    pub fn theorem_ln_d(&self) -> F {
        self.theorem_ln_r + hadamard_ln::<F>(self.n)
    }
}

/// `ln (2/(pi e))^(1/2)`.
pub fn simplified_ln_r_mod1<F: Real>() -> F {
    F::lit(0.5) * (F::lit(2.0) / (F::PI() * F::E())).ln()
}

/// `ln (8/(pi e^2 n))^(1/2)`.
pub fn simplified_ln_r_mod2<F: Real>(n: usize) -> F {
    F::lit(0.5) * (F::lit(8.0) / (F::PI() * F::E() * F::E() * F::of(n))).ln()
}

/// `ln (e/n)^(1/2)`.
pub fn asymptotic_ln_r_mod3<F: Real>(n: usize) -> F {
    F::lit(0.5) * (F::E() / F::of(n)).ln()
}

pub fn conditional_bound<F: Real>(n: usize) -> Result<ConditionalBound<F>> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let residue = n % 4;
    let mut out = ConditionalBound {
        n,
        residue,
        theorem_ln_r: F::zero(),
        exact_ln_d: hadamard_ln(n),
        base_order: Some(n),
        asymptotic_ln_r: None,
    };
    if n <= 2 || residue == 0 {
        return Ok(out);
    }
    match residue {
        1 => {
            out.exact_ln_d = plus_one_bound::<F>(n - 1)?.ln;
            out.theorem_ln_r = simplified_ln_r_mod1();
            out.base_order = Some(n - 1);
        }
        2 => {
            out.exact_ln_d = plus_two_bound::<F>(n - 2)?.ln;
            out.theorem_ln_r = simplified_ln_r_mod2(n);
            out.base_order = Some(n - 2);
        }
        _ => {
            out.exact_ln_d = F::of(n - 1) * F::lit(0.5) * F::of(n + 1).ln();
            out.theorem_ln_r = out.exact_ln_r();
            out.base_order = Some(n + 1);
            out.asymptotic_ln_r = Some(asymptotic_ln_r_mod3(n));
        }
    }
    if residue != 3 && out.exact_ln_r() <= out.theorem_ln_r {
        return Err(Error::Invariant(format!(
            "n={n}: exact value {} does not exceed simplified {}",
            out.exact_ln_r(),
            out.theorem_ln_r
        )));
    }
    Ok(out)
}

/// `pi e^2 / 8`, the sharpest constant `c` with `R(n) >= (c n)^(-1/2)`
/// following from the conditional bound.
pub fn improved_constant<F: Real>() -> F {
    F::PI() * F::E() * F::E() / F::lit(8.0)
}

/// Whether the conditional bound gives `R(n) >= (3n)^(-1/2)`.
pub fn improved_corollary_check<F: Real>(n: usize) -> Result<bool> {
    let c = conditional_bound::<F>(n)?;
    let target = -F::lit(0.5) * (F::lit(3.0) * F::of(n)).ln();
    Ok(c.theorem_ln_r >= target - tolerance(target))
}

/// Lower bound on `D(n)` given a Hadamard matrix of order `4t`, for
/// `n = 4t-1`, `4t-2` or `4t-3`: `(4t)^(2t-1)`, `2 (4t)^(2t-2)` and
/// `4 (4t)^(2t-3)` respectively.
pub fn kms_bound<F: Real>(n: usize) -> Result<LogValue<F>> {
    if n == 0 || n.is_multiple_of(4) {
        return Err(Error::Precondition(format!("kms bound undefined for n ≡ 0 mod 4 (n={n})")));
    }
    let four_t = match n % 4 {
        3 => n + 1,
        2 => n + 2,
        _ => n + 3,
    };
    let t = (four_t / 4) as i64;
    let (two_exp, base_exp) = match n % 4 {
        3 => (0, 2 * t - 1),
        2 => (1, 2 * t - 2),
        _ => (2, 2 * t - 3),
    };
    let ln = F::from_i64(two_exp).unwrap() * F::LN_2() + F::from_i64(base_exp).unwrap() * F::of(four_t).ln();
    Ok(LogValue { ln, exact: exact_power(two_exp, four_t, base_exp) })
}

/// `R(n) >= n^(-d/2)` with `d = n[i+1] - n` for `n[i] < n < n[i+1]`,
/// returned as `ln D`.
pub fn ll_bound<F: Real>(n: usize, reg: &OrderRegistry) -> Result<LogValue<F>> {
    if reg.contains(n) {
        return Err(Error::Precondition(format!("{n} is itself a registry order")));
    }
    let above = reg
        .next_above(n)
        .ok_or(Error::RegistryTooSmall { n, cap: reg.cap(), needed: 2 * n })?;
    let d = above - n;
    let ln_r = -F::of(d) * F::lit(0.5) * F::of(n).ln();
    Ok(LogValue::approx(ln_r + hadamard_ln::<F>(n)))
}

/// `n ln n - 2 ln D(n) <= n ln(4/3)`, returned as `ln D`.
pub fn cl_bound<F: Real>(n: usize) -> LogValue<F> {
    let ln_r = -F::of(n) * F::lit(0.5) * (F::lit(4.0) / F::lit(3.0)).ln();
    LogValue::approx(ln_r + hadamard_ln::<F>(n))
}

/// `ln D` for `n ≡ 2 (mod 8)` from the Kronecker product of `[[+,+],[+,-]]`
/// with the order-`n/2` excess-bordered matrix: `2^(n/2) D(n/2)^2`.
pub fn sylvester_doubling_bound<F: Real>(n: usize) -> Option<LogValue<F>> {
    if n % 8 != 2 || n < 10 {
        return None;
    }
    let m = n / 2;
    let inner = plus_one_bound::<F>(m - 1).ok()?;
    Some(LogValue::approx(F::of(m) * F::LN_2() + F::lit(2.0) * inner.ln))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBounds<F> {
    /// `(n/2) ln n`.
    pub hadamard: F,
    /// `ln((2h+1)^(1/2) h^(h/2))` with `h = n - 1`, for `n ≡ 1 (mod 4)`, `n >= 5`.
    pub barba: Option<F>,
}

pub fn upper_bounds<F: Real>(n: usize) -> UpperBounds<F> {
    let barba = (n % 4 == 1 && n >= 5).then(|| {
        let h = n - 1;
        F::lit(0.5) * F::of(2 * h + 1).ln() + hadamard_ln::<F>(h)
    });
    UpperBounds { hadamard: hadamard_ln(n), barba }
}

/// `ln` of an exact positive integer as `F`.
pub fn ln_of<F: Real>(x: &BigInt) -> F {
    if x.is_zero() {
        return F::neg_infinity();
    }
    if x.is_one() {
        return F::zero();
    }
    F::lit(ln_abs(x))
}
