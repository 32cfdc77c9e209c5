use super::registry::OrderRegistry;
use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_BOUND: u64 = 1_000_000;

/// Primes `<= bound` by the sieve of Eratosthenes.
pub fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for m in (i * i..=n).step_by(i) {
                composite[m] = true;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

/// Primes up to a bound, with the prime-gap function `lambda` and (when
/// built against a registry) the Hadamard-gap function `gamma`, each stored
/// as breakpoints `(start, value)`: the function equals `value` from
/// `start` up to the next breakpoint.
#[derive(Clone, Debug)]
pub struct GapTable {
    pub bound: u64,
    pub primes: Vec<u64>,
    pub lambda_values: Vec<(u64, u64)>,
    pub gamma_values: Vec<(u64, u64)>,
}

fn running_max_breakpoints(seq: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut best = 0;
    for w in seq.windows(2) {
        let gap = w[1] - w[0];
        if gap > best {
            best = gap;
            out.push((w[0], gap));
        }
    }
    out
}

fn lookup(breaks: &[(u64, u64)], x: f64) -> u64 {
    breaks.iter().take_while(|&&(start, _)| start as f64 <= x).last().map_or(0, |&(_, v)| v)
}

impl GapTable {
    pub fn new(bound: u64) -> Self {
        let primes = sieve(bound);
        let lambda_values = running_max_breakpoints(&primes);
        Self { bound, primes, lambda_values, gamma_values: Vec::new() }
    }

    pub fn with_registry(bound: u64, reg: &OrderRegistry) -> Self {
        let mut t = Self::new(bound);
        let orders: Vec<u64> = reg.orders().map(|n| n as u64).collect();
        t.gamma_values = running_max_breakpoints(&orders);
        t
    }
}

/// `lambda(x) = max { p[i+1] - p[i] : p[i] <= x }`, or 0 when `x < 2`.
///
/// Fails if `x` exceeds the sieve bound or the successor of the largest
/// prime `<= x` lies beyond it.
pub fn lambda(x: f64, table: &GapTable) -> Result<u64> {
    if x < 2.0 {
        return Ok(0);
    }
    let exceeded = || Error::SieveBoundExceeded { x, bound: table.bound };
    if x > table.bound as f64 {
        return Err(exceeded());
    }
    let below = table.primes.partition_point(|&p| p as f64 <= x);
    if below >= table.primes.len() {
        return Err(exceeded());
    }
    Ok(lookup(&table.lambda_values, x))
}

/// `gamma(x) = max { n[i+1] - n[i] : n[i] <= x }` over registry orders, or
/// 0 when `x < 1`. Fails if no registry order lies above `x`.
pub fn gamma(x: f64, reg: &OrderRegistry) -> Result<u64> {
    if x < 1.0 {
        return Ok(0);
    }
    let orders: Vec<u64> = reg.orders().map(|n| n as u64).collect();
    let below = orders.partition_point(|&n| n as f64 <= x);
    if below >= orders.len() {
        return Err(Error::RegistryTooSmall { n: x.floor() as usize, cap: reg.cap(), needed: x.floor() as usize + 4 });
    }
    Ok(orders[..=below]
        .windows(2)
        .map(|w| w[1] - w[0])
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::RegistryMode;

    fn trial_division_primes(n: u64) -> Vec<u64> {
        (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
    }

    #[test]
    fn sieve_matches_trial_division() {
        assert_eq!(sieve(2000), trial_division_primes(2000));
        assert!(sieve(1).is_empty());
        assert_eq!(sieve(2), vec![2]);
    }

    #[test]
    fn lambda_examples() {
        let t = GapTable::new(100);
        assert_eq!(lambda(1.5, &t).unwrap(), 0);
        assert_eq!(lambda(10.0, &t).unwrap(), 4);
        assert_eq!(lambda(2.0, &t).unwrap(), 1);
        assert_eq!(lambda(3.0, &t).unwrap(), 2);
        assert!(matches!(lambda(101.0, &t), Err(Error::SieveBoundExceeded { .. })));
        // 97 is the last prime below 100; its successor is unknown.
        assert!(lambda(98.0, &t).is_err());
    }

    #[test]
    fn lambda_matches_direct_scan() {
        let t = GapTable::new(5000);
        let p = trial_division_primes(5000);
        for x in (0..4900).map(|k| k as f64 * 0.97) {
            let direct = p.windows(2).filter(|w| w[0] as f64 <= x).map(|w| w[1] - w[0]).max().unwrap_or(0);
            assert_eq!(lambda(x, &t).unwrap(), direct, "x={x}");
        }
    }

    #[test]
    fn gamma_examples() {
        let reg = OrderRegistry::build(64, RegistryMode::Constructive).unwrap();
        assert_eq!(gamma(0.5, &reg).unwrap(), 0);
        assert_eq!(gamma(8.0, &reg).unwrap(), 4);
        assert_eq!(gamma(2.0, &reg).unwrap(), 2);
        assert_eq!(gamma(1.0, &reg).unwrap(), 1);
        assert!(gamma(64.0, &reg).is_err());
        let t = GapTable::with_registry(100, &reg);
        for x in 1..60 {
            assert_eq!(lookup(&t.gamma_values, x as f64), gamma(x as f64, &reg).unwrap());
        }
    }
}
