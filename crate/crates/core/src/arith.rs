//! Sieved arithmetic functions: totient, Möbius, Mangoldt (plain, restricted to
//! a residue class, modified), Ramanujan sums and summatory averages.
//!
//! Everything is answered from an immutable [`ArithTable`]; integer-valued
//! functions are exact, Mangoldt values are `f64` logarithms.

use num_integer::Integer;

use crate::{Error, Result};

/// Default sieve bound.
pub const DEFAULT_LIMIT: usize = 1_000_000;

/// Default memory budget for a table, in bytes.
pub const DEFAULT_BUDGET_BYTES: usize = 1 << 30;

const BYTES_PER_ENTRY: usize = 8 + 1 + 4;

/// Totient, Möbius and smallest-prime-factor arrays for `0..=limit`.
///
/// Index 0 holds zeros and is never a valid argument.
#[derive(Debug, Clone)]
pub struct ArithTable {
    limit: usize,
    totient: Vec<u64>,
    moebius: Vec<i8>,
    spf: Vec<u32>,
}

impl ArithTable {
    /// Builds the table with the default memory budget.
    pub fn new(limit: usize) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_BUDGET_BYTES)
    }

    /// Linear sieve over `1..=limit`, refusing tables larger than `budget_bytes`.
    pub fn with_budget(limit: usize, budget_bytes: usize) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Size("table limit must be at least 1".into()));
        }
        if limit > u32::MAX as usize
            || limit
                .checked_add(1)
                .and_then(|n| n.checked_mul(BYTES_PER_ENTRY))
                .is_none_or(|bytes| bytes > budget_bytes)
        {
            return Err(Error::Size(format!(
                "table limit {limit} exceeds memory budget of {budget_bytes} bytes"
            )));
        }

        let mut totient = vec![0u64; limit + 1];
        let mut moebius = vec![0i8; limit + 1];
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        totient[1] = 1;
        moebius[1] = 1;
        spf[1] = 1;
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                totient[i] = (i - 1) as u64;
                moebius[i] = -1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p_us = p as usize;
                let m = i * p_us;
                if p > spf[i] || m > limit {
                    break;
                }
                spf[m] = p;
                if p == spf[i] {
                    totient[m] = totient[i] * p as u64;
                    moebius[m] = 0;
                } else {
                    totient[m] = totient[i] * (p as u64 - 1);
                    moebius[m] = -moebius[i];
                }
            }
        }
        Ok(Self {
            limit,
            totient,
            moebius,
            spf,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit as u64 {
            Err(Error::Range {
                value: n,
                limit: self.limit as u64,
            })
        } else {
            Ok(n as usize)
        }
    }

    pub fn totient(&self, n: u64) -> Result<u64> {
        Ok(self.totient[self.check(n)?])
    }

    pub fn moebius(&self, n: u64) -> Result<i8> {
        Ok(self.moebius[self.check(n)?])
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        Ok(self.spf[self.check(n)?] as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        let i = self.check(n)?;
        Ok(i > 1 && self.spf[i] as usize == i)
    }

    /// Prime factorization as `(prime, exponent)` pairs in increasing order.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        let mut m = self.check(n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }

    /// The prime `b` when `n = b^k` with `k ≥ 1`.
    pub fn prime_power_base(&self, n: u64) -> Result<Option<u64>> {
        let i = self.check(n)?;
        if i == 1 {
            return Ok(None);
        }
        let p = self.spf[i] as usize;
        let mut m = i;
        while m % p == 0 {
            m /= p;
        }
        Ok((m == 1).then_some(p as u64))
    }

    pub fn is_prime_power(&self, n: u64) -> Result<bool> {
        Ok(self.prime_power_base(n)?.is_some())
    }

    /// Von Mangoldt Λ(n): `ln b` if `n = b^k`, else 0.
    pub fn mangoldt(&self, n: u64) -> Result<f64> {
        Ok(self
            .prime_power_base(n)?
            .map_or(0.0, |b| (b as f64).ln()))
    }

    /// `(φ(n), μ(n), Λ(n))`.
    pub fn classical(&self, n: u64) -> Result<Classical> {
        Ok(Classical {
            phi: self.totient(n)?,
            mu: self.moebius(n)?,
            lambda: self.mangoldt(n)?,
        })
    }

    /// Λ(n) restricted to `n ≡ residue (mod modulus)`.
    pub fn mangoldt_general(&self, n: u64, spec: MangoldtSpec) -> Result<f64> {
        let lambda = self.mangoldt(n)?;
        Ok(if n % spec.modulus == spec.residue {
            lambda
        } else {
            0.0
        })
    }

    /// Modified Mangoldt function b(n) = Λ(n)·φ(n)/n.
    pub fn mangoldt_modified(&self, n: u64) -> Result<f64> {
        let lambda = self.mangoldt(n)?;
        if lambda == 0.0 {
            return Ok(0.0);
        }
        Ok(lambda * self.totient(n)? as f64 / n as f64)
    }

    /// Ramanujan sum c_q(n) from the closed form μ(q₁)φ(q)/φ(q₁), q₁ = q/(q,n).
    ///
    /// Negative `n` is reduced mod `q`; the sum is periodic in `n`.
    pub fn ramanujan_sum(&self, q: u64, n: i64) -> Result<i64> {
        self.check(q)?;
        let r = n.rem_euclid(q as i64) as u64;
        let q1 = q / q.gcd(&r);
        let mu = self.moebius(q1)? as i64;
        if mu == 0 {
            return Ok(0);
        }
        Ok(mu * (self.totient(q)? / self.totient(q1)?) as i64)
    }

    /// `(1/t)·Σ_{n≤t} f(n)` with its error term against the known limit.
    pub fn summatory_average(&self, kind: SummatoryKind, t: u64) -> Result<SummatoryResult> {
        self.check(t)?;
        let target = kind.target(self)?;
        let (sum, m_sum) = match kind {
            SummatoryKind::Moebius => {
                let m: i64 = (1..=t as usize).map(|n| self.moebius[n] as i64).sum();
                (m as f64, Some(m))
            }
            _ => {
                let mut s = 0.0;
                for n in 1..=t {
                    s += kind.eval(self, n)?;
                }
                (s, None)
            }
        };
        let average = sum / t as f64;
        Ok(SummatoryResult {
            t,
            average,
            epsilon: average - target,
            sum,
            moebius_sum: m_sum,
        })
    }

    /// Error terms ε(t) for every `t` in `1..=t_max`, in one pass.
    pub fn error_series(&self, kind: SummatoryKind, t_max: u64) -> Result<Vec<f64>> {
        self.check(t_max)?;
        let target = kind.target(self)?;
        let mut s = 0.0;
        let mut out = Vec::with_capacity(t_max as usize);
        for n in 1..=t_max {
            s += kind.eval(self, n)?;
            out.push(s / n as f64 - target);
        }
        Ok(out)
    }

    /// Truncated Ramanujan expansion Σ_{q≤Q} μ(q)/φ(q)·c_q(n) of b(n).
    pub fn ramanujan_expansion_partial(&self, n: u64, q_max: u64) -> Result<RamanujanExpansion> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        self.check(q_max)?;
        let mut partial_sums = Vec::with_capacity(q_max as usize);
        let mut cesaro = Vec::with_capacity(q_max as usize);
        let mut s = 0.0;
        let mut running = 0.0;
        for q in 1..=q_max {
            let mu = self.moebius(q)?;
            if mu != 0 {
                let c = self.ramanujan_sum(q, n as i64)?;
                s += mu as f64 * c as f64 / self.totient(q)? as f64;
            }
            partial_sums.push(s);
            running += s;
            cesaro.push(running / q as f64);
        }
        Ok(RamanujanExpansion {
            n,
            value: s,
            partial_sums,
            cesaro,
        })
    }
}

/// φ(n) by trial division, for one-off values without a table.
pub fn totient_of(n: u64) -> u64 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classical {
    pub phi: u64,
    pub mu: i8,
    pub lambda: f64,
}

/// Residue class `residue mod modulus` selecting a generalized Mangoldt function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MangoldtSpec {
    residue: u64,
    modulus: u64,
}

impl MangoldtSpec {
    /// The residue is reduced mod `modulus`, so `(1 mod 1)` is the plain Λ.
    pub fn new(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Parameter("modulus must be positive".into()));
        }
        let residue = residue % modulus;
        if modulus > 1 && residue.gcd(&modulus) != 1 {
            return Err(Error::Parameter(format!(
                "residue {residue} is not coprime to modulus {modulus}"
            )));
        }
        Ok(Self { residue, modulus })
    }

    pub fn plain() -> Self {
        Self {
            residue: 0,
            modulus: 1,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SummatoryKind {
    /// Target 1/φ(q).
    MangoldtGeneral(MangoldtSpec),
    /// Target 1.
    MangoldtModified,
    /// Target 0; the raw Mertens sum is reported too.
    Moebius,
}

impl SummatoryKind {
    fn target(&self, table: &ArithTable) -> Result<f64> {
        Ok(match self {
            SummatoryKind::MangoldtGeneral(spec) => {
                if spec.modulus == 1 {
                    1.0
                } else {
                    1.0 / table.totient(spec.modulus)? as f64
                }
            }
            SummatoryKind::MangoldtModified => 1.0,
            SummatoryKind::Moebius => 0.0,
        })
    }

    fn eval(&self, table: &ArithTable, n: u64) -> Result<f64> {
        match self {
            SummatoryKind::MangoldtGeneral(spec) => table.mangoldt_general(n, *spec),
            SummatoryKind::MangoldtModified => table.mangoldt_modified(n),
            SummatoryKind::Moebius => Ok(table.moebius(n)? as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummatoryResult {
    pub t: u64,
    pub average: f64,
    /// `average − target`.
    pub epsilon: f64,
    pub sum: f64,
    /// M(t) when summing the Möbius function.
    pub moebius_sum: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamanujanExpansion {
    pub n: u64,
    pub value: f64,
    /// Partial sum after each q = 1..=Q.
    pub partial_sums: Vec<f64>,
    /// Running means of `partial_sums`.
    pub cesaro: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn table() -> ArithTable {
        ArithTable::new(10_000).unwrap()
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }

    #[test]
    fn base_case_and_small_values() {
        let t = ArithTable::new(1).unwrap();
        assert_eq!(t.totient(1).unwrap(), 1);
        assert_eq!(t.moebius(1).unwrap(), 1);
        let t = table();
        let brute = (1..=12).filter(|&k| gcd(k, 12) == 1).count() as u64;
        assert_eq!(t.totient(12).unwrap(), brute);
        assert_eq!(t.totient(12).unwrap(), 4);
        assert_eq!(t.moebius(30).unwrap(), -1);
    }

    #[test]
    fn trial_division_totient_matches_sieve() {
        let t = table();
        for n in 1..=3000 {
            assert_eq!(totient_of(n), t.totient(n).unwrap());
        }
    }

    #[test]
    fn size_errors() {
        assert!(matches!(ArithTable::new(0), Err(Error::Size(_))));
        assert!(matches!(
            ArithTable::with_budget(1_000_000, 1000),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn sieve_invariants() {
        let t = ArithTable::new(2000).unwrap();
        for n in 2..=2000u64 {
            let is_prime = (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            if is_prime {
                assert_eq!(t.smallest_prime_factor(n).unwrap(), n);
            }
            let f = t.factorize(n).unwrap();
            let squarefree = f.iter().all(|&(_, e)| e == 1);
            assert_eq!(t.moebius(n).unwrap() == 0, !squarefree, "n={n}");
        }
        for a in 1..=44u64 {
            for b in 1..=2000 / a {
                if gcd(a, b) == 1 {
                    assert_eq!(
                        t.totient(a * b).unwrap(),
                        t.totient(a).unwrap() * t.totient(b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn classical_examples() {
        let t = table();
        assert!((t.classical(8).unwrap().lambda - LN_2).abs() < 1e-15);
        assert_eq!(
            t.classical(1).unwrap(),
            Classical {
                phi: 1,
                mu: 1,
                lambda: 0.0
            }
        );
        assert_eq!(
            t.classical(6).unwrap(),
            Classical {
                phi: 2,
                mu: 1,
                lambda: 0.0
            }
        );
        assert!(matches!(t.classical(0), Err(Error::Range { .. })));
        assert!(matches!(t.classical(10_001), Err(Error::Range { .. })));
    }

    #[test]
    fn generalized_mangoldt() {
        let t = table();
        let s = MangoldtSpec::new(1, 4).unwrap();
        assert!((t.mangoldt_general(5, s).unwrap() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(t.mangoldt_general(7, s).unwrap(), 0.0);
        let plain = MangoldtSpec::new(1, 1).unwrap();
        for n in 1..200 {
            assert_eq!(t.mangoldt_general(n, plain).unwrap(), t.mangoldt(n).unwrap());
        }
        assert!(MangoldtSpec::new(2, 4).is_err());
        assert!(MangoldtSpec::new(0, 0).is_err());
    }

    #[test]
    fn ramanujan_examples() {
        let t = table();
        for n in -5..20 {
            assert_eq!(t.ramanujan_sum(1, n).unwrap(), 1);
        }
        assert_eq!(t.ramanujan_sum(4, 2).unwrap(), -2);
        assert_eq!(t.ramanujan_sum(6, 0).unwrap(), 2);
        assert_eq!(t.ramanujan_sum(6, -1).unwrap(), t.ramanujan_sum(6, 5).unwrap());
    }

    fn direct_ramanujan(q: u64, n: i64) -> f64 {
        (0..q)
            .filter(|&p| gcd(p, q) == 1)
            .map(|p| (2.0 * PI * p as f64 * n as f64 / q as f64).cos())
            .sum()
    }

    #[test]
    fn ramanujan_against_direct_sum() {
        let t = table();
        for q in 1..=200u64 {
            assert_eq!(t.ramanujan_sum(q, 0).unwrap(), t.totient(q).unwrap() as i64);
            for n in 0..=200i64 {
                let direct = direct_ramanujan(q, n);
                let closed = t.ramanujan_sum(q, n).unwrap();
                assert!((direct - closed as f64).abs() < 1e-6, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn ramanujan_multiplicative_in_q() {
        let t = table();
        for q in 1..=50u64 {
            for r in 1..=50u64 {
                if gcd(q, r) != 1 {
                    continue;
                }
                for n in 0..60 {
                    assert_eq!(
                        t.ramanujan_sum(q * r, n).unwrap(),
                        t.ramanujan_sum(q, n).unwrap() * t.ramanujan_sum(r, n).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn chebyshev_identity() {
        let t = table();
        for n in 1..=10_000u64 {
            let mut s = 0.0;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    s += t.mangoldt(d).unwrap();
                    if d * d != n {
                        s += t.mangoldt(n / d).unwrap();
                    }
                }
                d += 1;
            }
            assert!((s - (n as f64).ln()).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn modified_mangoldt_examples() {
        let t = table();
        assert_eq!(t.mangoldt_modified(1).unwrap(), 0.0);
        assert!((t.mangoldt_modified(2).unwrap() - 0.5 * LN_2).abs() < 1e-15);
        assert!((t.mangoldt_modified(9).unwrap() - 6.0 / 9.0 * 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn summatory_examples() {
        let t = table();
        let r = t
            .summatory_average(SummatoryKind::MangoldtGeneral(MangoldtSpec::plain()), 10)
            .unwrap();
        let expect = (3.0 * LN_2 + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln()) / 10.0;
        assert!((r.average - expect).abs() < 1e-14);
        assert!((r.average - 0.78320).abs() < 1e-5);
        let m = t.summatory_average(SummatoryKind::Moebius, 5).unwrap();
        assert_eq!(m.moebius_sum, Some(-2));
        let b = t.summatory_average(SummatoryKind::MangoldtModified, 10_000).unwrap();
        assert!(b.epsilon.abs() < 0.05, "{b:?}");
    }

    #[test]
    fn error_series_matches_pointwise() {
        let t = table();
        let kind = SummatoryKind::MangoldtGeneral(MangoldtSpec::new(3, 4).unwrap());
        let series = t.error_series(kind, 500).unwrap();
        for tt in [1u64, 17, 250, 500] {
            let r = t.summatory_average(kind, tt).unwrap();
            assert!((series[tt as usize - 1] - r.epsilon).abs() < 1e-12);
        }
    }

    #[test]
    fn ramanujan_expansion_examples() {
        let t = table();
        let e = t.ramanujan_expansion_partial(1, 1).unwrap();
        assert_eq!(e.value, 1.0);
        let e = t.ramanujan_expansion_partial(4, 2).unwrap();
        assert_eq!(e.value, 0.0);
        let e = t.ramanujan_expansion_partial(2, 50).unwrap();
        assert_eq!(e.partial_sums.len(), 50);
        assert_eq!(e.cesaro.len(), 50);
        assert!(e.value.is_finite());
    }

    #[test]
    fn mertens_and_mangoldt_error_bounds() {
        let t = ArithTable::new(100_000).unwrap();
        let mut m = 0i64;
        for n in 1..=100_000u64 {
            m += t.moebius(n).unwrap() as i64;
            assert!((m.abs() as f64) <= (n as f64).powf(0.6), "t={n} M={m}");
        }
        let eps = t
            .error_series(SummatoryKind::MangoldtGeneral(MangoldtSpec::plain()), 100_000)
            .unwrap();
        for tt in [1_000usize, 10_000, 100_000] {
            let bound = 5.0 * (tt as f64).powf(-0.5) * (tt as f64).ln().powi(2);
            assert!(eps[tt - 1].abs() <= bound);
        }
    }
}
