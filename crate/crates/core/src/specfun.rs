//! Hermite and generalized Laguerre polynomials.
//!
//! **Hermite convention: physicists'.** `H_0 = 1`, `H_1 = 2x`,
//! `H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x)`, so `H_n` has leading coefficient
//! `2^n`. The lattice eigenvalues are `lambda = sqrt(2) x` for zeros `x` of
//! `H_N`. Do not mix with the probabilists' `He_n`.
//!
//! Eigenvector components use the orthonormal sequence
//! `u_k(lambda) = H_k(lambda / sqrt 2) / sqrt(2^k k!)`, which satisfies
//! `sqrt(k+1) u_{k+1} = lambda u_k - sqrt(k) u_{k-1}` with `u_0 = 1`. At edge
//! eigenvalues `u_k` grows past `f64::MAX` well before `k = 10^4`, so the
//! recurrence carries a shared base-2 exponent and emits [`ScaledValue`]s.

/// `mantissa * 2^exponent2`, with `0.5 <= |mantissa| < 1` or `mantissa == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    mantissa: f64,
    exponent2: i64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        mantissa: 0.0,
        exponent2: 0,
    };

    /// Encode `value * 2^exponent2`.
    pub fn new(value: f64, exponent2: i64) -> Self {
        let (m, e) = frexp(value);
        if m == 0.0 {
            return Self::ZERO;
        }
        Self {
            mantissa: m,
            exponent2: e + exponent2,
        }
    }

    pub fn from_f64(value: f64) -> Self {
        Self::new(value, 0)
    }

    pub fn mantissa(self) -> f64 {
        self.mantissa
    }

    pub fn exponent2(self) -> i64 {
        self.exponent2
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    /// Decode to a plain float; overflows to infinity and underflows to zero.
    pub fn to_f64(self) -> f64 {
        ldexp(self.mantissa, self.exponent2)
    }

    /// `self / 2^shift` decoded, i.e. the value relative to a common scale.
    pub fn to_f64_scaled(self, shift: i64) -> f64 {
        ldexp(self.mantissa, self.exponent2 - shift)
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn ln_abs(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.exponent2 as f64 * std::f64::consts::LN_2
        }
    }

    pub fn signum(self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.signum()
        }
    }
}

/// Split `x` into `(m, e)` with `x = m * 2^e` and `0.5 <= |m| < 1`.
/// Zero and non-finite values come back unchanged with `e = 0`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = frexp(x * f64::from_bits(0x4350_0000_0000_0000)); // 2^54
        return (m, e - 54);
    }
    let e = biased - 1022;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, e)
}

/// `x * 2^e` without forming an overflowing intermediate power.
pub(crate) fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Physicists' Hermite polynomial `H_n(x)` by forward recurrence.
///
/// Overflows to infinity for large `n` (around `n = 150` at `|x| ~ 17`);
/// use [`hermite_orthonormal_seq`] for eigenvector work.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Rescale threshold for the running pair in the orthonormal recurrence.
const RESCALE_HI: f64 = 1.157_920_892_373_162e77; // 2^256
const RESCALE_LO: f64 = 8.636_168_555_094_445e-78; // 2^-256

/// Exponent-tracked walk over `u_0, u_1, ...` at a fixed `lambda`.
struct OrthonormalHermite {
    lambda: f64,
    k: usize,
    prev: f64,
    cur: f64,
    exponent2: i64,
}

impl OrthonormalHermite {
    fn new(lambda: f64) -> Self {
        Self {
            lambda,
            k: 0,
            prev: 0.0,
            cur: 1.0,
            exponent2: 0,
        }
    }

    fn current(&self) -> ScaledValue {
        ScaledValue::new(self.cur, self.exponent2)
    }

    fn advance(&mut self) {
        let k = self.k as f64;
        let next = (self.lambda * self.cur - k.sqrt() * self.prev) / (k + 1.0).sqrt();
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        let big = self.cur.abs().max(self.prev.abs());
        if big > RESCALE_HI || (big < RESCALE_LO && big > 0.0) {
            let (_, e) = frexp(big);
            self.prev = ldexp(self.prev, -e);
            self.cur = ldexp(self.cur, -e);
            self.exponent2 += e;
        }
    }
}

/// `u_k = H_k(lambda / sqrt 2) / sqrt(2^k k!)` for `k = 0..count`.
///
/// Overflow-free for `count <= 10^4` and `|lambda| <= 2 sqrt(2 count)`.
/// Returns an empty vector for `count == 0`.
pub fn hermite_orthonormal_seq(lambda: f64, count: usize) -> Vec<ScaledValue> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut walk = OrthonormalHermite::new(lambda);
    out.push(walk.current());
    for _ in 1..count {
        walk.advance();
        out.push(walk.current());
    }
    out
}

/// `(u_{n-1}, u_n)` at `lambda` on a shared scale, for `n >= 1`.
///
/// Only the ratio and signs are meaningful; the common factor `2^e` is
/// dropped. This is what Newton polishing of `H_n(lambda / sqrt 2) = 0`
/// needs, since `d u_n / d lambda = sqrt(n) u_{n-1}`.
pub(crate) fn orthonormal_tail(lambda: f64, n: usize) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut walk = OrthonormalHermite::new(lambda);
    for _ in 0..n {
        walk.advance();
    }
    (walk.prev, walk.cur)
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` by the three-term
/// recurrence `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`.
///
/// Intended for the well-conditioned range used here (`n` up to a few tens,
/// `x` up to about 100).
pub fn laguerre_eval(n: usize, alpha: u32, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn hermite_low_degrees() {
        assert_eq!(hermite_eval(0, 0.7), 1.0);
        assert!((hermite_eval(1, 0.7) - 1.4).abs() < 1e-15);
        assert_eq!(hermite_eval(4, 0.0), 12.0);
        let x: f64 = 0.3;
        let h4 = 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
        assert!((hermite_eval(4, x) - h4).abs() < 1e-12);
    }

    #[test]
    fn hermite_recurrence_consistency() {
        for n in 1..30 {
            for i in 0..=40 {
                let x = -4.0 + 0.2 * i as f64;
                let lhs = hermite_eval(n + 1, x) - 2.0 * x * hermite_eval(n, x)
                    + 2.0 * n as f64 * hermite_eval(n - 1, x);
                let scale = hermite_eval(n + 1, x)
                    .abs()
                    .max((2.0 * x * hermite_eval(n, x)).abs())
                    .max(1.0);
                assert!(lhs.abs() <= 1e-12 * scale, "n={n} x={x} residual {lhs}");
            }
        }
    }

    #[test]
    fn orthonormal_seq_by_hand() {
        let s: Vec<f64> = hermite_orthonormal_seq(0.0, 3)
            .iter()
            .map(|v| v.to_f64())
            .collect();
        assert_eq!(s[0], 1.0);
        assert_eq!(s[1], 0.0);
        assert!((s[2] + 1.0 / SQRT_2).abs() < 1e-15);

        let r3 = 3f64.sqrt();
        let s: Vec<f64> = hermite_orthonormal_seq(r3, 3)
            .iter()
            .map(|v| v.to_f64())
            .collect();
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!((s[1] - r3).abs() < 1e-15);
        assert!((s[2] - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_seq_odd_entries_vanish_at_zero() {
        let s = hermite_orthonormal_seq(0.0, 5);
        for k in (1..5).step_by(2) {
            assert!(s[k].is_zero(), "entry {k} = {:?}", s[k]);
        }
    }

    #[test]
    fn scaling_identity_against_direct_hermite() {
        for &lambda in &[-3.7, -1.1, 0.0, 0.4, 2.5, 5.9] {
            let seq = hermite_orthonormal_seq(lambda, 26);
            let mut norm = 1.0f64; // sqrt(2^k k!)
            for (k, u) in seq.iter().enumerate() {
                if k > 0 {
                    norm *= (2.0 * k as f64).sqrt();
                }
                let direct = hermite_eval(k, lambda / SQRT_2);
                let via_seq = u.to_f64() * norm;
                assert!(
                    rel_close(via_seq, direct, 1e-10),
                    "lambda={lambda} k={k}: {via_seq} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn no_overflow_at_large_degree() {
        let n = 10_000usize;
        let lambda = 2.0 * (2.0 * n as f64).sqrt();
        let seq = hermite_orthonormal_seq(lambda, n);
        assert!(seq.iter().all(|v| v.mantissa().is_finite()));
        // raw value would be far beyond f64::MAX
        assert!(seq.last().unwrap().ln_abs() > 710.0);
        assert!(seq.last().unwrap().to_f64().is_infinite());
    }

    #[test]
    fn frexp_ldexp_edges() {
        assert_eq!(frexp(0.0), (0.0, 0));
        assert_eq!(frexp(1.0), (0.5, 1));
        assert_eq!(frexp(-3.0), (-0.75, 2));
        let tiny = f64::from_bits(1); // smallest subnormal
        let (m, e) = frexp(tiny);
        assert_eq!(m, 0.5);
        assert_eq!(ldexp(m, e), tiny);
        assert_eq!(ldexp(0.5, 2000), f64::INFINITY);
        assert_eq!(ldexp(0.5, -2000), 0.0);
    }

    #[test]
    fn laguerre_low_degrees() {
        assert_eq!(laguerre_eval(0, 0, 3.2), 1.0);
        assert!((laguerre_eval(1, 1, 0.5) - 1.5).abs() < 1e-15);
        assert_eq!(laguerre_eval(2, 0, 0.0), 1.0);
        // L_2^{(a)}(x) = ((x^2) - 2(a+2)x + (a+1)(a+2)) / 2
        let (a, x) = (3.0, 1.7);
        let expected = (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)) / 2.0;
        assert!((laguerre_eval(2, 3, x) - expected).abs() < 1e-13);
    }

    #[test]
    fn laguerre_at_zero_is_binomial() {
        // L_n^{(a)}(0) = C(n + a, n)
        let mut binom = 1.0;
        for n in 0..20usize {
            if n > 0 {
                binom *= (n + 4) as f64 / n as f64;
            }
            assert!(rel_close(laguerre_eval(n, 4, 0.0), binom, 1e-13));
        }
    }

    proptest! {
        #[test]
        fn scaled_value_round_trip(x in -1e300f64..1e300, shift in -2000i64..2000) {
            let v = ScaledValue::new(x, shift);
            prop_assert!(v.is_zero() || (0.5..1.0).contains(&v.mantissa().abs()));
            let back = ScaledValue::new(v.to_f64_scaled(shift), shift);
            prop_assert_eq!(back, v);
        }

        #[test]
        fn orthonormal_parity(lambda in 0.0f64..20.0, n in 1usize..120) {
            let plus = hermite_orthonormal_seq(lambda, n);
            let minus = hermite_orthonormal_seq(-lambda, n);
            for (k, (p, m)) in plus.iter().zip(&minus).enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert_eq!(p.exponent2(), m.exponent2());
                prop_assert!((p.mantissa() - sign * m.mantissa()).abs() <= 1e-13);
            }
        }
    }
}
