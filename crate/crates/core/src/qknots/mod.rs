//! Finite q-hypergeometric sums at roots of unity: the Kontsevich-Zagier
//! series F, its torus-knot generalisations, colored Jones polynomials of
//! T(3,2^t), Hikami's X_m^(ℓ), and the strange identities tying them to
//! radial limits of unary theta functions.

mod backend;

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Integer, Rational};
use serde_json::json;

use crate::cyclo::Cyclo;
use crate::lvalues::{radial_value, Weight};
use crate::modgroup::RationalCusp;
use crate::numerics::{abs_f64, exp_two_pi_i, PrecisionContext};
use crate::periodic::{char_chi12, char_chi_t, char_hikami, char_psi, PeriodicCoeffs};
use crate::report::VerificationRecord;
use crate::theta::{big_theta_f, format_complex, UpperHalfPoint};
use crate::{Error, Result};

pub use backend::{Backend, ExactBackend, FloatBackend};

/// Largest order evaluated exactly by default.
pub const EXACT_ORDER_LIMIT: u64 = 60;

/// ζ = e^{2πiα} with α = p/N reduced into [0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnity {
    p: u64,
    n: u64,
}

impl RootOfUnity {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("root of unity needs a nonzero denominator".into()));
        }
        let r = Rational::from((p, q));
        let frac = Rational::from(&r - r.clone().floor());
        let n = frac.denom().to_u64().expect("denominator fits");
        let p = frac.numer().to_u64().expect("numerator fits");
        Ok(Self { p, n })
    }

    /// e^{2πi/N}.
    pub fn primitive(n: u64) -> Result<Self> {
        Self::new(1, n as i64)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s}"));
        match s.split_once('/') {
            Some((a, b)) => Self::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Self::new(s.parse().map_err(|_| bad())?, 1),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn alpha(&self) -> Rational {
        Rational::from((self.p, self.n))
    }

    pub fn cusp(&self) -> RationalCusp {
        RationalCusp::new(self.p as i64, self.n as i64).expect("valid cusp")
    }

    /// ζ^r := e^{2πiαr}.
    pub fn pow(&self, r: &Rational, bits: u32) -> Complex {
        exp_two_pi_i(&Rational::from(&self.alpha() * r), bits)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.n)
    }
}

/// Constants attached to the torus knot T(3, 2^t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusKnotParams {
    pub t: u32,
    pub m: i64,
    pub h2: i64,
    pub h1: i64,
    pub a: i64,
    pub s: Rational,
}

impl TorusKnotParams {
    pub fn new(t: u32) -> Result<Self> {
        if !(1..=20).contains(&t) {
            return Err(Error::Domain(format!("torus parameter t = {t} outside 1..=20")));
        }
        let p = 1i64 << t;
        let (h2, h1, a) = if t % 2 == 0 { ((p - 1) / 3, (p - 4) / 3, (p / 2 + 1) / 3) } else { ((p - 2) / 3, (p - 5) / 3, (p + 1) / 3) };
        let m = p / 2;
        if t >= 2 && (3 * a - 1).rem_euclid(m) != 0 {
            return Err(Error::Domain(format!("3a ≢ 1 mod m for t = {t}")));
        }
        let s = Rational::from(((2 * p - 3) * (2 * p - 3), 12 * p));
        Ok(Self { t, m, h2, h1, a, s })
    }
}

/// (q)_n = Π_{k=1}^n (1 − q^k).
pub fn pochhammer<B: Backend>(b: &B, n: u64) -> B::Elem {
    pochhammer_shift(b, 1, n)
}

/// Π_{k=0}^{n−1} (1 − q^{s+k}).
pub fn pochhammer_shift<B: Backend>(b: &B, s: i64, n: u64) -> B::Elem {
    let one = b.one();
    let mut acc = one.clone();
    for k in 0..n as i64 {
        acc = b.mul(&acc, &b.sub(&one, &b.q_pow(s + k)));
        if b.is_zero(&acc) {
            break;
        }
    }
    acc
}

/// Integer coefficients of the Gaussian binomials [n, k] for n ≤ nmax.
#[derive(Clone, Debug)]
pub struct GaussPolys {
    rows: Vec<Vec<Vec<Integer>>>,
}

impl GaussPolys {
    /// Pascal recurrence [n, k] = [n−1, k−1] + q^k [n−1, k].
    pub fn new(nmax: usize) -> Self {
        let mut rows: Vec<Vec<Vec<Integer>>> = vec![vec![vec![Integer::from(1)]]];
        for n in 1..=nmax {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let len = k * (n - k) + 1;
                let mut p = vec![Integer::new(); len];
                if k >= 1 {
                    for (e, c) in prev[k - 1].iter().enumerate() {
                        p[e] += c;
                    }
                }
                if k < n {
                    for (e, c) in prev[k].iter().enumerate() {
                        p[e + k] += c;
                    }
                }
                row.push(p);
            }
            rows.push(row);
        }
        Self { rows }
    }

    /// Coefficients of [n, k]; empty when k > n.
    pub fn get(&self, n: usize, k: usize) -> &[Integer] {
        if k > n {
            return &[];
        }
        &self.rows[n][k]
    }
}

/// [n, k] evaluated at q.
pub fn gauss_binomial<B: Backend>(b: &B, n: usize, k: usize) -> B::Elem {
    if k > n {
        return b.zero();
    }
    b.eval_poly(GaussPolys::new(n).get(n, k))
}

/// Table of [n, k](q) for n ≤ nmax.
struct GaussTable<E> {
    rows: Vec<Vec<E>>,
}

impl<E: Clone> GaussTable<E> {
    fn new<B: Backend<Elem = E>>(b: &B, nmax: usize) -> Self {
        let polys = GaussPolys::new(nmax);
        let rows = (0..=nmax).map(|n| (0..=n).map(|k| b.eval_poly(polys.get(n, k))).collect()).collect();
        Self { rows }
    }

    fn get(&self, n: usize, k: usize) -> Option<&E> {
        self.rows.get(n).and_then(|r| r.get(k))
    }
}

fn require_order<B: Backend>(b: &B) -> Result<u64> {
    b.order().ok_or_else(|| Error::Domain("finite sums need q to be a root of unity".into()))
}

/// F(q) = Σ_{n<nmax} (q)_n.
pub fn kz_f_truncated<B: Backend>(b: &B, nmax: u64) -> B::Elem {
    let one = b.one();
    let mut term = one.clone();
    let mut acc = b.zero();
    for n in 0..nmax {
        if n > 0 {
            term = b.mul(&term, &b.sub(&one, &b.q_pow(n as i64)));
        }
        acc = b.add(&acc, &term);
    }
    acc
}

/// F(ζ) = Σ_{n=0}^{N−1} (ζ)_n.
pub fn kz_f<B: Backend>(b: &B) -> Result<B::Elem> {
    Ok(kz_f_truncated(b, require_order(b)?))
}

fn check_jones_order<B: Backend>(b: &B, n: u64) -> Result<()> {
    let order = require_order(b)?;
    if order != n {
        return Err(Error::Domain(format!("colored Jones J_{n} evaluated at a root of order {order}")));
    }
    Ok(())
}

/// J_N(T(3,2); q) = q^{1−N} Σ_n q^{−nN} (q^{1−N})_n at q = ζ of order N.
pub fn jones_t32<B: Backend>(b: &B, n: u64) -> Result<B::Elem> {
    check_jones_order(b, n)?;
    let big_n = n as i64;
    let mut acc = b.zero();
    for k in 0..n {
        let term = b.mul(&b.q_pow(-(k as i64) * big_n), &pochhammer_shift(b, 1 - big_n, k));
        acc = b.add(&acc, &term);
    }
    Ok(b.mul(&b.q_pow(1 - big_n), &acc))
}

/// Sign convention for the torus-knot series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtSign {
    /// Summand carries (−1)^{Σj}, as forced by the colored Jones formula at q^N = 1.
    Alternating,
    /// Summand without (−1)^{Σj}.
    Unsigned,
}

/// Walks j_1..j_{m−1} ∈ [0, bound] with 3Σ j_ℓ ℓ ≡ 1 (mod m), passing
/// (j, Σj, Σ j_ℓ ℓ, Σ binom(j_ℓ, 2)).
fn for_each_j(m: i64, bound: i64, visit: &mut dyn FnMut(&[usize], i64, i64, i64)) {
    fn rec(
        l: usize,
        m: i64,
        bound: i64,
        j: &mut Vec<usize>,
        sums: (i64, i64, i64),
        visit: &mut dyn FnMut(&[usize], i64, i64, i64),
    ) {
        if l as i64 == m {
            if (3 * sums.1 - 1).rem_euclid(m) == 0 {
                visit(j, sums.0, sums.1, sums.2);
            }
            return;
        }
        for v in 0..=bound {
            j.push(v as usize);
            rec(l + 1, m, bound, j, (sums.0 + v, sums.1 + v * l as i64, sums.2 + v * (v - 1) / 2), visit);
            j.pop();
        }
    }
    rec(1, m, bound, &mut Vec::new(), (0, 0, 0), visit);
}

/// q-exponent (Σ j_ℓ ℓ − a)/m, which must be integral.
fn ft_exponent(params: &TorusKnotParams, weighted: i64) -> Result<i64> {
    let num = weighted - params.a;
    if num.rem_euclid(params.m) != 0 {
        return Err(Error::NonIntegralExponent(format!("({num})/{} for t = {}", params.m, params.t)));
    }
    Ok(num / params.m)
}

/// Checks exponent integrality on every term of 𝓕_t with n < nmax; returns the term count.
pub fn ft_exponent_check(t: u32, nmax: u64) -> Result<usize> {
    let params = TorusKnotParams::new(t)?;
    let mut count = 0;
    let mut err = None;
    for n in 0..nmax as i64 {
        for_each_j(params.m, n + 1, &mut |_, _, w, _| {
            if err.is_none() {
                match ft_exponent(&params, w) {
                    Ok(_) => count += 1,
                    Err(e) => err = Some(e),
                }
            }
        });
    }
    err.map_or(Ok(count), Err)
}

enum TorusVariant {
    Ft(FtSign),
    Jones(i64),
}

fn torus_sum<B: Backend>(b: &B, params: &TorusKnotParams, variant: TorusVariant, n_extra: u64, j_extra: i64) -> Result<B::Elem> {
    if params.t < 2 {
        return Err(Error::Domain("the torus-knot enumerator needs t ≥ 2".into()));
    }
    let order = require_order(b)?;
    let nmax = order + n_extra;
    let bound_extra = j_extra.max(0) as usize;
    let table = GaussTable::new(b, nmax as usize + 1 + bound_extra);
    let m = params.m;
    let mut acc = b.zero();
    let mut err = None;
    for n in 0..nmax {
        let poch = match variant {
            TorusVariant::Ft(_) => pochhammer(b, n),
            TorusVariant::Jones(big_n) => pochhammer_shift(b, 1 - big_n, n),
        };
        if b.is_zero(&poch) {
            continue;
        }
        let mut inner = b.zero();
        for_each_j(m, n as i64 + 1 + j_extra, &mut |j, sum_j, weighted, binoms| {
            if err.is_some() {
                return;
            }
            let e = match ft_exponent(params, weighted) {
                Ok(e) => e,
                Err(x) => {
                    err = Some(x);
                    return;
                }
            };
            let mut ksum = b.zero();
            for k in 0..m as usize {
                let mut prod = b.one();
                for (idx, &jl) in j.iter().enumerate() {
                    let l = idx + 1;
                    let top = n as usize + usize::from(l <= k);
                    match table.get(top, jl) {
                        Some(g) => prod = b.mul(&prod, g),
                        None => {
                            prod = b.zero();
                            break;
                        }
                    }
                }
                if let TorusVariant::Jones(big_n) = variant {
                    prod = b.mul(&prod, &b.q_pow(-(k as i64) * big_n));
                }
                ksum = b.add(&ksum, &prod);
            }
            if b.is_zero(&ksum) {
                return;
            }
            let (extra, negative) = match variant {
                TorusVariant::Ft(FtSign::Alternating) => (0, sum_j % 2 == 1),
                TorusVariant::Ft(FtSign::Unsigned) => (0, false),
                TorusVariant::Jones(big_n) => (-big_n * sum_j, sum_j % 2 == 1),
            };
            let mut term = b.mul(&b.q_pow(e + binoms + extra), &ksum);
            if negative {
                term = b.neg(&term);
            }
            inner = b.add(&inner, &term);
        });
        if let Some(e) = err.take() {
            return Err(e);
        }
        let mut term = b.mul(&poch, &inner);
        if let TorusVariant::Jones(big_n) = variant {
            term = b.mul(&term, &b.q_pow(-big_n * n as i64 * m));
        }
        acc = b.add(&acc, &term);
    }
    let lead = match variant {
        TorusVariant::Ft(_) => -params.h1,
        TorusVariant::Jones(big_n) => (1 << params.t) - 1 - params.h1 - big_n,
    };
    let mut out = b.mul(&b.q_pow(lead), &acc);
    if params.h2 % 2 == 1 {
        out = b.neg(&out);
    }
    Ok(out)
}

/// 𝓕_t(ζ), t ≥ 2.
pub fn kz_ft<B: Backend>(b: &B, t: u32) -> Result<B::Elem> {
    kz_ft_with(b, t, FtSign::Alternating)
}

pub fn kz_ft_with<B: Backend>(b: &B, t: u32, sign: FtSign) -> Result<B::Elem> {
    torus_sum(b, &TorusKnotParams::new(t)?, TorusVariant::Ft(sign), 0, 0)
}

/// 𝓕_t(ζ) with the n-range and j-bounds enlarged past their vanishing points.
pub fn kz_ft_padded<B: Backend>(b: &B, t: u32, n_extra: u64, j_extra: i64) -> Result<B::Elem> {
    torus_sum(b, &TorusKnotParams::new(t)?, TorusVariant::Ft(FtSign::Alternating), n_extra, j_extra)
}

/// J_N(T(3,2^t); ζ) with ζ of order N.
pub fn jones_t32t<B: Backend>(b: &B, t: u32, n: u64) -> Result<B::Elem> {
    check_jones_order(b, n)?;
    torus_sum(b, &TorusKnotParams::new(t)?, TorusVariant::Jones(n as i64), 0, 0)
}

/// X_m^(ℓ)(ζ) = Σ (q)_{k_m} q^{k_1²+…+k_{m−1}² + k_{ℓ+1}+…+k_{m−1}} Π [k_{i+1}+δ_{iℓ}, k_i].
pub fn hikami_x<B: Backend>(b: &B, m: u32, l: u32) -> Result<B::Elem> {
    if m == 0 || l >= m {
        return Err(Error::Domain(format!("need m ≥ 1 and 0 ≤ ℓ < m, got m = {m}, ℓ = {l}")));
    }
    let order = require_order(b)?;
    let table = GaussTable::new(b, order as usize + 1);
    let mut acc = b.zero();
    let mut k = vec![0usize; m as usize + 1];
    for km in 0..order {
        let poch = pochhammer(b, km);
        k[m as usize] = km as usize;
        let inner = hikami_inner(b, &table, m as usize, l as usize, m as usize - 1, &mut k);
        acc = b.add(&acc, &b.mul(&poch, &inner));
    }
    Ok(acc)
}

/// Sum over k_i, …, k_1 given k_{i+1}, …, k_m.
fn hikami_inner<B: Backend>(b: &B, table: &GaussTable<B::Elem>, m: usize, l: usize, i: usize, k: &mut [usize]) -> B::Elem {
    if i == 0 {
        let mut e = 0i64;
        for idx in 1..m {
            e += (k[idx] * k[idx]) as i64;
            if idx > l {
                e += k[idx] as i64;
            }
        }
        return b.q_pow(e);
    }
    let top = k[i + 1] + usize::from(i == l);
    let mut acc = b.zero();
    for ki in 0..=top {
        let g = table.get(top, ki).expect("table covers the range").clone();
        k[i] = ki;
        let rest = hikami_inner(b, table, m, l, i - 1, k);
        acc = b.add(&acc, &b.mul(&g, &rest));
    }
    acc
}

/// Both sides of q^{−7/4}𝒱(−1, q^{−2}) = −½ Σ n ψ(n) q^{n²/4} at q = e^{2πiz}.
#[derive(Clone, Debug)]
pub struct UnimodalComparison {
    pub closed_form: Complex,
    pub theta_side: Complex,
    pub difference: f64,
}

/// The left side through the closed form −½ q^{1/4} Σ (2n+1) q^{n(n+1)}; the right through Θ_ψ.
pub fn unimodal_closed(z: &UpperHalfPoint, ctx: &PrecisionContext) -> Result<UnimodalComparison> {
    let bits = ctx.bits();
    let q = {
        let two_pi_i = Complex::with_val(bits, (0, ctx.pi() * 2u32));
        Complex::with_val(bits, (two_pi_i * z.z()).exp_ref())
    };
    let tol = ctx.target_ln();
    let mut sum = Complex::new(bits);
    let mut pw = Complex::with_val(bits, 1);
    let mut ratio = Complex::with_val(bits, q.clone() * &q);
    for n in 0u64.. {
        let term = Complex::with_val(bits, &pw * (2 * n + 1));
        sum += &term;
        let mag = abs_f64(&term);
        if mag == 0.0 || (-mag.ln() > tol && n > 1) {
            break;
        }
        if n > 10_000_000 {
            return Err(Error::Domain("unimodal series converges too slowly".into()));
        }
        pw *= &ratio;
        ratio *= Complex::with_val(bits, &q * &q);
    }
    let quarter = {
        let two_pi_i = Complex::with_val(bits, (0, ctx.pi() * 2u32));
        Complex::with_val(bits, (two_pi_i * z.z() / 4u32).exp_ref())
    };
    let closed_form = Complex::with_val(bits, -(quarter * sum) / 2u32);
    let theta_side = Complex::with_val(bits, -big_theta_f(&char_psi(), z, ctx) / 2u32);
    let difference = abs_f64(&Complex::with_val(bits, &closed_form - &theta_side));
    Ok(UnimodalComparison { closed_form, theta_side, difference })
}

/// Coefficients of both sides in powers of q^{1/4}, exponents below `limit`:
/// (4·exponent, closed-form coefficient, theta coefficient).
pub fn unimodal_coefficients(limit: u64) -> Vec<(u64, Rational, Rational)> {
    let psi = char_psi();
    let mut out = Vec::new();
    for e in 0..limit {
        let mut closed = Rational::new();
        for n in 0u64.. {
            let ex = 1 + 4 * n * (n + 1);
            if ex > e {
                break;
            }
            if ex == e {
                closed = Rational::from((-(2 * n as i64 + 1), 2));
            }
        }
        let mut theta = Rational::new();
        let r = (e as f64).sqrt().round() as u64;
        if r * r == e && r > 0 {
            let v = psi.value(r as i64);
            theta = Rational::from(&v.re * Rational::from((-(r as i64), 2)));
        }
        if closed != 0 || theta != 0 {
            out.push((e, closed, theta));
        }
    }
    out
}

/// Which q-series a strange identity concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrangeSide {
    F,
    Ft(u32),
    X(u32, u32),
    V,
}

impl FromStr for StrangeSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown strange side {s}; expected F, Ft:t, X:m:l or V"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| x.parse::<u32>().map_err(|_| bad());
        match parts.as_slice() {
            ["F"] => Ok(Self::F),
            ["V"] => Ok(Self::V),
            ["Ft", t] => Ok(Self::Ft(num(t)?)),
            ["X", m, l] => Ok(Self::X(num(m)?, num(l)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StrangeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::F => write!(f, "F"),
            Self::Ft(t) => write!(f, "Ft:{t}"),
            Self::X(m, l) => write!(f, "X:{m}:{l}"),
            Self::V => write!(f, "V"),
        }
    }
}

impl StrangeSide {
    /// The coefficient function on the theta side.
    pub fn character(&self) -> Result<PeriodicCoeffs> {
        match self {
            Self::F => Ok(char_chi12()),
            Self::Ft(t) => char_chi_t(*t),
            Self::X(m, l) => char_hikami(*m, *l),
            Self::V => Ok(char_psi()),
        }
    }

    /// Phase exponent in turns per unit α.
    fn phase(&self) -> Result<Rational> {
        match self {
            Self::F => Ok(Rational::from((1, 24))),
            Self::Ft(t) => Ok(TorusKnotParams::new(*t)?.s),
            Self::X(m, l) => {
                let c = 2 * *m as i64 - 2 * *l as i64 - 1;
                Ok(Rational::from((c * c, 8 * (2 * *m as i64 + 1))))
            }
            Self::V => Ok(Rational::new()),
        }
    }
}

/// Value of a finite series with an exact rendering when available.
#[derive(Clone, Debug)]
pub struct KnotValue {
    pub exact: Option<Cyclo>,
    pub value: Complex,
}

fn evaluate<F, G>(root: &RootOfUnity, exact: bool, bits: u32, fe: F, ff: G) -> Result<KnotValue>
where
    F: FnOnce(&ExactBackend) -> Result<Cyclo>,
    G: FnOnce(&FloatBackend) -> Result<Complex>,
{
    if exact {
        let b = ExactBackend::new(root);
        let v = fe(&b)?;
        let value = v.to_complex(bits);
        Ok(KnotValue { exact: Some(v), value })
    } else {
        let b = FloatBackend::from_root(root, bits + 32);
        Ok(KnotValue { exact: None, value: Complex::with_val(bits, ff(&b)?) })
    }
}

/// Series selected by name, evaluated in the default backend for the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotSeries {
    F,
    Ft(u32),
    X(u32, u32),
    JonesT32,
    JonesT32t(u32),
}

pub fn evaluate_series(series: &KnotSeries, root: &RootOfUnity, ctx: &PrecisionContext) -> Result<KnotValue> {
    let exact = root.order() <= EXACT_ORDER_LIMIT;
    let bits = ctx.bits();
    let n = root.order();
    match *series {
        KnotSeries::F => evaluate(root, exact, bits, |b| kz_f(b), |b| kz_f(b)),
        KnotSeries::Ft(t) => evaluate(root, exact, bits, |b| kz_ft(b, t), |b| kz_ft(b, t)),
        KnotSeries::X(m, l) => evaluate(root, exact, bits, |b| hikami_x(b, m, l), |b| hikami_x(b, m, l)),
        KnotSeries::JonesT32 => evaluate(root, exact, bits, |b| jones_t32(b, n), |b| jones_t32(b, n)),
        KnotSeries::JonesT32t(t) => evaluate(root, exact, bits, |b| jones_t32t(b, t, n), |b| jones_t32t(b, t, n)),
    }
}

/// Order-0 strange identity at α: phase·(finite sum at e^{2πiα}) against −½ times
/// the weight-3/2 radial value of the matching theta function.
pub fn strange_check(side: &StrangeSide, root: &RootOfUnity, tolerance: f64, ctx: &PrecisionContext) -> Result<VerificationRecord> {
    let bits = ctx.bits();
    let inputs = json!({"side": side.to_string(), "alpha": root.to_string()});
    if *side == StrangeSide::V {
        let y = ctx.float(1) / (ctx.pi() * 2u32);
        let z = UpperHalfPoint::from_parts(ctx.float(&root.alpha()), y)?;
        let cmp = unimodal_closed(&z, ctx)?;
        return Ok(VerificationRecord::new(
            "strange",
            json!({"side": "V", "alpha": root.to_string(), "z": format_complex(z.z(), 20)}),
            &cmp.closed_form,
            &cmp.theta_side,
            cmp.difference,
            tolerance,
            ctx.digits(),
        ));
    }
    let f = side.character()?;
    let rhs = Complex::with_val(bits, -radial_value(&f, Weight::ThreeHalves, &root.cusp(), ctx)? / 2u32);
    let series = match *side {
        StrangeSide::F => KnotSeries::F,
        StrangeSide::Ft(t) => KnotSeries::Ft(t),
        StrangeSide::X(m, l) => KnotSeries::X(m, l),
        StrangeSide::V => unreachable!(),
    };
    let sum = evaluate_series(&series, root, ctx)?;
    let lhs = Complex::with_val(bits, root.pow(&side.phase()?, bits) * &sum.value);
    let residual = abs_f64(&Complex::with_val(bits, &lhs - &rhs));
    Ok(VerificationRecord::new("strange", inputs, &lhs, &rhs, residual, tolerance, ctx.digits()))
}
