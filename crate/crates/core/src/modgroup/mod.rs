//! Γ1(N), Γ_M, the theta multiplier and cusp equivalence.

mod cusp;
mod matrix;

use std::fmt;

use rand::Rng;
use rug::{Complex, Integer, Rational};

pub use cusp::RationalCusp;
pub use matrix::MoebiusMap;

use crate::error::{Error, Result};
use crate::numerics::exp_two_pi_i;
use crate::periodic::PeriodicCoeffs;

/// An exact root of unity e^{2πi·turns}, turns reduced to [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase(Rational);

impl Phase {
    pub fn from_turns(turns: Rational) -> Self {
        let floor = turns.clone().floor();
        Phase(turns - floor)
    }

    pub fn one() -> Self {
        Phase(Rational::new())
    }

    pub fn turns(&self) -> &Rational {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Phase::from_turns(Rational::from(-&self.0))
    }

    pub fn mul(&self, o: &Phase) -> Self {
        Phase::from_turns(Rational::from(&self.0 + &o.0))
    }

    pub fn to_complex(&self, bits: u32) -> Complex {
        exp_two_pi_i(&self.0, bits)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{})", self.0)
    }
}

pub fn in_gamma1(n: i64, g: &MoebiusMap) -> bool {
    let n = n.abs();
    n != 0 && g.c.rem_euclid(n) == 0 && (g.a - 1).rem_euclid(n) == 0 && (g.d - 1).rem_euclid(n) == 0
}

/// Γ_M: Γ1(2M), with b even in addition when M is odd.
pub fn in_gamma_m(modulus: u32, g: &MoebiusMap) -> bool {
    in_gamma1(2 * modulus as i64, g) && (modulus % 2 == 0 || g.b.rem_euclid(2) == 0)
}

/// ε_d: 1 for d ≡ 1 and i for d ≡ 3 (mod 4).
pub fn epsilon_d(d: i64) -> Result<Phase> {
    match d.rem_euclid(4) {
        1 => Ok(Phase::one()),
        3 => Ok(Phase::from_turns(Rational::from((1, 4)))),
        _ => Err(Error::Domain(format!("ε_d needs odd d, got {d}"))),
    }
}

/// Extended Jacobi symbol (a/d) for odd d of either sign.
///
/// For d < 0, (a/d) = (a/|d|) times −1 when a < 0; (0/±1) = 1.
pub fn jacobi_extended(a: i64, d: i64) -> Result<i32> {
    if d % 2 == 0 {
        return Err(Error::Domain(format!("Jacobi symbol needs odd d, got {d}")));
    }
    let base = Integer::from(a).jacobi(&Integer::from(d.unsigned_abs()));
    Ok(if d < 0 && a < 0 { -base } else { base })
}

/// χ(γ) = e^{πi a b k0/M} (2cM/d) ε_d^{−1}.
pub fn multiplier_chi(modulus: u32, k0: u32, g: &MoebiusMap) -> Result<Phase> {
    if !in_gamma_m(modulus, g) {
        return Err(Error::NotInGroup(format!("{g} ∉ Γ_{modulus}")));
    }
    let m = modulus as i128;
    let abk = (g.a as i128 * g.b as i128 % (2 * m)) * k0 as i128 % (2 * m);
    let mut turns = Rational::from((abk as i64, (2 * m) as i64));
    let top = 2i128 * g.c as i128 * m;
    let top = i64::try_from(top).map_err(|_| Error::Domain("2cM overflows".into()))?;
    match jacobi_extended(top, g.d)? {
        1 => {}
        -1 => turns += Rational::from((1, 2)),
        _ => unreachable!("gcd(2cM, d) = 1 for γ in Γ_M"),
    }
    let eps = epsilon_d(g.d)?;
    turns -= eps.turns();
    Ok(Phase::from_turns(turns))
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.signum() * a, a.signum(), 0);
    }
    let (g, x, y) = egcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Some g ∈ SL2(ℤ) with g(i∞) = α.
pub fn cusp_to_infinity_map(alpha: &RationalCusp) -> MoebiusMap {
    if alpha.is_infinity() {
        return MoebiusMap::IDENTITY;
    }
    let (p, q) = (alpha.p(), alpha.q() as i64);
    // p·v − u·q = 1
    let (_, x, y) = egcd(p, q);
    MoebiusMap::new(p, -y, q, x).expect("extended Euclid yields determinant 1")
}

/// Decides whether some γ ∈ Γ_M maps α to β and returns a reduced witness.
pub fn cusp_equivalent(modulus: u32, alpha: &RationalCusp, beta: &RationalCusp) -> (bool, Option<MoebiusMap>) {
    if alpha == beta {
        return (true, Some(MoebiusMap::IDENTITY));
    }
    let ga = cusp_to_infinity_map(alpha);
    let gb = cusp_to_infinity_map(beta);
    let base = gb * ga.inverse();
    let step = gb * MoebiusMap::T * ga.inverse();
    // entries are affine in j: base + j·(step − base)
    let slope = [step.a - base.a, step.b - base.b, step.c - base.c, step.d - base.d];
    let at = |j: i64, sign: i64| -> MoebiusMap {
        let e = |x: i64, s: i64| sign * (x + j * s);
        MoebiusMap {
            a: e(base.a, slope[0]),
            b: e(base.b, slope[1]),
            c: e(base.c, slope[2]),
            d: e(base.d, slope[3]),
        }
    };
    let period = 2 * modulus as i64;
    let mut best: Option<(i64, i64, MoebiusMap)> = None;
    for sign in [1i64, -1] {
        for j0 in 0..period {
            if !in_gamma_m(modulus, &at(j0, sign)) {
                continue;
            }
            let (j, g) = reduce_in_class(j0, period, |j| at(j, sign));
            let key = (g.max_abs_entry(), j.abs());
            if best.as_ref().map_or(true, |(m, bj, _)| key < (*m, bj.abs())) {
                best = Some((key.0, j, g));
            }
        }
    }
    match best {
        Some((_, _, g)) => (true, Some(g)),
        None => (false, None),
    }
}

/// Walks j through j0 + period·ℤ to the smallest max-entry (a convex function of j).
fn reduce_in_class(j0: i64, period: i64, at: impl Fn(i64) -> MoebiusMap) -> (i64, MoebiusMap) {
    let cost = |j: i64| at(j).max_abs_entry();
    let mut j = j0;
    for dir in [-period, period] {
        while cost(j + dir) < cost(j) {
            j += dir;
        }
    }
    (j, at(j))
}

/// α ∈ B_M: Γ_M-equivalent to i∞.
pub fn in_b_m(modulus: u32, alpha: &RationalCusp) -> bool {
    cusp_equivalent(modulus, alpha, &RationalCusp::INFINITY).0
}

/// α ∈ A_M: B_M when the primed sum is nonzero, otherwise equivalent to 0 or i∞.
pub fn in_a_m(f: &PeriodicCoeffs, alpha: &RationalCusp) -> bool {
    let m = f.modulus();
    if in_b_m(m, alpha) {
        return true;
    }
    f.primed_sum().is_zero() && cusp_equivalent(m, alpha, &RationalCusp::integer(0)).0
}

/// A pseudorandom element of Γ_M with entries bounded by `bound` (c ≠ 0).
///
/// |c| is drawn log-uniformly so that both short and long matrices occur.
pub fn random_gamma_m<R: Rng>(modulus: u32, bound: i64, negative_d: bool, rng: &mut R) -> MoebiusMap {
    let m2 = 2 * modulus as i64;
    assert!(bound >= 4 * m2, "bound too small for Γ_{modulus}");
    loop {
        let kmax = (bound / (2 * m2)).max(1);
        let k = ((kmax as f64).powf(rng.random::<f64>())).round().max(1.0) as i64;
        let c = if rng.random::<bool>() { m2 * k } else { -m2 * k };
        let lmax = (bound / (2 * m2)).max(1);
        let l = ((lmax as f64).powf(rng.random::<f64>())).round() as i64;
        let d = if negative_d { 1 - m2 * l.max(1) } else { 1 + m2 * l };
        if egcd(c, d).0 != 1 {
            continue;
        }
        // a ≡ d^{-1} (mod |c|), hence a ≡ 1 (mod 2M)
        let (_, x, _) = egcd(d, c.abs());
        let mut a = x.rem_euclid(c.abs());
        let mut b = (a as i128 * d as i128 - 1) / c as i128;
        if modulus % 2 == 1 && b.rem_euclid(2) != 0 {
            a += c;
            b += d as i128;
        }
        let g = MoebiusMap { a, b: b as i64, c, d };
        debug_assert!(in_gamma_m(modulus, &g));
        if g.max_abs_entry() <= bound && MoebiusMap::new(g.a, g.b, g.c, g.d).is_ok() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(a: i64, b: i64, c: i64, d: i64) -> MoebiusMap {
        MoebiusMap::new(a, b, c, d).unwrap()
    }

    fn cusp(s: &str) -> RationalCusp {
        s.parse().unwrap()
    }

    #[test]
    fn membership() {
        assert!(in_gamma1(4, &g(1, 0, 4, 1)));
        assert!(in_gamma1(4, &g(1, 1, 0, 1)));
        assert!(!in_gamma1(4, &g(0, -1, 1, 0)));
        assert!(in_gamma_m(12, &g(1, 1, 0, 1)));
        assert!(!in_gamma_m(3, &g(1, 1, 0, 1)));
        assert!(in_gamma_m(3, &g(1, 2, 0, 1)));
    }

    #[test]
    fn epsilon_and_jacobi() {
        assert_eq!(epsilon_d(1).unwrap(), Phase::one());
        assert_eq!(epsilon_d(3).unwrap(), Phase::from_turns(Rational::from((1, 4))));
        assert_eq!(epsilon_d(-5).unwrap(), epsilon_d(3).unwrap());
        assert!(epsilon_d(4).is_err());
        assert_eq!(jacobi_extended(3, 5).unwrap(), -1);
        assert_eq!(jacobi_extended(0, 1).unwrap(), 1);
        assert_eq!(jacobi_extended(0, -1).unwrap(), 1);
        assert_eq!(jacobi_extended(2, 7).unwrap(), 1);
        assert_eq!(jacobi_extended(-3, -1).unwrap(), -1);
        assert_eq!(jacobi_extended(3, -1).unwrap(), 1);
        assert_eq!(jacobi_extended(6, 9).unwrap(), 0);
        assert!(jacobi_extended(1, 2).is_err());
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multiplier_chi(12, 1, &g(1, 1, 0, 1)).unwrap(), Phase::from_turns(Rational::from((1, 24))));
        assert_eq!(multiplier_chi(2, 1, &g(1, 0, 4, 1)).unwrap(), Phase::one());
        assert_eq!(multiplier_chi(12, 1, &g(1, 0, 24, 1)).unwrap(), Phase::one());
        assert!(multiplier_chi(12, 1, &g(0, -1, 1, 0)).is_err());
    }

    #[test]
    fn action() {
        assert_eq!(g(1, 0, 4, 1).apply_cusp(&RationalCusp::INFINITY), cusp("1/4"));
        assert_eq!(g(1, 1, 0, 1).apply_cusp(&cusp("0")), cusp("1"));
        assert_eq!(g(1, 0, 24, 1).inverse().apply_cusp(&RationalCusp::INFINITY), cusp("-1/24"));
        assert_eq!(g(1, 0, -24, 1).apply_cusp(&cusp("1/24")), RationalCusp::INFINITY);
        let z = Complex::with_val(100, (0, 1));
        let w = g(1, 0, 4, 1).apply_complex(&z).unwrap();
        // i/(4i+1) = (4 + i)/17
        assert!((w.real().to_f64() - 4.0 / 17.0).abs() < 1e-25 && (w.imag().to_f64() - 1.0 / 17.0).abs() < 1e-25);
        assert!(g(1, 0, 4, 1).apply_complex(&Complex::with_val(100, (-0.25, 0))).is_err());
    }

    #[test]
    fn cusp_parsing() {
        assert_eq!(cusp("inf"), RationalCusp::INFINITY);
        assert_eq!(cusp("2/4"), cusp("1/2"));
        assert_eq!(cusp("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<RationalCusp>().is_err());
        assert!("x".parse::<RationalCusp>().is_err());
        assert_eq!("1 0 24 1".parse::<MoebiusMap>().unwrap(), g(1, 0, 24, 1));
        assert!("1 1 1 1".parse::<MoebiusMap>().is_err());
    }

    #[test]
    fn equivalence_examples() {
        let (ok, w) = cusp_equivalent(2, &cusp("1/4"), &RationalCusp::INFINITY);
        assert!(ok);
        let w = w.unwrap();
        assert!(in_gamma_m(2, &w));
        assert_eq!(w.apply_cusp(&cusp("1/4")), RationalCusp::INFINITY);
        assert_eq!(w, g(1, 0, -4, 1));
        assert!(!cusp_equivalent(2, &cusp("0"), &RationalCusp::INFINITY).0);
        assert_eq!(cusp_equivalent(5, &cusp("3/7"), &cusp("3/7")), (true, Some(MoebiusMap::IDENTITY)));
    }

    #[test]
    fn cusp_sets() {
        use crate::periodic::{char_chi12, char_psi};
        assert!(in_a_m(&char_chi12(), &cusp("0")));
        assert!(in_a_m(&char_psi(), &cusp("1/4")));
        assert!(!in_a_m(&char_psi(), &cusp("0")));
        assert!(in_b_m(12, &cusp("1/24")));
    }

    #[test]
    fn random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [2u32, 3, 12, 24, 48] {
            for i in 0..40 {
                let x = random_gamma_m(m, 10_000, i % 3 == 0, &mut rng);
                assert!(in_gamma_m(m, &x), "{x}");
                assert!(x.max_abs_entry() <= 10_000);
                assert_eq!(x.d < 0, i % 3 == 0);
            }
        }
    }
}
