//! Named coefficient functions.

use super::{make_periodic, GaussRat, Parity, PeriodicCoeffs};
use crate::error::{Error, Result};

fn table(modulus: u32, entries: &[(u32, i64)]) -> Vec<GaussRat> {
    let mut v = vec![GaussRat::zero(); modulus as usize];
    for &(r, s) in entries {
        v[(r % modulus) as usize] = GaussRat::from(s);
    }
    v
}

/// The quadratic character of conductor 12.
pub fn char_chi12() -> PeriodicCoeffs {
    make_periodic(12, table(12, &[(1, 1), (5, -1), (7, -1), (11, 1)]), 1, Parity::Even)
        .expect("chi12 is valid")
        .with_label("chi12")
}

/// χ_t of period 3·2^{t+1}, attached to the torus knot T(3, 2^t).
pub fn char_chi_t(t: u32) -> Result<PeriodicCoeffs> {
    if !(1..=20).contains(&t) {
        return Err(Error::Domain(format!("chi_t needs 1 <= t <= 20, got {t}")));
    }
    let p = 1u32 << (t + 1);
    let m = 3 * p;
    let k0 = (p - 3) * (p - 3) % (2 * m);
    let v = table(m, &[(p - 3, 1), (3 + 2 * p, 1), (p + 3, -1), (2 * p - 3, -1)]);
    Ok(make_periodic(m, v, k0, Parity::Even)?.with_label(format!("chi_t:{t}")))
}

/// χ^{(ℓ)}_{8m+4} from Hikami's series X_m^{(ℓ)}.
pub fn char_hikami(m: u32, l: u32) -> Result<PeriodicCoeffs> {
    if m < 1 || l >= m {
        return Err(Error::Domain(format!("hikami needs m >= 1 and 0 <= l < m, got m={m}, l={l}")));
    }
    let modulus = 8 * m + 4;
    let a = 2 * m - 2 * l - 1;
    let k0 = a * a % (16 * m + 8);
    let v = table(
        modulus,
        &[(a, 1), (6 * m + 2 * l + 5, 1), (2 * m + 2 * l + 3, -1), (6 * m - 2 * l + 1, -1)],
    );
    Ok(make_periodic(modulus, v, k0, Parity::Even)?.with_label(format!("hikami:{m}:{l}")))
}

/// The odd function behind Rogers' false theta F_{j,M}: +1 at j, −1 at −j.
pub fn char_false_theta(j: u32, modulus: u32) -> Result<PeriodicCoeffs> {
    if j < 1 || j >= modulus || 2 * j == modulus {
        return Err(Error::Domain(format!("false theta needs 1 <= j < M and j != M/2, got j={j}, M={modulus}")));
    }
    let k = j.min(modulus - j);
    let k0 = k * k % (2 * modulus);
    let v = table(modulus, &[(j, 1), (modulus - j, -1)]);
    Ok(make_periodic(modulus, v, k0, Parity::Odd)?.with_label(format!("false:{j}:{modulus}")))
}

/// ψ = the principal character mod 2, stored with k0 = 1 and M_ψ = {1}.
pub fn char_psi() -> PeriodicCoeffs {
    make_periodic(2, table(2, &[(1, 1)]), 1, Parity::Even).expect("psi is valid").with_label("psi")
}

/// Resolves "chi12", "chi_t:t", "hikami:m:l", "false:j:M" or "psi".
pub fn parse_builder(spec: &str) -> Result<PeriodicCoeffs> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let num = |s: &str| -> Result<u32> { s.parse().map_err(|_| Error::Parse(format!("bad integer '{s}' in builder '{spec}'"))) };
    match parts.as_slice() {
        ["chi12"] => Ok(char_chi12()),
        ["psi"] => Ok(char_psi()),
        ["chi_t", t] => char_chi_t(num(t)?),
        ["hikami", m, l] => char_hikami(num(m)?, num(l)?),
        ["false", j, m] => char_false_theta(num(j)?, num(m)?),
        _ => Err(Error::Parse(format!("unknown builder '{spec}'"))),
    }
}
