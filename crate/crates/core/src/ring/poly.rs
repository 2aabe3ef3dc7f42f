//! Dense univariate polynomials over a prime field `Z_p`.
//!
//! Coefficients are stored little-endian (`coeffs[i]` multiplies `x^i`) and
//! always reduced into `0..p`. Trailing zeros are trimmed so the zero
//! polynomial is the empty vector.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u32>, p: u32) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = Poly { coeffs };
        poly.trim();
        poly
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// Monic polynomial `x^deg + lower[deg-1] x^(deg-1) + ... + lower[0]`.
    pub fn monic_from_lower(lower: &[u32], p: u32) -> Self {
        let mut coeffs: Vec<u32> = lower.iter().map(|c| c % p).collect();
        coeffs.push(1);
        Poly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn mul(&self, other: &Poly, p: u32) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let p64 = u64::from(p);
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + u64::from(a) * u64::from(b)) % p64;
            }
        }
        Poly::new(out.into_iter().map(|c| c as u32).collect(), p)
    }

    /// Remainder of division by a monic divisor.
    pub fn rem_monic(&self, divisor: &Poly, p: u32) -> Poly {
        debug_assert!(divisor.is_monic());
        let d = divisor.degree().expect("divisor must be nonzero");
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - d;
            if lead != 0 {
                for (k, &dc) in divisor.coeffs.iter().enumerate() {
                    let sub = (u64::from(lead) * u64::from(dc)) % u64::from(p);
                    r[shift + k] = ((u64::from(r[shift + k]) + u64::from(p) - sub) % u64::from(p)) as u32;
                }
            }
            r.pop();
        }
        Poly::new(r, p)
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree `1..=deg/2`.
    pub fn is_irreducible(&self, p: u32) -> bool {
        let deg = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        for d in 1..=deg / 2 {
            let mut found = false;
            for_each_monic(d, p, |cand| {
                if !found && self.rem_monic(cand, p).is_zero() {
                    found = true;
                }
            });
            if found {
                return false;
            }
        }
        true
    }

    /// Write the polynomial in `x`, highest degree first, e.g. `x^2+2x+1`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => var.to_string(),
                (1, c) => format!("{c}{var}"),
                (i, 1) => format!("{var}^{i}"),
                (i, c) => format!("{c}{var}^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

/// Visit every monic polynomial of degree `deg` over `Z_p`, in lexicographic
/// order of the lower coefficient tuple `(c_0, ..., c_{deg-1})`.
pub fn for_each_monic(deg: usize, p: u32, mut f: impl FnMut(&Poly)) {
    let mut lower = vec![0u32; deg];
    loop {
        f(&Poly::monic_from_lower(&lower, p));
        // c_0 is the most significant digit of the lexicographic order
        let mut pos = deg;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            lower[pos] += 1;
            if lower[pos] < p {
                break;
            }
            lower[pos] = 0;
        }
    }
}

/// The lexicographically smallest monic irreducible polynomial of degree
/// `deg` over `Z_p`, ordering by `(c_0, ..., c_{deg-1})`.
pub fn lex_min_irreducible(deg: usize, p: u32) -> Option<Poly> {
    let mut result = None;
    // for_each_monic has no early exit; the degrees involved are tiny
    for_each_monic(deg, p, |cand| {
        if result.is_none() && cand.is_irreducible(p) {
            result = Some(cand.clone());
        }
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reducibility oracle by root search and explicit products of monic
    /// factors, independent of trial division.
    fn reducible_by_products(f: &Poly, p: u32) -> bool {
        let deg = f.degree().unwrap();
        for d in 1..=deg / 2 {
            let mut hit = false;
            for_each_monic(d, p, |a| {
                for_each_monic(deg - d, p, |b| {
                    if a.mul(b, p) == *f {
                        hit = true;
                    }
                });
            });
            if hit {
                return true;
            }
        }
        false
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let m = lex_min_irreducible(2, 2).unwrap();
        assert_eq!(m.coeffs(), &[1, 1, 1]);
        let mut irreducible = Vec::new();
        for_each_monic(2, 2, |f| {
            if !reducible_by_products(f, 2) {
                irreducible.push(f.clone());
            }
        });
        assert_eq!(irreducible, vec![m]);
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        let m = lex_min_irreducible(2, 3).unwrap();
        assert_eq!(m.to_string(), "x^2+1");
        let mut first = None;
        for_each_monic(2, 3, |f| {
            if first.is_none() && !reducible_by_products(f, 3) {
                first = Some(f.clone());
            }
        });
        assert_eq!(first, Some(m));
    }

    #[test]
    fn trial_division_agrees_with_products() {
        for (p, deg) in [(2, 3), (2, 4), (3, 3), (5, 2), (7, 2)] {
            for_each_monic(deg, p, |f| {
                assert_eq!(f.is_irreducible(p), !reducible_by_products(f, p), "{f} over Z{p}");
            });
        }
    }

    #[test]
    fn remainder_and_display() {
        let f = Poly::new(vec![0, 0, 1], 3);
        let g = Poly::new(vec![1, 2, 0, 1], 3); // x^3 + 2x + 1
        assert_eq!(g.rem_monic(&f, 3).to_string(), "2x+1");
        assert_eq!(Poly::new(vec![1, 1, 1], 2).to_string(), "x^2+x+1");
        assert_eq!(Poly::new(vec![0, 2], 3).to_string(), "2x");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
