//! Roots of univariate polynomials over the base field.
//!
//! Roots are found modulo a prime by Cantor–Zassenhaus and, over ℚ, lifted
//! back by rational reconstruction. Every candidate is checked by exact
//! evaluation, so only genuine roots are returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{mulmod, powmod, Field};

/// Prime used to find rational roots: 2^61 − 1.
const RECON_PRIME: u64 = (1u64 << 61) - 1;

/// Evaluates a polynomial given low-to-high coefficients.
pub fn eval<F: Field>(coeffs: &[F], x: &F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Distinct roots in the base field, in no particular order.
pub fn roots<F: Field>(coeffs: &[F]) -> Vec<F> {
    let coeffs = trim(coeffs.to_vec());
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let p = match F::characteristic() {
        0 => RECON_PRIME,
        p => p,
    };
    let Some(modp) = coeffs.iter().map(|c| c.residue_mod(p)).collect::<Option<Vec<u64>>>() else {
        return Vec::new();
    };
    let mut out: Vec<F> = Vec::new();
    for r in roots_mod(&modp, p) {
        if let Some(x) = F::from_residue(r, p) {
            if eval(&coeffs, &x).is_zero() && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

fn trim<F: Field>(mut v: Vec<F>) -> Vec<F> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

type Poly = Vec<u64>;

fn ptrim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmonic(a: Poly, p: u64) -> Poly {
    let a = ptrim(a);
    match a.last() {
        None => a,
        Some(&lc) => {
            let inv = powmod(lc, p - 2, p);
            a.into_iter().map(|c| mulmod(c, inv, p)).collect()
        }
    }
}

fn pmulmod(a: &Poly, b: &Poly, m: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    prem(prod, m, p)
}

/// Remainder modulo a monic polynomial.
fn prem(mut a: Poly, m: &Poly, p: u64) -> Poly {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lc = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lc != 0 {
            for (k, &c) in m.iter().enumerate() {
                let t = mulmod(lc, c, p);
                a[shift + k] = (a[shift + k] + p - t) % p;
            }
        }
        a.pop();
    }
    ptrim(a)
}

fn pgcd(a: Poly, b: Poly, p: u64) -> Poly {
    let (mut a, mut b) = (pmonic(a, p), pmonic(b, p));
    while !b.is_empty() {
        let r = prem(a, &b, p);
        a = b;
        b = pmonic(r, p);
    }
    a
}

fn ppow(base: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
    let mut r = prem(vec![1], m, p);
    let mut b = prem(base.clone(), m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = pmulmod(&r, &b, m, p);
        }
        b = pmulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

fn psub_x(a: &Poly, p: u64) -> Poly {
    let mut a = a.clone();
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + p - 1) % p;
    ptrim(a)
}

fn pdiv_exact(a: &Poly, b: &Poly, p: u64) -> Poly {
    let db = b.len() - 1;
    let mut a = a.clone();
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while a.len() > db {
        let lc = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        q[shift] = lc;
        for (k, &c) in b.iter().enumerate() {
            let t = mulmod(lc, c, p);
            a[shift + k] = (a[shift + k] + p - t) % p;
        }
        a.pop();
    }
    q
}

/// Distinct roots of `f` in 𝔽_p.
pub(crate) fn roots_mod(f: &[u64], p: u64) -> Vec<u64> {
    let f = pmonic(f.iter().map(|c| c % p).collect(), p);
    if f.len() <= 1 {
        return Vec::new();
    }
    if p < 4096 {
        return (0..p)
            .filter(|&x| f.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, p) + c) % p) == 0)
            .collect();
    }
    // split off the product of linear factors: gcd(f, x^p − x)
    let xp = ppow(&vec![0, 1], p, &f, p);
    let g = pgcd(f.clone(), psub_x(&xp, p), p);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut stack = vec![g];
    while let Some(g) = stack.pop() {
        match g.len() {
            0 | 1 => {}
            2 => out.push((p - g[0]) % p),
            _ => loop {
                let a = rng.gen_range(0..p);
                let h = ppow(&vec![a, 1], (p - 1) / 2, &g, p);
                let mut h1 = h.clone();
                if h1.is_empty() {
                    h1.push(0);
                }
                h1[0] = (h1[0] + p - 1) % p;
                let d = pgcd(g.clone(), ptrim(h1), p);
                if d.len() > 1 && d.len() < g.len() {
                    let rest = pmonic(pdiv_exact(&g, &d, p), p);
                    stack.push(d);
                    stack.push(rest);
                    break;
                }
            },
        }
    }
    out.sort_unstable();
    out
}

/// Minimal polynomial (low-to-high, monic) of an element, given a routine
/// producing its powers as coordinate vectors starting from the identity.
pub fn minimal_polynomial<F: Field>(one: Vec<F>, mut times: impl FnMut(&[F]) -> Vec<F>) -> Vec<F> {
    let n = one.len();
    let mut powers: Vec<Vec<F>> = vec![one];
    loop {
        let next = times(powers.last().unwrap());
        // solve Σ c_k s^k = s^d
        let a = super::Matrix::from_columns(n, &powers);
        let b = super::Matrix::from_columns(n, std::slice::from_ref(&next));
        if let Some(x) = super::solve_linear(&a, &b).expect("shapes agree") {
            let mut poly: Vec<F> = x.column(0).into_iter().map(|c| -c).collect();
            poly.push(F::one());
            return poly;
        }
        powers.push(next);
        assert!(powers.len() <= n + 1, "minimal polynomial degree exceeds dimension");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};
    use num_traits::One;

    type Q = Rational;

    fn q(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn rational_roots() {
        // (x − 2)(x + 3)(2x − 1)(x² + 1)
        let f = q(&[6, -13, 7, -11, 1, 2]);
        let mut r = roots(&f);
        r.sort_by_key(|x| x.to_string());
        assert_eq!(r.len(), 3);
        for x in [Q::from_i64(2), Q::from_i64(-3), Q::new(1, 2)] {
            assert!(r.contains(&x), "{x} missing");
        }
        assert!(roots(&q(&[1, 0, 1])).is_empty());
        assert!(roots(&q(&[5])).is_empty());
    }

    #[test]
    fn prime_field_roots() {
        type F = Fp<1_000_003>;
        let f: Vec<F> = [6i64, -5, 1].iter().map(|&x| F::from_i64(x)).collect();
        let mut r: Vec<u32> = roots(&f).into_iter().map(|x| x.value()).collect();
        r.sort();
        assert_eq!(r, vec![2, 3]);
    }

    #[test]
    fn repeated_roots_reported_once() {
        // (x − 1)^3
        assert_eq!(roots(&q(&[-1, 3, -3, 1])), vec![Q::one()]);
    }
}
