//! Factorization of integer polynomials (Zassenhaus: factor modulo a prime,
//! Hensel lift, recombine).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::poly::IntPoly;

/// Number of good primes tried before settling on the one with the fewest
/// modular factors.
const PRIME_CANDIDATES: usize = 5;

/// Complete factorization: `f = unit * content * prod g_i^e_i` with each `g_i`
/// irreducible over the integers, primitive, positive leading coefficient.
/// Returned factors are sorted by degree and then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Signed content, so that `f = content * prod g_i^e_i`.
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

pub fn factor(f: &IntPoly) -> Factorization {
    if f.is_zero() {
        return Factorization {
            content: BigInt::zero(),
            factors: Vec::new(),
        };
    }
    let mut content = f.content();
    if f.leading().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    for (part, e) in f.squarefree_decomposition() {
        for g in factor_squarefree(&part) {
            factors.push((g, e));
        }
    }
    sort_factors(&mut factors);
    Factorization { content, factors }
}

/// Irreducible factors of a square-free polynomial, ignoring content.
pub fn irreducible_factors(f: &IntPoly) -> Vec<IntPoly> {
    let mut out: Vec<IntPoly> = Vec::new();
    for (part, _) in f.squarefree_decomposition() {
        out.extend(factor_squarefree(&part));
    }
    let mut tagged: Vec<(IntPoly, u32)> = out.into_iter().map(|g| (g, 1)).collect();
    sort_factors(&mut tagged);
    tagged.dedup();
    tagged.into_iter().map(|(g, _)| g).collect()
}

fn sort_factors(v: &mut [(IntPoly, u32)]) {
    v.sort_by(|(a, ea), (b, eb)| {
        a.deg()
            .cmp(&b.deg())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
            .then(ea.cmp(eb))
    });
}

/// Factors a primitive square-free polynomial of positive degree.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_part();
    if f.deg() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut f = f;
    if f.coeff(0).is_zero() {
        out.push(IntPoly::x());
        f = f.div_exact(&IntPoly::x()).expect("x divides");
    }
    if f.deg() == 1 {
        out.push(f);
    } else if f.deg() > 1 {
        out.extend(zassenhaus(&f));
    }
    out
}

fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.deg();
    let lc = f.leading();
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte: every factor g of f satisfies |g|_inf <= 2^n |f|_2, so the
    // coefficients of lc * g are bounded by |lc| 2^n |f|_2.
    let norm = f.norm2_sq().sqrt() + BigInt::one();
    let bound = lc.abs() * (BigInt::one() << n) * norm * 2u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift(f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

/// Picks a prime not dividing the leading coefficient for which `f` stays
/// square-free, preferring the one with the fewest modular factors.
fn choose_prime(f: &IntPoly) -> (u64, Vec<Vec<u64>>) {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut found = 0;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut candidate = 1009u64;
    while found < PRIME_CANDIDATES {
        candidate = next_prime(candidate + 1);
        let p = candidate;
        let lc_mod = modp::reduce_big(&f.leading(), p);
        if lc_mod == 0 {
            continue;
        }
        let fp = modp::from_intpoly(f, p);
        let dfp = modp::derivative(&fp, p);
        if modp::gcd(&fp, &dfp, p).len() != 1 {
            continue;
        }
        found += 1;
        let monic = modp::make_monic(&fp, p);
        let facs = modp::factor_squarefree_monic(&monic, p, &mut rng);
        let better = match &best {
            None => true,
            Some((_, b)) => facs.len() < b.len(),
        };
        if better {
            let done = facs.len() == 1;
            best = Some((p, facs));
            if done {
                break;
            }
        }
    }
    best.expect("some prime is good")
}

fn next_prime(mut n: u64) -> u64 {
    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// Lifts `f = lc * prod u_i (mod p)` with monic `u_i` to the same shape
/// modulo `modulus`, a power of `p`. Returns the lifted monic factors.
fn hensel_lift(f: &IntPoly, factors: &[Vec<u64>], p: u64, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let fm = modm::from_intpoly(f, modulus);
    let mut out = Vec::with_capacity(factors.len());
    lift_tree(&fm, factors, p, modulus, &mut out);
    out
}

fn lift_tree(f: &[BigInt], factors: &[Vec<u64>], p: u64, modulus: &BigInt, out: &mut Vec<Vec<BigInt>>) {
    if factors.len() == 1 {
        let inv = modm::inverse(f.last().expect("nonzero"), modulus);
        out.push(modm::scale(f, &inv, modulus));
        return;
    }
    let k = factors.len() / 2;
    let (left, right) = factors.split_at(k);
    let lc_p = modp::reduce_big(f.last().expect("nonzero"), p);
    let mut g = vec![lc_p];
    for u in left {
        g = modp::mul(&g, u, p);
    }
    let mut h = vec![1u64];
    for u in right {
        h = modp::mul(&h, u, p);
    }
    let (gl, hl) = lift_pair(f, &g, &h, p, modulus);
    lift_tree(&gl, left, p, modulus, out);
    lift_tree(&hl, right, p, modulus, out);
}

/// Quadratic Hensel lifting of `f = g h (mod p)` with `h` monic to `modulus`.
fn lift_pair(f: &[BigInt], g: &[u64], h: &[u64], p: u64, modulus: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let (d, s, t) = modp::xgcd(g, h, p);
    debug_assert_eq!(d, vec![1]);
    let to_big = |v: &[u64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let mut g = to_big(g);
    let mut h = to_big(h);
    let mut s = to_big(&s);
    let mut t = to_big(&t);
    let mut m = BigInt::from(p);
    while &m < modulus {
        let m2 = (&m * &m).min(modulus.clone());
        let fm = modm::reduce(f, &m2);
        let e = modm::sub(&fm, &modm::mul(&g, &h, &m2), &m2);
        let (q, r) = modm::divrem_monic(&modm::mul(&s, &e, &m2), &h, &m2);
        let g2 = modm::add(
            &modm::add(&g, &modm::mul(&t, &e, &m2), &m2),
            &modm::mul(&q, &g, &m2),
            &m2,
        );
        let h2 = modm::add(&h, &r, &m2);
        let b = modm::sub(
            &modm::add(&modm::mul(&s, &g2, &m2), &modm::mul(&t, &h2, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, dd) = modm::divrem_monic(&modm::mul(&s, &b, &m2), &h2, &m2);
        let s2 = modm::sub(&s, &dd, &m2);
        let t2 = modm::sub(
            &modm::sub(&t, &modm::mul(&t, &b, &m2), &m2),
            &modm::mul(&c, &g2, &m2),
            &m2,
        );
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = m2;
    }
    (g, h)
}

/// Subset recombination of lifted modular factors into true factors.
fn recombine(f: &IntPoly, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let lc = f.leading();
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = modm::mul(&g, &lifted[i], modulus);
            }
            let candidate = IntPoly::new(modm::symmetric(&g, modulus)).primitive_part();
            // cheap constant term test before a full division
            let plausible = !candidate.coeff(0).is_zero() && (f.coeff(0) % candidate.coeff(0)).is_zero();
            if plausible {
                if let Some(q) = f.div_exact(&candidate) {
                    out.push(candidate);
                    f = q;
                    let mut keep = Vec::new();
                    for (i, u) in lifted.into_iter().enumerate() {
                        if !subset.contains(&i) {
                            keep.push(u);
                        }
                    }
                    lifted = keep;
                    found = true;
                    break;
                }
            }
            if !next_subset(&mut subset, r) {
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.deg() > 0 {
        out.push(f.primitive_part());
    }
    out
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Polynomials over `Z/p`, coefficients lowest first, trimmed.
mod modp {
    use super::*;

    pub fn reduce_big(c: &BigInt, p: u64) -> u64 {
        c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
    }

    pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn from_intpoly(f: &IntPoly, p: u64) -> Vec<u64> {
        trim(f.coeffs().iter().map(|c| reduce_big(c, p)).collect())
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a, p);
            }
            a = mulmod(a, a, p);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    pub fn derivative(f: &[u64], p: u64) -> Vec<u64> {
        trim(
            f.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
        trim(a.iter().map(|&x| mulmod(x, c, p)).collect())
    }

    pub fn make_monic(a: &[u64], p: u64) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => scale(a, inv(l, p), p),
        }
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty());
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let li = inv(*b.last().expect("nonzero"), p);
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + db], li, p);
            if c != 0 {
                for (j, &y) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulmod(c, y, p)) % p;
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    /// Monic gcd.
    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        make_monic(&a, p)
    }

    /// Extended gcd: returns `(d, s, t)` with `s a + t b = d`, `d` monic.
    pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let li = inv(*r0.last().expect("nonzero gcd"), p);
        (scale(&r0, li, p), scale(&s0, li, p), scale(&t0, li, p))
    }

    pub fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        rem(&r, m, p)
    }

    /// Distinct degree factorization followed by Cantor–Zassenhaus equal degree
    /// splitting. `f` must be monic and square-free; `p` odd.
    pub fn factor_squarefree_monic(f: &[u64], p: u64, rng: &mut StdRng) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut i = 0;
        while f.len() > 1 {
            i += 1;
            if 2 * i > f.len() - 1 {
                out.push(f.clone());
                break;
            }
            h = powmod_poly(&h, p, &f, p);
            let g = gcd(&sub(&h, &x, p), &f, p);
            if g.len() > 1 {
                f = divrem(&f, &g, p).0;
                h = rem(&h, &f, p);
                equal_degree(&g, i, p, rng, &mut out);
            }
        }
        out
    }

    fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut StdRng, out: &mut Vec<Vec<u64>>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        loop {
            let a: Vec<u64> = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.len() < 2 {
                continue;
            }
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1)/2)
            let mut norm = a.clone();
            let mut frob = a.clone();
            for _ in 1..d {
                frob = powmod_poly(&frob, p, f, p);
                norm = rem(&mul(&norm, &frob, p), f, p);
            }
            let b = powmod_poly(&norm, (p - 1) / 2, f, p);
            let g = gcd(&sub(&b, &[1], p), f, p);
            if g.len() > 1 && g.len() < f.len() {
                let other = divrem(f, &g, p).0;
                equal_degree(&g, d, p, rng, out);
                equal_degree(&make_monic(&other, p), d, p, rng, out);
                return;
            }
        }
    }
}

/// Polynomials over `Z/m` with big modulus, coefficients in `[0, m)`.
mod modm {
    use super::*;

    fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        trim(a.iter().map(|c| c.mod_floor(m)).collect())
    }

    pub fn from_intpoly(f: &IntPoly, m: &BigInt) -> Vec<BigInt> {
        reduce(f.coeffs(), m)
    }

    pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
                .collect(),
        )
    }

    pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
                .collect(),
        )
    }

    pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        reduce(&out, m)
    }

    pub fn scale(a: &[BigInt], c: &BigInt, m: &BigInt) -> Vec<BigInt> {
        trim(a.iter().map(|x| (x * c).mod_floor(m)).collect())
    }

    pub fn inverse(a: &BigInt, m: &BigInt) -> BigInt {
        let g = a.extended_gcd(m);
        debug_assert!(g.gcd.is_one());
        g.x.mod_floor(m)
    }

    /// Division by a monic polynomial.
    pub fn divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let mut r = a.to_vec();
        let mut q = vec![BigInt::zero(); a.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db].mod_floor(m);
            if !c.is_zero() {
                for (j, y) in b.iter().enumerate() {
                    r[k + j] = (&r[k + j] - &c * y).mod_floor(m);
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    /// Symmetric representatives in `(-m/2, m/2]`.
    pub fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let half = m >> 1usize;
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn expand(fac: &Factorization) -> IntPoly {
        let mut acc = IntPoly::constant(fac.content.clone());
        for (g, e) in &fac.factors {
            acc = acc.mul(&g.pow(*e));
        }
        acc
    }

    #[test]
    fn factors_cyclotomic_product() {
        // x^12 - 1 = prod over d | 12 of cyclotomic polynomials
        let f = p(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fac = factor(&f);
        assert_eq!(fac.factors.len(), 6);
        assert_eq!(expand(&fac), f);
    }

    #[test]
    fn irreducible_stays_whole() {
        let f = p(&[-2, 0, 0, 0, 1]); // x^4 - 2
        let fac = factor(&f);
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        let g = p(&[1, 0, 0, 0, 1]);
        assert_eq!(factor(&g).factors, vec![(g.clone(), 1)]);
    }

    #[test]
    fn non_monic_and_repeated() {
        let a = p(&[1, 3]); // 3x + 1
        let b = p(&[-5, 0, 2]); // 2x^2 - 5
        let c = p(&[0, 1]);
        let f = a.pow(2).mul(&b).mul(&c).scale(&BigInt::from(-6));
        let fac = factor(&f);
        assert_eq!(fac.content, BigInt::from(-6));
        assert_eq!(fac.factors, vec![(c, 1), (a, 2), (b, 1)]);
        assert_eq!(expand(&fac), f);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2 - 2)(x^2 - 3) times x^4 - 10x^2 + 1, the minimal polynomial of
        // sqrt 2 + sqrt 3, which splits into quadratics modulo every prime
        let sd = p(&[1, 0, -10, 0, 1]);
        let f = sd.mul(&p(&[-2, 0, 1])).mul(&p(&[-3, 0, 1]));
        let fac = factor(&f);
        assert_eq!(fac.factors.len(), 3);
        assert!(fac.factors.iter().any(|(g, _)| *g == sd));
        assert_eq!(expand(&fac), f);
    }
}
