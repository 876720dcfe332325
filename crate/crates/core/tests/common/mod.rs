// Reference computations kept apart from the library so the tests do not
// check the code against itself.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use signpat::{RealMatrix, Sign, SignPattern};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All permutations of `0..n` by Heap's algorithm, each with its parity
/// (`true` for odd).
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![(p.clone(), false)];
    let mut c = vec![0usize; n];
    let mut odd = false;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            odd = !odd;
            out.push((p.clone(), odd));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn parity_by_inversions(sigma: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Sign of the determinant term of `sigma`, from the entries of `a`.
pub fn term_sign(a: &SignPattern, sigma: &[usize]) -> Sign {
    let mut s = Sign::parity(parity_by_inversions(sigma));
    for (i, &j) in sigma.iter().enumerate() {
        s = s * a.get(i, j);
    }
    s
}

pub fn leibniz_det(b: &RealMatrix, perms: &[(Vec<usize>, bool)]) -> f64 {
    perms
        .iter()
        .map(|(p, odd)| {
            let t: f64 = p.iter().enumerate().map(|(i, &j)| b[(i, j)]).product();
            if *odd {
                -t
            } else {
                t
            }
        })
        .sum()
}

/// Signs of the nonzero Leibniz terms of a pattern.
pub fn pattern_term_signs(a: &SignPattern) -> (bool, bool) {
    let (mut pos, mut neg) = (false, false);
    for (p, _) in permutations(a.n()) {
        match term_sign(a, &p) {
            Sign::Plus => pos = true,
            Sign::Minus => neg = true,
            Sign::Zero => {}
        }
    }
    (pos, neg)
}

/// Characteristic polynomial `det(xI - B)` from power traces and Newton's
/// identities; coefficients lowest degree first, monic.
pub fn char_poly_newton(b: &RealMatrix) -> Vec<f64> {
    let n = b.n();
    let mut power = RealMatrix::identity(n);
    let mut s = vec![0.0; n + 1];
    for k in 1..=n {
        power = power.mul(b);
        s[k] = power.trace();
    }
    // e_k: elementary symmetric functions of the eigenvalues.
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let t = e[k - i] * s[i];
            acc += if i % 2 == 1 { t } else { -t };
        }
        e[k] = acc / k as f64;
    }
    let mut c = vec![0.0; n + 1];
    for k in 0..=n {
        let v = e[k];
        c[n - k] = if k % 2 == 1 { -v } else { v };
    }
    c
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Roots of a monic polynomial by Durand-Kerner iteration.
pub fn durand_kerner(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(2.0)).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = horner(c, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Smallest possible largest distance over all pairings of `a` with `b`,
/// by dynamic programming over subsets of `b`.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len();
    assert_eq!(n, b.len());
    let full = 1usize << n;
    let mut best = vec![f64::INFINITY; full];
    best[0] = 0.0;
    for mask in 0..full {
        if best[mask].is_infinite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) == 0 {
                let d = best[mask].max((a[i] - b[j]).norm());
                let m = mask | (1 << j);
                if d < best[m] {
                    best[m] = d;
                }
            }
        }
    }
    best[full - 1]
}

pub fn random_sign<R: Rng>(rng: &mut R, density: f64) -> Sign {
    if rng.gen_bool(density) {
        if rng.gen_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    } else {
        Sign::Zero
    }
}

pub fn random_pattern<R: Rng>(rng: &mut R, n: usize, density: f64) -> SignPattern {
    SignPattern::from_fn(n, |_, _| random_sign(rng, density))
}

/// A uniformly random cycle-form pattern of order `n`.
pub fn random_cycle_pattern<R: Rng>(rng: &mut R, n: usize) -> SignPattern {
    let mut a = SignPattern::zeros(n);
    let signs = [Sign::Plus, Sign::Minus, Sign::Zero];
    for i in 0..n {
        a.set(i, i, signs[rng.gen_range(0..3)]);
        let j = (i + 1) % n;
        loop {
            let f = signs[rng.gen_range(0..3)];
            let b = signs[rng.gen_range(0..3)];
            if f.is_nonzero() || b.is_nonzero() {
                a.set(i, j, f);
                a.set(j, i, b);
                break;
            }
        }
    }
    a
}
