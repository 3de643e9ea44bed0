//! Shared helpers for the integration suites: seeded random states and
//! operators, plus oracles that are independent of the library's own
//! computation paths (characteristic-polynomial eigenvalues for the
//! non-Hermitian product route, and the X-state corner formula for
//! concurrence).

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use qgeo::spin_flip;
use qgeo::{ComplexMatrix, DensityMatrix};

pub fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, n);
    (&g + &g.dagger()).scale(Complex64::new(0.5, 0.0))
}

/// G G^dagger normalized to unit trace; full rank almost surely.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> DensityMatrix {
    loop {
        let g = random_complex_matrix(rng, n);
        let gram = &g * &g.dagger();
        let tr = gram.trace().re;
        if tr < 1e-6 {
            continue;
        }
        if let Ok(rho) = DensityMatrix::new(gram.scale_re(1.0 / tr)) {
            return rho;
        }
    }
}

/// Random qubit state whose smallest eigenvalue exceeds `min_eig`.
pub fn random_full_rank_qubit<R: Rng>(rng: &mut R, min_eig: f64) -> DensityMatrix {
    loop {
        let rho = random_density(rng, 2);
        if rho.spectrum().last().copied().unwrap_or(0.0) > min_eig {
            return rho;
        }
    }
}

/// Unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = random_complex_matrix(rng, n);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
            for prev in &cols {
                let overlap: Complex64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= overlap * p;
                }
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for x in &mut v {
                *x /= norm;
            }
            cols.push(v);
        }
        if !ok {
            continue;
        }
        let mut u = ComplexMatrix::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                u[(i, j)] = z;
            }
        }
        return u;
    }
}

pub fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    &(u * m) * &u.dagger()
}

/// Coefficients e1..e4 of the characteristic polynomial
/// z^4 - e1 z^3 + e2 z^2 - e3 z + e4 via trace powers.
fn char_poly_4(m: &ComplexMatrix) -> [Complex64; 4] {
    let m2 = m * m;
    let m3 = &m2 * m;
    let m4 = &m3 * m;
    let (t1, t2, t3, t4) = (m.trace(), m2.trace(), m3.trace(), m4.trace());
    let e1 = t1;
    let e2 = (e1 * t1 - t2) / 2.0;
    let e3 = (e2 * t1 - e1 * t2 + t3) / 3.0;
    let e4 = (e3 * t1 - e2 * t2 + e1 * t3 - t4) / 4.0;
    [e1, e2, e3, e4]
}

/// Roots of the quartic by Durand-Kerner iteration.
fn quartic_roots(e: [Complex64; 4]) -> [Complex64; 4] {
    // Monic polynomial coefficients for z^4 + c3 z^3 + c2 z^2 + c1 z + c0.
    let c = [-e[0], e[1], -e[2], e[3]];
    let eval = |z: Complex64| (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3];

    let seed = Complex64::new(0.4, 0.9);
    let mut roots = [
        seed,
        seed * seed,
        seed * seed * seed,
        seed * seed * seed * seed,
    ];
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-15 {
            break;
        }
    }
    roots
}

/// Wootters lambdas from the eigenvalues of the non-Hermitian product
/// rho rho~ via its characteristic polynomial. Independent of the
/// library's Hermitian similarity route; zero modes are clipped at the
/// same 1e-10 threshold the implementation uses.
pub fn direct_product_lambdas(rho: &DensityMatrix) -> [f64; 4] {
    let product = rho.matrix() * &spin_flip(rho).unwrap();
    let roots = quartic_roots(char_poly_4(&product));
    let mut lambdas: Vec<f64> = roots
        .iter()
        .map(|z| {
            let re = z.re;
            if re.abs() <= 1e-10 {
                0.0
            } else {
                re.max(0.0).sqrt()
            }
        })
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [lambdas[0], lambdas[1], lambdas[2], lambdas[3]]
}

/// Concurrence of an X-shaped state (nonzero entries only on the diagonal
/// and anti-diagonal): 2 max{0, |rho14| - sqrt(rho22 rho33),
/// |rho23| - sqrt(rho11 rho44)}.
pub fn x_state_concurrence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let corner = m[(0, 3)].norm() - (m[(1, 1)].re * m[(2, 2)].re).max(0.0).sqrt();
    let inner = m[(1, 2)].norm() - (m[(0, 0)].re * m[(3, 3)].re).max(0.0).sqrt();
    2.0 * corner.max(inner).max(0.0)
}
