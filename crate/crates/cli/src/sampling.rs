//! Seeded random inputs for the verification suites.

use flagtrop::exactalg::{rat, rat_int};
use flagtrop::mrcells::{sdot_matrix, x_matrix};
use flagtrop::tropic::trop_phi;
use flagtrop::{CellAtlas, Coords, Mat, Permutation, PlueckerVector, Rat, TropVal, TropicalPoint};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// An independent stream for one `(suite, cell, sample)` triple, so results do
/// not depend on how work is scheduled across threads.
pub fn stream(seed: u64, suite: &str, cell: u64, sample: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(b"flagtrop-stream");
    hasher.update(seed.to_le_bytes());
    hasher.update((suite.len() as u64).to_le_bytes());
    hasher.update(suite.as_bytes());
    hasher.update(cell.to_le_bytes());
    hasher.update(sample.to_le_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

pub fn positive_rat(rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(1..=20), rng.gen_range(1..=8))
}

pub fn positive_parameters(rng: &mut impl Rng, r: usize) -> Vec<Rat> {
    (0..r).map(|_| positive_rat(rng)).collect()
}

pub fn integer_parameters(rng: &mut impl Rng, r: usize, radius: i64) -> Vec<i64> {
    (0..r).map(|_| rng.gen_range(-radius..=radius)).collect()
}

pub fn invertible_matrix(rng: &mut impl Rng, n: usize) -> Mat<Rat> {
    loop {
        let entries = (0..n * n)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect();
        let m = Mat::new(n, n, entries).expect("square shape");
        if !m.determinant().expect("square").is_zero() {
            return m;
        }
    }
}

fn lower_elementary(n: usize, k: usize, t: Rat) -> Mat<Rat> {
    let mut m = Mat::identity(n, &t);
    m.set(k, k - 1, t);
    m
}

/// A flag with nonnegative coordinates up to one sign per level, built
/// without the cell parametrization: a coordinate flag times a product of
/// nonnegative elementary and diagonal matrices. Cauchy–Binet keeps every
/// level single-signed. About a third of the factors are trivial so that
/// boundary strata are reached.
pub fn nonneg_flag(rng: &mut impl Rng, n: usize) -> PlueckerVector {
    let mut images: Vec<u8> = (1..=n as u8).collect();
    images.shuffle(rng);
    let u = Permutation::new(images).expect("shuffled identity");
    let mut m = Mat::identity(n, &rat_int(0));
    for row in 0..n {
        for col in 0..n {
            let one = usize::from(u.images()[row]) == col + 1;
            m.set(row, col, rat_int(i64::from(one)));
        }
    }
    let factors = rng.gen_range(0..=n * n);
    for _ in 0..factors {
        let k = rng.gen_range(1..n);
        let t = if rng.gen_bool(1.0 / 3.0) {
            rat_int(0)
        } else {
            positive_rat(rng)
        };
        let f = if rng.gen_bool(0.5) {
            x_matrix(n, k, t).expect("valid index")
        } else {
            lower_elementary(n, k, t)
        };
        m = m.mat_mul(&f).expect("square");
    }
    for col in 0..n {
        let d = positive_rat(rng);
        for row in 0..n {
            let v = m.get(row, col) * &d;
            m.set(row, col, v);
        }
    }
    m.all_pluecker().expect("invertible")
}

/// A flag whose level `k` has coordinates of both signs: `x_k(t) ṡ_k` scaled
/// by a positive diagonal matrix gives `P_{1..k-1,k} < 0 < P_{1..k-1,k+1}`.
pub fn mixed_sign_flag(rng: &mut impl Rng, n: usize) -> PlueckerVector {
    let k = rng.gen_range(1..n);
    let s = sdot_matrix(n, k, &rat_int(0)).expect("valid index");
    let x = x_matrix(n, k, positive_rat(rng)).expect("valid index");
    let mut m = x.mat_mul(&s).expect("square");
    for col in 0..n {
        let d = positive_rat(rng);
        for row in 0..n {
            let v = m.get(row, col) * &d;
            m.set(row, col, v);
        }
    }
    m.all_pluecker().expect("invertible")
}

/// `Trop Φ(c)` for a uniformly chosen cell and integer `c`.
pub fn image_point(rng: &mut impl Rng, atlas: &CellAtlas, radius: i64) -> (usize, Vec<i64>, TropicalPoint) {
    let idx = rng.gen_range(0..atlas.len());
    let cell = &atlas.cells()[idx];
    let c = integer_parameters(rng, cell.dimension(), radius);
    let c_rat: Vec<Rat> = c.iter().map(|&x| rat_int(x)).collect();
    let p = trop_phi(cell, &c_rat).expect("matching dimension");
    (idx, c, p)
}

/// Shifts one finite coordinate of `p` by `±1`.
pub fn perturb(rng: &mut impl Rng, p: &TropicalPoint) -> TropicalPoint {
    let finite: Vec<_> = p.coords().iter().filter(|(_, v)| !v.is_inf()).map(|(s, _)| s).collect();
    let target = finite[rng.gen_range(0..finite.len())];
    let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut coords = p.coords().clone();
    coords.set(&target, p.get(&target) + &TropVal::int(delta));
    TropicalPoint::new(coords).expect("support unchanged")
}

/// Small integer values on the support of a random cell, or on every
/// coordinate.
pub fn random_point(rng: &mut impl Rng, atlas: &CellAtlas, radius: i64) -> TropicalPoint {
    let n = atlas.n();
    let support = if rng.gen_bool(0.25) {
        None
    } else {
        Some(*atlas.cells()[rng.gen_range(0..atlas.len())].support())
    };
    let coords = Coords::from_fn(n, |s| match &support {
        Some(sup) if !sup.contains(&s) => TropVal::Inf,
        _ => TropVal::int(rng.gen_range(-radius..=radius)),
    });
    TropicalPoint::new(coords).expect("cell supports meet every level")
}
