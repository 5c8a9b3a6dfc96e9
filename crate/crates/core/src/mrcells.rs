//! Marsh–Rietsch cells of the totally nonnegative complete flag variety.
//!
//! A cell is indexed by a Bruhat pair `v <= w`. Its matrix `M_{v,w}(a)` is the
//! product of `x_k(a_j)` and `ṡ_k` factors along the positive distinguished
//! subexpression for `w` inside the fixed reduced word
//! `(s_1 ... s_{n-1})(s_1 ... s_{n-2}) ... (s_1)`, with the `ṡ` factors at the
//! positions used by the positive distinguished subexpression for `v`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::exactalg::{integer_left_inverse, poly_eval, Mat, Poly, Rat, Ring};
use crate::flagcomb::{
    positive_distinguished_subexpression, w0_word, Permutation, Subexpression, Subset, MAX_N,
};
use crate::flagmat::{extremal_indices, is_flag_matroid, Support};
use crate::plucker::{check_projective, generate_all, three_term_relations, PlueckerVector};

/// `x_k(a)`: the identity with `a` in row `k`, column `k + 1`.
pub fn x_matrix<R: Ring>(n: usize, k: usize, a: R) -> Result<Mat<R>> {
    check_factor_index(n, k)?;
    let mut m = Mat::identity(n, &a);
    m.set(k - 1, k, a);
    Ok(m)
}

/// `ṡ_k`: the identity with rows/columns `k, k + 1` replaced by `((0, 1), (-1, 0))`.
pub fn sdot_matrix<R: Ring>(n: usize, k: usize, template: &R) -> Result<Mat<R>> {
    check_factor_index(n, k)?;
    let mut m = Mat::identity(n, template);
    let zero = template.zero_like();
    let one = template.one_like();
    m.set(k - 1, k - 1, zero.clone());
    m.set(k, k, zero);
    m.set(k - 1, k, one.clone());
    m.set(k, k - 1, one.neg_ref());
    Ok(m)
}

fn check_factor_index(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("factor index {k} for n = {n}")));
    }
    Ok(())
}

/// One factor of `M_{v,w}(a)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Factor {
    /// `x_k(a_{param+1})`
    X { k: u8, param: usize },
    /// `ṡ_k`
    S { k: u8 },
}

/// An extremal coordinate and its monomial `coeff * a^exponents`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtremalRow {
    pub index: Subset,
    pub exponents: Vec<i64>,
    pub coeff: BigInt,
}

/// Monomial exponents of the extremal coordinates and an integer left inverse,
/// so that each parameter is a Laurent monomial in the extremal coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentSystem {
    pub rows: Vec<ExtremalRow>,
    /// `r x rows.len()`, with `left_inverse * exponents = I_r`.
    pub left_inverse: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Cell {
    n: usize,
    v: Permutation,
    w: Permutation,
    w_sub: Subexpression,
    v_sub: Subexpression,
    factors: Vec<Factor>,
    r: usize,
    matrix: Mat<Poly>,
    symbolic: Coords<Poly>,
    support: Support,
    extremal: Support,
    exponents: ExponentSystem,
}

impl Cell {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }

    pub fn w(&self) -> &Permutation {
        &self.w
    }

    /// Positions of the `w` word inside the fixed reduced word for `w_0`.
    pub fn w_subexpression(&self) -> &Subexpression {
        &self.w_sub
    }

    /// Positions `J` of the `v` word inside the `w` word.
    pub fn v_subexpression(&self) -> &Subexpression {
        &self.v_sub
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of parameters, `ℓ(w) - ℓ(v)`.
    pub fn dimension(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &Mat<Poly> {
        &self.matrix
    }

    pub fn symbolic(&self) -> &Coords<Poly> {
        &self.symbolic
    }

    /// Indices of the coordinates that are not identically zero.
    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn extremal(&self) -> &Support {
        &self.extremal
    }

    pub fn exponents(&self) -> &ExponentSystem {
        &self.exponents
    }

    /// Lexicographically first support index of each level; the cell
    /// coordinate there is the constant 1.
    pub fn gauge_indices(&self) -> Vec<Subset> {
        (1..self.n).map(|k| self.support.level(k)[0]).collect()
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "v": self.v.images(),
            "w": self.w.images(),
            "r": self.r,
            "support": self.support.to_json(),
            "extremal": self.extremal.to_json(),
        })
    }
}

/// Builds the cell for `v <= w`, computing its symbolic Plücker coordinates
/// and checking nonnegative coefficients, unit gauge coordinates, monomial
/// extremal coordinates and a unimodular exponent system.
pub fn build_cell(n: usize, v: &Permutation, w: &Permutation) -> Result<Cell> {
    let (w_sub, v_sub, factors, r, matrix) = factorize(n, v, w)?;
    let symbolic = matrix.all_pluecker()?;
    assemble(n, v, w, w_sub, v_sub, factors, r, matrix, symbolic)
}

/// Rebuilds a cell from a previously computed symbolic expansion, checking it
/// against an exact evaluation of the cell matrix at `a = (1, 2, ..., r)`.
pub fn cell_from_symbolic(
    n: usize,
    v: &Permutation,
    w: &Permutation,
    symbolic: Coords<Poly>,
) -> Result<Cell> {
    let (w_sub, v_sub, factors, r, matrix) = factorize(n, v, w)?;
    if symbolic.n() != n || symbolic.values().iter().any(|p| p.nvars() != r) {
        return Err(Error::AtlasInvariant(format!(
            "stored coordinates of ({v}, {w}) have the wrong shape"
        )));
    }
    let probe: Vec<Rat> = (1..=r as i64).map(|i| Rat::from_integer(i.into())).collect();
    let expected = matrix.eval(&probe)?.all_pluecker()?;
    for (index, p) in symbolic.iter() {
        if &poly_eval(p, &probe)? != expected.get(&index) {
            return Err(Error::AtlasInvariant(format!(
                "stored coordinate {index} of ({v}, {w}) is wrong"
            )));
        }
    }
    assemble(n, v, w, w_sub, v_sub, factors, r, matrix, symbolic)
}

type Factorization = (Subexpression, Subexpression, Vec<Factor>, usize, Mat<Poly>);

fn factorize(n: usize, v: &Permutation, w: &Permutation) -> Result<Factorization> {
    if !(2..=MAX_N).contains(&n) || v.n() != n || w.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "cell ({v}, {w}) for n = {n}"
        )));
    }
    let w_sub = positive_distinguished_subexpression(&w0_word(n), w)?;
    let w_word = w_sub.induced_word();
    let v_sub = positive_distinguished_subexpression(&w_word, v)?;

    let mut factors = Vec::with_capacity(w_word.len());
    let mut param = 0;
    let used = v_sub.positions();
    for (idx, &k) in w_word.letters().iter().enumerate() {
        if used.contains(&(idx + 1)) {
            factors.push(Factor::S { k });
        } else {
            factors.push(Factor::X { k, param });
            param += 1;
        }
    }
    let r = param;
    let matrix = factor_product(n, r, &factors)?;
    Ok((w_sub, v_sub, factors, r, matrix))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    n: usize,
    v: &Permutation,
    w: &Permutation,
    w_sub: Subexpression,
    v_sub: Subexpression,
    factors: Vec<Factor>,
    r: usize,
    matrix: Mat<Poly>,
    symbolic: Coords<Poly>,
) -> Result<Cell> {
    if let Some((_, p)) = symbolic.iter().find(|(_, p)| !p.has_nonnegative_coefficients()) {
        return Err(Error::NegativeCoefficient(p.to_string()));
    }
    let support = Support::from_coords(&symbolic, |p| !p.is_zero());
    if !is_flag_matroid(&support) {
        return Err(Error::AtlasInvariant(format!(
            "support of ({v}, {w}) is not a flag matroid"
        )));
    }
    let extremal = extremal_indices(&support);
    for k in 1..n {
        let gauge = support.level(k)[0];
        let p = symbolic.get(&gauge);
        if !p.is_one() {
            return Err(Error::GaugeNotUnit {
                index: gauge,
                poly: p.to_string(),
            });
        }
    }
    let mut rows = Vec::new();
    for index in extremal.iter() {
        let p = symbolic.get(&index);
        let Some((exps, coeff)) = p.as_monomial() else {
            return Err(Error::NonMonomial {
                index,
                poly: p.to_string(),
            });
        };
        rows.push(ExtremalRow {
            index,
            exponents: exps.iter().map(|&e| e as i64).collect(),
            coeff: coeff.clone(),
        });
    }
    let matrix_rows: Vec<Vec<i64>> = rows.iter().map(|row| row.exponents.clone()).collect();
    let left_inverse = integer_left_inverse(&matrix_rows, r)?;

    Ok(Cell {
        n,
        v: v.clone(),
        w: w.clone(),
        w_sub,
        v_sub,
        factors,
        r,
        matrix,
        symbolic,
        support,
        extremal,
        exponents: ExponentSystem { rows, left_inverse },
    })
}

fn factor_product(n: usize, r: usize, factors: &[Factor]) -> Result<Mat<Poly>> {
    let template = Poly::zero(r);
    let mut m = Mat::identity(n, &template);
    for f in factors {
        let next = match *f {
            Factor::X { k, param } => x_matrix(n, k as usize, Poly::var(r, param))?,
            Factor::S { k } => sdot_matrix(n, k as usize, &template)?,
        };
        m = m.mat_mul(&next)?;
    }
    Ok(m)
}

fn check_parameters(cell: &Cell, a: &[Rat]) -> Result<()> {
    if a.len() != cell.r {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters for a cell of dimension {}",
            a.len(),
            cell.r
        )));
    }
    if let Some(index) = a.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonPositiveParameter { index });
    }
    Ok(())
}

/// `Φ_{v,w}(a)`: the Plücker coordinates of `M_{v,w}(a)`.
pub fn phi(cell: &Cell, a: &[Rat]) -> Result<PlueckerVector> {
    check_parameters(cell, a)?;
    let values = cell
        .symbolic
        .values()
        .iter()
        .map(|p| poly_eval(p, a))
        .collect::<Result<Vec<_>>>()?;
    let out = Coords::from_values(cell.n, values);
    for (index, value) in out.iter() {
        if value.is_negative() || cell.support.contains(&index) == value.is_zero() {
            return Err(Error::AtlasInvariant(format!(
                "coordinate {index} = {value} in cell ({}, {})",
                cell.v, cell.w
            )));
        }
    }
    Ok(out)
}

fn rat_pow(x: &Rat, e: i64) -> Rat {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Rescales each level so its lexicographically first nonzero coordinate is 1.
pub fn gauge_normalize(p: &PlueckerVector) -> Result<PlueckerVector> {
    check_projective(p)?;
    let mut out = p.clone();
    for k in 1..p.n() {
        let (_, first) = p
            .level(k)
            .find(|(_, x)| !x.is_zero())
            .expect("projective level");
        let first = first.clone();
        for (index, value) in p.level(k) {
            out.set(&index, value / &first);
        }
    }
    Ok(out)
}

/// `Ψ_{v,w}`: parameters as Laurent monomials in the extremal coordinates.
pub fn recover_parameters(cell: &Cell, p: &PlueckerVector) -> Result<Vec<Rat>> {
    if p.n() != cell.n || Support::from_coords(p, |x| !x.is_zero()) != cell.support {
        return Err(Error::SupportMismatch);
    }
    if p.values().iter().any(|x| x.is_negative()) {
        return Err(Error::OutOfRange("negative coordinate".into()));
    }
    let p = gauge_normalize(p)?;
    let rows = &cell.exponents.rows;
    let scaled: Vec<Rat> = rows
        .iter()
        .map(|row| p.get(&row.index) / Rat::from_integer(row.coeff.clone()))
        .collect();
    let a: Vec<Rat> = cell
        .exponents
        .left_inverse
        .iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(&scaled)
                .filter(|(&e, _)| e != 0)
                .fold(Rat::one(), |acc, (&e, x)| acc * rat_pow(x, e))
        })
        .collect();
    for (row, value) in rows.iter().zip(&scaled) {
        let monomial = row
            .exponents
            .iter()
            .zip(&a)
            .fold(Rat::one(), |acc, (&e, x)| acc * rat_pow(x, e));
        if &monomial != value {
            return Err(Error::InconsistentSystem);
        }
    }
    Ok(a)
}

/// Recovers every coordinate of a cell point from its extremal coordinates by
/// repeatedly solving three-term relations with a single unknown.
pub fn reconstruct_from_extremal(
    cell: &Cell,
    extremal_values: &BTreeMap<Subset, Rat>,
) -> Result<PlueckerVector> {
    let given: Vec<Subset> = extremal_values.keys().copied().collect();
    let expected: Vec<Subset> = {
        let mut e: Vec<Subset> = cell.extremal.iter().collect();
        e.sort();
        e
    };
    if given != expected {
        return Err(Error::SupportMismatch);
    }
    if let Some(index) = extremal_values.values().position(|x| !x.is_positive()) {
        return Err(Error::NonPositiveParameter { index });
    }
    let mut known: Coords<Option<Rat>> = Coords::from_fn(cell.n, |s| {
        if !cell.support.contains(&s) {
            Some(Rat::zero())
        } else {
            extremal_values.get(&s).cloned()
        }
    });
    let relations = three_term_relations(cell.n)?;
    let mut remaining = known.values().iter().filter(|x| x.is_none()).count();
    while remaining > 0 {
        let mut progress = false;
        for rel in relations.iter() {
            let mut unknown: Option<Subset> = None;
            let mut single = true;
            for t in rel.terms() {
                for idx in [t.a, t.b] {
                    if known.get(&idx).is_none() {
                        match unknown {
                            None => unknown = Some(idx),
                            Some(u) if u == idx => {}
                            Some(_) => single = false,
                        }
                    }
                }
            }
            let (Some(target), true) = (unknown, single) else {
                continue;
            };
            // The relation is linear in the target: coeff * P_target + rest = 0.
            let mut coeff = Rat::zero();
            let mut rest = Rat::zero();
            for t in rel.terms() {
                let sign = Rat::from_integer(BigInt::from(t.sign));
                if t.a == target || t.b == target {
                    let partner = if t.a == target { t.b } else { t.a };
                    coeff += sign * known.get(&partner).as_ref().unwrap();
                } else {
                    let a = known.get(&t.a).as_ref().unwrap();
                    let b = known.get(&t.b).as_ref().unwrap();
                    rest += sign * a * b;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            known.set(&target, Some(-rest / coeff));
            remaining -= 1;
            progress = true;
        }
        if !progress {
            let stalled = known
                .iter()
                .filter(|(_, x)| x.is_none())
                .map(|(s, _)| s)
                .collect();
            return Err(Error::PropagationStalled(stalled));
        }
    }
    Ok(known.map(|x| x.clone().unwrap()))
}

/// Every cell for `n`, with lookup by support.
#[derive(Clone, Debug)]
pub struct CellAtlas {
    n: usize,
    cells: Vec<Cell>,
    lookup: HashMap<Support, usize>,
}

impl CellAtlas {
    /// Enumerates all Bruhat pairs `v <= w` (ordered by `v`, then `w`) and
    /// builds their cells in parallel.
    pub fn build(n: usize) -> Result<Self> {
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::OutOfRange(format!("n = {n}")));
        }
        let perms = Permutation::all(n);
        let pairs: Vec<(Permutation, Permutation)> = perms
            .iter()
            .flat_map(|v| perms.iter().map(move |w| (v.clone(), w.clone())))
            .collect();
        let cells: Vec<Option<Cell>> = pairs
            .par_iter()
            .map(|(v, w)| -> Result<Option<Cell>> {
                if v.bruhat_leq(w)? {
                    build_cell(n, v, w).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_cells(n, cells.into_iter().flatten().collect())
    }

    /// Assembles an atlas, checking that supports are pairwise distinct.
    pub fn from_cells(n: usize, cells: Vec<Cell>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(cells.len());
        for (i, cell) in cells.iter().enumerate() {
            if cell.n != n {
                return Err(Error::AtlasInvariant("cell of the wrong size".into()));
            }
            if let Some(j) = lookup.insert(cell.support, i) {
                return Err(Error::AtlasInvariant(format!(
                    "cells ({}, {}) and ({}, {}) share a support",
                    cells[j].v, cells[j].w, cell.v, cell.w
                )));
            }
        }
        Ok(CellAtlas { n, cells, lookup })
    }

    /// The atlas for `n`, built once per process.
    pub fn for_n(n: usize) -> Result<Arc<CellAtlas>> {
        static CACHE: [OnceLock<Arc<CellAtlas>>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::OutOfRange(format!("n = {n}")));
        }
        if let Some(atlas) = CACHE[n].get() {
            return Ok(atlas.clone());
        }
        let atlas = Arc::new(Self::build(n)?);
        Ok(CACHE[n].get_or_init(|| atlas).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, v: &Permutation, w: &Permutation) -> Option<&Cell> {
        self.cells.iter().find(|c| &c.v == v && &c.w == w)
    }

    pub fn locate_cell(&self, s: &Support) -> Option<&Cell> {
        self.lookup.get(s).map(|&i| &self.cells[i])
    }

    pub fn locate_index(&self, s: &Support) -> Option<usize> {
        self.lookup.get(s).copied()
    }
}

/// Witness that a classical point lies in a cell: `Φ(a)` equals the
/// gauge-normalized point.
#[derive(Clone, PartialEq, Debug)]
pub struct TnnCertificate {
    pub v: Permutation,
    pub w: Permutation,
    pub parameters: Vec<Rat>,
}

/// Decides whether a flag has nonnegative Plücker coordinates (up to a sign
/// per level) and, if so, certifies it by locating its cell, recovering the
/// parameters and checking `Φ` reproduces the point exactly.
///
/// Returns `Ok(None)` when some level has coordinates of both signs.
pub fn certify_tnn_flag(atlas: &CellAtlas, p: &PlueckerVector) -> Result<Option<TnnCertificate>> {
    if p.n() != atlas.n {
        return Err(Error::DimensionMismatch(format!(
            "point for n = {} and atlas for n = {}",
            p.n(),
            atlas.n
        )));
    }
    check_projective(p)?;
    if let Some(rel) = generate_all(p.n())?.first_violated(p)? {
        return Err(Error::NotAFlag(rel.to_string()));
    }
    for k in 1..p.n() {
        let has_pos = p.level(k).any(|(_, x)| x.is_positive());
        let has_neg = p.level(k).any(|(_, x)| x.is_negative());
        if has_pos && has_neg {
            return Ok(None);
        }
    }
    let normalized = gauge_normalize(p)?;
    let support = Support::from_coords(&normalized, |x| !x.is_zero());
    let fail = |msg: String| Error::CertificationFailed(msg);
    let cell = atlas
        .locate_cell(&support)
        .ok_or_else(|| fail(format!("no cell has support {support:?}")))?;
    let a = recover_parameters(cell, &normalized)
        .map_err(|e| fail(format!("parameter recovery in ({}, {}): {e}", cell.v, cell.w)))?;
    let image = phi(cell, &a)?;
    if image != normalized {
        return Err(fail(format!(
            "Φ round trip differs in cell ({}, {})",
            cell.v, cell.w
        )));
    }
    Ok(Some(TnnCertificate {
        v: cell.v.clone(),
        w: cell.w.clone(),
        parameters: a,
    }))
}

pub fn is_tnn_flag(atlas: &CellAtlas, p: &PlueckerVector) -> Result<bool> {
    certify_tnn_flag(atlas, p).map(|c| c.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat_int, Mat};
    use crate::flagcomb::Word;

    fn word_perm(n: usize, letters: &[u8]) -> Permutation {
        Word::new(n, letters.to_vec()).unwrap().product()
    }

    fn ints(values: &[i64]) -> Vec<Rat> {
        values.iter().map(|&v| rat_int(v)).collect()
    }

    #[test]
    fn factor_matrices() {
        let x = x_matrix(2, 1, rat_int(5)).unwrap();
        assert_eq!(x, Mat::from_integers(&[&[1, 5], &[0, 1]]).unwrap());
        let s = sdot_matrix(2, 1, &rat_int(0)).unwrap();
        assert_eq!(s, Mat::from_integers(&[&[0, 1], &[-1, 0]]).unwrap());
        let x0 = x_matrix(3, 2, rat_int(0)).unwrap();
        assert_eq!(x0, Mat::identity(3, &rat_int(0)));
        assert!(x_matrix(3, 3, rat_int(1)).is_err());
        assert!(sdot_matrix(3, 0, &rat_int(1)).is_err());
    }

    #[test]
    fn identity_cell() {
        let e = Permutation::identity(4);
        let cell = build_cell(4, &e, &e).unwrap();
        assert_eq!(cell.dimension(), 0);
        assert_eq!(cell.matrix(), &Mat::identity(4, &Poly::zero(0)));
        for k in 1..4 {
            assert_eq!(cell.support().level(k).len(), 1);
        }
        assert!(recover_parameters(&cell, &phi(&cell, &[]).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn worked_example_cell() {
        let w = word_perm(4, &[1, 3, 2, 1]);
        let v = Permutation::simple(4, 2).unwrap();
        let cell = build_cell(4, &v, &w).unwrap();
        assert_eq!(cell.dimension(), 3);
        assert_eq!(
            cell.factors(),
            &[
                Factor::X { k: 1, param: 0 },
                Factor::X { k: 3, param: 1 },
                Factor::S { k: 2 },
                Factor::X { k: 1, param: 2 },
            ]
        );
        let m = cell.matrix();
        let shown: Vec<String> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).to_string())
            .collect();
        assert_eq!(
            shown,
            ["1", "a3", "a1", "0", "0", "0", "1", "0", "0", "-1", "0", "a2", "0", "0", "0", "1"]
        );
        let p = phi(&cell, &ints(&[1, 1, 1])).unwrap();
        assert!(p.values().iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn full_cell_n3() {
        let cell = build_cell(3, &Permutation::identity(3), &Permutation::longest(3)).unwrap();
        let names: Vec<String> = cell.symbolic().values().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["1", "a1 + a3", "a1*a2", "1", "a2", "a2*a3"]);
        assert_eq!(cell.support(), &Support::full(3));

        let a = ints(&[3, 2, 5]);
        let p = phi(&cell, &a).unwrap();
        assert_eq!(p.values(), ints(&[1, 8, 6, 1, 2, 10]).as_slice());
        assert_eq!(recover_parameters(&cell, &p).unwrap(), a);

        let mut extremal = BTreeMap::new();
        for (name, value) in [("1", 1), ("3", 6), ("1,2", 1), ("1,3", 2), ("2,3", 10)] {
            extremal.insert(Subset::parse(3, name).unwrap(), rat_int(value));
        }
        assert_eq!(reconstruct_from_extremal(&cell, &extremal).unwrap(), p);
    }

    #[test]
    fn rebuild_from_stored_coordinates() {
        let (e, w0) = (Permutation::identity(3), Permutation::longest(3));
        let cell = build_cell(3, &e, &w0).unwrap();
        let rebuilt = cell_from_symbolic(3, &e, &w0, cell.symbolic().clone()).unwrap();
        assert_eq!(rebuilt.exponents(), cell.exponents());

        let mut tampered = cell.symbolic().clone();
        let index = Subset::parse(3, "2").unwrap();
        tampered.set(&index, &Poly::var(3, 0) + &Poly::var(3, 1));
        assert!(matches!(
            cell_from_symbolic(3, &e, &w0, tampered),
            Err(Error::AtlasInvariant(_))
        ));
    }

    #[test]
    fn phi_rejects_bad_parameters() {
        let cell = build_cell(3, &Permutation::identity(3), &Permutation::longest(3)).unwrap();
        assert!(matches!(
            phi(&cell, &ints(&[1, 0, 1])),
            Err(Error::NonPositiveParameter { index: 1 })
        ));
        assert!(phi(&cell, &ints(&[1, 1])).is_err());
    }

    #[test]
    fn non_bruhat_pair_is_rejected() {
        let w0 = Permutation::longest(3);
        let s1 = Permutation::simple(3, 1).unwrap();
        assert!(matches!(build_cell(3, &w0, &s1), Err(Error::NotBruhatLeq { .. })));
    }

    #[test]
    fn n2_atlas() {
        let atlas = CellAtlas::build(2).unwrap();
        let pairs: Vec<(Vec<u8>, Vec<u8>)> = atlas
            .cells()
            .iter()
            .map(|c| (c.v().images().to_vec(), c.w().images().to_vec()))
            .collect();
        assert_eq!(
            pairs,
            [(vec![1, 2], vec![1, 2]), (vec![1, 2], vec![2, 1]), (vec![2, 1], vec![2, 1])]
        );
    }

    #[test]
    fn locate_examples() {
        let atlas = CellAtlas::for_n(3).unwrap();
        let id = Coords::from_fn(3, |s| s.to_vec() == (1..=s.len() as u8).collect::<Vec<_>>());
        let id_support = Support::from_coords(&id, |&x| x);
        let cell = atlas.locate_cell(&id_support).unwrap();
        assert!(cell.v().is_identity() && cell.w().is_identity());
        let full = atlas.locate_cell(&Support::full(3)).unwrap();
        assert!(full.v().is_identity() && full.w() == &Permutation::longest(3));
        let bad = Support::from_indices(
            3,
            [Subset::parse(3, "2").unwrap(), Subset::parse(3, "1,3").unwrap()],
        );
        assert!(atlas.locate_cell(&bad).is_none());
    }

    #[test]
    fn tnn_flag_examples() {
        let atlas = CellAtlas::for_n(3).unwrap();
        let id = Mat::identity(3, &rat_int(0)).all_pluecker().unwrap();
        let cert = certify_tnn_flag(&atlas, &id).unwrap().unwrap();
        assert!(cert.v.is_identity() && cert.w.is_identity());

        let p = Coords::from_values(3, ints(&[1, 8, 6, 1, 2, 10]));
        let cert = certify_tnn_flag(&atlas, &p).unwrap().unwrap();
        assert_eq!(cert.w, Permutation::longest(3));
        assert_eq!(cert.parameters, ints(&[3, 2, 5]));

        // rows (1,0,0), (0,1,0), (0,1,1) span the standard flag
        let m = Mat::from_integers(&[&[1, 0, 0], &[0, 1, 0], &[0, 1, 1]]).unwrap();
        let p = m.all_pluecker().unwrap();
        assert_eq!(p.values(), ints(&[1, 0, 0, 1, 0, 0]).as_slice());
        assert!(is_tnn_flag(&atlas, &p).unwrap());

        // its transpose has P_13 = 1 as well
        let m = Mat::from_integers(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        let p = m.all_pluecker().unwrap();
        assert_eq!(p.values(), ints(&[1, 0, 0, 1, 1, 0]).as_slice());
        assert!(is_tnn_flag(&atlas, &p).unwrap());

        // a whole level may be negated
        let neg = Coords::from_values(3, ints(&[-1, -8, -6, 1, 2, 10]));
        assert!(is_tnn_flag(&atlas, &neg).unwrap());

        let mixed = Mat::from_integers(&[&[1, -1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(!is_tnn_flag(&atlas, &mixed.all_pluecker().unwrap()).unwrap());

        let not_flag = Coords::from_values(3, ints(&[1, 1, 1, 1, 1, 3]));
        assert!(matches!(certify_tnn_flag(&atlas, &not_flag), Err(Error::NotAFlag(_))));
    }
}
