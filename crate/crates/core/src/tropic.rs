//! Min-plus side: tropical points, (positive) solutions of tropicalized
//! relations, Dressian memberships, and the tropicalized cell maps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::exactalg::{format_rat, parse_rat, valuation_after_monomial_substitution, Rat};
use crate::flagcomb::{Subset, MAX_N};
use crate::flagmat::{is_flag_matroid, Support};
use crate::mrcells::{Cell, CellAtlas};
use crate::plucker::{generate_all, three_term_relations, Provenance, Relation};

/// An element of `ℝ ∪ {∞}` with exact rational values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TropVal {
    Fin(Rat),
    Inf,
}

impl TropVal {
    pub fn int(value: i64) -> Self {
        TropVal::Fin(Rat::from_integer(value.into()))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, TropVal::Inf)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            TropVal::Fin(x) => Some(x),
            TropVal::Inf => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            TropVal::Inf => Value::from("inf"),
            TropVal::Fin(x) if x.is_integer() => match i64::try_from(x.numer()) {
                Ok(v) => Value::from(v),
                Err(_) => Value::from(format_rat(x)),
            },
            TropVal::Fin(x) => Value::from(format_rat(x)),
        }
    }

    fn from_json(value: &Value, location: &str) -> Result<Self> {
        match value {
            Value::String(s) if s == "inf" => Ok(TropVal::Inf),
            Value::String(s) => parse_rat(s)
                .map(TropVal::Fin)
                .map_err(|e| Error::parse(location, e.to_string())),
            Value::Number(num) => match num.as_i64() {
                Some(v) => Ok(TropVal::int(v)),
                None => Err(Error::parse(
                    location,
                    format!("{num} is not an integer; write rationals as \"p/q\""),
                )),
            },
            other => Err(Error::parse(location, format!("unexpected value {other}"))),
        }
    }
}

impl Ord for TropVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropVal::Fin(a), TropVal::Fin(b)) => a.cmp(b),
            (TropVal::Fin(_), TropVal::Inf) => Ordering::Less,
            (TropVal::Inf, TropVal::Fin(_)) => Ordering::Greater,
            (TropVal::Inf, TropVal::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for TropVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &TropVal {
    type Output = TropVal;

    fn add(self, other: &TropVal) -> TropVal {
        match (self, other) {
            (TropVal::Fin(a), TropVal::Fin(b)) => TropVal::Fin(a + b),
            _ => TropVal::Inf,
        }
    }
}

impl fmt::Display for TropVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropVal::Fin(x) => f.write_str(&format_rat(x)),
            TropVal::Inf => f.write_str("inf"),
        }
    }
}

/// A point of `TP^{n-1} x ... x TP^{C(n,n-1)-1}`, stored with the minimum of
/// every level shifted to 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TropicalPoint {
    coords: Coords<TropVal>,
}

impl TropicalPoint {
    /// Validates that no level is entirely `∞` and gauge-normalizes.
    pub fn new(coords: Coords<TropVal>) -> Result<Self> {
        let n = coords.n();
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::OutOfRange(format!("n = {n}")));
        }
        let mut out = coords.clone();
        for k in 1..n {
            let min = coords
                .level(k)
                .filter_map(|(_, x)| x.finite())
                .min()
                .cloned()
                .ok_or_else(|| Error::OutOfRange(format!("level {k} is entirely infinite")))?;
            for (index, value) in coords.level(k) {
                if let TropVal::Fin(x) = value {
                    out.set(&index, TropVal::Fin(x - &min));
                }
            }
        }
        Ok(TropicalPoint { coords: out })
    }

    pub fn zero(n: usize) -> Self {
        TropicalPoint {
            coords: Coords::from_fn(n, |_| TropVal::int(0)),
        }
    }

    pub fn n(&self) -> usize {
        self.coords.n()
    }

    pub fn coords(&self) -> &Coords<TropVal> {
        &self.coords
    }

    pub fn get(&self, index: &Subset) -> &TropVal {
        self.coords.get(index)
    }

    pub fn support(&self) -> Support {
        Support::from_coords(&self.coords, |x| !x.is_inf())
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (index, value) in self.coords.iter() {
            map.insert(index.to_string(), value.to_json());
        }
        serde_json::json!({ "n": self.n(), "coords": map })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("n", "missing or not a nonnegative integer"))?
            as usize;
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::parse("n", format!("{n} is outside 2..={MAX_N}")));
        }
        let map = value
            .get("coords")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::parse("coords", "missing or not an object"))?;
        let mut values: Coords<Option<TropVal>> = Coords::from_fn(n, |_| None);
        for (key, v) in map {
            let location = format!("coords.\"{key}\"");
            let index = Subset::parse(n, key).map_err(|e| Error::parse(&location, e.to_string()))?;
            if values.get(&index).is_some() {
                return Err(Error::parse(location, "duplicate coordinate"));
            }
            values.set(&index, Some(TropVal::from_json(v, &location)?));
        }
        if let Some((index, _)) = values.iter().find(|(_, v)| v.is_none()) {
            return Err(Error::parse(format!("coords.\"{index}\""), "missing coordinate"));
        }
        Self::new(values.map(|v| v.clone().unwrap()))
            .map_err(|e| Error::parse("coords", e.to_string()))
    }
}

impl fmt::Display for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for k in 1..self.n() {
            if k > 1 {
                f.write_str("; ")?;
            }
            for (i, (_, v)) in self.coords.level(k).enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
        }
        f.write_str(")")
    }
}

/// A term of a relation that attains the minimum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AchievingTerm {
    pub a: Subset,
    pub b: Subset,
    pub sign: i8,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropVerdict {
    pub provenance: Provenance,
    pub relation: String,
    pub minimum: TropVal,
    pub achieving: Vec<AchievingTerm>,
    pub is_solution: bool,
    pub is_positive_solution: bool,
}

/// Evaluates the tropicalization `min(p_A + p_B)` of a relation. A relation
/// whose terms are all `∞` counts as a positive solution.
pub fn trop_evaluate(rel: &Relation, p: &Coords<TropVal>) -> Result<TropVerdict> {
    if rel.n() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "relation for n = {} and point for n = {}",
            rel.n(),
            p.n()
        )));
    }
    let values: Vec<TropVal> = rel
        .terms()
        .iter()
        .map(|t| p.get(&t.a) + p.get(&t.b))
        .collect();
    let minimum = values.iter().min().cloned().unwrap_or(TropVal::Inf);
    let achieving: Vec<AchievingTerm> = rel
        .terms()
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v == minimum)
        .map(|(t, _)| AchievingTerm {
            a: t.a,
            b: t.b,
            sign: t.sign,
        })
        .collect();
    let vacuous = minimum.is_inf();
    let is_solution = vacuous || achieving.len() >= 2;
    let is_positive_solution = vacuous
        || (achieving.iter().any(|t| t.sign > 0) && achieving.iter().any(|t| t.sign < 0));
    Ok(TropVerdict {
        provenance: rel.provenance().clone(),
        relation: rel.to_string(),
        minimum,
        achieving,
        is_solution,
        is_positive_solution,
    })
}

fn first_failure<'a>(
    relations: impl IntoIterator<Item = &'a Relation>,
    p: &Coords<TropVal>,
    positive: bool,
) -> Result<Option<TropVerdict>> {
    for rel in relations {
        let verdict = trop_evaluate(rel, p)?;
        let ok = if positive {
            verdict.is_positive_solution
        } else {
            verdict.is_solution
        };
        if !ok {
            return Ok(Some(verdict));
        }
    }
    Ok(None)
}

/// First canonical relation of which `p` is not a (positive) solution.
pub fn first_fldr_violation(p: &TropicalPoint, positive: bool) -> Result<Option<TropVerdict>> {
    first_failure(generate_all(p.n())?.iter(), p.coords(), positive)
}

/// First canonical three-term relation of which `p` is not a (positive) solution.
pub fn first_three_term_violation(
    p: &TropicalPoint,
    positive: bool,
) -> Result<Option<TropVerdict>> {
    first_failure(three_term_relations(p.n())?.iter(), p.coords(), positive)
}

/// Membership in the complete flag Dressian.
pub fn in_fldr(p: &TropicalPoint) -> Result<bool> {
    Ok(first_fldr_violation(p, false)?.is_none())
}

/// Membership in the totally nonnegative complete flag Dressian.
pub fn in_fldr_nonneg(p: &TropicalPoint) -> Result<bool> {
    Ok(first_fldr_violation(p, true)?.is_none())
}

/// Membership in the three-term complete flag Dressian.
pub fn in_three_term_dressian(p: &TropicalPoint) -> Result<bool> {
    Ok(is_flag_matroid(&p.support()) && first_three_term_violation(p, false)?.is_none())
}

/// Membership in the totally nonnegative three-term complete flag Dressian.
pub fn in_three_term_dressian_nonneg(p: &TropicalPoint) -> Result<bool> {
    Ok(is_flag_matroid(&p.support()) && first_three_term_violation(p, true)?.is_none())
}

fn check_dimension(cell: &Cell, len: usize) -> Result<()> {
    if len != cell.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{len} parameters for a cell of dimension {}",
            cell.dimension()
        )));
    }
    Ok(())
}

fn dot(exponents: &[u32], c: &[Rat]) -> Rat {
    exponents
        .iter()
        .zip(c)
        .filter(|(&e, _)| e != 0)
        .fold(Rat::zero(), |acc, (&e, x)| acc + x * Rat::from_integer(e.into()))
}

/// `Trop Φ_{v,w}(c)`: each coordinate is the minimum of `<exponent, c>` over
/// the terms of its polynomial, `∞` off the support.
pub fn trop_phi(cell: &Cell, c: &[Rat]) -> Result<TropicalPoint> {
    check_dimension(cell, c.len())?;
    let coords = cell.symbolic().map(|p| {
        p.terms()
            .map(|(exps, _)| dot(exps, c))
            .min()
            .map_or(TropVal::Inf, TropVal::Fin)
    });
    TropicalPoint::new(coords)
}

/// `Trop Ψ_{v,w}`: solves `exponents * c = y` where `y` holds the extremal
/// coordinates measured from the first support coordinate of their level.
pub fn trop_psi(cell: &Cell, p: &TropicalPoint) -> Result<Vec<Rat>> {
    if p.n() != cell.n() || p.support() != *cell.support() {
        return Err(Error::SupportMismatch);
    }
    let gauges = cell.gauge_indices();
    let relative = |index: &Subset| -> Rat {
        let gauge = gauges[index.len() - 1];
        let value = p.get(index).finite().expect("support coordinate");
        value - p.get(&gauge).finite().expect("support coordinate")
    };
    let system = cell.exponents();
    let y: Vec<Rat> = system.rows.iter().map(|row| relative(&row.index)).collect();
    let c: Vec<Rat> = system
        .left_inverse
        .iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(&y)
                .filter(|(&e, _)| e != 0)
                .fold(Rat::zero(), |acc, (&e, v)| acc + v * Rat::from_integer(e.into()))
        })
        .collect();
    for (row, target) in system.rows.iter().zip(&y) {
        let value = row
            .exponents
            .iter()
            .zip(&c)
            .fold(Rat::zero(), |acc, (&e, x)| acc + x * Rat::from_integer(e.into()));
        if &value != target {
            return Err(Error::InconsistentSystem);
        }
    }
    Ok(c)
}

/// A cell and parameters whose `Trop Φ` image is the given point.
#[derive(Clone, PartialEq, Debug)]
pub struct TropCertificate {
    pub cell_index: usize,
    pub parameters: Vec<Rat>,
}

/// Locates the cell with the point's support and checks the round trip
/// `Trop Φ(Trop Ψ(p)) = p`.
pub fn certify_tnn_tropical(atlas: &CellAtlas, p: &TropicalPoint) -> Result<Option<TropCertificate>> {
    if p.n() != atlas.n() {
        return Err(Error::DimensionMismatch(format!(
            "point for n = {} and atlas for n = {}",
            p.n(),
            atlas.n()
        )));
    }
    let Some(cell_index) = atlas.locate_index(&p.support()) else {
        return Ok(None);
    };
    let cell = &atlas.cells()[cell_index];
    let c = match trop_psi(cell, p) {
        Ok(c) => c,
        Err(Error::InconsistentSystem) => return Ok(None),
        Err(e) => return Err(e),
    };
    if &trop_phi(cell, &c)? != p {
        return Ok(None);
    }
    Ok(Some(TropCertificate {
        cell_index,
        parameters: c,
    }))
}

/// Membership in the totally nonnegative tropical flag variety, decided by a
/// `Trop Φ` round trip in the cell matching the support.
pub fn in_tnn_tropical_flag_variety(atlas: &CellAtlas, p: &TropicalPoint) -> Result<bool> {
    certify_tnn_tropical(atlas, p).map(|c| c.is_some())
}

/// Substitutes `a_i = t^{c_i}` into every cell coordinate and compares the
/// valuations with `Trop Φ(c)`.
pub fn puiseux_valuation_check(cell: &Cell, c: &[i64]) -> Result<bool> {
    check_dimension(cell, c.len())?;
    let mut values = Vec::with_capacity(cell.symbolic().values().len());
    for p in cell.symbolic().values() {
        values.push(match valuation_after_monomial_substitution(p, c)? {
            Some(v) => TropVal::int(v),
            None => TropVal::Inf,
        });
    }
    let lifted = TropicalPoint::new(Coords::from_values(cell.n(), values))?;
    let c_rat: Vec<Rat> = c.iter().map(|&x| Rat::from_integer(x.into())).collect();
    Ok(lifted == trop_phi(cell, &c_rat)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat_int;
    use crate::flagcomb::Permutation;
    use crate::mrcells::build_cell;

    fn point(n: usize, values: &[Option<i64>]) -> TropicalPoint {
        let values = values
            .iter()
            .map(|v| v.map_or(TropVal::Inf, TropVal::int))
            .collect();
        TropicalPoint::new(Coords::from_values(n, values)).unwrap()
    }

    fn finite(n: usize, values: &[i64]) -> TropicalPoint {
        point(n, &values.iter().map(|&v| Some(v)).collect::<Vec<_>>())
    }

    fn ints(values: &[i64]) -> Vec<Rat> {
        values.iter().map(|&v| rat_int(v)).collect()
    }

    fn full_cell() -> Cell {
        build_cell(3, &Permutation::identity(3), &Permutation::longest(3)).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let all = generate_all(3).unwrap();
        let rel = &all.relations()[0];
        let v = trop_evaluate(rel, TropicalPoint::zero(3).coords()).unwrap();
        assert_eq!(v.minimum, TropVal::int(0));
        assert_eq!(v.achieving.len(), 3);
        assert!(v.is_positive_solution);

        let raw = |values: &[i64]| Coords::from_values(3, values.iter().map(|&v| TropVal::int(v)).collect());
        let v = trop_evaluate(rel, &raw(&[0, 0, 0, 0, 0, -1])).unwrap();
        assert_eq!(v.minimum, TropVal::int(-1));
        assert_eq!(v.achieving.len(), 1);
        assert!(!v.is_solution && !v.is_positive_solution);

        let v = trop_evaluate(rel, &raw(&[0, 0, 0, 0, 0, 1])).unwrap();
        let signs: Vec<i8> = v.achieving.iter().map(|t| t.sign).collect();
        assert_eq!(signs, [-1, 1]);
        assert!(v.is_solution && v.is_positive_solution);
    }

    #[test]
    fn solution_that_is_not_positive() {
        // P_13 = ∞ leaves +P1P23 and +P3P12
        let p = point(3, &[Some(0), Some(0), Some(0), Some(0), None, Some(0)]);
        let all = generate_all(3).unwrap();
        let rel = &all.relations()[0];
        let v = trop_evaluate(rel, p.coords()).unwrap();
        assert!(v.is_solution && !v.is_positive_solution);
        assert!(in_fldr(&p).unwrap());
        assert!(!in_fldr_nonneg(&p).unwrap());
    }

    #[test]
    fn vacuous_relation() {
        let p = point(3, &[Some(0), None, None, Some(0), None, None]);
        let all = generate_all(3).unwrap();
        let rel = &all.relations()[0];
        let v = trop_evaluate(rel, p.coords()).unwrap();
        assert!(v.minimum.is_inf() && v.is_solution && v.is_positive_solution);
        assert!(in_three_term_dressian_nonneg(&p).unwrap());
    }

    #[test]
    fn non_matroid_support_is_rejected() {
        let p = point(3, &[None, Some(0), None, None, Some(0), None]);
        assert!(!is_flag_matroid(&p.support()));
        assert!(!in_fldr_nonneg(&p).unwrap());
        assert!(!in_three_term_dressian_nonneg(&p).unwrap());

        // level two {12, 34} violates basis exchange
        let p = TropicalPoint::new(Coords::from_fn(4, |s| {
            if s.len() != 2 || ["1,2", "3,4"].contains(&s.to_string().as_str()) {
                TropVal::int(0)
            } else {
                TropVal::Inf
            }
        }))
        .unwrap();
        assert!(!in_three_term_dressian(&p).unwrap());
        assert!(!in_three_term_dressian_nonneg(&p).unwrap());
    }

    #[test]
    fn memberships() {
        let zero = TropicalPoint::zero(3);
        assert!(in_fldr(&zero).unwrap() && in_fldr_nonneg(&zero).unwrap());
        assert!(in_three_term_dressian_nonneg(&zero).unwrap());
        let bad = finite(3, &[0, 0, 0, 0, 0, -1]);
        assert!(!in_fldr(&bad).unwrap() && !in_fldr_nonneg(&bad).unwrap());
        let atlas = CellAtlas::for_n(3).unwrap();
        assert!(!in_tnn_tropical_flag_variety(&atlas, &bad).unwrap());
        let cert = certify_tnn_tropical(&atlas, &zero).unwrap().unwrap();
        let cell = &atlas.cells()[cert.cell_index];
        assert!(cell.v().is_identity() && cell.w() == &Permutation::longest(3));
        assert_eq!(cert.parameters, ints(&[0, 0, 0]));
    }

    #[test]
    fn gauge_normalization() {
        let p = finite(3, &[3, 4, 5, -2, 7, -2]);
        assert_eq!(p, finite(3, &[0, 1, 2, 0, 9, 0]));
        let half = TropVal::Fin(crate::exactalg::rat(1, 2));
        let mut coords = TropicalPoint::zero(3).coords().clone();
        coords.set(&Subset::parse(3, "2").unwrap(), half.clone());
        assert_eq!(TropicalPoint::new(coords).unwrap().get(&Subset::parse(3, "2").unwrap()), &half);
        let all_inf = Coords::from_fn(3, |s| if s.len() == 1 { TropVal::Inf } else { TropVal::int(0) });
        assert!(TropicalPoint::new(all_inf).is_err());
    }

    #[test]
    fn trop_phi_and_psi() {
        let cell = full_cell();
        let p = trop_phi(&cell, &ints(&[1, 0, 2])).unwrap();
        assert_eq!(p, finite(3, &[0, 1, 1, 0, 0, 2]));
        assert_eq!(trop_psi(&cell, &p).unwrap(), ints(&[1, 0, 2]));
        assert_eq!(trop_phi(&cell, &ints(&[0, 0, 0])).unwrap(), TropicalPoint::zero(3));
        assert!(puiseux_valuation_check(&cell, &[1, 0, 2]).unwrap());
        assert!(puiseux_valuation_check(&cell, &[0, 0, 0]).unwrap());
        assert!(puiseux_valuation_check(&cell, &[-3, 5, 1]).unwrap());

        let e = Permutation::identity(3);
        let trivial = build_cell(3, &e, &e).unwrap();
        let p = trop_phi(&trivial, &[]).unwrap();
        assert_eq!(p, point(3, &[Some(0), None, None, Some(0), None, None]));
        assert!(trop_psi(&trivial, &p).unwrap().is_empty());
        assert!(matches!(trop_psi(&trivial, &TropicalPoint::zero(3)), Err(Error::SupportMismatch)));
    }

    #[test]
    fn json_round_trip() {
        let p = trop_phi(&full_cell(), &[rat_int(1), crate::exactalg::rat(1, 3), rat_int(2)]).unwrap();
        let text = p.to_json().to_string();
        assert!(text.contains("\"1/3\""));
        assert_eq!(TropicalPoint::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), p);

        let q = point(3, &[Some(0), None, None, Some(0), None, None]);
        let json = q.to_json();
        assert_eq!(json["coords"]["2"], "inf");
        assert_eq!(json["coords"]["1,2"], 0);
        assert_eq!(TropicalPoint::from_json(&json).unwrap(), q);

        let missing = serde_json::json!({"n": 3, "coords": {"1": 0}});
        let err = TropicalPoint::from_json(&missing).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let bad = serde_json::json!({"n": 3, "coords": {"1": 0.5}});
        assert!(TropicalPoint::from_json(&bad).is_err());
    }
}
