//! Incidence-Plücker relations: generation, canonical form and exact
//! evaluation on classical points.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::flagcomb::{self, write_elements, Subset, MAX_N};

/// Classical multi-projective Plücker coordinates.
pub type PlueckerVector = Coords<Rat>;

/// Checks that every level has a nonzero coordinate.
pub fn check_projective(p: &PlueckerVector) -> Result<()> {
    for k in 1..p.n() {
        if p.level(k).all(|(_, x)| x.is_zero()) {
            return Err(Error::OutOfRange(format!("level {k} is identically zero")));
        }
    }
    Ok(())
}

/// `(-1)^{|{k in J : k < j}| + |{i in I : j < i}|}` for `j` in `J \ I`.
pub fn sign_of(j: u8, i_set: &[u8], j_set: &[u8]) -> Result<i8> {
    if !j_set.contains(&j) || i_set.contains(&j) {
        return Err(Error::OutOfRange(format!("{j} is not in J \\ I")));
    }
    let exponent = j_set.iter().filter(|&&k| k < j).count() + i_set.iter().filter(|&&i| j < i).count();
    Ok(if exponent % 2 == 0 { 1 } else { -1 })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    pub a: Subset,
    pub b: Subset,
    pub sign: i8,
}

/// The `(r, s, I, J)` that produced a relation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Provenance {
    pub r: usize,
    pub s: usize,
    pub i: Vec<u8>,
    pub j: Vec<u8>,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} s={} I={{", self.r, self.s)?;
        write_elements(f, self.i.iter().copied())?;
        write!(f, "}} J={{")?;
        write_elements(f, self.j.iter().copied())?;
        write!(f, "}}")
    }
}

/// A canonical quadratic relation `Σ ± P_A P_B`.
///
/// Within a term `|A| <= |B|`, equal-size pairs are stored with `A < B`;
/// terms are sorted and the first term has sign `+1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    n: usize,
    terms: Vec<Term>,
    prov: Provenance,
}

impl Relation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn provenance(&self) -> &Provenance {
        &self.prov
    }

    pub fn evaluate(&self, p: &PlueckerVector) -> Result<Rat> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "relation for n = {} on a point with n = {}",
                self.n,
                p.n()
            )));
        }
        let mut total = Rat::zero();
        for t in &self.terms {
            let prod = p.get(&t.a) * p.get(&t.b);
            if t.sign > 0 {
                total += prod;
            } else {
                total -= prod;
            }
        }
        Ok(total)
    }

    pub fn to_json(&self) -> Value {
        let elems = |v: &[u8]| {
            let mut s = String::new();
            write_elements(&mut s, v.iter().copied()).unwrap();
            s
        };
        json!({
            "n": self.n,
            "terms": self.terms.iter().map(|t| json!({
                "sign": t.sign,
                "A": t.a.to_string(),
                "B": t.b.to_string(),
            })).collect::<Vec<_>>(),
            "prov": {
                "r": self.prov.r,
                "s": self.prov.s,
                "I": elems(&self.prov.i),
                "J": elems(&self.prov.j),
            },
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |v: &Value, key: &str| -> Result<Value> {
            v.get(key)
                .cloned()
                .ok_or_else(|| Error::parse("relation", format!("missing \"{key}\"")))
        };
        let as_usize = |v: Value, what: &str| -> Result<usize> {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::parse(format!("relation.{what}"), "expected an integer"))
        };
        let as_str = |v: &Value, what: &str| -> Result<String> {
            v.as_str()
                .map(str::to_owned)
                .ok_or_else(|| Error::parse(format!("relation.{what}"), "expected a string"))
        };
        let n = as_usize(field(value, "n")?, "n")?;
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::parse("relation.n", format!("n = {n} out of range")));
        }
        let mut terms = Vec::new();
        let raw_terms = field(value, "terms")?;
        let raw_terms = raw_terms
            .as_array()
            .ok_or_else(|| Error::parse("relation.terms", "expected an array"))?;
        for (idx, t) in raw_terms.iter().enumerate() {
            let loc = format!("terms[{idx}]");
            let sign = field(t, "sign")?
                .as_i64()
                .filter(|s| *s == 1 || *s == -1)
                .ok_or_else(|| Error::parse(format!("relation.{loc}.sign"), "expected 1 or -1"))?;
            let a = Subset::parse(n, &as_str(&field(t, "A")?, &loc)?)?;
            let b = Subset::parse(n, &as_str(&field(t, "B")?, &loc)?)?;
            terms.push((sign, a, b));
        }
        let prov = field(value, "prov")?;
        let prov = Provenance {
            r: as_usize(field(&prov, "r")?, "prov.r")?,
            s: as_usize(field(&prov, "s")?, "prov.s")?,
            i: flagcomb::parse_elements(&as_str(&field(&prov, "I")?, "prov.I")?)?,
            j: flagcomb::parse_elements(&as_str(&field(&prov, "J")?, "prov.J")?)?,
        };
        canonicalize(n, terms, prov).ok_or_else(|| Error::parse("relation", "relation is zero"))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.terms.iter().enumerate() {
            let sign = if t.sign > 0 { '+' } else { '-' };
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}P{{{}}}P{{{}}}", t.a, t.b)?;
        }
        Ok(())
    }
}

/// Merges like terms (pairs are unordered), drops zero relations and fixes
/// the overall sign. Returns `None` if everything cancels.
fn canonicalize(n: usize, raw: Vec<(i64, Subset, Subset)>, prov: Provenance) -> Option<Relation> {
    let mut merged: BTreeMap<(Subset, Subset), i64> = BTreeMap::new();
    for (coeff, x, y) in raw {
        let key = if (x.len(), x) <= (y.len(), y) { (x, y) } else { (y, x) };
        *merged.entry(key).or_insert(0) += coeff;
    }
    merged.retain(|_, c| *c != 0);
    if merged.is_empty() {
        return None;
    }
    assert!(
        merged.values().all(|c| c.abs() == 1),
        "incidence-Pluecker relation with a non-unit coefficient: {merged:?}"
    );
    let flip = if *merged.values().next().unwrap() < 0 { -1 } else { 1 };
    let terms = merged
        .into_iter()
        .map(|((a, b), c)| Term {
            a,
            b,
            sign: (c * flip) as i8,
        })
        .collect();
    Some(Relation { n, terms, prov })
}

/// The raw sum for one `(I, J)`, before canonicalization.
pub fn expand(n: usize, i_set: &[u8], j_set: &[u8]) -> Result<Vec<(i64, Subset, Subset)>> {
    let mut out = Vec::new();
    for &j in j_set {
        if i_set.contains(&j) {
            continue;
        }
        let sign = sign_of(j, i_set, j_set)?;
        let mut with: Vec<u8> = i_set.iter().copied().chain([j]).collect();
        with.sort_unstable();
        let without: Vec<u8> = j_set.iter().copied().filter(|&x| x != j).collect();
        out.push((i64::from(sign), Subset::new(n, &with)?, Subset::new(n, &without)?));
    }
    Ok(out)
}

fn subsets_with_empty(n: usize, k: usize) -> Vec<Vec<u8>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut current: Vec<u8> = (1..=k as u8).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| (current[i] as usize) < n - (k - 1 - i)) else {
            break;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
    out
}

/// Canonical relations for sizes `r <= s`, `I` of size `r - 1`, `J` of size `s + 1`.
pub fn generate(n: usize, r: usize, s: usize) -> Result<Vec<Relation>> {
    if !(2..=MAX_N).contains(&n) || r < 1 || r > s || s > n - 1 {
        return Err(Error::OutOfRange(format!("(r, s) = ({r}, {s}) for n = {n}")));
    }
    let mut seen: BTreeMap<Vec<Term>, Relation> = BTreeMap::new();
    for i_set in subsets_with_empty(n, r - 1) {
        for j_set in subsets_with_empty(n, s + 1) {
            let raw = expand(n, &i_set, &j_set)?;
            let prov = Provenance {
                r,
                s,
                i: i_set.clone(),
                j: j_set.clone(),
            };
            if let Some(rel) = canonicalize(n, raw, prov) {
                seen.entry(rel.terms.clone()).or_insert(rel);
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// The deduplicated union of all canonical relations for `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationSet {
    n: usize,
    relations: Vec<Relation>,
}

impl RelationSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Relation> {
        self.relations.iter()
    }

    /// The first relation that does not vanish on `p`, if any.
    pub fn first_violated(&self, p: &PlueckerVector) -> Result<Option<&Relation>> {
        for rel in &self.relations {
            if !rel.evaluate(p)?.is_zero() {
                return Ok(Some(rel));
            }
        }
        Ok(None)
    }
}

fn build_all(n: usize) -> Result<RelationSet> {
    let mut seen: BTreeMap<Vec<Term>, Relation> = BTreeMap::new();
    for s in 1..n {
        for r in 1..=s {
            for rel in generate(n, r, s)? {
                seen.entry(rel.terms.clone()).or_insert(rel);
            }
        }
    }
    Ok(RelationSet {
        n,
        relations: seen.into_values().collect(),
    })
}

static RELATION_CACHE: [OnceLock<Arc<RelationSet>>; MAX_N + 1] =
    [const { OnceLock::new() }; MAX_N + 1];

/// All canonical incidence-Plücker relations for `n`, cached per `n`.
pub fn generate_all(n: usize) -> Result<Arc<RelationSet>> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n}")));
    }
    if let Some(set) = RELATION_CACHE[n].get() {
        return Ok(set.clone());
    }
    let set = Arc::new(build_all(n)?);
    Ok(RELATION_CACHE[n].get_or_init(|| set).clone())
}

/// Relations with exactly three canonical terms.
pub fn three_term_subset(rs: &RelationSet) -> RelationSet {
    RelationSet {
        n: rs.n,
        relations: rs
            .relations
            .iter()
            .filter(|r| r.terms.len() == 3)
            .cloned()
            .collect(),
    }
}

static THREE_TERM_CACHE: [OnceLock<Arc<RelationSet>>; MAX_N + 1] =
    [const { OnceLock::new() }; MAX_N + 1];

pub fn three_term_relations(n: usize) -> Result<Arc<RelationSet>> {
    let all = generate_all(n)?;
    Ok(THREE_TERM_CACHE[n]
        .get_or_init(|| Arc::new(three_term_subset(&all)))
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat_int, Mat};

    fn point(n: usize, values: &[i64]) -> PlueckerVector {
        Coords::from_values(n, values.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn signs() {
        assert_eq!(sign_of(1, &[], &[1, 2, 3]).unwrap(), 1);
        assert_eq!(sign_of(2, &[], &[1, 2, 3]).unwrap(), -1);
        assert_eq!(sign_of(2, &[1], &[1, 2, 3]).unwrap(), -1);
        assert!(sign_of(1, &[1], &[1, 2, 3]).is_err());
        assert!(sign_of(4, &[], &[1, 2, 3]).is_err());
    }

    #[test]
    fn n3_has_one_relation() {
        let all = generate_all(3).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all.relations()[0].to_string(), "+P{1}P{2,3} -P{2}P{1,3} +P{3}P{1,2}");
        assert_eq!(three_term_subset(&all).len(), 1);
    }

    #[test]
    fn cancelling_pair_is_dropped() {
        let raw = expand(3, &[], &[1, 2]).unwrap();
        assert_eq!(raw.len(), 2);
        let prov = Provenance { r: 1, s: 1, i: vec![], j: vec![1, 2] };
        assert!(canonicalize(3, raw, prov).is_none());
    }

    #[test]
    fn four_term_relation_n4() {
        let raw = expand(4, &[], &[1, 2, 3, 4]).unwrap();
        let prov = Provenance { r: 1, s: 3, i: vec![], j: vec![1, 2, 3, 4] };
        let rel = canonicalize(4, raw, prov).unwrap();
        assert_eq!(
            rel.to_string(),
            "+P{1}P{2,3,4} -P{2}P{1,3,4} +P{3}P{1,2,4} -P{4}P{1,2,3}"
        );
        assert!(generate_all(4).unwrap().iter().any(|r| r.terms() == rel.terms()));
    }

    #[test]
    fn n2_is_empty() {
        assert!(generate_all(2).unwrap().is_empty());
        assert!(three_term_subset(&generate_all(2).unwrap()).is_empty());
    }

    #[test]
    fn range_checks() {
        assert!(generate(3, 2, 1).is_err());
        assert!(generate(3, 1, 3).is_err());
        assert!(generate(3, 0, 1).is_err());
        assert!(generate_all(1).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let rel = &generate_all(3).unwrap().relations()[0].clone();
        assert_eq!(rel.evaluate(&point(3, &[1, 8, 6, 1, 2, 10])).unwrap(), rat_int(0));
        assert_eq!(rel.evaluate(&point(3, &[1, 1, 1, 1, 1, 3])).unwrap(), rat_int(3));
        for n in 2..=5 {
            let id = Mat::identity(n, &rat_int(0)).all_pluecker().unwrap();
            assert!(generate_all(n).unwrap().first_violated(&id).unwrap().is_none());
        }
    }

    #[test]
    fn json_round_trip() {
        for rel in generate_all(4).unwrap().iter() {
            let back = Relation::from_json(&rel.to_json()).unwrap();
            assert_eq!(&back, rel);
        }
        let all = generate_all(3).unwrap();
        let rel = &all.relations()[0];
        assert_eq!(
            rel.to_json(),
            serde_json::json!({
                "n": 3,
                "terms": [
                    {"sign": 1, "A": "1", "B": "2,3"},
                    {"sign": -1, "A": "2", "B": "1,3"},
                    {"sign": 1, "A": "3", "B": "1,2"},
                ],
                "prov": {"r": 1, "s": 2, "I": "", "J": "1,2,3"},
            })
        );
    }
}
