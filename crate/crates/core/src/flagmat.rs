//! Matroids, flag matroids, supports, the basis-exchange map Ξ and extremal
//! indices.

use std::fmt;

use serde_json::{Map, Value};

use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::flagcomb::{coordinate_order, Subset, MAX_N};

/// A set of coordinate indices of `Fl_n`, packed one bit per subset mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support {
    n: u8,
    bits: u64,
}

impl Support {
    pub fn empty(n: usize) -> Self {
        assert!((2..=MAX_N).contains(&n), "support for n = {n}");
        Support { n: n as u8, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        Self::from_indices(n, coordinate_order(n))
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = Subset>) -> Self {
        let mut s = Self::empty(n);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Indices where `keep` holds.
    pub fn from_coords<T>(coords: &Coords<T>, mut keep: impl FnMut(&T) -> bool) -> Self {
        Self::from_indices(
            coords.n(),
            coords.iter().filter(|(_, v)| keep(v)).map(|(s, _)| s),
        )
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, index: Subset) {
        debug_assert_eq!(index.n(), self.n());
        self.bits |= 1 << index.mask();
    }

    pub fn contains(&self, index: &Subset) -> bool {
        self.bits & (1 << index.mask()) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Members of size `k`, lexicographically sorted.
    pub fn level(&self, k: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (1..(1u32 << self.n) - 1)
            .filter(|&m| m.count_ones() as usize == k && self.bits & (1 << m) != 0)
            .filter_map(|m| Subset::from_mask(self.n(), m))
            .collect();
        out.sort();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        coordinate_order(self.n()).into_iter().filter(|s| self.contains(s))
    }

    /// Every level nonempty.
    pub fn is_valid(&self) -> bool {
        (1..self.n()).all(|k| !self.level(k).is_empty())
    }

    pub fn to_json(&self) -> Value {
        let mut levels = Map::new();
        for k in 1..self.n() {
            levels.insert(
                k.to_string(),
                Value::Array(
                    self.level(k)
                        .iter()
                        .map(|s| Value::String(s.to_string()))
                        .collect(),
                ),
            );
        }
        serde_json::json!({ "n": self.n, "levels": levels })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("support.n", "expected an integer"))? as usize;
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::parse("support.n", format!("n = {n} out of range")));
        }
        let levels = value
            .get("levels")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::parse("support.levels", "expected an object"))?;
        let mut s = Support::empty(n);
        for (key, members) in levels {
            let k: usize = key
                .parse()
                .map_err(|_| Error::parse(format!("support.levels.{key}"), "bad level key"))?;
            let members = members
                .as_array()
                .ok_or_else(|| Error::parse(format!("support.levels.{key}"), "expected an array"))?;
            for m in members {
                let text = m.as_str().ok_or_else(|| {
                    Error::parse(format!("support.levels.{key}"), "expected subset strings")
                })?;
                let idx = Subset::parse(n, text)?;
                if idx.len() != k {
                    return Err(Error::parse(
                        format!("support.levels.{key}"),
                        format!("{text} has the wrong size"),
                    ));
                }
                s.insert(idx);
            }
        }
        Ok(s)
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..self.n())
            .map(|k| {
                self.level(k)
                    .iter()
                    .map(|s| s.to_string().replace(',', ""))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "Support[{}]", parts.join(" | "))
    }
}

/// Bases of a matroid of rank `k` on `[n]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matroid {
    n: usize,
    k: usize,
    bases: Vec<Subset>,
}

impl Matroid {
    pub fn new(n: usize, k: usize, mut bases: Vec<Subset>) -> Result<Self> {
        bases.sort();
        bases.dedup();
        if bases.is_empty() || bases.iter().any(|b| b.len() != k || b.n() != n) {
            return Err(Error::NotAMatroid(format!("bases of rank {k} on [{n}]")));
        }
        if !satisfies_basis_exchange(&bases) {
            return Err(Error::NotAMatroid("basis exchange fails".into()));
        }
        Ok(Matroid { n, k, bases })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn gale_min_basis(&self) -> Result<Subset> {
        self.gale_extreme(self.bases[0], true)
    }

    pub fn gale_max_basis(&self) -> Result<Subset> {
        self.gale_extreme(*self.bases.last().unwrap(), false)
    }

    fn gale_extreme(&self, candidate: Subset, lower: bool) -> Result<Subset> {
        for b in &self.bases {
            let ok = if lower {
                candidate.gale_leq(b)?
            } else {
                b.gale_leq(&candidate)?
            };
            if !ok {
                return Err(Error::NotAMatroid(format!(
                    "{candidate} is not Gale-comparable with {b}"
                )));
            }
        }
        Ok(candidate)
    }
}

/// Brute-force basis exchange: for bases `B1, B2` and `x` in `B1 \ B2` there is
/// `y` in `B2 \ B1` with `B1 - x + y` a basis.
pub fn satisfies_basis_exchange(bases: &[Subset]) -> bool {
    let masks: std::collections::HashSet<u32> = bases.iter().map(Subset::mask).collect();
    for b1 in bases {
        for b2 in bases {
            let only1 = b1.mask() & !b2.mask();
            let only2 = b2.mask() & !b1.mask();
            for x in 0..32 {
                if only1 & (1 << x) == 0 {
                    continue;
                }
                let exchanged = (0..32).any(|y| {
                    only2 & (1 << y) != 0 && masks.contains(&((b1.mask() & !(1 << x)) | 1 << y))
                });
                if !exchanged {
                    return false;
                }
            }
        }
    }
    true
}

/// Constituent matroids of ranks `1..n-1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagMatroid {
    n: usize,
    constituents: Vec<Matroid>,
}

impl FlagMatroid {
    pub fn from_support(s: &Support) -> Result<Self> {
        let n = s.n();
        let constituents = (1..n)
            .map(|k| Matroid::new(n, k, s.level(k)))
            .collect::<Result<Vec<_>>>()?;
        for j in 0..constituents.len() {
            for k in j + 1..constituents.len() {
                let (low, high) = (&constituents[j], &constituents[k]);
                let contained = low
                    .bases
                    .iter()
                    .all(|b| high.bases.iter().any(|c| b.mask() & !c.mask() == 0));
                let contains = high
                    .bases
                    .iter()
                    .all(|c| low.bases.iter().any(|b| b.mask() & !c.mask() == 0));
                if !contained || !contains {
                    return Err(Error::NotAMatroid(format!(
                        "ranks {} and {} are not nested",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(FlagMatroid { n, constituents })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constituents(&self) -> &[Matroid] {
        &self.constituents
    }
}

pub fn is_flag_matroid(s: &Support) -> bool {
    s.is_valid() && FlagMatroid::from_support(s).is_ok()
}

/// One basis-exchange step: raise the largest raisable element of `index`
/// as far as the support allows. Indices outside the support are fixed.
pub fn xi(s: &Support, index: &Subset) -> Subset {
    if !s.contains(index) {
        return *index;
    }
    let n = s.n() as u8;
    let raisable = |i: u8| {
        (i + 1..=n)
            .filter(|&j| !index.contains(j))
            .any(|j| index.exchange(i, j).is_some_and(|t| s.contains(&t)))
    };
    let Some(pivot) = index.elements().filter(|&i| raisable(i)).max() else {
        return *index;
    };
    let target = (1..=n)
        .filter(|&j| !index.contains(j))
        .filter(|&j| index.exchange(pivot, j).is_some_and(|t| s.contains(&t)))
        .max()
        .expect("pivot is raisable");
    index.exchange(pivot, target).expect("same size as index")
}

/// Forward Ξ-orbits of the lexicographically minimal member of each level.
pub fn extremal_indices(s: &Support) -> Support {
    let mut out = Support::empty(s.n());
    for k in 1..s.n() {
        let Some(&start) = s.level(k).first() else {
            continue;
        };
        let mut current = start;
        out.insert(current);
        loop {
            let next = xi(s, &current);
            if next == current {
                break;
            }
            debug_assert!(current.gale_leq(&next).unwrap_or(false));
            current = next;
            out.insert(current);
        }
    }
    out
}
