//! Symmetric-group and subset combinatorics.
//!
//! Permutations are stored in one-line notation with 1-based images. A word
//! `s_{i_1} s_{i_2} ... s_{i_k}` is multiplied left to right, each letter acting
//! on the right, so `u * s_i` swaps positions `i` and `i + 1` of `u`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set supported by the bit-packed subset and support types.
pub const MAX_N: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidPermutation(images));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let i = x as usize;
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n as u8).collect(),
        }
    }

    /// The longest element `w_0`, reversing `[n]`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            images: (1..=n as u8).rev().collect(),
        }
    }

    /// The simple transposition `s_k` in `S_n`.
    pub fn simple(n: usize, k: u8) -> Result<Self> {
        check_letter(n, k)?;
        Ok(Self::identity(n).mul_simple_right(k))
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.images;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `self * s_k`: swaps positions `k` and `k + 1`.
    pub fn mul_simple_right(&self, k: u8) -> Self {
        let mut images = self.images.clone();
        images.swap(k as usize - 1, k as usize);
        Permutation { images }
    }

    /// `s_k * self`: swaps the values `k` and `k + 1`.
    pub fn mul_simple_left(&self, k: u8) -> Self {
        let images = self
            .images
            .iter()
            .map(|&x| {
                if x == k {
                    k + 1
                } else if x == k + 1 {
                    k
                } else {
                    x
                }
            })
            .collect();
        Permutation { images }
    }

    /// Whether `ℓ(self * s_k) < ℓ(self)`.
    pub fn has_right_descent(&self, k: u8) -> bool {
        self.images[k as usize - 1] > self.images[k as usize]
    }

    /// Whether `ℓ(s_k * self) < ℓ(self)`.
    pub fn has_left_descent(&self, k: u8) -> bool {
        let pos = |val: u8| self.images.iter().position(|&x| x == val).unwrap();
        pos(k) > pos(k + 1)
    }

    /// Function composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutations of {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(Permutation {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize - 1])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = i as u8 + 1;
        }
        Permutation { images }
    }

    /// All permutations of `[n]` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = (1..=n as u8).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    /// A reduced word, peeling right descents from the right.
    pub fn reduced_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.length());
        let mut u = self.clone();
        while let Some(k) = (1..u.n() as u8).find(|&k| u.has_right_descent(k)) {
            letters.push(k);
            u = u.mul_simple_right(k);
        }
        letters.reverse();
        Word {
            n: self.n(),
            letters,
        }
    }

    /// Bruhat order via the subword property: `self <= w` iff some reduced
    /// subword of a reduced word of `w` multiplies to `self`.
    pub fn bruhat_leq(&self, w: &Permutation) -> Result<bool> {
        if self.n() != w.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutations of {} and {}",
                self.n(),
                w.n()
            )));
        }
        let target_len = self.length();
        if target_len > w.length() {
            return Ok(false);
        }
        // Deletion search: the set of products of reduced subwords of each prefix.
        let word = w.reduced_word();
        let mut reachable: HashSet<Permutation> = HashSet::new();
        reachable.insert(Permutation::identity(self.n()));
        for &k in word.letters() {
            let extended: Vec<Permutation> = reachable
                .iter()
                .filter(|u| !u.has_right_descent(k) && u.length() < target_len)
                .map(|u| u.mul_simple_right(k))
                .collect();
            reachable.extend(extended);
            if reachable.contains(self) {
                return Ok(true);
            }
        }
        Ok(reachable.contains(self))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

fn check_letter(n: usize, k: u8) -> Result<()> {
    if k == 0 || k as usize >= n {
        return Err(Error::InvalidLetter { letter: k, n });
    }
    Ok(())
}

/// A word in the simple transpositions of `S_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    n: usize,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<u8>) -> Result<Self> {
        for &k in &letters {
            check_letter(n, k)?;
        }
        Ok(Word { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn product(&self) -> Permutation {
        self.letters
            .iter()
            .fold(Permutation::identity(self.n), |u, &k| u.mul_simple_right(k))
    }

    pub fn is_reduced(&self) -> bool {
        self.product().length() == self.letters.len()
    }
}

/// `(s_1 s_2 ... s_{n-1})(s_1 ... s_{n-2}) ... (s_1 s_2)(s_1)`.
pub fn w0_word(n: usize) -> Word {
    let mut letters = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for top in (1..n as u8).rev() {
        letters.extend(1..=top);
    }
    Word { n, letters }
}

/// A subexpression of a parent word, given by 1-based positions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subexpression {
    parent: Word,
    positions: Vec<usize>,
}

impl Subexpression {
    pub fn new(parent: Word, positions: Vec<usize>) -> Result<Self> {
        let increasing = positions.windows(2).all(|p| p[0] < p[1]);
        let in_range = positions.iter().all(|&p| p >= 1 && p <= parent.len());
        if !increasing || !in_range {
            return Err(Error::OutOfRange(format!(
                "positions {positions:?} in a word of length {}",
                parent.len()
            )));
        }
        Ok(Subexpression { parent, positions })
    }

    pub fn parent(&self) -> &Word {
        &self.parent
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn induced_word(&self) -> Word {
        Word {
            n: self.parent.n,
            letters: self
                .positions
                .iter()
                .map(|&p| self.parent.letters[p - 1])
                .collect(),
        }
    }

    pub fn product(&self) -> Permutation {
        self.induced_word().product()
    }

    /// The two defining conditions of a positive distinguished subexpression,
    /// checked literally (with `j_0 = 0`).
    pub fn is_positive_distinguished(&self) -> bool {
        let induced = self.induced_word();
        if !induced.is_reduced() {
            return false;
        }
        let letters = self.parent.letters();
        let m = self.positions.len();
        for r in 0..m {
            let suffix = Word {
                n: self.parent.n,
                letters: induced.letters[r..].to_vec(),
            }
            .product();
            let prev = if r == 0 { 0 } else { self.positions[r - 1] };
            for p in prev.max(1)..self.positions[r] {
                if suffix.has_left_descent(letters[p - 1]) && p != prev {
                    return false;
                }
            }
        }
        true
    }
}

/// The unique positive distinguished subexpression for `v` in a reduced word.
///
/// Scans left to right and takes a letter whenever it is a left descent of
/// what remains of `v`; the defining conditions are then checked.
pub fn positive_distinguished_subexpression(word: &Word, v: &Permutation) -> Result<Subexpression> {
    if word.n() != v.n() {
        return Err(Error::DimensionMismatch(format!(
            "word in S_{} and permutation in S_{}",
            word.n(),
            v.n()
        )));
    }
    if !word.is_reduced() {
        return Err(Error::SubexpressionCheck(format!(
            "parent word {:?} is not reduced",
            word.letters()
        )));
    }
    let mut remaining = v.clone();
    let mut positions = Vec::with_capacity(v.length());
    for (idx, &k) in word.letters().iter().enumerate() {
        if remaining.has_left_descent(k) {
            remaining = remaining.mul_simple_left(k);
            positions.push(idx + 1);
        }
    }
    if !remaining.is_identity() {
        return Err(Error::NotBruhatLeq {
            v: v.to_string(),
            w: word.product().to_string(),
        });
    }
    let sub = Subexpression {
        parent: word.clone(),
        positions,
    };
    if sub.product() != *v || !sub.is_positive_distinguished() {
        return Err(Error::SubexpressionCheck(format!(
            "greedy positions {:?} for {v}",
            sub.positions
        )));
    }
    Ok(sub)
}

/// A nonempty proper subset of `[n]`, bit-packed (bit `i - 1` for element `i`).
///
/// Ordering is lexicographic on the sorted element sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Subset {
    n: u8,
    mask: u32,
}

impl Subset {
    pub fn new(n: usize, elements: &[u8]) -> Result<Self> {
        let err = || Error::InvalidSubset {
            elements: elements.to_vec(),
            n,
        };
        if n == 0 || n > MAX_N {
            return Err(err());
        }
        if !elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(err());
        }
        if elements.iter().any(|&e| e == 0 || e as usize > n) {
            return Err(err());
        }
        let mask = elements.iter().fold(0u32, |m, &e| m | 1 << (e - 1));
        Self::from_mask(n, mask).ok_or_else(err)
    }

    /// Returns `None` for the empty set and for `[n]` itself.
    pub fn from_mask(n: usize, mask: u32) -> Option<Self> {
        let full = (1u32 << n) - 1;
        if n == 0 || n > MAX_N || mask == 0 || mask >= full || mask & !full != 0 {
            return None;
        }
        Some(Subset { n: n as u8, mask })
    }

    /// Parses `"1,3"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let elements = parse_elements(text)?;
        Self::new(n, &elements)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: u8) -> bool {
        self.mask & (1 << (i - 1)) != 0
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.n).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.elements().collect()
    }

    /// `(self \ remove) ∪ add`, when that is again a nonempty proper subset.
    pub fn exchange(&self, remove: u8, add: u8) -> Option<Subset> {
        let mask = (self.mask & !(1 << (remove - 1))) | 1 << (add - 1);
        Subset::from_mask(self.n(), mask)
    }

    /// Gale order: componentwise comparison of the sorted elements.
    pub fn gale_leq(&self, other: &Subset) -> Result<bool> {
        if self.n != other.n || self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "gale comparison of {self} and {other}"
            )));
        }
        Ok(self.elements().zip(other.elements()).all(|(a, b)| a <= b))
    }

    /// Position in the canonical coordinate order (by size, then lexicographic).
    pub fn coordinate_position(&self) -> usize {
        let n = self.n();
        let k = self.len();
        let offset: usize = (1..k).map(|j| binomial(n, j)).sum();
        let mut rank = 0;
        let mut prev = 0u8;
        for (i, x) in self.elements().enumerate() {
            for y in prev + 1..x {
                rank += binomial(n - y as usize, k - i - 1);
            }
            prev = x;
        }
        offset + rank
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements()
            .cmp(other.elements())
            .then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_elements(f, self.elements())
    }
}

pub(crate) fn write_elements(
    f: &mut impl fmt::Write,
    elements: impl Iterator<Item = u8>,
) -> fmt::Result {
    for (i, e) in elements.enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

pub(crate) fn parse_elements(text: &str) -> Result<Vec<u8>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|e| Error::parse(format!("subset \"{text}\""), e.to_string()))
        })
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn enumerate_subsets(n: usize, k: usize) -> Result<Vec<Subset>> {
    if !(2..=MAX_N).contains(&n) || k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("k = {k} for n = {n}")));
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut current: Vec<u8> = (1..=k as u8).collect();
    loop {
        out.push(Subset::new(n, &current)?);
        let Some(i) = (0..k).rev().find(|&i| (current[i] as usize) < n - (k - 1 - i)) else {
            break;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Every coordinate index of `Fl_n` in canonical order.
pub fn coordinate_order(n: usize) -> Vec<Subset> {
    (1..n)
        .flat_map(|k| enumerate_subsets(n, k).expect("valid level"))
        .collect()
}

pub fn num_coordinates(n: usize) -> usize {
    (1usize << n) - 2
}
