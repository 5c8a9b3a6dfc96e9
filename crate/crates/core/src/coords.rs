use crate::error::{Error, Result};
use crate::flagcomb::{coordinate_order, num_coordinates, Subset};

/// One value per coordinate index of `Fl_n`, stored in canonical order
/// (by size, then lexicographic).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coords<T> {
    n: usize,
    values: Vec<T>,
}

impl<T> Coords<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(Subset) -> T) -> Self {
        Coords {
            n,
            values: coordinate_order(n).into_iter().map(&mut f).collect(),
        }
    }

    pub fn from_values(n: usize, values: Vec<T>) -> Self {
        assert_eq!(values.len(), num_coordinates(n), "coordinate count for n = {n}");
        Coords { n, values }
    }

    pub fn try_from_values(n: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != num_coordinates(n) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for n = {n}",
                values.len()
            )));
        }
        Ok(Coords { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, index: &Subset) -> &T {
        debug_assert_eq!(index.n(), self.n);
        &self.values[index.coordinate_position()]
    }

    pub fn set(&mut self, index: &Subset, value: T) {
        let pos = index.coordinate_position();
        self.values[pos] = value;
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, &T)> {
        coordinate_order(self.n).into_iter().zip(self.values.iter())
    }

    /// Coordinates of one size `k`, in lexicographic order.
    pub fn level(&self, k: usize) -> impl Iterator<Item = (Subset, &T)> {
        self.iter().filter(move |(s, _)| s.len() == k)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Coords<U> {
        Coords {
            n: self.n,
            values: self.values.iter().map(f).collect(),
        }
    }
}
