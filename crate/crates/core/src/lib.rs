//! Exact computations on the complete flag variety `Fl_n`: incidence-Plücker
//! relations, Marsh–Rietsch cells of the totally nonnegative part, flag
//! matroid supports and tropical membership tests.

pub mod coords;
pub mod error;
pub mod exactalg;
pub mod flagcomb;
pub mod flagmat;
pub mod mrcells;
pub mod plucker;
pub mod tropic;

pub use coords::Coords;
pub use error::{Error, Result};
pub use exactalg::{Mat, Poly, Rat};
pub use flagcomb::{Permutation, Subexpression, Subset, Word, MAX_N};
pub use flagmat::{FlagMatroid, Matroid, Support};
pub use mrcells::{Cell, CellAtlas};
pub use plucker::{PlueckerVector, Relation, RelationSet};
pub use tropic::{TropVal, TropVerdict, TropicalPoint};
