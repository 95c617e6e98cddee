//! Cubic fields: enumeration through binary cubic forms, generalized
//! discriminant invariants, local masses, Euler-product constants,
//! resolvent-indexed Dirichlet series and the empirical census around them.

pub mod acceptance;
pub mod arith;
pub mod census;
pub mod constants;
pub mod datastore;
pub mod error;
pub mod forms;
pub mod invariants;
pub mod localmass;
pub mod oracle;
pub mod resolvent;
pub mod special;

pub use error::{Error, Result};
pub use forms::{BinaryCubicForm, CubicFieldRecord, Signature, SignatureFilter, SplittingType};
