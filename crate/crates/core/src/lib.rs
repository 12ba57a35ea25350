//! Čech descent on finite models: covers of finite spaces, component nerves,
//! descent data and their categories, the free groupoid of a nerve,
//! non-abelian first cohomology with torsors, and a symbolic model of the
//! converging sequence that separates locally constant objects from
//! covering projections.

pub mod cli;
pub mod descent;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod nerve;
pub mod perm;
pub mod seqspace;
pub mod space;
pub mod text;
pub mod torsor;
pub mod unionfind;
pub mod workspace;

pub use error::{Error, Result};
