//! Exact computational algebra over finite local Gorenstein group rings
//! (Z/p^m)[G]: finitely presented modules, Fitting and characteristic
//! ideals, exterior biduals, quadratic complexes with determinant maps,
//! Eagon-Northcott complexes, abstract Stark systems, and Kolyvagin
//! derivative combinatorics, together with seeded property suites that
//! verify the algebraic laws these objects satisfy.

pub mod biduals;
pub mod complexes;
pub mod fitting;
pub mod gen;
pub mod kolyvagin;
pub mod limits;
pub mod linalg;
pub mod modules;
pub mod ring;
pub mod rmatrix;
pub mod rng;
pub mod stark;
pub mod suite;
pub mod wedge;
