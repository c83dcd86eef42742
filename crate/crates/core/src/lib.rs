//! Exact arithmetic for piecewise-affine circle maps that preserve Lebesgue
//! measure.
//!
//! Maps are stored as rational liftings ([`PaMap`]). On top of that the crate
//! provides arc images and preimages, the uniform metric, the exact
//! measure-preservation test, window perturbations, leo certificates with an
//! explicit stability radius, periodic-arc search, and desk-scale ergodic
//! statistics.

pub mod circle;
pub mod critical;
pub mod ergostat;
pub mod examples;
pub mod geometry;
pub mod map;
pub mod measure;
pub mod par;
pub mod perturb;
pub mod rational;
pub mod rotor;

pub use circle::{Arc, ArcError, CirclePoint};
pub use critical::{critical_data, CriticalData, TurnKind};
pub use geometry::{image_of_arc, preimage_components, preimage_spread, sup_distance};
pub use map::{FloatMap, MapError, PaMap};
pub use measure::{verify_measure_preserving, MeasureCheck};
pub use par::Strategy;
pub use rational::Q;
