//! Bent holonomy representations of the once-punctured torus.
//!
//! The crate computes quakebend (shear-bend) deformations of Fuchsian
//! punctured-torus groups inside PSL(2,C), measures boundary lengths of the
//! resulting convex cores, and differentiates those lengths one-sidedly in the
//! bending parameter.  Supporting machinery: 2x2 complex isometry algebra,
//! train-track edge-path combinatorics for simple closed curves, complex
//! shear-bend coordinates adapted to an ideal triangulation, and a small
//! numerical-differentiation toolkit tuned for functions that are smooth on
//! each side of a corner but not across it.

pub mod bend;
pub mod cli;
pub mod isom3;
pub mod parse;
pub mod ptorus;
pub mod shearbend;
pub mod tangent;
pub mod traintrack;
