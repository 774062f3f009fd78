// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Pilot-wave simulation of the Deutsch algorithm.

// Guards like `!(x >= 0.0)` are written so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod gates;
pub mod io;
pub mod ode;
pub mod plot;
pub mod pointer;
pub mod quadrature;
pub mod spin;
pub mod verify;
pub mod well;

pub use error::{Error, Result};
