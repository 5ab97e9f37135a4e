//! mpspec — a virtual magnetic particle spectroscopy (MPS) workbench.
//!
//! Simulates the dynamic magnetization of single- and multi-core magnetic
//! nanoparticles under single- and dual-frequency excitation, synthesizes the
//! pickup-coil voltage, extracts harmonic spectra, reconstructs AC M-H loops,
//! runs the frequency/amplitude sweep protocols with Δ (percent-drop)
//! analysis, and sizes series resonant capacitors for the drive coils.
//!
//! ## Examples
//!
//! The examples are the front door; each one exercises a major capability
//! end to end and writes its outputs under `out/<example>/`:
//!
//! - **`static_mh`** — anhysteretic M-H curves of the catalog particles
//! - **`relaxation_times`** — Brownian/Néel/effective relaxation-time budget
//! - **`dynamic_loop`** — AC M-H loop reconstruction, bound vs. unbound
//! - **`harmonic_spectrum`** — single-tone pipeline with Δ readout
//! - **`dual_frequency`** — two-tone mixing sidebands around the high tone
//! - **`sweep_protocols`** — full sweep protocol with CSV/JSON/SVG outputs
//! - **`resonance_design`** — drive-coil resonance analysis and C_R sizing
//!
//! ```bash
//! cargo run --release --example dynamic_loop
//! cargo run --release --example sweep_protocols -- SF-FREQ
//! ```
//!
//! ## Pipeline
//!
//! ```text
//! catalog ─> ParticleModel ─┐
//!                           ├─> dynamics::simulate_magnetization ─> readout::induced_voltage
//! excitation::build_waveform┘        │                                   │
//!                                    v                                   v
//!                     analysis::reconstruct_ac_mh              readout::spectrum
//!                               loop metrics             harmonic amplitudes, Δ
//! ```
//!
//! The `orchestrator` module wires this chain into the named sweep protocols
//! (`SF-FREQ`, `DF-FREQ`, `SF-AMP`, `DF-AMP`) and the `mpspec` binary exposes
//! it as `simulate`, `sweep`, `acmh`, `circuit`, and `report` subcommands.
//!
//! Magnetization is specific (A·m²/kg), fields are A/m internally; catalog
//! and config boundaries accept unit-suffixed strings such as `"250 Oe"`,
//! `"63.8 emu/g"`, and `"100 kHz"`.

pub mod error;
pub mod units;
pub mod physics;
pub mod excitation;
pub mod dynamics;
pub mod readout;
pub mod analysis;
pub mod circuit;
pub mod catalog;
pub mod orchestrator;
pub mod cli;

pub use error::{Error, Result};
