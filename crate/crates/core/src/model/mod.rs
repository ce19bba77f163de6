//! Device geometry, static potentials and laser waveforms.

mod device;
mod waveform;

pub use device::{Device, Incidence, Region, TripleBarrier};
pub use waveform::{vector_potential_samples, VectorPotential, Waveform, WaveformKind};
