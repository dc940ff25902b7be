//! Data hiding in virtual bit-planes of grayscale images.
//!
//! Pixel values are re-expressed in a redundant positional numeral system
//! (natural numbers, primes, Fibonacci-p or plain binary). Each digit
//! position becomes a bit-plane that can carry message bits; flipping a bit
//! at plane `l` moves the pixel by the plane's weight, so systems with
//! slowly growing weights give more planes and less distortion per plane.
//!
//! * [`numeral`]: weight generators and the canonical codec
//! * [`stego`]: embedding and extraction at one plane
//! * [`image`]: grayscale rasters and PGM I/O
//! * [`metrics`]: worst-case and empirical distortion

pub mod error;
pub mod image;
pub mod metrics;
pub mod numeral;
pub mod stego;

pub use error::{Error, Result};
pub use image::{read_pgm, synthesize, write_pgm, GrayImage, Pattern};
pub use metrics::{DistortionReport, Histogram};
pub use numeral::{NumeralSystem, SystemKind, VirtualRepresentation};
pub use stego::{embed_message, extract_message, EmbedPlan, EmbedReport, LengthMode};
