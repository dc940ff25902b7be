//! Grayscale images and the Netpbm PGM codec (P5 binary, P2 ASCII).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Row-major grayscale raster with sample values in `0..=maxval`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    maxval: u8,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u8, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if maxval == 0 {
            return Err(Error::Parameter("maxval must be positive".into()));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::Parameter(format!("{width}x{height} image is too large")))?;
        if pixels.len() != expected {
            return Err(Error::Parameter(format!(
                "{width}x{height} image needs {expected} pixels, got {}",
                pixels.len()
            )));
        }
        if let Some(pos) = pixels.iter().position(|&p| p > maxval) {
            return Err(Error::Parameter(format!(
                "pixel {pos} has value {} above maxval {maxval}",
                pixels[pos]
            )));
        }
        Ok(GrayImage {
            width,
            height,
            maxval,
            pixels,
        })
    }

    /// 8-bit image (maxval 255).
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        Self::new(width, height, u8::MAX, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u8 {
        self.maxval
    }

    /// `k` such that `maxval = 2^k - 1`, if there is one.
    pub fn bit_depth(&self) -> Option<u32> {
        let levels = self.maxval as u32 + 1;
        levels.is_power_of_two().then(|| levels.trailing_zeros())
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Pixels in row-major order.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        (x < self.width && y < self.height).then(|| self.pixels[y * self.width + x])
    }

    /// Same geometry and maxval, new samples.
    pub fn with_pixels(&self, pixels: Vec<u8>) -> Result<Self> {
        Self::new(self.width, self.height, self.maxval, pixels)
    }

    pub fn same_shape(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// Deterministic test covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `(x + width·y) mod 256`
    Gradient,
    Constant(u8),
    /// 8×8 blocks alternating 0 and 255.
    Checker,
    /// Uniform samples from ChaCha8 seeded with the given value.
    UniformRandom(u64),
}

pub fn synthesize(pattern: Pattern, width: usize, height: usize) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(Error::Parameter(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Parameter(format!("{width}x{height} image is too large")))?;
    let pixels = match pattern {
        Pattern::Gradient => (0..len)
            .map(|i| {
                let (x, y) = (i % width, i / width);
                ((x + width * y) % 256) as u8
            })
            .collect(),
        Pattern::Constant(v) => vec![v; len],
        Pattern::Checker => (0..len)
            .map(|i| {
                let (x, y) = (i % width, i / width);
                if (x / 8 + y / 8) % 2 == 0 {
                    0
                } else {
                    255
                }
            })
            .collect(),
        Pattern::UniformRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..len).map(|_| rng.random::<u8>()).collect()
        }
    };
    GrayImage::from_pixels(width, height, pixels)
}

/// Serializes as binary P5.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", image.width, image.height, image.maxval).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}

/// Parses a P5 or P2 PGM with maxval at most 255.
///
/// Trailing bytes after the declared raster are ignored.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(cur.error("expected magic `P5` or `P2`")),
    };
    cur.pos = 2;
    if !cur.peek().is_some_and(is_pgm_space) && cur.peek() != Some(b'#') {
        return Err(cur.error("expected whitespace after magic"));
    }

    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.header_number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Parse {
            offset: maxval_at,
            reason: format!("maxval {maxval} not in 1..=255"),
        });
    }
    if width == 0 || height == 0 {
        return Err(Error::Parse {
            offset: maxval_at,
            reason: format!("empty raster {width}x{height}"),
        });
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| cur.error("raster size overflows"))?;
    let maxval = maxval as u8;

    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        match cur.peek() {
            Some(b) if is_pgm_space(b) => cur.pos += 1,
            _ => return Err(cur.error("expected single whitespace before raster")),
        }
        let available = bytes.len() - cur.pos;
        if available < count {
            return Err(Error::Parse {
                offset: bytes.len(),
                reason: format!("truncated raster: {count} pixels declared, {available} present"),
            });
        }
        let raster = &bytes[cur.pos..cur.pos + count];
        if let Some(i) = raster.iter().position(|&p| p > maxval) {
            return Err(Error::Parse {
                offset: cur.pos + i,
                reason: format!("sample {} exceeds maxval {maxval}", raster[i]),
            });
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count.min(bytes.len()));
        for _ in 0..count {
            cur.skip_space_and_comments();
            let at = cur.pos;
            if cur.peek().is_none() {
                return Err(Error::Parse {
                    offset: at,
                    reason: format!("truncated raster: {count} pixels declared, {} present", pixels.len()),
                });
            }
            let v = cur.number()?;
            if v > maxval as usize {
                return Err(Error::Parse {
                    offset: at,
                    reason: format!("sample {v} exceeds maxval {maxval}"),
                });
            }
            pixels.push(v as u8);
        }
        pixels
    };
    GrayImage::new(width, height, maxval, pixels)
}

fn is_pgm_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, reason: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(b) = self.peek() {
            if is_pgm_space(b) {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        if !self.peek().is_some_and(|b| b.is_ascii_digit()) {
            return Err(self.error(&format!("expected {what}")));
        }
        self.number()
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as usize))
                .filter(|&v| v <= u32::MAX as usize)
                .ok_or_else(|| Error::Parse {
                    offset: start,
                    reason: "number too large".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a decimal number"));
        }
        if let Some(b) = self.peek() {
            if !is_pgm_space(b) && b != b'#' {
                return Err(self.error("unexpected byte after number"));
            }
        }
        Ok(value)
    }
}
